// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "topolm/kernels.hpp"

namespace topolm::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
#endif
#if defined(__aarch64__)
const Backend& neon_backend();
#endif

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Backend* lookup(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && cpu_has_avx2()) return &avx2_backend();
#endif
#if defined(__aarch64__)
    if (name == "neon") return &neon_backend();
#endif
    return nullptr;
}

const Backend* detect() {
    if (const char* env = std::getenv("TOPOLM_KERNELS")) {
        if (const Backend* b = lookup(env)) return b;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &avx2_backend();
#endif
#if defined(__aarch64__)
    return &neon_backend();
#endif
    return &scalar_backend();
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = detect();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void force(const std::string& name) {
    const Backend* b = lookup(name);
    if (!b) throw std::invalid_argument("kernel backend not available: " + name);
    g_active.store(b, std::memory_order_release);
}

std::vector<std::string> available() {
    std::vector<std::string> names{"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) names.emplace_back("avx2");
#endif
#if defined(__aarch64__)
    names.emplace_back("neon");
#endif
    return names;
}

}  // namespace topolm::kernels
