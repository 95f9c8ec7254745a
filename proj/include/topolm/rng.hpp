// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace topolm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// mt19937_64 with fully pinned-down integer/real mappings so that a seed
/// reproduces bit-identical draws on every platform (std distributions leave
/// the mapping implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// uniform in [0, 1)
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// uniform in [0, n), unbiased (rejection sampling)
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    int index(std::size_t n) { return static_cast<int>(bounded(static_cast<std::uint64_t>(n))); }

    /// Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[bounded(i)]);
    }

    /// k distinct values from {0..n-1}, in shuffled order
    std::vector<int> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<int> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + bounded(n - i)]);
        pool.resize(k);
        return pool;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace topolm
