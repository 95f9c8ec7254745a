// Seeded generators shared by tests: small random complexes and flows.
#pragma once

#include <array>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/rng.hpp"

namespace oracle {

/// Random triangle soup over n_vertices (deduplicated by build_complex).
inline topolm::SimplicialComplex2 random_complex(topolm::Rng& rng, int n_vertices,
                                                 int n_triangles) {
    std::vector<std::array<int, 3>> tris;
    while (static_cast<int>(tris.size()) < n_triangles) {
        int a = rng.index(n_vertices);
        int b = rng.index(n_vertices);
        int c = rng.index(n_vertices);
        if (a == b || b == c || a == c) continue;
        tris.push_back({a, b, c});
    }
    return topolm::build_complex(n_vertices, tris);
}

/// Triangulated annulus: inner ring r0..r{n-1}, outer ring n+0..n+{n-1},
/// 2n triangles, one 1-dimensional hole.
inline topolm::SimplicialComplex2 ring_complex(int n) {
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < n; ++i) {
        const int a = i, b = (i + 1) % n;           // inner
        const int c = n + i, d = n + (i + 1) % n;   // outer
        tris.push_back({a, b, c});
        tris.push_back({b, d, c});
    }
    return topolm::build_complex(2 * n, tris);
}

inline std::vector<double> random_flow(topolm::Rng& rng, int n_edges) {
    std::vector<double> f(static_cast<std::size_t>(n_edges));
    for (double& x : f) x = rng.next_unit() * 2.0 - 1.0;
    return f;
}

}  // namespace oracle
