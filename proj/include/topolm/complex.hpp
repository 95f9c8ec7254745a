// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "topolm/sparse.hpp"

namespace topolm {

/// A 2-dimensional simplicial complex with the increasing-vertex-order
/// reference orientation. Edges and triangles are stored lexicographically
/// sorted; their positions are the canonical dense ids used everywhere
/// (operators, flows, file formats).
class SimplicialComplex2 {
  public:
    SimplicialComplex2() = default;

    std::int32_t n_vertices() const { return n_vertices_; }
    std::int32_t n_edges() const { return static_cast<std::int32_t>(edges_.size()); }
    std::int32_t n_triangles() const { return static_cast<std::int32_t>(triangles_.size()); }

    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

    /// Per-vertex 2D positions; empty when the complex is purely combinatorial.
    const std::vector<std::array<double, 2>>& coords() const { return coords_; }
    void set_coords(std::vector<std::array<double, 2>> coords);

    /// id of edge {u, v} in canonical order, or -1 if absent
    int edge_id(int u, int v) const;
    /// id of triangle {u, v, w}, or -1 if absent
    int triangle_id(int u, int v, int w) const;

    friend SimplicialComplex2 build_complex(int n_vertices,
                                            std::span<const std::array<int, 3>> triangles,
                                            std::span<const std::array<int, 2>> extra_edges);

  private:
    std::int32_t n_vertices_ = 0;
    std::vector<std::array<double, 2>> coords_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> triangles_;
};

/// Closure construction: the returned complex contains every input triangle,
/// all their edges, and all extra edges, deduplicated and canonically sorted.
/// Throws std::invalid_argument on out-of-range ids or degenerate simplices.
SimplicialComplex2 build_complex(int n_vertices,
                                 std::span<const std::array<int, 3>> triangles,
                                 std::span<const std::array<int, 2>> extra_edges = {});

/// View of a complex with some triangles removed. Vertices and edges are
/// never removed.
struct PuncturedComplex {
    const SimplicialComplex2* base = nullptr;
    std::vector<int> removed;  // sorted, unique triangle ids

    PuncturedComplex() = default;
    PuncturedComplex(const SimplicialComplex2& sc, std::vector<int> removed_ids);
};

/// Signed vertex-edge incidence matrix, n_vertices x n_edges. The column of
/// edge (u, v) with u < v carries -1 at u and +1 at v.
SparseOperator boundary_1(const SimplicialComplex2& sc);

/// Edge-triangle incidence, n_edges x n_kept_triangles. The column of kept
/// triangle (u, v, w) with u < v < w carries +1 at (v, w), -1 at (u, w),
/// +1 at (u, v). Columns of removed triangles are absent; kept columns keep
/// triangle-id order.
SparseOperator boundary_2(const SimplicialComplex2& sc, std::span<const int> removed = {});

/// Up Laplacian B2 * B2^T of the full complex, n_edges x n_edges.
SparseOperator l1_up(const SimplicialComplex2& sc);

/// (beta0, beta1) of a punctured complex via dense rank computation.
/// Restricted to small complexes; throws std::length_error above 2000 edges.
std::pair<int, int> betti_numbers(const PuncturedComplex& pc);

/// Rank of a sparse matrix by dense Gaussian elimination with partial
/// pivoting; pivots below `threshold` count as zero.
int dense_rank(const SparseOperator& op, double threshold = 1e-8);

}  // namespace topolm
