// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/flow.hpp"

namespace topolm {

struct SynthConfig {
    int n_points = 400;
    int n_classes = 3;
    int n_train_per_class = 5;
    int n_test_per_class = 50;
    double weight_inflation = 1.02;  // alpha > 1
    double boundary_margin = 0.1;   // in (0, 0.5)
    std::uint64_t seed = 0;
};

/// Delaunay triangulation of n uniform points in the unit square with every
/// triangle filled. Cocircular ties are broken deterministically; a fully
/// collinear point set is rejected.
SimplicialComplex2 delaunay_complex(int n_points, std::uint64_t seed);

/// One trajectory class: start/end vertices sampled from opposite boundary
/// strips, then n_paths Dijkstra shortest paths where the weights of used
/// edges are multiplied by alpha after every path.
std::vector<Trajectory> trajectory_class(const SimplicialComplex2& sc,
                                         std::uint64_t class_seed, int n_paths,
                                         double alpha, double boundary_margin = 0.1);

struct Dataset {
    SimplicialComplex2 complex;
    std::vector<Trajectory> train;
    std::vector<Trajectory> test;
};

/// Complex plus per-class train/test trajectories, split by seeded shuffle.
Dataset make_dataset(const SynthConfig& cfg);

/// Orientation sign of (a, b, c): +1 counterclockwise, -1 clockwise, 0
/// collinear. Double arithmetic with an error-bound filter and long-double
/// fallback (exposed for the generator's tests).
int orient2d_sign(double ax, double ay, double bx, double by, double cx, double cy);

/// +1 iff d lies strictly inside the circumcircle of counterclockwise
/// (a, b, c); same filtering scheme as orient2d_sign.
int incircle_sign(double ax, double ay, double bx, double by, double cx, double cy,
                  double dx, double dy);

}  // namespace topolm
