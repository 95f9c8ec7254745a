// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "topolm/harmonic.hpp"

namespace topolm {

using LabelVector = std::vector<int>;

/// min inter-class distance over max intra-class distance (plus eps);
/// larger is better. Requires at least two classes.
double cluster_score_supervised(const EmbeddingMatrix& X, const LabelVector& Y,
                                double eps = 1e-12);

struct KmeansResult {
    LabelVector labels;
    std::vector<double> centroids;  // row-major k x dims
    double sse = 0.0;
    std::vector<double> sse_trace;  // SSE after each assignment pass (best restart)
};

/// Seeded k-means++ initialization plus Lloyd iterations; deterministic for a
/// given seed. Empty clusters are reseeded from the farthest point. Runs
/// `restarts` independent starts and keeps the lowest SSE.
KmeansResult kmeans(const EmbeddingMatrix& X, int k, std::uint64_t seed,
                    int restarts = 4, int max_iters = 300);

struct UnsupervisedScore {
    double score = 0.0;
    LabelVector labels;
};

/// k-means labels, then min inter-cluster distance scaled by the size-balance
/// ratio min(size) / (population std(sizes) + eps).
UnsupervisedScore cluster_score_unsupervised(const EmbeddingMatrix& X, int n_classes,
                                             std::uint64_t seed, double eps = 1e-9);

/// Permutation-model adjusted Rand index in [-0.5, 1].
double adjusted_rand_index(const LabelVector& a, const LabelVector& b);

}  // namespace topolm
