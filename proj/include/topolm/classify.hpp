// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topolm/harmonic.hpp"
#include "topolm/scoring.hpp"

namespace topolm {

enum class ClassifierKind { knn, random_forest };

ClassifierKind classifier_kind_from_string(const std::string& s);
std::string to_string(ClassifierKind k);

struct KnnParams {
    int k_neighbors = 3;  // clamped to the training size
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 8;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;
};

/// Deterministic classifier over harmonic embeddings. Predictions are a pure
/// function of (model, input); forests are reproducible from their seed.
struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::random_forest;
    std::int32_t n_features = 0;
    int n_classes = 0;

    // knn
    KnnParams knn;
    EmbeddingMatrix train_x;
    LabelVector train_y;

    // random forest
    ForestParams forest;
    std::uint64_t seed = 0;
    std::vector<std::vector<TreeNode>> trees;
};

ClassifierModel train_knn(const EmbeddingMatrix& X, const LabelVector& Y,
                          const KnnParams& params = {});

ClassifierModel train_random_forest(const EmbeddingMatrix& X, const LabelVector& Y,
                                    const ForestParams& params, std::uint64_t seed);

ClassifierModel train_classifier(ClassifierKind kind, const EmbeddingMatrix& X,
                                 const LabelVector& Y, const KnnParams& knn_params,
                                 const ForestParams& forest_params, std::uint64_t seed);

/// Majority vote (neighbors or trees); ties resolve to the smallest class id.
LabelVector predict(const ClassifierModel& model, const EmbeddingMatrix& X);

}  // namespace topolm
