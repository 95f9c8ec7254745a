// SPDX-License-Identifier: Apache-2.0
#include "topolm/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "topolm/kernels.hpp"
#include "topolm/rng.hpp"

namespace topolm {

ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "knn") return ClassifierKind::knn;
    if (s == "random_forest" || s == "forest" || s == "rf")
        return ClassifierKind::random_forest;
    throw std::invalid_argument("unknown classifier kind: " + s);
}

std::string to_string(ClassifierKind k) {
    return k == ClassifierKind::knn ? "knn" : "random_forest";
}

namespace {

int n_classes_of(const LabelVector& y) {
    int m = -1;
    for (int v : y) {
        if (v < 0) throw std::invalid_argument("labels must be non-negative");
        m = std::max(m, v);
    }
    return m + 1;
}

int majority(const std::vector<int>& votes, int n_classes) {
    std::vector<int> counts(n_classes, 0);
    for (int v : votes) ++counts[v];
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (counts[c] > counts[best]) best = c;  // ties keep the smaller id
    return best;
}

double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

struct TreeBuilder {
    const EmbeddingMatrix& X;
    const LabelVector& Y;
    int n_classes;
    int max_depth;
    int mtry;
    Rng rng;
    std::vector<TreeNode> nodes;

    int leaf(const std::vector<int>& idx) {
        std::vector<int> counts(n_classes, 0);
        for (int i : idx) ++counts[Y[i]];
        TreeNode node;
        node.label = static_cast<int>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        nodes.push_back(node);
        return static_cast<int>(nodes.size()) - 1;
    }

    int build(std::vector<int> idx, int depth) {
        bool pure = true;
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (Y[idx[i]] != Y[idx[0]]) {
                pure = false;
                break;
            }
        if (pure || depth >= max_depth || idx.size() < 2) return leaf(idx);

        const std::size_t d = static_cast<std::size_t>(X.dims);
        std::vector<int> features =
            rng.sample_without_replacement(d, static_cast<std::size_t>(mtry));

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, int>> vals;
        for (int f : features) {
            vals.clear();
            for (int i : idx) vals.emplace_back(X.row(i)[f], Y[i]);
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;

            std::vector<int> left(n_classes, 0), right(n_classes, 0);
            for (const auto& [v, y] : vals) ++right[y];
            const int total = static_cast<int>(vals.size());
            int n_left = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                ++left[vals[i].second];
                --right[vals[i].second];
                ++n_left;
                if (vals[i].first == vals[i + 1].first) continue;
                const double threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                const double impurity = (n_left * gini(left, n_left) +
                                         (total - n_left) * gini(right, total - n_left)) /
                                        total;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_threshold = threshold;
                }
            }
        }
        if (best_feature < 0) return leaf(idx);

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (X.row(i)[best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        if (left_idx.empty() || right_idx.empty()) return leaf(idx);

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        nodes.push_back(node);
        const int self = static_cast<int>(nodes.size()) - 1;
        const int l = build(std::move(left_idx), depth + 1);
        const int r = build(std::move(right_idx), depth + 1);
        nodes[self].left = l;
        nodes[self].right = r;
        return self;
    }
};

int tree_predict(const std::vector<TreeNode>& tree, const double* x) {
    int at = 0;
    while (tree[at].feature >= 0)
        at = x[tree[at].feature] <= tree[at].threshold ? tree[at].left : tree[at].right;
    return tree[at].label;
}

}  // namespace

ClassifierModel train_knn(const EmbeddingMatrix& X, const LabelVector& Y,
                          const KnnParams& params) {
    if (X.n_rows == 0) throw std::invalid_argument("empty training set");
    if (static_cast<std::size_t>(X.n_rows) != Y.size())
        throw std::invalid_argument("embedding/label size mismatch");
    ClassifierModel m;
    m.kind = ClassifierKind::knn;
    m.n_features = X.dims;
    m.n_classes = n_classes_of(Y);
    m.knn = params;
    m.knn.k_neighbors = std::min(params.k_neighbors, static_cast<int>(X.n_rows));
    m.train_x = X;
    m.train_y = Y;
    return m;
}

ClassifierModel train_random_forest(const EmbeddingMatrix& X, const LabelVector& Y,
                                    const ForestParams& params, std::uint64_t seed) {
    if (X.n_rows == 0) throw std::invalid_argument("empty training set");
    if (static_cast<std::size_t>(X.n_rows) != Y.size())
        throw std::invalid_argument("embedding/label size mismatch");

    ClassifierModel m;
    m.kind = ClassifierKind::random_forest;
    m.n_features = X.dims;
    m.n_classes = n_classes_of(Y);
    m.forest = params;
    m.seed = seed;

    const int mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(X.dims))));
    m.trees.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng boot(splitmix64(seed + static_cast<std::uint64_t>(t)));
        std::vector<int> sample(static_cast<std::size_t>(X.n_rows));
        for (int& s : sample) s = boot.index(X.n_rows);
        TreeBuilder builder{X, Y, m.n_classes, params.max_depth, mtry,
                            Rng(splitmix64(seed ^ (0x9e37u + static_cast<std::uint64_t>(t)))),
                            {}};
        builder.build(std::move(sample), 0);
        m.trees.push_back(std::move(builder.nodes));
    }
    return m;
}

ClassifierModel train_classifier(ClassifierKind kind, const EmbeddingMatrix& X,
                                 const LabelVector& Y, const KnnParams& knn_params,
                                 const ForestParams& forest_params, std::uint64_t seed) {
    return kind == ClassifierKind::knn ? train_knn(X, Y, knn_params)
                                       : train_random_forest(X, Y, forest_params, seed);
}

LabelVector predict(const ClassifierModel& model, const EmbeddingMatrix& X) {
    if (X.n_rows > 0 && X.dims != model.n_features)
        throw std::invalid_argument("predict: feature dimension mismatch");

    const auto& K = kernels::active();
    LabelVector out(static_cast<std::size_t>(X.n_rows));

    if (model.kind == ClassifierKind::knn) {
        const std::size_t d = static_cast<std::size_t>(model.n_features);
        std::vector<std::pair<double, int>> dist(
            static_cast<std::size_t>(model.train_x.n_rows));
        for (std::int32_t i = 0; i < X.n_rows; ++i) {
            for (std::int32_t j = 0; j < model.train_x.n_rows; ++j)
                dist[j] = {K.dist2(X.row(i), model.train_x.row(j), d), j};
            std::sort(dist.begin(), dist.end());
            std::vector<int> votes;
            votes.reserve(static_cast<std::size_t>(model.knn.k_neighbors));
            for (int k = 0; k < model.knn.k_neighbors; ++k)
                votes.push_back(model.train_y[dist[k].second]);
            out[i] = majority(votes, model.n_classes);
        }
    } else {
        std::vector<int> votes(model.trees.size());
        for (std::int32_t i = 0; i < X.n_rows; ++i) {
            for (std::size_t t = 0; t < model.trees.size(); ++t)
                votes[t] = tree_predict(model.trees[t], X.row(i));
            out[i] = majority(votes, model.n_classes);
        }
    }
    return out;
}

}  // namespace topolm
