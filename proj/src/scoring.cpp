// SPDX-License-Identifier: Apache-2.0
#include "topolm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "topolm/kernels.hpp"
#include "topolm/rng.hpp"

namespace topolm {

namespace {

int count_classes(const LabelVector& y) {
    int m = -1;
    for (int v : y) {
        if (v < 0) throw std::invalid_argument("labels must be non-negative");
        m = std::max(m, v);
    }
    return m + 1;
}

}  // namespace

double cluster_score_supervised(const EmbeddingMatrix& X, const LabelVector& Y,
                                double eps) {
    if (static_cast<std::size_t>(X.n_rows) != Y.size())
        throw std::invalid_argument("embedding/label size mismatch");
    if (count_classes(Y) < 2)
        throw std::invalid_argument("supervised score needs at least two classes");

    const auto& K = kernels::active();
    const std::size_t d = static_cast<std::size_t>(X.dims);
    double min_inter = std::numeric_limits<double>::infinity();
    double max_intra = 0.0;
    for (std::int32_t i = 0; i < X.n_rows; ++i)
        for (std::int32_t j = i + 1; j < X.n_rows; ++j) {
            const double dist = std::sqrt(K.dist2(X.row(i), X.row(j), d));
            if (Y[i] == Y[j])
                max_intra = std::max(max_intra, dist);
            else
                min_inter = std::min(min_inter, dist);
        }
    if (!std::isfinite(min_inter))
        throw std::invalid_argument("supervised score needs at least two classes");
    return min_inter / (max_intra + eps);
}

namespace {

struct SingleKmeans {
    LabelVector labels;
    std::vector<double> centroids;
    double sse = 0.0;
    std::vector<double> sse_trace;
};

SingleKmeans kmeans_once(const EmbeddingMatrix& X, int k, std::uint64_t seed,
                         int max_iters) {
    const auto& K = kernels::active();
    const std::int32_t n = X.n_rows;
    const std::size_t d = static_cast<std::size_t>(X.dims);
    Rng rng(seed);

    // k-means++ seeding
    std::vector<double> centroids(static_cast<std::size_t>(k) * d);
    std::vector<double> best_d2(n, std::numeric_limits<double>::infinity());
    {
        const int first = rng.index(n);
        std::copy(X.row(first), X.row(first) + d, centroids.begin());
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (std::int32_t i = 0; i < n; ++i) {
                const double d2 =
                    K.dist2(X.row(i), centroids.data() + static_cast<std::size_t>(c - 1) * d, d);
                best_d2[i] = std::min(best_d2[i], d2);
                total += best_d2[i];
            }
            int pick;
            if (total <= 0.0) {
                pick = rng.index(n);
            } else {
                const double target = rng.next_unit() * total;
                double acc = 0.0;
                pick = n - 1;
                for (std::int32_t i = 0; i < n; ++i) {
                    acc += best_d2[i];
                    if (acc >= target) {
                        pick = i;
                        break;
                    }
                }
            }
            std::copy(X.row(pick), X.row(pick) + d, centroids.begin() + static_cast<std::size_t>(c) * d);
        }
    }

    SingleKmeans out;
    out.labels.assign(n, -1);
    std::vector<std::int64_t> counts(k);
    std::vector<double> sums(static_cast<std::size_t>(k) * d);

    for (int iter = 0; iter < max_iters; ++iter) {
        // assignment (ties to the lowest centroid index)
        bool changed = false;
        double sse = 0.0;
        for (std::int32_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = K.dist2(X.row(i), centroids.data(), d);
            for (int c = 1; c < k; ++c) {
                const double d2 =
                    K.dist2(X.row(i), centroids.data() + static_cast<std::size_t>(c) * d, d);
                if (d2 < best_dist) {
                    best_dist = d2;
                    best = c;
                }
            }
            sse += best_dist;
            if (out.labels[i] != best) {
                out.labels[i] = best;
                changed = true;
            }
        }
        out.sse_trace.push_back(sse);
        out.sse = sse;
        if (!changed) break;

        // update
        std::fill(counts.begin(), counts.end(), 0);
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::int32_t i = 0; i < n; ++i) {
            ++counts[out.labels[i]];
            K.axpy(1.0, X.row(i), sums.data() + static_cast<std::size_t>(out.labels[i]) * d, d);
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < d; ++j)
                    centroids[static_cast<std::size_t>(c) * d + j] =
                        sums[static_cast<std::size_t>(c) * d + j] / counts[c];
            } else {
                // reseed at the point farthest from its centroid
                int far = 0;
                double far_d2 = -1.0;
                for (std::int32_t i = 0; i < n; ++i) {
                    const double d2 = K.dist2(
                        X.row(i), centroids.data() + static_cast<std::size_t>(out.labels[i]) * d, d);
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        far = i;
                    }
                }
                std::copy(X.row(far), X.row(far) + d,
                          centroids.begin() + static_cast<std::size_t>(c) * d);
            }
        }
    }
    out.centroids = std::move(centroids);
    return out;
}

}  // namespace

KmeansResult kmeans(const EmbeddingMatrix& X, int k, std::uint64_t seed, int restarts,
                    int max_iters) {
    if (k < 1 || X.n_rows < k) throw std::invalid_argument("kmeans: need rows >= k >= 1");
    KmeansResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        SingleKmeans run = kmeans_once(X, k, splitmix64(seed + static_cast<std::uint64_t>(r)),
                                       max_iters);
        if (run.sse < best.sse) {
            best.labels = std::move(run.labels);
            best.centroids = std::move(run.centroids);
            best.sse = run.sse;
            best.sse_trace = std::move(run.sse_trace);
        }
    }
    return best;
}

UnsupervisedScore cluster_score_unsupervised(const EmbeddingMatrix& X, int n_classes,
                                             std::uint64_t seed, double eps) {
    if (n_classes < 2) throw std::invalid_argument("unsupervised score needs n_classes >= 2");
    if (X.n_rows < n_classes)
        throw std::invalid_argument("unsupervised score needs rows >= n_classes");

    const auto& K = kernels::active();
    const std::size_t d = static_cast<std::size_t>(X.dims);

    KmeansResult km;
    bool ok = false;
    std::uint64_t s = seed;
    for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
        km = kmeans(X, n_classes, s);
        std::vector<int> sizes(n_classes, 0);
        for (int l : km.labels) ++sizes[l];
        ok = std::all_of(sizes.begin(), sizes.end(), [](int c) { return c > 0; });
        s = splitmix64(s ^ static_cast<std::uint64_t>(attempt + 1));
    }
    UnsupervisedScore out;
    out.labels = km.labels;
    if (!ok) return out;  // score 0

    std::vector<int> sizes(n_classes, 0);
    for (int l : km.labels) ++sizes[l];

    double min_inter = std::numeric_limits<double>::infinity();
    for (std::int32_t i = 0; i < X.n_rows; ++i)
        for (std::int32_t j = i + 1; j < X.n_rows; ++j)
            if (km.labels[i] != km.labels[j])
                min_inter = std::min(min_inter, std::sqrt(K.dist2(X.row(i), X.row(j), d)));
    if (!std::isfinite(min_inter)) return out;  // single cluster occupied

    double mean = 0.0;
    for (int c : sizes) mean += c;
    mean /= n_classes;
    double var = 0.0;
    for (int c : sizes) var += (c - mean) * (c - mean);
    const double stddev = std::sqrt(var / n_classes);  // population std
    const int min_size = *std::min_element(sizes.begin(), sizes.end());

    out.score = min_inter * static_cast<double>(min_size) / (stddev + eps);
    return out;
}

double adjusted_rand_index(const LabelVector& a, const LabelVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ari: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("ari: need at least two items");

    const int ka = count_classes(a);
    const int kb = count_classes(b);
    std::vector<std::int64_t> table(static_cast<std::size_t>(ka) * kb, 0);
    std::vector<std::int64_t> ra(ka, 0), cb(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++table[static_cast<std::size_t>(a[i]) * kb + b[i]];
        ++ra[a[i]];
        ++cb[b[i]];
    }
    auto choose2 = [](std::int64_t m) { return static_cast<double>(m) * (m - 1) / 2.0; };

    double sum_cells = 0.0;
    for (std::int64_t v : table) sum_cells += choose2(v);
    double sum_a = 0.0, sum_b = 0.0;
    for (std::int64_t v : ra) sum_a += choose2(v);
    for (std::int64_t v : cb) sum_b += choose2(v);

    const double total = choose2(static_cast<std::int64_t>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both trivial partitions (identical)
    return (sum_cells - expected) / (max_index - expected);
}

}  // namespace topolm
