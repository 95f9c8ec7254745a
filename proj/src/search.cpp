// SPDX-License-Identifier: Apache-2.0
#include "topolm/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "topolm/rng.hpp"

namespace topolm {

std::vector<std::vector<int>> triangle_adjacency(const SimplicialComplex2& sc) {
    std::vector<std::vector<int>> edge_tris(static_cast<std::size_t>(sc.n_edges()));
    for (std::int32_t t = 0; t < sc.n_triangles(); ++t) {
        const auto& [u, v, w] = sc.triangles()[t];
        edge_tris[sc.edge_id(u, v)].push_back(t);
        edge_tris[sc.edge_id(u, w)].push_back(t);
        edge_tris[sc.edge_id(v, w)].push_back(t);
    }
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(sc.n_triangles()));
    for (const auto& tris : edge_tris)
        for (std::size_t i = 0; i < tris.size(); ++i)
            for (std::size_t j = i + 1; j < tris.size(); ++j) {
                adj[tris[i]].push_back(tris[j]);
                adj[tris[j]].push_back(tris[i]);
            }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::vector<int> n_hop_ball(const std::vector<std::vector<int>>& adj, int tri, int n_hop) {
    std::vector<int> dist(adj.size(), -1);
    dist[tri] = 0;
    std::deque<int> queue{tri};
    std::vector<int> ball;
    while (!queue.empty()) {
        const int at = queue.front();
        queue.pop_front();
        if (dist[at] == n_hop) continue;
        for (int next : adj[at])
            if (dist[next] < 0) {
                dist[next] = dist[at] + 1;
                ball.push_back(next);
                queue.push_back(next);
            }
    }
    std::sort(ball.begin(), ball.end());
    return ball;
}

std::vector<CandidateTuple> neighbor_tuples(const CandidateTuple& tuple, int n_hop,
                                            const std::vector<std::vector<int>>& adj) {
    std::vector<CandidateTuple> out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (int cand : n_hop_ball(adj, tuple[i], n_hop)) {
            if (std::find(tuple.begin(), tuple.end(), cand) != tuple.end()) continue;
            CandidateTuple next = tuple;
            next[i] = cand;
            out.push_back(std::move(next));
        }
    }
    return out;
}

std::optional<double> TupleScoreCache::lookup(const CandidateTuple& tuple) {
    CandidateTuple key = tuple;
    std::sort(key.begin(), key.end());
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    ++hits_;
    return it->second;
}

void TupleScoreCache::store(const CandidateTuple& tuple, double score) {
    CandidateTuple key = tuple;
    std::sort(key.begin(), key.end());
    std::lock_guard<std::mutex> lock(mu_);
    table_.emplace(std::move(key), score);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t tuple_fingerprint(const CandidateTuple& tuple) {
    CandidateTuple key = tuple;
    std::sort(key.begin(), key.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : key) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

double evaluate_tuple(SearchContext& ctx, const CandidateTuple& tuple) {
    if (auto cached = ctx.score_cache.lookup(tuple)) return *cached;
    ++ctx.evaluations;

    HarmonicBasis basis;
    basis.columns.reserve(tuple.size());
    for (int hole : tuple) {
        const auto& h = ctx.harmonic_cache.get_or_compute(ctx.sc, hole);
        if (!h) {
            ctx.score_cache.store(tuple, kNegInf);
            return kNegInf;
        }
        basis.columns.push_back(*h);
    }

    const EmbeddingMatrix X = embed(basis, ctx.flows);
    double score;
    if (ctx.cfg.mode == SearchMode::supervised) {
        score = cluster_score_supervised(X, *ctx.labels, ctx.cfg.sup_eps);
    } else {
        const std::uint64_t seed = splitmix64(ctx.cfg.seed ^ tuple_fingerprint(tuple));
        score = cluster_score_unsupervised(X, ctx.cfg.n_clusters, seed, ctx.cfg.unsup_eps)
                    .score;
    }
    ctx.score_cache.store(tuple, score);
    return score;
}

std::pair<CandidateTuple, double> initialize(SearchContext& ctx) {
    if (ctx.flows.n_columns == 0) throw SearchError("initialize: no training flows");
    if (ctx.cfg.mode == SearchMode::supervised && ctx.labels == nullptr)
        throw SearchError("initialize: supervised mode requires labels");
    if (ctx.cfg.n_holes < 1 || ctx.cfg.n_init < 1)
        throw SearchError("initialize: n_holes and n_init must be >= 1");
    if (ctx.sc.n_triangles() < ctx.cfg.n_holes)
        throw SearchError("initialize: fewer triangles than requested holes");

    Rng rng(ctx.cfg.seed);
    CandidateTuple chosen;
    double score = kNegInf;

    for (int i = 0; i < ctx.cfg.n_holes; ++i) {
        bool found = false;
        for (int round = 0; round < 3 && !found; ++round) {
            std::vector<int> pool;
            pool.reserve(static_cast<std::size_t>(ctx.sc.n_triangles()));
            for (int t = 0; t < ctx.sc.n_triangles(); ++t)
                if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
                    pool.push_back(t);
            const std::vector<int> picks = rng.sample_without_replacement(
                pool.size(), static_cast<std::size_t>(ctx.cfg.n_init));

            double best = kNegInf;
            int best_tri = -1;
            for (int pick : picks) {
                const int tri = pool[pick];
                CandidateTuple tuple = chosen;
                tuple.push_back(tri);
                const double s = evaluate_tuple(ctx, tuple);
                if (s == kNegInf) continue;  // degenerate hole
                if (best_tri < 0 || s > best) {
                    best = s;
                    best_tri = tri;
                }
            }
            if (best_tri >= 0) {
                chosen.push_back(best_tri);
                score = best;
                found = true;
            }
        }
        if (!found)
            throw SearchError("initialize: no non-degenerate candidate for hole " +
                              std::to_string(i + 1) + " after 3 sampling rounds");
    }
    return {chosen, score};
}

SearchResult local_search(SearchContext& ctx, CandidateTuple init, double init_score) {
    const auto adj = triangle_adjacency(ctx.sc);

    int max_steps = ctx.cfg.max_steps;
    if (max_steps < 0) {
        double total = 0.0;
        for (const auto& list : adj) total += static_cast<double>(list.size());
        const int avg_degree =
            adj.empty() ? 1 : std::max(1, static_cast<int>(std::ceil(total / adj.size())));
        max_steps = 10 * ctx.cfg.n_holes * avg_degree;
    }

    SearchResult result;
    result.holes = std::move(init);
    result.score = init_score;
    result.trace.entries.push_back({0, result.holes, result.score, ctx.score_cache.hits()});

    int step = 0;
    bool improved = true;
    while (improved && step < max_steps) {
        improved = false;
        for (std::size_t i = 0; i < result.holes.size() && !improved; ++i) {
            for (int cand : n_hop_ball(adj, result.holes[i], ctx.cfg.n_hop)) {
                if (std::find(result.holes.begin(), result.holes.end(), cand) !=
                    result.holes.end())
                    continue;
                CandidateTuple tuple = result.holes;
                tuple[i] = cand;
                const double s = evaluate_tuple(ctx, tuple);
                if (s > result.score) {
                    result.holes = std::move(tuple);
                    result.score = s;
                    result.trace.entries.push_back(
                        {++step, result.holes, result.score, ctx.score_cache.hits()});
                    improved = true;
                    break;  // restart the scan from the new tuple
                }
            }
        }
    }
    if (improved && step >= max_steps) result.trace.hit_max_steps = true;

    for (int hole : result.holes) {
        const auto& h = ctx.harmonic_cache.get_or_compute(ctx.sc, hole);
        if (!h) throw SearchError("local_search: accepted hole became degenerate");
        result.basis.columns.push_back(*h);
    }

    // adjacent holes reduce the per-hole harmonic approximation quality
    for (std::size_t i = 0; i < result.holes.size(); ++i)
        for (std::size_t j = i + 1; j < result.holes.size(); ++j) {
            const auto& a = adj[result.holes[i]];
            if (std::binary_search(a.begin(), a.end(), result.holes[j]))
                result.trace.diagnostics.push_back(
                    "holes " + std::to_string(result.holes[i]) + " and " +
                    std::to_string(result.holes[j]) + " share an edge");
        }

    result.trace.evaluations = ctx.evaluations;
    result.trace.tuple_cache_hits = ctx.score_cache.hits();
    result.trace.harmonic_cache_hits = ctx.harmonic_cache.hits();
    return result;
}

SearchResult run_search(SearchContext& ctx) {
    auto [init, score] = initialize(ctx);
    return local_search(ctx, std::move(init), score);
}

}  // namespace topolm
