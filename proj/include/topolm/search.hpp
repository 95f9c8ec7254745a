// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/flow.hpp"
#include "topolm/harmonic.hpp"
#include "topolm/scoring.hpp"

namespace topolm {

/// Ordered tuple of distinct triangle ids (the holes).
using CandidateTuple = std::vector<int>;

enum class SearchMode { supervised, unsupervised };

struct SearchConfig {
    int n_holes = 3;
    int n_init = 10;
    int n_hop = 2;
    SearchMode mode = SearchMode::supervised;
    int n_clusters = 2;      // unsupervised k-means target
    std::uint64_t seed = 0;
    int max_steps = -1;      // accepted moves; -1 => 10 * k * average degree
    double sup_eps = 1e-12;
    double unsup_eps = 1e-9;
};

struct TraceEntry {
    int step = 0;
    CandidateTuple holes;
    double score = 0.0;
    std::uint64_t cache_hits = 0;  // cumulative tuple-cache hits at this step
};

struct SearchTrace {
    std::vector<TraceEntry> entries;  // accepted states, scores strictly increasing
    std::uint64_t evaluations = 0;
    std::uint64_t tuple_cache_hits = 0;
    std::uint64_t harmonic_cache_hits = 0;
    bool hit_max_steps = false;
    std::vector<std::string> diagnostics;
};

struct SearchResult {
    CandidateTuple holes;
    double score = -std::numeric_limits<double>::infinity();
    HarmonicBasis basis;
    SearchTrace trace;
};

struct SearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Triangle ids sharing an edge, symmetric, self excluded; lists sorted.
std::vector<std::vector<int>> triangle_adjacency(const SimplicialComplex2& sc);

/// All triangles within [1, n_hop] adjacency hops of `tri`, sorted ascending.
std::vector<int> n_hop_ball(const std::vector<std::vector<int>>& adj, int tri, int n_hop);

/// Tuples reachable by replacing exactly one coordinate with a triangle from
/// its n-hop ball, keeping all coordinates distinct. Enumeration order:
/// coordinate index ascending, then replacement triangle id ascending.
std::vector<CandidateTuple> neighbor_tuples(const CandidateTuple& tuple, int n_hop,
                                            const std::vector<std::vector<int>>& adj);

/// Score memo keyed on the sorted tuple (scores are order-invariant).
class TupleScoreCache {
  public:
    std::optional<double> lookup(const CandidateTuple& tuple);
    void store(const CandidateTuple& tuple, double score);
    std::uint64_t hits() const { return hits_; }

  private:
    std::mutex mu_;
    std::map<CandidateTuple, double> table_;
    std::uint64_t hits_ = 0;
};

/// Everything an evaluation needs; flows are the (already diffused) training
/// flow embeddings.
struct SearchContext {
    const SimplicialComplex2& sc;
    const FlowMatrix& flows;
    const LabelVector* labels = nullptr;  // required in supervised mode
    SearchConfig cfg;
    HarmonicCache& harmonic_cache;
    TupleScoreCache& score_cache;
    std::uint64_t evaluations = 0;
};

/// Cluster score of the tuple's harmonic embedding; -infinity when any hole
/// is degenerate.
double evaluate_tuple(SearchContext& ctx, const CandidateTuple& tuple);

/// Iterative greedy initialization: hole i is the score-maximizing candidate
/// among n_init seeded samples given holes 1..i-1. Throws SearchError when a
/// position finds no non-degenerate candidate after 3 rounds of samples.
std::pair<CandidateTuple, double> initialize(SearchContext& ctx);

/// First-improvement hill climbing over n-hop neighbor tuples in
/// deterministic scan order; restarts the scan after every accepted move and
/// stops at a local optimum or after max_steps accepted moves.
SearchResult local_search(SearchContext& ctx, CandidateTuple init, double init_score);

/// initialize + local_search.
SearchResult run_search(SearchContext& ctx);

}  // namespace topolm
