// SPDX-License-Identifier: Apache-2.0
#include "topolm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "topolm/rng.hpp"

namespace topolm {

using nlohmann::json;

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["complex"] = cfg.complex_path;
    j["train"] = cfg.train_path;
    j["test"] = cfg.test_path;
    j["mode"] = cfg.search.mode == SearchMode::supervised ? "supervised" : "unsupervised";
    j["n_holes"] = cfg.search.n_holes;
    j["n_init"] = cfg.search.n_init;
    j["n_hop"] = cfg.search.n_hop;
    j["n_clusters"] = cfg.search.n_clusters;
    j["seed"] = cfg.search.seed;
    j["max_steps"] = cfg.search.max_steps;
    j["sup_eps"] = cfg.search.sup_eps;
    j["unsup_eps"] = cfg.search.unsup_eps;
    j["tau_scale"] = cfg.tau_scale;
    j["tau_override"] = cfg.tau_override;
    j["expm_rel_tol"] = cfg.expm_rel_tol;
    j["lsq_tol"] = cfg.harmonic.lsq_tol;
    j["classifier"] = to_string(cfg.classifier);
    j["knn_k"] = cfg.knn.k_neighbors;
    j["forest_trees"] = cfg.forest.n_trees;
    j["forest_depth"] = cfg.forest.max_depth;
    return j.dump();
}

namespace {

LabelVector labels_of(const std::vector<Trajectory>& ts, bool required,
                      const std::string& what) {
    LabelVector y;
    y.reserve(ts.size());
    for (const Trajectory& t : ts) {
        if (!t.label) {
            if (required) throw DataError(what + ": trajectory without label");
            return {};
        }
        y.push_back(*t.label);
    }
    return y;
}

double plain_accuracy(const LabelVector& predicted, const LabelVector& truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return truth.empty() ? 0.0 : static_cast<double>(hits) / truth.size();
}

/// accuracy maximized over cluster-to-class matchings (unsupervised labels
/// carry no class identity)
double matched_accuracy(const LabelVector& predicted, const LabelVector& truth) {
    int k = 0;
    for (int v : predicted) k = std::max(k, v + 1);
    for (int v : truth) k = std::max(k, v + 1);
    if (k > 7) return plain_accuracy(predicted, truth);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (perm[predicted[i]] == truth[i]) ++hits;
        best = std::max(best, static_cast<double>(hits) / truth.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

PipelineReport run_on_data(const SimplicialComplex2& sc,
                           const std::vector<Trajectory>& train,
                           const std::vector<Trajectory>& test, const RunConfig& cfg) {
    PipelineReport report;
    report.config_hash = fnv1a_hex(run_config_to_json(cfg));

    const bool supervised = cfg.search.mode == SearchMode::supervised;
    const LabelVector train_y = labels_of(train, supervised, "training set");
    const LabelVector test_y = labels_of(test, false, "test set");

    // flow embedding and diffusion
    FlowMatrix train_flows = embed_all(train, sc);
    FlowMatrix test_flows =
        test.empty() ? FlowMatrix(sc.n_edges(), 0) : embed_all(test, sc);

    const SparseOperator up = l1_up(sc);
    report.tau = cfg.tau_override >= 0.0 ? cfg.tau_override
                                         : default_diffusion_tau(up, cfg.tau_scale);
    ExpmOptions expm_opts;
    expm_opts.rel_tol = cfg.expm_rel_tol;
    if (report.tau > 0.0 && up.nnz() > 0) {
        train_flows = expm_action(up, train_flows, report.tau, expm_opts);
        if (test_flows.n_columns > 0)
            test_flows = expm_action(up, test_flows, report.tau, expm_opts);
    }

    // landmark search on the training flows
    HarmonicCache harmonic_cache(cfg.harmonic);
    TupleScoreCache score_cache;
    SearchContext ctx{sc,          train_flows,    supervised ? &train_y : nullptr,
                      cfg.search,  harmonic_cache, score_cache};
    SearchResult sr = run_search(ctx);
    report.landmarks = sr.holes;
    report.score = sr.score;
    report.trace = std::move(sr.trace);
    report.basis = std::move(sr.basis);

    // harmonic coordinates
    report.train_embedding = embed(report.basis, train_flows);
    if (test_flows.n_columns > 0) report.test_embedding = embed(report.basis, test_flows);

    // classify / cluster
    if (!test.empty()) {
        if (supervised) {
            const ClassifierModel model =
                train_classifier(cfg.classifier, report.train_embedding, train_y, cfg.knn,
                                 cfg.forest, splitmix64(cfg.search.seed ^ 0xc1fULL));
            report.predicted_test = predict(model, report.test_embedding);
            if (!test_y.empty()) {
                report.ari = adjusted_rand_index(report.predicted_test, test_y);
                report.accuracy = plain_accuracy(report.predicted_test, test_y);
            }
        } else {
            report.train_cluster_labels =
                kmeans(report.train_embedding, cfg.search.n_clusters,
                       splitmix64(cfg.search.seed ^ 0x7e57ULL))
                    .labels;
            report.predicted_test = kmeans(report.test_embedding, cfg.search.n_clusters,
                                           splitmix64(cfg.search.seed ^ 0x7e58ULL))
                                        .labels;
            if (!test_y.empty()) {
                report.ari = adjusted_rand_index(report.predicted_test, test_y);
                report.accuracy = matched_accuracy(report.predicted_test, test_y);
            }
        }
    } else if (!supervised) {
        report.train_cluster_labels = kmeans(report.train_embedding, cfg.search.n_clusters,
                                             splitmix64(cfg.search.seed ^ 0x7e57ULL))
                                          .labels;
    }
    return report;
}

std::string report_to_json(const PipelineReport& report, const RunConfig& cfg) {
    json j;
    json landmarks = json::array();
    for (int hole : report.landmarks) landmarks.push_back(hole);
    j["landmarks"] = std::move(landmarks);
    json trace = json::array();
    for (const TraceEntry& e : report.trace.entries) trace.push_back({e.step, e.score});
    j["score_trace"] = std::move(trace);
    j["ari"] = report.ari ? json(*report.ari) : json(nullptr);
    j["accuracy"] = report.accuracy ? json(*report.accuracy) : json(nullptr);
    j["config_hash"] = report.config_hash;
    j["seed"] = cfg.search.seed;
    j["mode"] = cfg.search.mode == SearchMode::supervised ? "supervised" : "unsupervised";
    j["score"] = report.score;
    j["tau"] = report.tau;
    j["evaluations"] = report.trace.evaluations;
    j["tuple_cache_hits"] = report.trace.tuple_cache_hits;
    j["harmonic_cache_hits"] = report.trace.harmonic_cache_hits;
    j["hit_max_steps"] = report.trace.hit_max_steps;
    j["diagnostics"] = report.trace.diagnostics;
    return j.dump(2) + "\n";
}

namespace {

std::string embedding_to_jsonl(const EmbeddingMatrix& X, const LabelVector& labels) {
    std::string out;
    for (std::int32_t i = 0; i < X.n_rows; ++i) {
        json j;
        std::vector<double> row(X.row(i), X.row(i) + X.dims);
        j["x"] = std::move(row);
        if (static_cast<std::size_t>(i) < labels.size()) j["label"] = labels[i];
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string trace_to_jsonl(const SearchTrace& trace) {
    std::string out;
    for (const TraceEntry& e : trace.entries) {
        json j;
        j["step"] = e.step;
        j["holes"] = e.holes;
        j["score"] = e.score;
        j["cache_hits"] = e.cache_hits;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace

PipelineReport run_pipeline(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) throw ConfigError("output directory not set");

    std::string stage = "load";
    try {
        const SimplicialComplex2 sc = read_complex(cfg.complex_path);
        const std::vector<Trajectory> train = read_trajectories(cfg.train_path);
        const std::vector<Trajectory> test =
            cfg.test_path.empty() ? std::vector<Trajectory>{} : read_trajectories(cfg.test_path);
        if (train.empty()) throw DataError("training set is empty");

        stage = "run";
        PipelineReport report = run_on_data(sc, train, test, cfg);

        stage = "write";
        write_landmarks(cfg.out_dir + "/landmarks.json", sc, report.basis);
        atomic_write_text(cfg.out_dir + "/trace.jsonl", trace_to_jsonl(report.trace));
        atomic_write_text(cfg.out_dir + "/embeddings_train.jsonl",
                          embedding_to_jsonl(report.train_embedding,
                                             cfg.search.mode == SearchMode::unsupervised
                                                 ? report.train_cluster_labels
                                                 : labels_of(train, false, "train")));
        if (report.test_embedding.n_rows > 0) {
            atomic_write_text(cfg.out_dir + "/embeddings_test.jsonl",
                              embedding_to_jsonl(report.test_embedding,
                                                 labels_of(test, false, "test")));
            json pred;
            pred["labels"] = report.predicted_test;
            atomic_write_text(cfg.out_dir + "/predictions.json", pred.dump() + "\n");
        }
        atomic_write_text(cfg.out_dir + "/report.json", report_to_json(report, cfg));
        return report;
    } catch (const std::exception& e) {
        // flush a partial report naming the failed stage
        json j;
        j["failed_stage"] = stage;
        j["error"] = e.what();
        j["config_hash"] = fnv1a_hex(run_config_to_json(cfg));
        j["seed"] = cfg.search.seed;
        try {
            atomic_write_text(cfg.out_dir + "/report.json", j.dump(2) + "\n");
        } catch (...) {
        }
        throw;
    }
}

}  // namespace topolm
