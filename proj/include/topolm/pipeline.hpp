// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "topolm/classify.hpp"
#include "topolm/io.hpp"
#include "topolm/search.hpp"

namespace topolm {

struct RunConfig {
    std::string complex_path;
    std::string train_path;
    std::string test_path;  // may be empty (no prediction stage)
    std::string out_dir;

    SearchConfig search;

    double tau_scale = 2.0;
    double tau_override = -1.0;  // >= 0 replaces the spectral-radius default
    double expm_rel_tol = 1e-7;
    HarmonicOptions harmonic;

    ClassifierKind classifier = ClassifierKind::random_forest;
    KnnParams knn;
    ForestParams forest;
};

/// Canonical JSON used for the config fingerprint in reports.
std::string run_config_to_json(const RunConfig& cfg);

struct PipelineReport {
    CandidateTuple landmarks;
    double score = 0.0;
    SearchTrace trace;
    HarmonicBasis basis;
    double tau = 0.0;
    std::string config_hash;

    EmbeddingMatrix train_embedding;
    EmbeddingMatrix test_embedding;
    LabelVector predicted_test;
    LabelVector train_cluster_labels;  // unsupervised mode only

    std::optional<double> ari;       // set when test labels exist
    std::optional<double> accuracy;  // supervised: plain; unsupervised: best label matching
};

/// Full method on in-memory data: embed, diffuse, search landmarks, embed
/// train/test into the harmonic basis, classify (or cluster), score.
PipelineReport run_on_data(const SimplicialComplex2& sc,
                           const std::vector<Trajectory>& train,
                           const std::vector<Trajectory>& test, const RunConfig& cfg);

/// File-level pipeline: loads inputs, runs, writes landmarks, trace,
/// embeddings, predictions and report into cfg.out_dir. On a stage failure a
/// partial report naming the failed stage is flushed before rethrowing.
PipelineReport run_pipeline(const RunConfig& cfg);

/// Report document written by run_pipeline (landmarks, score_trace, ari,
/// accuracy, config_hash, seed plus diagnostics).
std::string report_to_json(const PipelineReport& report, const RunConfig& cfg);

}  // namespace topolm
