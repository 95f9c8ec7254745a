// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: generate | ingest | infer | classify | evaluate |
// trace-export. Exit codes: 0 success, 2 config error, 3 data error,
// 4 search failure.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topolm/classify.hpp"
#include "topolm/datagen.hpp"
#include "topolm/hexgrid.hpp"
#include "topolm/io.hpp"
#include "topolm/pipeline.hpp"
#include "topolm/rng.hpp"

using nlohmann::json;
using namespace topolm;

namespace {

struct SearchFlags {
    std::string mode = "supervised";
    int n_holes = 3;
    int n_init = 10;
    int n_hop = 2;
    int n_clusters = 2;
    std::uint64_t seed = 0;
    int max_steps = -1;
    double tau_scale = 2.0;
    double tau_override = -1.0;
    double lsq_tol = 1e-10;
    std::string classifier = "random_forest";
    int knn_k = 3;
    int trees = 100;
    int max_depth = 8;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f, bool seed_required) {
    cmd->add_option("--mode", f.mode, "supervised or unsupervised")
        ->check(CLI::IsMember({"supervised", "unsupervised"}));
    cmd->add_option("--n-holes", f.n_holes, "number of landmark holes");
    cmd->add_option("--n-init", f.n_init, "initialization samples per hole");
    cmd->add_option("--n-hop", f.n_hop, "local-search neighborhood radius");
    cmd->add_option("--n-clusters", f.n_clusters, "k-means clusters (unsupervised)");
    auto* seed = cmd->add_option("--seed", f.seed, "random seed");
    if (seed_required) seed->required();
    cmd->add_option("--max-steps", f.max_steps, "accepted-move cap (-1: automatic)");
    cmd->add_option("--tau-scale", f.tau_scale, "diffusion time as multiple of 1/lambda_max");
    cmd->add_option("--tau", f.tau_override, "fixed diffusion time (overrides --tau-scale)");
    cmd->add_option("--lsq-tol", f.lsq_tol, "harmonic least-squares tolerance");
    cmd->add_option("--classifier", f.classifier, "knn or random_forest")
        ->check(CLI::IsMember({"knn", "random_forest"}));
    cmd->add_option("--knn-k", f.knn_k, "k-nearest-neighbour count");
    cmd->add_option("--trees", f.trees, "random forest size");
    cmd->add_option("--max-depth", f.max_depth, "random forest depth cap");
}

RunConfig to_run_config(const SearchFlags& f) {
    RunConfig cfg;
    cfg.search.mode =
        f.mode == "supervised" ? SearchMode::supervised : SearchMode::unsupervised;
    cfg.search.n_holes = f.n_holes;
    cfg.search.n_init = f.n_init;
    cfg.search.n_hop = f.n_hop;
    cfg.search.n_clusters = f.n_clusters;
    cfg.search.seed = f.seed;
    cfg.search.max_steps = f.max_steps;
    cfg.tau_scale = f.tau_scale;
    cfg.tau_override = f.tau_override;
    cfg.harmonic.lsq_tol = f.lsq_tol;
    cfg.classifier = classifier_kind_from_string(f.classifier);
    cfg.knn.k_neighbors = f.knn_k;
    cfg.forest.n_trees = f.trees;
    cfg.forest.max_depth = f.max_depth;
    return cfg;
}

int run_generate(const SynthConfig& synth, const std::string& out_dir) {
    const Dataset ds = make_dataset(synth);
    write_complex(out_dir + "/complex.json", ds.complex);
    write_trajectories(out_dir + "/train.jsonl", ds.train);
    write_trajectories(out_dir + "/test.jsonl", ds.test);

    json manifest;
    manifest["n_points"] = synth.n_points;
    manifest["n_classes"] = synth.n_classes;
    manifest["n_train_per_class"] = synth.n_train_per_class;
    manifest["n_test_per_class"] = synth.n_test_per_class;
    manifest["weight_inflation"] = synth.weight_inflation;
    manifest["boundary_margin"] = synth.boundary_margin;
    manifest["seed"] = synth.seed;
    atomic_write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote complex (" << ds.complex.n_vertices() << " vertices, "
              << ds.complex.n_edges() << " edges, " << ds.complex.n_triangles()
              << " triangles), " << ds.train.size() << " train / " << ds.test.size()
              << " test trajectories to " << out_dir << "\n";
    return 0;
}

int run_ingest(const std::string& tracks_path, const std::vector<double>& bbox,
               double cell_deg, const std::string& mask_path, bool apply_mask,
               const std::string& out_dir) {
    GridSpec grid;
    grid.lon_min = bbox[0];
    grid.lat_min = bbox[1];
    grid.lon_max = bbox[2];
    grid.lat_max = bbox[3];
    grid.cell_deg = cell_deg;
    if (!mask_path.empty()) {
        const json j = json::parse(read_text(mask_path), nullptr, false);
        if (j.is_discarded()) throw DataError("malformed land-mask JSON");
        for (const auto& poly : j) {
            std::vector<std::array<double, 2>> ring;
            for (const auto& p : poly)
                ring.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            grid.land_polygons.push_back(std::move(ring));
        }
    }

    const std::vector<Track> tracks = read_tracks(tracks_path);
    IngestResult result = ingest_points(tracks, grid, apply_mask);

    write_complex(out_dir + "/complex.json", result.complex);
    write_trajectories(out_dir + "/trajectories.jsonl", result.trajectories);

    json rep;
    rep["points_total"] = result.points_total;
    rep["points_dropped"] = result.points_dropped;
    rep["tracks_in"] = tracks.size();
    rep["tracks_kept"] = result.trajectories.size();
    rep["tracks_dropped"] = result.tracks_dropped;
    rep["kept_ids"] = result.kept_ids;
    rep["diagnostics"] = result.diagnostics;
    atomic_write_text(out_dir + "/ingest_report.json", rep.dump(2) + "\n");

    std::cout << "grid: " << result.complex.n_vertices() << " vertices, "
              << result.complex.n_edges() << " edges, " << result.complex.n_triangles()
              << " triangles; kept " << result.trajectories.size() << "/" << tracks.size()
              << " tracks (" << result.points_dropped << "/" << result.points_total
              << " points dropped)\n";
    if (result.trajectories.empty()) throw DataError("no usable tracks after ingestion");
    return 0;
}

int run_classify(const std::string& complex_path, const std::string& landmarks_path,
                 const std::string& train_path, const std::string& test_path,
                 const SearchFlags& f, const std::string& out_dir) {
    const SimplicialComplex2 sc = read_complex(complex_path);
    const HarmonicBasis basis = read_landmarks(landmarks_path, sc.n_edges());
    if (basis.columns.empty()) throw DataError("landmarks file holds no landmarks");
    const std::vector<Trajectory> train = read_trajectories(train_path);
    const std::vector<Trajectory> test = read_trajectories(test_path);

    FlowMatrix train_flows = embed_all(train, sc);
    FlowMatrix test_flows = embed_all(test, sc);
    const SparseOperator up = l1_up(sc);
    const double tau =
        f.tau_override >= 0.0 ? f.tau_override : default_diffusion_tau(up, f.tau_scale);
    if (tau > 0.0 && up.nnz() > 0) {
        train_flows = expm_action(up, train_flows, tau);
        test_flows = expm_action(up, test_flows, tau);
    }
    const EmbeddingMatrix train_x = embed(basis, train_flows);
    const EmbeddingMatrix test_x = embed(basis, test_flows);

    LabelVector predicted;
    json rep;
    if (f.mode == "supervised") {
        LabelVector train_y;
        for (const Trajectory& t : train) {
            if (!t.label) throw DataError("supervised classify requires train labels");
            train_y.push_back(*t.label);
        }
        KnnParams knn{f.knn_k};
        ForestParams forest{f.trees, f.max_depth};
        const ClassifierModel model =
            train_classifier(classifier_kind_from_string(f.classifier), train_x, train_y,
                             knn, forest, splitmix64(f.seed ^ 0xc1fULL));
        predicted = predict(model, test_x);
        rep["classifier"] = f.classifier;
    } else {
        predicted = kmeans(test_x, f.n_clusters, splitmix64(f.seed ^ 0x7e58ULL)).labels;
        rep["classifier"] = "kmeans";
    }

    LabelVector truth;
    for (const Trajectory& t : test)
        if (t.label) truth.push_back(*t.label);
    if (truth.size() == test.size() && !test.empty()) {
        rep["ari"] = adjusted_rand_index(predicted, truth);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (predicted[i] == truth[i]) ++hits;
        rep["accuracy"] = static_cast<double>(hits) / truth.size();
    }
    rep["labels"] = predicted;
    rep["seed"] = f.seed;
    rep["tau"] = tau;
    atomic_write_text(out_dir + "/predictions.json", rep.dump(2) + "\n");
    if (rep.contains("ari"))
        std::cout << "ari " << rep["ari"] << " accuracy " << rep["accuracy"] << "\n";
    std::cout << "wrote " << out_dir << "/predictions.json\n";
    return 0;
}

int run_evaluate(const std::string& complex_path, const std::string& train_path,
                 const std::string& test_path, std::vector<int> hole_counts,
                 std::vector<std::uint64_t> seeds, const SearchFlags& f,
                 const std::string& out_dir) {
    const SimplicialComplex2 sc = read_complex(complex_path);
    const std::vector<Trajectory> train = read_trajectories(train_path);
    const std::vector<Trajectory> test = read_trajectories(test_path);

    json table = json::array();
    std::string tsv = "n_holes\tseed\tari\taccuracy\tscore\n";
    for (int holes : hole_counts) {
        for (std::uint64_t seed : seeds) {
            SearchFlags run = f;
            run.n_holes = holes;
            run.seed = seed;
            RunConfig cfg = to_run_config(run);
            const PipelineReport rep = run_on_data(sc, train, test, cfg);
            json row;
            row["n_holes"] = holes;
            row["seed"] = seed;
            row["ari"] = rep.ari ? json(*rep.ari) : json(nullptr);
            row["accuracy"] = rep.accuracy ? json(*rep.accuracy) : json(nullptr);
            row["score"] = rep.score;
            table.push_back(row);
            std::ostringstream line;
            line << holes << '\t' << seed << '\t' << (rep.ari ? *rep.ari : 0.0) << '\t'
                 << (rep.accuracy ? *rep.accuracy : 0.0) << '\t' << rep.score << '\n';
            tsv += line.str();
            std::cout << "n_holes=" << holes << " seed=" << seed
                      << " ari=" << (rep.ari ? *rep.ari : 0.0) << "\n";
        }
    }
    atomic_write_text(out_dir + "/table.json", table.dump(2) + "\n");
    atomic_write_text(out_dir + "/table.tsv", tsv);
    std::cout << "wrote " << out_dir << "/table.json and table.tsv\n";
    return 0;
}

int run_trace_export(const std::string& report_path, const std::string& trace_path,
                     const std::string& out_path) {
    std::string tsv = "step\tscore\n";
    if (!report_path.empty()) {
        const json j = json::parse(read_text(report_path), nullptr, false);
        if (j.is_discarded() || !j.contains("score_trace"))
            throw DataError("report has no score_trace");
        for (const auto& e : j["score_trace"]) {
            std::ostringstream line;
            line << e.at(0).get<int>() << '\t' << e.at(1).get<double>() << '\n';
            tsv += line.str();
        }
    } else {
        std::istringstream in(read_text(trace_path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw DataError("malformed trace line");
            std::ostringstream row;
            row << j.at("step").get<int>() << '\t' << j.at("score").get<double>() << '\n';
            tsv += row.str();
        }
    }
    atomic_write_text(out_path, tsv);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"landmark inference and trajectory classification on simplicial complexes"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "synthetic Delaunay dataset");
    SynthConfig synth;
    std::string gen_out;
    gen->add_option("--n-points", synth.n_points, "points in the unit square");
    gen->add_option("--n-classes", synth.n_classes, "trajectory classes");
    gen->add_option("--n-train-per-class", synth.n_train_per_class, "");
    gen->add_option("--n-test-per-class", synth.n_test_per_class, "");
    gen->add_option("--alpha", synth.weight_inflation, "edge weight inflation > 1");
    gen->add_option("--boundary-margin", synth.boundary_margin, "start/end strip width");
    gen->add_option("--seed", synth.seed, "random seed")->required();
    gen->add_option("--out-dir", gen_out, "output directory")->required();

    // ingest
    auto* ing = app.add_subcommand("ingest", "map lon/lat tracks onto a hex-grid complex");
    std::string ing_tracks, ing_mask, ing_out;
    std::vector<double> ing_bbox;
    double ing_cell = 1.0;
    bool ing_apply_mask = false;
    ing->add_option("--tracks", ing_tracks, "CSV: id, timestamp, lon, lat")->required();
    ing->add_option("--bbox", ing_bbox, "lon_min lat_min lon_max lat_max")
        ->expected(4)
        ->required();
    ing->add_option("--cell-deg", ing_cell, "hex cell diameter in degrees")->required();
    ing->add_option("--land-mask", ing_mask, "JSON polygons file");
    ing->add_flag("--apply-land-mask", ing_apply_mask, "remove cells inside mask polygons");
    ing->add_option("--out-dir", ing_out, "output directory")->required();

    // infer
    auto* inf = app.add_subcommand("infer", "landmark search (plus classification when --test given)");
    std::string inf_complex, inf_train, inf_test, inf_out;
    SearchFlags inf_flags;
    inf->add_option("--complex", inf_complex, "complex document")->required();
    inf->add_option("--train", inf_train, "training trajectories")->required();
    inf->add_option("--test", inf_test, "test trajectories");
    inf->add_option("--out-dir", inf_out, "output directory")->required();
    add_search_flags(inf, inf_flags, /*seed_required=*/true);

    // classify
    auto* cls = app.add_subcommand("classify", "classify with an existing landmark basis");
    std::string cls_complex, cls_landmarks, cls_train, cls_test, cls_out;
    SearchFlags cls_flags;
    cls->add_option("--complex", cls_complex, "complex document")->required();
    cls->add_option("--landmarks", cls_landmarks, "landmarks.json from infer")->required();
    cls->add_option("--train", cls_train, "training trajectories")->required();
    cls->add_option("--test", cls_test, "test trajectories")->required();
    cls->add_option("--out-dir", cls_out, "output directory")->required();
    add_search_flags(cls, cls_flags, /*seed_required=*/false);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "ARI table across hole counts and seeds");
    std::string ev_complex, ev_train, ev_test, ev_out;
    std::vector<int> ev_holes{1, 2, 3};
    std::vector<std::uint64_t> ev_seeds{1, 2, 3, 4, 5};
    SearchFlags ev_flags;
    ev->add_option("--complex", ev_complex, "complex document")->required();
    ev->add_option("--train", ev_train, "training trajectories")->required();
    ev->add_option("--test", ev_test, "test trajectories")->required();
    ev->add_option("--hole-counts", ev_holes, "hole counts to sweep");
    ev->add_option("--seeds", ev_seeds, "seeds to sweep");
    ev->add_option("--out-dir", ev_out, "output directory")->required();
    add_search_flags(ev, ev_flags, /*seed_required=*/false);

    // trace-export
    auto* tr = app.add_subcommand("trace-export", "score trace as TSV for plotting");
    std::string tr_report, tr_trace, tr_out;
    tr->add_option("--report", tr_report, "report.json");
    tr->add_option("--trace", tr_trace, "trace.jsonl");
    tr->add_option("--out", tr_out, "output TSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_generate(synth, gen_out);
        if (ing->parsed())
            return run_ingest(ing_tracks, ing_bbox, ing_cell, ing_mask, ing_apply_mask,
                              ing_out);
        if (inf->parsed()) {
            RunConfig cfg = to_run_config(inf_flags);
            cfg.complex_path = inf_complex;
            cfg.train_path = inf_train;
            cfg.test_path = inf_test;
            cfg.out_dir = inf_out;
            const PipelineReport rep = run_pipeline(cfg);
            std::cout << "landmarks:";
            for (int h : rep.landmarks) std::cout << ' ' << h;
            std::cout << "  score " << rep.score;
            if (rep.ari) std::cout << "  ari " << *rep.ari;
            if (rep.accuracy) std::cout << "  accuracy " << *rep.accuracy;
            std::cout << "\nwrote " << inf_out << "/report.json\n";
            return 0;
        }
        if (cls->parsed())
            return run_classify(cls_complex, cls_landmarks, cls_train, cls_test, cls_flags,
                                cls_out);
        if (ev->parsed())
            return run_evaluate(ev_complex, ev_train, ev_test, ev_holes, ev_seeds, ev_flags,
                                ev_out);
        if (tr->parsed()) {
            if (tr_report.empty() && tr_trace.empty())
                throw ConfigError("trace-export needs --report or --trace");
            return run_trace_export(tr_report, tr_trace, tr_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SearchError& e) {
        std::cerr << "search failure: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
