#include <filesystem>
#include <vector>

#include "doctest.h"
#include "oracle/gen.hpp"
#include "topolm/datagen.hpp"
#include "topolm/harmonic.hpp"
#include "topolm/io.hpp"
#include "topolm/pipeline.hpp"
#include "topolm/rng.hpp"

using namespace topolm;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("topolm_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("complex documents round-trip exactly") {
    Rng rng(88);
    auto sc = oracle::random_complex(rng, 15, 12);
    // add a bare edge and coordinates
    auto with_extra = build_complex(15, sc.triangles(),
                                    std::vector<std::array<int, 2>>{{0, 14}});
    std::vector<std::array<double, 2>> coords(15);
    for (auto& c : coords) c = {rng.next_unit(), rng.next_unit()};
    with_extra.set_coords(coords);

    const SimplicialComplex2 back = complex_from_json(complex_to_json(with_extra));
    CHECK(back.n_vertices() == with_extra.n_vertices());
    CHECK(back.edges() == with_extra.edges());
    CHECK(back.triangles() == with_extra.triangles());
    CHECK(back.coords() == with_extra.coords());  // bit-exact doubles
}

TEST_CASE("malformed complex documents raise DataError") {
    CHECK_THROWS_AS(complex_from_json("not json"), DataError);
    CHECK_THROWS_AS(complex_from_json("{}"), DataError);
    CHECK_THROWS_AS(complex_from_json(R"({"n_vertices": 2, "triangles": [[0, 1, 5]]})"),
                    DataError);
}

TEST_CASE("trajectory records round-trip with optional labels") {
    std::vector<Trajectory> ts{{{0, 1, 2}, 1}, {{5, 3}, std::nullopt}, {{2, 2, 2, 2}, 0}};
    const auto back = trajectories_from_jsonl(trajectories_to_jsonl(ts));
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].vertices == ts[i].vertices);
        CHECK(back[i].label == ts[i].label);
    }
    CHECK_THROWS_AS(trajectories_from_jsonl("{\"x\": 3}\n"), DataError);
}

TEST_CASE("track CSV parsing groups by id and sorts by timestamp") {
    const std::string csv =
        "b, 2.0, 20.5, -3.0\n"
        "a, 1.0, 1.25, 2.5\n"
        "b, 1.0, 20.0, -3.5\n"
        "# comment\n"
        "a, 2.0, 1.5, 2.25\n";
    const auto tracks = tracks_from_csv(csv);
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].id == "b");  // first-appearance order
    CHECK(tracks[0].lonlat ==
          std::vector<std::array<double, 2>>{{20.0, -3.5}, {20.5, -3.0}});
    CHECK(tracks[1].id == "a");
    CHECK(tracks[1].lonlat ==
          std::vector<std::array<double, 2>>{{1.25, 2.5}, {1.5, 2.25}});

    CHECK_THROWS_AS(tracks_from_csv("a, 1.0, 2.0\n"), DataError);
    CHECK_THROWS_AS(tracks_from_csv("a, one, 2.0, 3.0\n"), DataError);
}

TEST_CASE("landmark documents round-trip the harmonic basis") {
    const auto sc = delaunay_complex(40, 3);
    HarmonicBasis basis;
    for (int t : {1, 4}) {
        auto h = compute_harmonic(sc, t);
        REQUIRE(h.has_value());
        basis.columns.push_back(*h);
    }
    const HarmonicBasis back = landmarks_from_json(landmarks_to_json(sc, basis), sc.n_edges());
    REQUIRE(back.columns.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.columns[i].hole == basis.columns[i].hole);
        CHECK(back.columns[i].values == basis.columns[i].values);
    }
}

TEST_CASE("atomic writes land complete files") {
    const fs::path dir = temp_dir("atomic");
    const std::string path = (dir / "nested" / "file.json").string();
    atomic_write_text(path, "{\"ok\": true}");
    CHECK(read_text(path) == "{\"ok\": true}");
    CHECK_FALSE(fs::exists(path + ".tmp"));
}

TEST_CASE("config hashes are stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("topolm") == fnv1a_hex("topolm"));
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
}

TEST_CASE("pipeline writes a replayable report") {
    const fs::path dir = temp_dir("pipeline");

    SynthConfig synth;
    synth.n_points = 60;
    synth.n_classes = 2;
    synth.n_train_per_class = 4;
    synth.n_test_per_class = 6;
    synth.seed = 21;
    const Dataset ds = make_dataset(synth);
    write_complex((dir / "complex.json").string(), ds.complex);
    write_trajectories((dir / "train.jsonl").string(), ds.train);
    write_trajectories((dir / "test.jsonl").string(), ds.test);

    RunConfig cfg;
    cfg.complex_path = (dir / "complex.json").string();
    cfg.train_path = (dir / "train.jsonl").string();
    cfg.test_path = (dir / "test.jsonl").string();
    cfg.out_dir = (dir / "out").string();
    cfg.search.n_holes = 2;
    cfg.search.n_init = 5;
    cfg.search.seed = 11;

    const PipelineReport rep = run_pipeline(cfg);
    REQUIRE(rep.ari.has_value());
    CHECK(*rep.ari >= -0.5);
    CHECK(*rep.ari <= 1.0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "landmarks.json"));
    CHECK(fs::exists(dir / "out" / "trace.jsonl"));
    CHECK(fs::exists(dir / "out" / "embeddings_train.jsonl"));
    CHECK(fs::exists(dir / "out" / "predictions.json"));

    // byte-identical rerun
    const std::string first = read_text((dir / "out" / "report.json").string());
    cfg.out_dir = (dir / "out2").string();
    run_pipeline(cfg);
    const std::string second = read_text((dir / "out2" / "report.json").string());
    CHECK(first == second);

    // landmark basis reloads bit-identically
    const HarmonicBasis basis =
        read_landmarks((dir / "out" / "landmarks.json").string(), ds.complex.n_edges());
    REQUIRE(basis.columns.size() == rep.basis.columns.size());
    for (std::size_t i = 0; i < basis.columns.size(); ++i)
        CHECK(basis.columns[i].values == rep.basis.columns[i].values);

    fs::remove_all(dir);
}

TEST_CASE("pipeline flushes a stage-tagged partial report on failure") {
    const fs::path dir = temp_dir("pipeline_fail");
    RunConfig cfg;
    cfg.complex_path = (dir / "missing.json").string();
    cfg.train_path = (dir / "missing.jsonl").string();
    cfg.out_dir = (dir / "out").string();
    CHECK_THROWS_AS(run_pipeline(cfg), DataError);
    const std::string report = read_text((dir / "out" / "report.json").string());
    CHECK(report.find("failed_stage") != std::string::npos);
    CHECK(report.find("load") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("unsupervised pipeline emits k-means labels") {
    const fs::path dir = temp_dir("pipeline_unsup");

    SynthConfig synth;
    synth.n_points = 60;
    synth.n_classes = 2;
    synth.n_train_per_class = 5;
    synth.n_test_per_class = 5;
    synth.seed = 33;
    const Dataset ds = make_dataset(synth);
    write_complex((dir / "complex.json").string(), ds.complex);
    write_trajectories((dir / "train.jsonl").string(), ds.train);
    write_trajectories((dir / "test.jsonl").string(), ds.test);

    RunConfig cfg;
    cfg.complex_path = (dir / "complex.json").string();
    cfg.train_path = (dir / "train.jsonl").string();
    cfg.test_path = (dir / "test.jsonl").string();
    cfg.out_dir = (dir / "out").string();
    cfg.search.mode = SearchMode::unsupervised;
    cfg.search.n_clusters = 2;
    cfg.search.n_holes = 1;
    cfg.search.n_init = 6;
    cfg.search.seed = 2;

    const PipelineReport rep = run_pipeline(cfg);
    CHECK(rep.train_cluster_labels.size() == ds.train.size());
    CHECK(rep.predicted_test.size() == ds.test.size());
    fs::remove_all(dir);
}
