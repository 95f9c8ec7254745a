// SPDX-License-Identifier: Apache-2.0
#include "topolm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace topolm {

using nlohmann::json;

namespace {

json parse(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("malformed JSON in " + what);
    return j;
}

}  // namespace

std::string complex_to_json(const SimplicialComplex2& sc) {
    json j;
    j["n_vertices"] = sc.n_vertices();
    if (!sc.coords().empty()) {
        json coords = json::array();
        for (const auto& [x, y] : sc.coords()) coords.push_back({x, y});
        j["coords"] = std::move(coords);
    }
    json tris = json::array();
    for (const auto& [u, v, w] : sc.triangles()) tris.push_back({u, v, w});
    j["triangles"] = std::move(tris);

    std::vector<char> covered(static_cast<std::size_t>(sc.n_edges()), 0);
    for (const auto& [u, v, w] : sc.triangles()) {
        covered[sc.edge_id(u, v)] = 1;
        covered[sc.edge_id(u, w)] = 1;
        covered[sc.edge_id(v, w)] = 1;
    }
    json extra = json::array();
    for (std::int32_t e = 0; e < sc.n_edges(); ++e)
        if (!covered[e]) extra.push_back({sc.edges()[e][0], sc.edges()[e][1]});
    j["extra_edges"] = std::move(extra);
    return j.dump();
}

SimplicialComplex2 complex_from_json(const std::string& text) {
    const json j = parse(text, "complex document");
    try {
        const int n = j.at("n_vertices").get<int>();
        std::vector<std::array<int, 3>> tris;
        for (const auto& t : j.at("triangles"))
            tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
        std::vector<std::array<int, 2>> extra;
        if (j.contains("extra_edges"))
            for (const auto& e : j["extra_edges"])
                extra.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        SimplicialComplex2 sc = build_complex(n, tris, extra);
        if (j.contains("coords")) {
            std::vector<std::array<double, 2>> coords;
            for (const auto& c : j["coords"])
                coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
            sc.set_coords(std::move(coords));
        }
        return sc;
    } catch (const json::exception& e) {
        throw DataError(std::string("complex document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("complex document: ") + e.what());
    }
}

std::string trajectories_to_jsonl(const std::vector<Trajectory>& ts) {
    std::string out;
    for (const Trajectory& t : ts) {
        json j;
        j["v"] = t.vertices;
        if (t.label) j["label"] = *t.label;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<Trajectory> trajectories_from_jsonl(const std::string& text) {
    std::vector<Trajectory> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse(line, "trajectory line " + std::to_string(lineno));
        try {
            Trajectory t;
            t.vertices = j.at("v").get<std::vector<int>>();
            if (j.contains("label")) t.label = j["label"].get<int>();
            out.push_back(std::move(t));
        } catch (const json::exception& e) {
            throw DataError("trajectory line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Track> tracks_from_csv(const std::string& text) {
    struct Row {
        std::string id;
        double t;
        double lon, lat;
        std::size_t order;
    };
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::array<std::string, 4> fields;
        std::size_t field = 0, start = 0;
        for (std::size_t i = 0; i <= line.size() && field < 4; ++i) {
            if (i == line.size() || line[i] == ',') {
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != 4)
            throw DataError("track line " + std::to_string(lineno) +
                            ": expected 'id, timestamp, lon, lat'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        try {
            rows.push_back({trim(fields[0]), std::stod(trim(fields[1])),
                            std::stod(trim(fields[2])), std::stod(trim(fields[3])),
                            rows.size()});
        } catch (const std::exception&) {
            throw DataError("track line " + std::to_string(lineno) + ": bad number");
        }
    }

    std::vector<Track> tracks;
    std::vector<std::string> id_order;
    for (const Row& r : rows)
        if (std::find(id_order.begin(), id_order.end(), r.id) == id_order.end())
            id_order.push_back(r.id);
    for (const std::string& id : id_order) {
        std::vector<Row> mine;
        for (const Row& r : rows)
            if (r.id == id) mine.push_back(r);
        std::stable_sort(mine.begin(), mine.end(),
                         [](const Row& a, const Row& b) { return a.t < b.t; });
        Track track;
        track.id = id;
        for (const Row& r : mine) track.lonlat.push_back({r.lon, r.lat});
        tracks.push_back(std::move(track));
    }
    return tracks;
}

std::string landmarks_to_json(const SimplicialComplex2& sc, const HarmonicBasis& basis) {
    json out;
    json landmarks = json::array();
    for (const HarmonicVector& h : basis.columns) {
        json rec;
        rec["triangle"] = h.hole;
        const auto& [u, v, w] = sc.triangles()[h.hole];
        rec["vertices"] = {u, v, w};
        json entries = json::array();
        for (std::size_t e = 0; e < h.values.size(); ++e)
            if (h.values[e] != 0.0) entries.push_back({static_cast<int>(e), h.values[e]});
        rec["harmonic"] = std::move(entries);
        landmarks.push_back(std::move(rec));
    }
    out["landmarks"] = std::move(landmarks);
    return out.dump();
}

HarmonicBasis landmarks_from_json(const std::string& text, std::int32_t n_edges) {
    const json j = parse(text, "landmarks document");
    HarmonicBasis basis;
    try {
        for (const auto& rec : j.at("landmarks")) {
            HarmonicVector h;
            h.hole = rec.at("triangle").get<int>();
            h.values.assign(static_cast<std::size_t>(n_edges), 0.0);
            for (const auto& entry : rec.at("harmonic")) {
                const int e = entry.at(0).get<int>();
                if (e < 0 || e >= n_edges)
                    throw DataError("landmarks document: edge id out of range");
                h.values[e] = entry.at(1).get<double>();
            }
            basis.columns.push_back(std::move(h));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("landmarks document: ") + e.what());
    }
    return basis;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) throw DataError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_complex(const std::string& path, const SimplicialComplex2& sc) {
    atomic_write_text(path, complex_to_json(sc));
}
SimplicialComplex2 read_complex(const std::string& path) {
    return complex_from_json(read_text(path));
}
void write_trajectories(const std::string& path, const std::vector<Trajectory>& ts) {
    atomic_write_text(path, trajectories_to_jsonl(ts));
}
std::vector<Trajectory> read_trajectories(const std::string& path) {
    return trajectories_from_jsonl(read_text(path));
}
std::vector<Track> read_tracks(const std::string& path) {
    return tracks_from_csv(read_text(path));
}
void write_landmarks(const std::string& path, const SimplicialComplex2& sc,
                     const HarmonicBasis& basis) {
    atomic_write_text(path, landmarks_to_json(sc, basis));
}
HarmonicBasis read_landmarks(const std::string& path, std::int32_t n_edges) {
    return landmarks_from_json(read_text(path), n_edges);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace topolm
