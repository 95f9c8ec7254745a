// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/flow.hpp"
#include "topolm/harmonic.hpp"

namespace topolm {

/// Bad flags/parameters (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or inconsistent input data (CLI exit code 3).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Complex document: single JSON object with n_vertices, optional coords,
/// triangles, extra_edges (edges outside every triangle).
std::string complex_to_json(const SimplicialComplex2& sc);
SimplicialComplex2 complex_from_json(const std::string& text);
void write_complex(const std::string& path, const SimplicialComplex2& sc);
SimplicialComplex2 read_complex(const std::string& path);

/// Trajectory records: one JSON object {"v": [...], "label"?: int} per line.
std::string trajectories_to_jsonl(const std::vector<Trajectory>& ts);
std::vector<Trajectory> trajectories_from_jsonl(const std::string& text);
void write_trajectories(const std::string& path, const std::vector<Trajectory>& ts);
std::vector<Trajectory> read_trajectories(const std::string& path);

/// Track input: CSV-like lines "id, timestamp, lon, lat", ordered per id.
struct Track {
    std::string id;
    std::vector<std::array<double, 2>> lonlat;
};
std::vector<Track> tracks_from_csv(const std::string& text);
std::vector<Track> read_tracks(const std::string& path);

/// Landmark record: triangle id, its vertices, and the harmonic vector as an
/// (edge id, value) list.
std::string landmarks_to_json(const SimplicialComplex2& sc, const HarmonicBasis& basis);
HarmonicBasis landmarks_from_json(const std::string& text, std::int32_t n_edges);
void write_landmarks(const std::string& path, const SimplicialComplex2& sc,
                     const HarmonicBasis& basis);
HarmonicBasis read_landmarks(const std::string& path, std::int32_t n_edges);

/// write-temp-then-rename
void atomic_write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// FNV-1a 64 as 16 hex digits; used for config fingerprints.
std::string fnv1a_hex(const std::string& data);

}  // namespace topolm
