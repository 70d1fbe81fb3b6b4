#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace ncsim::runlog {

inline constexpr int format_version = 1;

// Deterministic byte streams a run produces: records.jsonl, summary.json,
// report.csv, ... Wall-clock timings live in a separate timings.json so the
// determinism contract covers every artifact byte-for-byte.
struct RunArtifacts {
    std::vector<std::pair<std::string, std::string>> files;
};

// Re-executable commands: "ck.run", "sbz.run", "exp.phiplus". Configs are
// self-contained (input documents embedded), so a persisted config replays
// without any external files. All randomness derives from config["seed"].
RunArtifacts execute(const nlohmann::json& config);

// Lays down config.json, the artifacts, and timings.json under dir.
void write_log(const std::filesystem::path& dir, const nlohmann::json& config,
               const RunArtifacts& artifacts, double wall_seconds);

struct ReplayReport {
    bool identical{false};
    std::string divergence;  // first difference, empty when identical
};

// Re-executes the embedded config in memory and byte-compares every
// artifact against the log directory (timings.json excluded). Refuses logs
// written by a different format version.
ReplayReport replay(const std::filesystem::path& dir);

} // namespace ncsim::runlog
