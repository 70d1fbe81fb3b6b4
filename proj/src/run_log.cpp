#include "ncsim/run_log.hpp"

#include <fstream>
#include <sstream>

#include "ncsim/ck.hpp"
#include "ncsim/errors.hpp"
#include "ncsim/phiplus.hpp"
#include "ncsim/rng.hpp"
#include "ncsim/sbz.hpp"
#include "ncsim/vector_set.hpp"

namespace ncsim::runlog {

namespace {

std::string dump_doc(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunArtifacts execute_ck_run(const nlohmann::json& config) {
    const auto targets =
        decomposition_list_from_json(config.at("targets"), config.value("tol", default_tol));
    const QuantumState state = state_from_json(config.at("state"));
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const std::uint64_t shots = config.at("shots").get<std::uint64_t>();
    const double jitter = config.value("jitter", 0.0);

    ck::FiniteSubModel model =
        config.contains("model") && !config.at("model").is_null()
            ? ck::submodel_from_json(config.at("model"))
            : ck::build_submodel(targets, config.value("epsilon", 1e-3),
                                 derive_seed(seed, 0xb17d));

    const auto records =
        ck::run_shot_batch(model, state, targets, shots, derive_seed(seed, 1), jitter);

    std::string jsonl;
    std::vector<std::vector<std::uint64_t>> counts(
        targets.size(), std::vector<std::uint64_t>(0));
    for (std::size_t t = 0; t < targets.size(); ++t) {
        counts[t].assign(targets[t].size(), 0);
    }
    for (const auto& rec : records) {
        jsonl += ck::shot_record_to_json(rec).dump();
        jsonl += '\n';
        ++counts[rec.target_index][rec.record.outcome_index];
    }

    nlohmann::json summary;
    summary["format_version"] = format_version;
    summary["command"] = "ck.run";
    summary["shots"] = shots;
    summary["targets"] = targets.size();
    summary["model"] = {{"dim", model.dim},
                        {"kind", to_string(model.kind)},
                        {"epsilon_r", model.epsilon_r},
                        {"build_seed", model.build_seed},
                        {"decompositions", model.decompositions.size()}};
    summary["outcome_counts"] = counts;

    RunArtifacts artifacts;
    artifacts.files.emplace_back("records.jsonl", std::move(jsonl));
    artifacts.files.emplace_back("summary.json", dump_doc(summary));
    return artifacts;
}

RunArtifacts execute_sbz_run(const nlohmann::json& config) {
    const VectorSet catalogue = vector_set_from_json(config.at("catalogue"));
    sbz::BlackBoxConfig box_config;
    box_config.kind = sbz::interior_from_string(config.at("interior").get<std::string>());
    box_config.jitter_sigma = config.value("jitter", 0.0);
    box_config.seed = config.at("seed").get<std::uint64_t>();
    box_config.epsilon_r = config.value("epsilon", 1e-2);
    box_config.toy_crosstalk = config.value("toy_crosstalk", 0.0);
    if (config.contains("state") && !config.at("state").is_null()) {
        box_config.state = state_from_json(config.at("state"));
    }
    const std::uint64_t rounds = config.at("rounds").get<std::uint64_t>();
    const double confidence = config.value("confidence", 0.999);

    sbz::BlackBox box(catalogue, box_config);
    const auto schedule = sbz::basis_schedule(catalogue, rounds);
    const sbz::BlackBoxTranscript transcript = sbz::run_box(box, schedule);
    const sbz::SbzVerdict verdict = sbz::sbz_verdict(transcript, confidence);

    std::string jsonl;
    for (std::size_t r = 0; r < transcript.rounds.size(); ++r) {
        jsonl += sbz::round_to_json(r, transcript.rounds[r]).dump();
        jsonl += '\n';
    }

    nlohmann::json summary;
    summary["format_version"] = format_version;
    summary["command"] = "sbz.run";
    summary["catalogue"] = catalogue.name;
    summary["interior"] = sbz::to_string(box_config.kind);
    summary["verdict"] = sbz::verdict_to_json(verdict);

    RunArtifacts artifacts;
    artifacts.files.emplace_back("records.jsonl", std::move(jsonl));
    artifacts.files.emplace_back("summary.json", dump_doc(summary));
    return artifacts;
}

RunArtifacts execute_phiplus(const nlohmann::json& config) {
    phiplus::Scenario scenario;
    scenario.engine = phiplus::engine_from_string(config.at("engine").get<std::string>());
    scenario.shots = config.at("shots").get<std::uint64_t>();
    scenario.jitter_sigma = config.value("jitter", 0.0);
    scenario.seed = config.at("seed").get<std::uint64_t>();
    scenario.hlzpg_reduced = config.value("hlzpg_reduced", false);
    scenario.epsilon_r = config.value("epsilon", 1e-3);

    const phiplus::CorrelationReport report = phiplus::run_scenario(scenario);

    nlohmann::json summary;
    summary["format_version"] = format_version;
    summary["command"] = "exp.phiplus";
    summary["engine"] = phiplus::to_string(scenario.engine);
    summary["shots"] = scenario.shots;
    summary["report"] = phiplus::report_to_json(report);

    RunArtifacts artifacts;
    artifacts.files.emplace_back("summary.json", dump_doc(summary));
    artifacts.files.emplace_back("report.csv", phiplus::report_to_csv(report));
    return artifacts;
}

} // namespace

RunArtifacts execute(const nlohmann::json& config) {
    if (!config.contains("format_version")) {
        throw IoError("run config: missing format_version");
    }
    if (config.at("format_version").get<int>() != format_version) {
        throw IoError("run config: format version mismatch");
    }
    const std::string command = config.at("command").get<std::string>();
    if (command == "ck.run") {
        return execute_ck_run(config);
    }
    if (command == "sbz.run") {
        return execute_sbz_run(config);
    }
    if (command == "exp.phiplus") {
        return execute_phiplus(config);
    }
    throw IoError("run config: unknown command " + command);
}

void write_log(const std::filesystem::path& dir, const nlohmann::json& config,
               const RunArtifacts& artifacts, double wall_seconds) {
    std::filesystem::create_directories(dir);
    auto write_file = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + (dir / name).string());
        }
        out << content;
    };
    write_file("config.json", config.dump(2) + "\n");
    for (const auto& [name, content] : artifacts.files) {
        write_file(name, content);
    }
    nlohmann::json timings;
    timings["wall_seconds"] = wall_seconds;
    write_file("timings.json", timings.dump(2) + "\n");
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string first_divergence(const std::string& name, const std::string& got,
                             const std::string& want) {
    std::size_t line = 1;
    const std::size_t n = std::min(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (got[i] != want[i]) {
            return name + ": first divergence at line " + std::to_string(line);
        }
        if (want[i] == '\n') {
            ++line;
        }
    }
    return name + ": length mismatch after line " + std::to_string(line);
}

} // namespace

ReplayReport replay(const std::filesystem::path& dir) {
    nlohmann::json config;
    {
        std::ifstream in(dir / "config.json");
        if (!in) {
            throw IoError("replay: no config.json in " + dir.string());
        }
        try {
            in >> config;
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError(std::string("replay: config.json: ") + e.what());
        }
    }
    const RunArtifacts artifacts = execute(config);
    for (const auto& [name, content] : artifacts.files) {
        const std::string on_disk = read_file(dir / name);
        if (on_disk != content) {
            return ReplayReport{false, first_divergence(name, on_disk, content)};
        }
    }
    return ReplayReport{true, ""};
}

} // namespace ncsim::runlog
