#include "ncsim/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "ncsim/ck.hpp"
#include "ncsim/errors.hpp"
#include "ncsim/gz.hpp"
#include "ncsim/ks_colouring.hpp"
#include "ncsim/phiplus.hpp"
#include "ncsim/rng.hpp"
#include "ncsim/run_log.hpp"
#include "ncsim/sbz.hpp"
#include "ncsim/vector_set.hpp"

namespace ncsim::cli {

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        // e.what() carries the byte position of the problem.
        throw IoError(path + ": " + e.what());
    }
    return j;
}

std::int64_t parse_int64(const std::string& s) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) {
            throw UsageError("not an integer: " + s);
        }
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("not an integer: " + s);
    }
}

gz::Rational64 parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    gz::Rational64 r;
    if (slash == std::string::npos) {
        r.num = parse_int64(s);
        r.den = 1;
    } else {
        r.num = parse_int64(s.substr(0, slash));
        r.den = parse_int64(s.substr(slash + 1));
        if (r.den == 0) {
            throw UsageError("zero denominator: " + s);
        }
    }
    return r;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("NCSIM_OUT_DIR")) {
        return env;
    }
    return "runs";
}

// Runs a replayable config: executes, writes the log directory, prints the
// summary document to stdout.
int run_and_log(const nlohmann::json& config, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const runlog::RunArtifacts artifacts = runlog::execute(config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::string dir = out_dir;
    if (dir.empty()) {
        dir = default_out_dir() + "/" + config.at("command").get<std::string>() +
              "-s" + std::to_string(config.at("seed").get<std::uint64_t>());
    }
    runlog::write_log(dir, config, artifacts, wall);
    for (const auto& [name, content] : artifacts.files) {
        if (name == "summary.json") {
            std::cout << content;
        }
    }
    std::cerr << "log written to " << dir << "\n";
    return 0;
}

struct Options {
    std::uint64_t seed = 0;
    std::uint64_t shots = 10000;
    double tol = default_tol;
    std::string out;

    // ks / gz
    std::string catalogue_file;
    std::array<std::string, 3> gz_components;
    int max_component = 10;

    // ck
    std::string targets_file;
    std::string model_file;
    std::string state_file;
    double epsilon = 1e-3;
    double jitter = 0.0;

    // sbz
    std::string interior = "ck";
    std::uint64_t rounds = 10000;
    double confidence = 0.999;
    double toy_crosstalk = 0.0;

    // exp
    std::string engine = "oracle";
    bool hlzpg_reduced = false;

    // replay
    std::string log_dir;
};

int run_ks_check(const Options& opt) {
    const VectorSet set = load_vector_set(opt.catalogue_file, opt.tol);
    const OrthogonalityStructure structure = build_orthogonality(set, opt.tol);
    nlohmann::json j;
    j["name"] = set.name;
    j["dim"] = set.dim;
    j["rational"] = set.is_rational();
    j["vectors"] = set.vectors.size();
    j["bases"] = structure.bases.size();
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_ks_search(const Options& opt) {
    const VectorSet set = load_vector_set(opt.catalogue_file, opt.tol);
    const OrthogonalityStructure structure = build_orthogonality(set, opt.tol);
    const SearchOutcome outcome = search_colouring(structure);
    nlohmann::json j;
    j["name"] = set.name;
    j["vectors"] = set.vectors.size();
    j["bases"] = structure.bases.size();
    j["explored_nodes"] = outcome.explored_nodes;
    if (outcome.colouring) {
        j["verdict"] = "colourable";
        j["colouring"] = outcome.colouring->assignment;
    } else {
        j["verdict"] = "uncolourable";
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_gz_colour(const Options& opt) {
    const gz::RationalUnitVector v = gz::reduce({parse_rational(opt.gz_components[0]),
                                                 parse_rational(opt.gz_components[1]),
                                                 parse_rational(opt.gz_components[2])});
    nlohmann::json j;
    j["vector"] = {v.x, v.y, v.z};
    j["norm"] = v.norm;
    j["colour"] = gz::gz_colour(v);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_gz_verify(const Options& opt) {
    const gz::VerifySummary summary = gz::verify_parity_colouring(opt.max_component);
    nlohmann::json j;
    j["max_component"] = summary.max_component;
    j["vectors"] = summary.vector_count;
    j["triads"] = summary.triad_count;
    j["violations"] = summary.violations;
    std::cout << j.dump(2) << "\n";
    return summary.violations == 0 ? 0 : 1;
}

int run_ck_build(const Options& opt) {
    const auto targets = decomposition_list_from_json(load_json(opt.targets_file), opt.tol);
    const ck::FiniteSubModel model =
        ck::build_submodel(targets, opt.epsilon, opt.seed, opt.tol);
    const std::string doc = ck::submodel_to_json(model).dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(opt.out, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + opt.out);
        }
        out << doc;
        std::cerr << "model written to " << opt.out << "\n";
    }
    return 0;
}

int run_ck_run(const Options& opt) {
    nlohmann::json config;
    config["format_version"] = runlog::format_version;
    config["command"] = "ck.run";
    config["seed"] = opt.seed;
    config["shots"] = opt.shots;
    config["jitter"] = opt.jitter;
    config["epsilon"] = opt.epsilon;
    config["tol"] = opt.tol;
    config["targets"] = load_json(opt.targets_file);
    config["state"] = load_json(opt.state_file);
    config["model"] =
        opt.model_file.empty() ? nlohmann::json() : load_json(opt.model_file);
    return run_and_log(config, opt.out);
}

int run_ck_breakdown(const Options& opt) {
    ck::FiniteSubModel model;
    if (!opt.model_file.empty()) {
        model = ck::submodel_from_json(load_json(opt.model_file));
    } else {
        // Canonical demonstration: one z-basis qubit decomposition with a
        // deliberately coarse matching precision.
        std::vector<ComplexMatrix> projectors{
            projector_onto(Eigen::Vector2cd(1, 0)),
            projector_onto(Eigen::Vector2cd(0, 1))};
        model = ck::make_submodel(
            {Decomposition::projective(std::move(projectors), {{+1.0}, {-1.0}})},
            opt.epsilon, opt.seed);
    }
    const ck::BreakdownWitness witness = ck::demonstrate_breakdown(model);
    nlohmann::json j;
    j["epsilon_r"] = model.epsilon_r;
    j["matched_index"] = witness.matched_index;
    j["rotation_angle"] = witness.rotation_angle;
    j["target_born"] = witness.target_born;
    j["model_dist"] = witness.model_dist;
    j["tv_distance"] = witness.tv;
    j["predicted_tv"] = witness.predicted_tv;
    j["upper_bound"] = witness.upper_bound;
    j["target"] = decomposition_to_json(witness.target);
    j["state"] = state_to_json(witness.state);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_sbz(const Options& opt) {
    nlohmann::json config;
    config["format_version"] = runlog::format_version;
    config["command"] = "sbz.run";
    config["seed"] = opt.seed;
    config["rounds"] = opt.rounds;
    config["jitter"] = opt.jitter;
    config["confidence"] = opt.confidence;
    config["interior"] = opt.interior;
    config["epsilon"] = opt.epsilon;
    config["toy_crosstalk"] = opt.toy_crosstalk;
    config["catalogue"] = load_json(opt.catalogue_file);
    config["state"] =
        opt.state_file.empty() ? nlohmann::json() : load_json(opt.state_file);
    return run_and_log(config, opt.out);
}

int run_phiplus(const Options& opt) {
    nlohmann::json config;
    config["format_version"] = runlog::format_version;
    config["command"] = "exp.phiplus";
    config["seed"] = opt.seed;
    config["shots"] = opt.shots;
    config["jitter"] = opt.jitter;
    config["engine"] = opt.engine;
    config["hlzpg_reduced"] = opt.hlzpg_reduced;
    config["epsilon"] = opt.epsilon;
    return run_and_log(config, opt.out);
}

int run_replay(const Options& opt) {
    const runlog::ReplayReport report = runlog::replay(opt.log_dir);
    if (report.identical) {
        std::cout << "replay identical\n";
        return 0;
    }
    std::cout << "replay diverged: " << report.divergence << "\n";
    return 1;
}

} // namespace

int dispatch(int argc, const char* const* argv) {
    Options opt;
    CLI::App app{"non-contextual finite-precision measurement simulator"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", opt.seed, "root seed; all randomness derives from it");
    app.add_option("--shots", opt.shots, "shots per run");
    app.add_option("--tol", opt.tol, "numeric tolerance for operator identities");
    app.add_option("--out", opt.out, "output file or log directory");

    int (*action)(const Options&) = nullptr;

    auto* ks = app.add_subcommand("ks", "KS vector-set structure and colouring search");
    ks->require_subcommand(1);
    auto* ks_check = ks->add_subcommand("check", "validate a catalogue file");
    ks_check->add_option("file", opt.catalogue_file)->required();
    ks_check->callback([&] { action = run_ks_check; });
    auto* ks_search = ks->add_subcommand("search", "backtracking colouring search");
    ks_search->add_option("file", opt.catalogue_file)->required();
    ks_search->callback([&] { action = run_ks_search; });

    auto* gz_cmd = app.add_subcommand("gz", "parity colouring of rational unit vectors");
    gz_cmd->require_subcommand(1);
    auto* gz_colour = gz_cmd->add_subcommand("colour", "colour one rational vector");
    gz_colour->add_option("x", opt.gz_components[0])->required();
    gz_colour->add_option("y", opt.gz_components[1])->required();
    gz_colour->add_option("z", opt.gz_components[2])->required();
    gz_colour->callback([&] { action = run_gz_colour; });
    auto* gz_verify = gz_cmd->add_subcommand("verify", "enumerate and validate triads");
    gz_verify->add_option("--max-component", opt.max_component)->required();
    gz_verify->callback([&] { action = run_gz_verify; });

    auto* ck_cmd = app.add_subcommand("ck", "finite sub-model engine");
    ck_cmd->require_subcommand(1);
    auto* ck_build = ck_cmd->add_subcommand("build", "build a sub-model from targets");
    ck_build->add_option("--targets", opt.targets_file)->required();
    ck_build->add_option("--epsilon", opt.epsilon, "matching precision epsilon_r");
    ck_build->callback([&] { action = run_ck_build; });
    auto* ck_run = ck_cmd->add_subcommand("run", "measure targets over fresh hidden states");
    ck_run->add_option("--targets", opt.targets_file)->required();
    ck_run->add_option("--state", opt.state_file)->required();
    ck_run->add_option("--model", opt.model_file, "reuse a built model file");
    ck_run->add_option("--epsilon", opt.epsilon);
    ck_run->add_option("--jitter", opt.jitter, "per-shot target jitter");
    ck_run->callback([&] { action = run_ck_run; });
    auto* ck_breakdown =
        ck_cmd->add_subcommand("breakdown", "beyond-precision deviation witness");
    ck_breakdown->add_option("--model", opt.model_file);
    auto* breakdown_eps = ck_breakdown->add_option("--epsilon", opt.epsilon);
    ck_breakdown->callback([&, breakdown_eps] {
        if (breakdown_eps->count() == 0) {
            opt.epsilon = 0.5;
        }
        action = run_ck_breakdown;
    });

    auto* sbz_cmd = app.add_subcommand("sbz", "black-box contextuality test");
    sbz_cmd->require_subcommand(1);
    auto* sbz_run = sbz_cmd->add_subcommand("run", "run the box and apply the 1/N bound");
    sbz_run->add_option("--interior", opt.interior, "ck | oracle | toy");
    sbz_run->add_option("--catalogue", opt.catalogue_file)->required();
    sbz_run->add_option("--rounds", opt.rounds);
    sbz_run->add_option("--jitter", opt.jitter);
    sbz_run->add_option("--confidence", opt.confidence);
    auto* sbz_eps =
        sbz_run->add_option("--epsilon", opt.epsilon, "ck interior matching precision");
    sbz_run->add_option("--toy-crosstalk", opt.toy_crosstalk);
    sbz_run->add_option("--state", opt.state_file);
    sbz_run->callback([&, sbz_eps] {
        if (sbz_eps->count() == 0) {
            opt.epsilon = 1e-2;
        }
        action = run_sbz;
    });

    auto* exp_cmd = app.add_subcommand("exp", "scripted experiment scenarios");
    exp_cmd->require_subcommand(1);
    auto* exp_phiplus = exp_cmd->add_subcommand("phiplus", "two-qubit perfect-correlation scenario");
    exp_phiplus->add_option("--engine", opt.engine, "oracle | ck");
    exp_phiplus->add_option("--jitter", opt.jitter);
    exp_phiplus->add_option("--epsilon", opt.epsilon);
    exp_phiplus->add_flag("--hlzpg-reduced", opt.hlzpg_reduced,
                          "measure only (X1,X2) and (Z1X2,X1Z2)");
    exp_phiplus->callback([&] { action = run_phiplus; });

    auto* replay = app.add_subcommand("replay", "re-execute a run log and compare");
    replay->add_option("log", opt.log_dir)->required();
    replay->callback([&] {
        // A replay must use the embedded config; overrides are refused.
        for (const char* banned : {"--seed", "--shots", "--tol", "--out"}) {
            if (app.count(banned) > 0) {
                throw UsageError(std::string("replay: ") + banned +
                                 " conflicts with the embedded config");
            }
        }
        action = run_replay;
    });

    try {
        app.parse(argc, argv);
        if (action == nullptr) {
            throw UsageError("no subcommand selected");
        }
        return action(opt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace ncsim::cli
