#include "ncsim/sbz.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ncsim/errors.hpp"
#include "ncsim/ks_colouring.hpp"
#include "ncsim/rng.hpp"
#include "ncsim/stats.hpp"

namespace ncsim::sbz {

std::string to_string(InteriorKind kind) {
    switch (kind) {
        case InteriorKind::ck: return "ck";
        case InteriorKind::oracle: return "oracle";
        case InteriorKind::toy: return "toy";
    }
    throw Error("unreachable interior kind");
}

InteriorKind interior_from_string(const std::string& s) {
    if (s == "ck") {
        return InteriorKind::ck;
    }
    if (s == "oracle") {
        return InteriorKind::oracle;
    }
    if (s == "toy") {
        return InteriorKind::toy;
    }
    throw UsageError("unknown interior kind: " + s);
}

namespace {

Decomposition frame_decomposition(const Eigen::MatrixXd& frame) {
    const int dim = static_cast<int>(frame.rows());
    std::vector<ComplexMatrix> projectors;
    std::vector<OutcomeLabel> labels;
    for (int i = 0; i < dim; ++i) {
        projectors.push_back(projector_onto(frame.col(i).cast<std::complex<double>>()));
        labels.push_back({static_cast<double>(i)});
    }
    return Decomposition::projective(std::move(projectors), std::move(labels));
}

} // namespace

BlackBox::BlackBox(const VectorSet& catalogue, const BlackBoxConfig& config)
    : catalogue_(catalogue),
      config_(config),
      state_(config.state.value_or(QuantumState::maximally_mixed(catalogue.dim))) {
    if (state_.dim() != catalogue_.dim) {
        throw DimensionError("black box: state dimension differs from catalogue");
    }
    if (config_.kind == InteriorKind::ck) {
        const OrthogonalityStructure structure = build_orthogonality(catalogue_);
        if (structure.bases.empty()) {
            throw ValidationError("black box: catalogue has no orthogonal bases");
        }
        std::vector<Decomposition> targets;
        targets.reserve(structure.bases.size());
        for (const auto& basis : structure.bases) {
            Eigen::MatrixXd frame(catalogue_.dim, catalogue_.dim);
            std::vector<OutcomeLabel> labels;
            for (int c = 0; c < catalogue_.dim; ++c) {
                frame.col(c) = catalogue_.vectors[basis[c]];
            }
            Decomposition d = frame_decomposition(frame);
            targets.push_back(std::move(d));
        }
        model_ = ck::build_submodel(targets, config_.epsilon_r,
                                    derive_seed(config_.seed, 0xb0a7));
    }
}

Eigen::MatrixXd BlackBox::corrected_frame(const KnobSetting& setting, Rng& rng) {
    const int dim = catalogue_.dim;
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd v = catalogue_.vectors[setting.directions[i]];
        for (int c = 0; c < dim; ++c) {
            v(c) += config_.jitter_sigma * rng.normal();
        }
        m.col(i) = v;
    }
    // Nearest orthogonal frame: the polar factor of the direction matrix,
    // which treats the knobs even-handedly.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < 1e-9) {
        throw ValidationError("black box: degenerate knob setting cannot be "
                              "orthogonalized");
    }
    return svd.matrixU() * svd.matrixV().transpose();
}

std::vector<std::uint8_t> BlackBox::press(const KnobSetting& setting,
                                          std::uint64_t round_index) {
    const int dim = catalogue_.dim;
    if (static_cast<int>(setting.directions.size()) != dim) {
        throw ValidationError("black box: one direction per knob required");
    }
    std::set<int> distinct;
    for (int d : setting.directions) {
        if (d < 0 || d >= static_cast<int>(catalogue_.vectors.size())) {
            throw ValidationError("black box: setting index out of catalogue range");
        }
        distinct.insert(d);
    }
    if (static_cast<int>(distinct.size()) != dim) {
        throw ValidationError("black box: two knobs request the same direction");
    }

    Rng rng(derive_seed(config_.seed, round_index));
    std::vector<std::uint8_t> bits(dim, 0);

    if (config_.kind == InteriorKind::toy) {
        // No quantum interior at all: independent bits, optionally biased by
        // the full joint setting (classical cross-talk between knobs).
        corrected_ = Eigen::MatrixXd::Identity(dim, dim);
        for (int i = 0; i < dim; ++i) {
            double p = 0.5;
            if (config_.toy_crosstalk != 0.0) {
                std::uint64_t h = 0;
                for (int d : setting.directions) {
                    h = mix64(h ^ (static_cast<std::uint64_t>(d) + 0x9e37));
                }
                h = mix64(h ^ (static_cast<std::uint64_t>(i) + 1));
                const double sign = (h & 1) ? 1.0 : -1.0;
                p = std::clamp(0.5 + sign * config_.toy_crosstalk, 0.0, 1.0);
            }
            bits[i] = rng.u01() < p ? 1 : 0;
        }
        return bits;
    }

    corrected_ = corrected_frame(setting, rng);
    const Decomposition target = frame_decomposition(corrected_);

    int fired;
    if (config_.kind == InteriorKind::oracle) {
        const auto probs = born_probabilities(state_, target);
        fired = static_cast<int>(rng.pick(probs));
    } else {
        const ck::HiddenState hidden = ck::sample_hidden_state(
            *model_, state_, derive_seed(derive_seed(config_.seed, round_index), 1));
        fired = ck::measure(*model_, hidden, target).outcome_index;
    }
    bits[fired] = 1;
    return bits;
}

BlackBoxTranscript run_box(BlackBox& box, std::span<const KnobSetting> schedule) {
    if (schedule.empty()) {
        throw ValidationError("run_box: empty settings schedule");
    }
    BlackBoxTranscript transcript;
    transcript.catalogue = box.catalogue();
    std::set<std::vector<int>> seen;
    for (const auto& setting : schedule) {
        std::vector<int> sorted = setting.directions;
        std::sort(sorted.begin(), sorted.end());
        if (seen.insert(sorted).second) {
            transcript.triad_list.push_back(std::move(sorted));
        }
    }
    transcript.rounds.reserve(schedule.size());
    for (std::size_t r = 0; r < schedule.size(); ++r) {
        SbzRound round;
        round.setting = schedule[r];
        round.bits = box.press(schedule[r], r);
        transcript.rounds.push_back(std::move(round));
    }
    return transcript;
}

EpsilonEstimate compute_epsilon(const BlackBoxTranscript& transcript) {
    if (transcript.rounds.empty()) {
        throw ValidationError("compute_epsilon: empty transcript");
    }
    EpsilonEstimate est;
    est.rounds = transcript.rounds.size();
    for (const auto& round : transcript.rounds) {
        int ones = 0;
        for (auto b : round.bits) {
            ones += b;
        }
        if (ones != 1) {
            ++est.violations;
        }
    }
    est.value = static_cast<double>(est.violations) / static_cast<double>(est.rounds);
    return est;
}

SbzVerdict sbz_verdict(const BlackBoxTranscript& transcript, double confidence) {
    if (transcript.triad_list.empty()) {
        throw ValidationError("sbz_verdict: transcript lists no triads");
    }
    // The bound is only meaningful over a KS-uncolourable family of
    // contexts; certify the family actually used.
    const SearchOutcome search = search_colouring_over(
        transcript.catalogue.vectors.size(), transcript.triad_list);
    if (search.colouring.has_value()) {
        throw ValidationError("sbz_verdict: the used triad family is KS-colourable; "
                              "the epsilon < 1/N criterion would be vacuous");
    }

    const EpsilonEstimate est = compute_epsilon(transcript);
    SbzVerdict v;
    v.epsilon_hat = est.value;
    v.violations = est.violations;
    v.rounds = est.rounds;
    v.n_triads = static_cast<int>(transcript.triad_list.size());
    v.threshold = 1.0 / static_cast<double>(v.n_triads);
    v.confidence = confidence;
    v.upper_bound = stats::binomial_upper_bound(est.violations, est.rounds, confidence);
    v.lower_bound = stats::binomial_lower_bound(est.violations, est.rounds, confidence);
    v.sbz_contextual = v.upper_bound < v.threshold;
    return v;
}

nlohmann::json round_to_json(std::uint64_t index, const SbzRound& round) {
    nlohmann::json j;
    j["round"] = index;
    j["setting"] = round.setting.directions;
    nlohmann::json bits = nlohmann::json::array();
    for (auto b : round.bits) {
        bits.push_back(static_cast<int>(b));
    }
    j["bits"] = std::move(bits);
    return j;
}

nlohmann::json verdict_to_json(const SbzVerdict& v) {
    nlohmann::json j;
    j["epsilon_hat"] = v.epsilon_hat;
    j["violations"] = v.violations;
    j["rounds"] = v.rounds;
    j["n_triads"] = v.n_triads;
    j["threshold"] = v.threshold;
    j["upper_bound"] = v.upper_bound;
    j["lower_bound"] = v.lower_bound;
    j["confidence"] = v.confidence;
    j["verdict"] = v.sbz_contextual ? "sbz-contextual" : "inconclusive";
    return j;
}

std::vector<KnobSetting> basis_schedule(const VectorSet& catalogue,
                                        std::uint64_t rounds, double tol) {
    const OrthogonalityStructure structure = build_orthogonality(catalogue, tol);
    if (structure.bases.empty()) {
        throw ValidationError("basis_schedule: catalogue has no orthogonal bases");
    }
    std::vector<KnobSetting> schedule;
    schedule.reserve(rounds);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        schedule.push_back(
            KnobSetting{structure.bases[r % structure.bases.size()]});
    }
    return schedule;
}

} // namespace ncsim::sbz
