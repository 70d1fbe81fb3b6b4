#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncsim/ck.hpp"
#include "ncsim/quantum_state.hpp"
#include "ncsim/vector_set.hpp"

namespace ncsim::sbz {

// One knob per dimension of the direction catalogue; a setting selects one
// catalogued direction per knob.
struct KnobSetting {
    std::vector<int> directions;
};

enum class InteriorKind { ck, oracle, toy };

std::string to_string(InteriorKind kind);
InteriorKind interior_from_string(const std::string& s);

struct BlackBoxConfig {
    InteriorKind kind{InteriorKind::ck};
    double jitter_sigma{0.0};  // radians-scale direction noise per round
    std::uint64_t seed{0};
    double epsilon_r{1e-2};             // matching precision of the ck interior
    std::optional<QuantumState> state;  // measured system; maximally mixed default
    double toy_crosstalk{0.0};          // optional setting-dependent bias, toy box
};

// The boxed measurement process. Opaque to the analyzer: knob settings in,
// one bit per knob out. Each round the interior jitters the requested
// directions, replaces them with the nearest orthogonal frame (symmetric
// polar correction, even-handed across knobs), and measures via its
// interior model. Bit 1 marks the distinguished (colour-1) outcome.
class BlackBox {
  public:
    BlackBox(const VectorSet& catalogue, const BlackBoxConfig& config);

    std::vector<std::uint8_t> press(const KnobSetting& setting,
                                    std::uint64_t round_index);

    // Orthonormalized frame actually measured in the last press; for audit.
    const Eigen::MatrixXd& last_corrected_frame() const { return corrected_; }

    const VectorSet& catalogue() const { return catalogue_; }
    int dim() const { return catalogue_.dim; }

  private:
    Eigen::MatrixXd corrected_frame(const KnobSetting& setting, class Rng& rng);

    VectorSet catalogue_;
    BlackBoxConfig config_;
    QuantumState state_;
    std::optional<ck::FiniteSubModel> model_;
    Eigen::MatrixXd corrected_;
};

struct SbzRound {
    KnobSetting setting;
    std::vector<std::uint8_t> bits;
};

struct BlackBoxTranscript {
    VectorSet catalogue;
    std::vector<std::vector<int>> triad_list;  // distinct settings, sorted tuples
    std::vector<SbzRound> rounds;
};

// Runs the schedule sequentially (the interior may be stateful between
// rounds) and logs one round per setting. Deterministic given the box seed.
BlackBoxTranscript run_box(BlackBox& box, std::span<const KnobSetting> schedule);

struct EpsilonEstimate {
    std::uint64_t violations{0};
    std::uint64_t rounds{0};
    double value{0.0};  // violations / rounds
};

// Fraction of rounds whose outcome pattern is not exactly one 1.
EpsilonEstimate compute_epsilon(const BlackBoxTranscript& transcript);

struct SbzVerdict {
    double epsilon_hat{0.0};
    std::uint64_t violations{0};
    std::uint64_t rounds{0};
    int n_triads{0};
    double threshold{0.0};  // 1 / n_triads
    double upper_bound{0.0};
    double lower_bound{0.0};
    double confidence{0.0};
    bool sbz_contextual{false};
};

// Applies the epsilon < 1/N criterion to the one-sided binomial upper
// confidence bound of the estimate (a finite transcript only estimates the
// true epsilon). Requires the used triad family to be KS-uncolourable;
// anything else would make the verdict vacuous and is rejected.
SbzVerdict sbz_verdict(const BlackBoxTranscript& transcript, double confidence);

nlohmann::json round_to_json(std::uint64_t index, const SbzRound& round);
nlohmann::json verdict_to_json(const SbzVerdict& v);

// Round-robin schedule over all bases of the catalogue's orthogonality
// structure.
std::vector<KnobSetting> basis_schedule(const VectorSet& catalogue,
                                        std::uint64_t rounds, double tol = default_tol);

} // namespace ncsim::sbz
