#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ncsim/decomposition.hpp"
#include "ncsim/quantum_state.hpp"

namespace ncsim::ck {

// A finite hidden-variable sub-model: an ordered list of measurement
// decompositions d^1..d^r plus a precision epsilon_r. Projector-disjoint:
// no operator appears (within 1e-9 Frobenius) in two distinct
// decompositions, which is what licenses sampling each decomposition's
// outcome independently.
struct FiniteSubModel {
    int dim{0};
    DecompKind kind{DecompKind::projective};
    std::vector<Decomposition> decompositions;
    double epsilon_r{0.0};
    std::uint64_t build_seed{0};
};

// Validating constructor for explicitly specified decompositions.
FiniteSubModel make_submodel(std::vector<Decomposition> decompositions,
                             double epsilon_r, std::uint64_t build_seed = 0);

// Builds a sub-model by perturbing each target with a seeded random
// unitary of magnitude drawn below epsilon_r/2 (Frobenius, max over
// operators), re-perturbing on disjointness collisions. Ordering is
// construction order. epsilon_r must exceed 10x the numeric tolerance.
FiniteSubModel build_submodel(std::span<const Decomposition> targets,
                              double epsilon_r, std::uint64_t seed,
                              double tol = default_tol);

// One pre-assigned outcome per decomposition of a sub-model.
struct HiddenState {
    std::vector<int> outcome_of;
    std::uint64_t sample_seed{0};
};

// How a target decomposition maps onto a model decomposition: perm[j] is
// the model outcome aligned with target outcome j, distance the bottleneck
// (max over aligned pairs) Frobenius distance.
struct Alignment {
    int index{-1};
    std::vector<int> perm;
    double distance{0.0};
};

// Best outcome alignment between two equally sized decompositions:
// minimizes the maximum per-pair Frobenius distance over permutations
// (bottleneck assignment, exact).
Alignment align_decompositions(const Decomposition& target,
                               const Decomposition& candidate);

// First-match rule: scans decompositions in order and returns the first
// whose aligned distance is strictly below epsilon_r. Throws NoMatchError
// when the target is outside the model's simulated reach.
Alignment lookup(const FiniteSubModel& model, const Decomposition& target);

// Born-probability table of the model's decompositions for a fixed state;
// the hot loop of every shot batch.
std::vector<std::vector<double>> born_table(const FiniteSubModel& model,
                                            const QuantumState& state);

// Independent per-decomposition outcome draw with the Born weights of
// `state`. Deterministic given seed.
HiddenState sample_hidden_state(const FiniteSubModel& model,
                                const QuantumState& state, std::uint64_t seed);
HiddenState sample_hidden_state_from_table(
    std::span<const std::vector<double>> table, std::uint64_t seed);

struct MeasurementRecord {
    int matched_index{-1};
    int outcome_index{-1};        // in the target's labelling
    int model_outcome_index{-1};  // the pre-assigned value actually revealed
    OutcomeLabel outcome_label;
    std::vector<int> alignment;
    double distance{0.0};
};

// Reveals the pre-assigned outcome of the matched decomposition, translated
// through the alignment permutation to the target's labelling. No
// randomness.
MeasurementRecord measure(const FiniteSubModel& model, const HiddenState& hidden,
                          const Decomposition& target);

// Sequential measurement: sample hidden state from the current quantum
// state, measure, collapse on the *matched* decomposition and outcome,
// resample. Projective models only.
std::vector<MeasurementRecord> measure_sequence(const FiniteSubModel& model,
                                                QuantumState state,
                                                std::span<const Decomposition> targets,
                                                std::uint64_t seed);

struct PreparationTarget {
    QuantumState state;
    Decomposition target;
    int expected_outcome{0};
};

// Precision calibration: 1 - empirical frequency of the expected outcome,
// per preparation, over `runs` fresh hidden states each.
std::vector<double> calibrate_precision(const FiniteSubModel& model,
                                        std::span<const PreparationTarget> preparations,
                                        int runs, std::uint64_t seed);

struct BreakdownWitness {
    Decomposition target;
    QuantumState state;
    int matched_index{-1};
    std::vector<double> target_born;  // true Born distribution of the target
    std::vector<double> model_dist;   // what the model reports instead
    double tv{0.0};
    double predicted_tv{0.0};  // closed-form overlap loss sin^2(theta)
    double upper_bound{0.0};   // n * matched distance / 2
    double rotation_angle{0.0};
};

// Constructs a target just inside the matching distance of the model's
// first nontrivial decomposition but with maximally different Born
// statistics, and reports the exact total-variation deviation.
BreakdownWitness demonstrate_breakdown(const FiniteSubModel& model);

struct ShotRecord {
    std::uint64_t shot{0};
    int target_index{0};
    MeasurementRecord record;
};

// One fresh hidden state per shot, measured against every target (each
// jittered per shot by a random unitary of angle jitter_sigma * |N(0,1)|
// when jitter_sigma > 0). Shot i draws everything from stream
// derive_seed(seed, i), so the OpenMP kernel and the serial reference
// produce identical record vectors.
std::vector<ShotRecord> run_shot_batch(const FiniteSubModel& model,
                                       const QuantumState& state,
                                       std::span<const Decomposition> targets,
                                       std::uint64_t shots, std::uint64_t seed,
                                       double jitter_sigma = 0.0);
std::vector<ShotRecord> run_shot_batch_serial(const FiniteSubModel& model,
                                              const QuantumState& state,
                                              std::span<const Decomposition> targets,
                                              std::uint64_t shots, std::uint64_t seed,
                                              double jitter_sigma = 0.0);

// Model serialization, including build_seed and epsilon_r for exact replay.
nlohmann::json submodel_to_json(const FiniteSubModel& model);
FiniteSubModel submodel_from_json(const nlohmann::json& j);

nlohmann::json shot_record_to_json(const ShotRecord& r);

} // namespace ncsim::ck
