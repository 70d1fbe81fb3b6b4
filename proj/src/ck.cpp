#include "ncsim/ck.hpp"

#include <algorithm>
#include <cmath>

#include "ncsim/errors.hpp"
#include "ncsim/rng.hpp"
#include "ncsim/stats.hpp"

namespace ncsim::ck {

namespace {

constexpr double disjointness_tol = 1e-9;

void check_disjoint(const std::vector<Decomposition>& decomps) {
    for (std::size_t a = 0; a < decomps.size(); ++a) {
        for (std::size_t b = a + 1; b < decomps.size(); ++b) {
            for (const auto& p : decomps[a].operators()) {
                for (const auto& q : decomps[b].operators()) {
                    if (frobenius_distance(p, q) <= disjointness_tol) {
                        throw ValidationError(
                            "sub-model: operator shared between decompositions " +
                            std::to_string(a) + " and " + std::to_string(b));
                    }
                }
            }
        }
    }
}

} // namespace

FiniteSubModel make_submodel(std::vector<Decomposition> decompositions,
                             double epsilon_r, std::uint64_t build_seed) {
    if (decompositions.empty()) {
        throw ValidationError("sub-model: needs at least one decomposition");
    }
    if (!(epsilon_r > 0.0)) {
        throw ValidationError("sub-model: epsilon_r must be positive");
    }
    FiniteSubModel model;
    model.dim = decompositions.front().dim();
    model.kind = decompositions.front().kind();
    for (const auto& d : decompositions) {
        if (d.dim() != model.dim) {
            throw DimensionError("sub-model: mixed dimensions");
        }
        if (d.kind() != model.kind) {
            throw ValidationError("sub-model: mixed decomposition kinds");
        }
    }
    check_disjoint(decompositions);
    model.decompositions = std::move(decompositions);
    model.epsilon_r = epsilon_r;
    model.build_seed = build_seed;
    return model;
}

namespace {

double max_operator_distance(const Decomposition& a, const Decomposition& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        worst = std::max(worst, frobenius_distance(a.op(j), b.op(j)));
    }
    return worst;
}

// Angle t such that conjugating by exp(i t H) moves `d` by `want` in the
// max-Frobenius sense, found by bisection on [0, pi].
double angle_for_distance(const Decomposition& d, const ComplexMatrix& h,
                          double want) {
    auto dist_at = [&](double t) {
        return max_operator_distance(d, d.conjugated(unitary_exp(h, t)));
    };
    double hi = 1e-3;
    while (hi < M_PI && dist_at(hi) < want) {
        hi *= 2.0;
    }
    hi = std::min(hi, M_PI);
    if (dist_at(hi) < want) {
        return hi;
    }
    double lo = 0.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (dist_at(mid) < want ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

FiniteSubModel build_submodel(std::span<const Decomposition> targets,
                              double epsilon_r, std::uint64_t seed, double tol) {
    if (targets.empty()) {
        throw ValidationError("build_submodel: no targets");
    }
    if (!(epsilon_r > 10.0 * tol)) {
        throw ValidationError(
            "build_submodel: epsilon_r must exceed 10x the numeric tolerance");
    }
    constexpr int max_attempts = 64;
    std::vector<Decomposition> placed;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const Decomposition& target = targets[t];
        bool done = false;
        for (int attempt = 0; attempt < max_attempts && !done; ++attempt) {
            Rng rng(derive_seed(seed, t * max_attempts + attempt));
            const ComplexMatrix h = random_hermitian_direction(target.dim(), rng);
            // Magnitude drawn below epsilon_r/2, kept off both endpoints.
            const double magnitude = (0.1 + 0.8 * rng.u01()) * 0.5 * epsilon_r;
            const double angle = angle_for_distance(target, h, magnitude);
            Decomposition candidate = target.conjugated(unitary_exp(h, angle));
            if (max_operator_distance(target, candidate) >= 0.5 * epsilon_r) {
                continue;
            }
            bool collision = false;
            for (const auto& existing : placed) {
                for (const auto& p : existing.operators()) {
                    for (const auto& q : candidate.operators()) {
                        if (frobenius_distance(p, q) <= disjointness_tol) {
                            collision = true;
                        }
                    }
                }
            }
            if (!collision) {
                placed.push_back(std::move(candidate));
                done = true;
            }
        }
        if (!done) {
            throw Error("build_submodel: could not achieve projector-disjointness "
                        "after bounded retries (targets pathologically close)");
        }
    }
    FiniteSubModel model = make_submodel(std::move(placed), epsilon_r, seed);
    return model;
}

namespace {

// Perfect matching in the bipartite graph of pairs with cost <= threshold
// (Kuhn's augmenting paths). match_of_right[k] = j or -1.
bool perfect_matching(const std::vector<std::vector<double>>& cost, double threshold,
                      std::vector<int>& match_of_right) {
    const int n = static_cast<int>(cost.size());
    match_of_right.assign(n, -1);
    for (int j = 0; j < n; ++j) {
        std::vector<bool> visited(n, false);
        auto augment = [&](auto&& self, int left) -> bool {
            for (int k = 0; k < n; ++k) {
                if (cost[left][k] <= threshold && !visited[k]) {
                    visited[k] = true;
                    if (match_of_right[k] == -1 || self(self, match_of_right[k])) {
                        match_of_right[k] = left;
                        return true;
                    }
                }
            }
            return false;
        };
        if (!augment(augment, j)) {
            return false;
        }
    }
    return true;
}

} // namespace

Alignment align_decompositions(const Decomposition& target,
                               const Decomposition& candidate) {
    if (target.size() != candidate.size()) {
        throw ValidationError("align: decompositions have different outcome counts");
    }
    const int n = static_cast<int>(target.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    std::vector<double> thresholds;
    thresholds.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            cost[j][k] = frobenius_distance(target.op(j), candidate.op(k));
            thresholds.push_back(cost[j][k]);
        }
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());

    // Smallest threshold admitting a perfect matching = bottleneck optimum.
    std::vector<int> match_of_right;
    int lo = 0;
    int hi = static_cast<int>(thresholds.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (perfect_matching(cost, thresholds[mid], match_of_right)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (!perfect_matching(cost, thresholds[lo], match_of_right)) {
        throw Error("align: no perfect matching at max threshold");
    }
    Alignment a;
    a.perm.assign(n, -1);
    for (int k = 0; k < n; ++k) {
        a.perm[match_of_right[k]] = k;
    }
    a.distance = 0.0;
    for (int j = 0; j < n; ++j) {
        a.distance = std::max(a.distance, cost[j][a.perm[j]]);
    }
    return a;
}

Alignment lookup(const FiniteSubModel& model, const Decomposition& target) {
    if (target.dim() != model.dim) {
        throw DimensionError("lookup: target dimension differs from model");
    }
    if (target.kind() != model.kind) {
        throw ValidationError("lookup: target kind differs from model");
    }
    for (std::size_t i = 0; i < model.decompositions.size(); ++i) {
        const Decomposition& candidate = model.decompositions[i];
        if (candidate.size() != target.size()) {
            continue;
        }
        Alignment a = align_decompositions(target, candidate);
        if (a.distance < model.epsilon_r) {
            a.index = static_cast<int>(i);
            return a;
        }
    }
    throw NoMatchError("lookup: no decomposition within epsilon_r of the target");
}

std::vector<std::vector<double>> born_table(const FiniteSubModel& model,
                                            const QuantumState& state) {
    std::vector<std::vector<double>> table;
    table.reserve(model.decompositions.size());
    for (const auto& d : model.decompositions) {
        table.push_back(born_probabilities(state, d));
    }
    return table;
}

HiddenState sample_hidden_state_from_table(
    std::span<const std::vector<double>> table, std::uint64_t seed) {
    Rng rng(seed);
    HiddenState hidden;
    hidden.sample_seed = seed;
    hidden.outcome_of.reserve(table.size());
    for (const auto& probs : table) {
        hidden.outcome_of.push_back(static_cast<int>(rng.pick(probs)));
    }
    return hidden;
}

HiddenState sample_hidden_state(const FiniteSubModel& model,
                                const QuantumState& state, std::uint64_t seed) {
    if (state.dim() != model.dim) {
        throw DimensionError("sample_hidden_state: state dimension differs from model");
    }
    const auto table = born_table(model, state);
    return sample_hidden_state_from_table(table, seed);
}

MeasurementRecord measure(const FiniteSubModel& model, const HiddenState& hidden,
                          const Decomposition& target) {
    if (hidden.outcome_of.size() != model.decompositions.size()) {
        throw ValidationError("measure: hidden state is not total on the model");
    }
    const Alignment a = lookup(model, target);
    const int model_outcome = hidden.outcome_of[a.index];
    int target_outcome = -1;
    for (std::size_t j = 0; j < a.perm.size(); ++j) {
        if (a.perm[j] == model_outcome) {
            target_outcome = static_cast<int>(j);
            break;
        }
    }
    MeasurementRecord rec;
    rec.matched_index = a.index;
    rec.outcome_index = target_outcome;
    rec.model_outcome_index = model_outcome;
    rec.outcome_label = target.label(target_outcome);
    rec.alignment = a.perm;
    rec.distance = a.distance;
    return rec;
}

std::vector<MeasurementRecord> measure_sequence(const FiniteSubModel& model,
                                                QuantumState state,
                                                std::span<const Decomposition> targets,
                                                std::uint64_t seed) {
    if (model.kind != DecompKind::projective) {
        throw ValidationError("measure_sequence: requires a projective model");
    }
    std::vector<MeasurementRecord> records;
    records.reserve(targets.size());
    for (std::size_t step = 0; step < targets.size(); ++step) {
        const HiddenState hidden =
            sample_hidden_state(model, state, derive_seed(seed, step));
        MeasurementRecord rec = measure(model, hidden, targets[step]);
        state = collapse(state, model.decompositions[rec.matched_index],
                         static_cast<std::size_t>(rec.model_outcome_index));
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<double> calibrate_precision(const FiniteSubModel& model,
                                        std::span<const PreparationTarget> preparations,
                                        int runs, std::uint64_t seed) {
    if (runs < 1) {
        throw ValidationError("calibrate_precision: runs must be positive");
    }
    std::vector<double> gaps;
    gaps.reserve(preparations.size());
    for (std::size_t p = 0; p < preparations.size(); ++p) {
        const auto& prep = preparations[p];
        const auto table = born_table(model, prep.state);
        const std::uint64_t stream = derive_seed(seed, p);
        std::uint64_t hits = 0;
        for (int r = 0; r < runs; ++r) {
            const HiddenState hidden =
                sample_hidden_state_from_table(table, derive_seed(stream, r));
            const MeasurementRecord rec = measure(model, hidden, prep.target);
            hits += rec.outcome_index == prep.expected_outcome ? 1 : 0;
        }
        gaps.push_back(1.0 - static_cast<double>(hits) / runs);
    }
    return gaps;
}

namespace {

// Rotation by theta in the plane spanned by orthonormal u, v.
ComplexMatrix plane_rotation(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v,
                             double theta) {
    const int n = static_cast<int>(u.size());
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
    r += (std::cos(theta) - 1.0) * (u * u.adjoint() + v * v.adjoint());
    r += std::sin(theta) * (v * u.adjoint() - u * v.adjoint());
    return ComplexMatrix(std::move(r));
}

} // namespace

BreakdownWitness demonstrate_breakdown(const FiniteSubModel& model) {
    if (model.kind != DecompKind::projective) {
        throw ValidationError("demonstrate_breakdown: requires a projective model");
    }
    const Decomposition* base = nullptr;
    int base_index = -1;
    for (std::size_t i = 0; i < model.decompositions.size(); ++i) {
        if (model.decompositions[i].size() >= 2) {
            base = &model.decompositions[i];
            base_index = static_cast<int>(i);
            break;
        }
    }
    if (base == nullptr) {
        throw ValidationError("demonstrate_breakdown: model has only trivial "
                              "single-outcome decompositions");
    }

    // Unit vectors in the ranges of the first two projectors.
    const auto sys0 = hermitian_eigensystem(base->op(0));
    const auto sys1 = hermitian_eigensystem(base->op(1));
    const Eigen::VectorXcd u = sys0.vectors.col(base->dim() - 1);
    const Eigen::VectorXcd v = sys1.vectors.col(base->dim() - 1);

    auto dist_at = [&](double theta) {
        return max_operator_distance(*base,
                                     base->conjugated(plane_rotation(u, v, theta)));
    };
    // Rotate to just inside the matching distance (or to the quarter turn
    // when epsilon_r is larger than any achievable displacement).
    const double want = 0.95 * model.epsilon_r;
    double theta = M_PI / 2.0;
    if (dist_at(theta) >= want) {
        double lo = 0.0, hi = theta;
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (dist_at(mid) < want ? lo : hi) = mid;
        }
        theta = lo;
    }

    const ComplexMatrix rotation = plane_rotation(u, v, theta);
    BreakdownWitness w{base->conjugated(rotation),
                       QuantumState::pure(rotation.raw() * u),
                       -1,
                       {},
                       {},
                       0.0,
                       0.0,
                       0.0,
                       theta};

    const Alignment a = lookup(model, w.target);
    w.matched_index = a.index;
    w.target_born = born_probabilities(w.state, w.target);
    const std::vector<double> matched_probs =
        born_probabilities(w.state, model.decompositions[a.index]);
    w.model_dist.resize(w.target.size());
    for (std::size_t j = 0; j < w.target.size(); ++j) {
        w.model_dist[j] = matched_probs[a.perm[j]];
    }
    w.tv = stats::tv_distance(w.target_born, w.model_dist);
    const double s = std::sin(theta);
    w.predicted_tv = s * s;
    w.upper_bound = 0.5 * static_cast<double>(w.target.size()) * a.distance;
    // The witness is only meaningful if it matched the decomposition we
    // rotated away from.
    if (a.index != base_index) {
        throw Error("demonstrate_breakdown: witness matched an unexpected "
                    "decomposition");
    }
    return w;
}

namespace {

void run_one_shot(const FiniteSubModel& model,
                  std::span<const std::vector<double>> table,
                  std::span<const Decomposition> targets, std::uint64_t shot,
                  std::uint64_t seed, double jitter_sigma,
                  std::vector<ShotRecord>& out, std::size_t base) {
    Rng rng(derive_seed(seed, shot));
    const HiddenState hidden = sample_hidden_state_from_table(
        table, derive_seed(derive_seed(seed, shot), 0x5eed));
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const Decomposition* target = &targets[t];
        std::optional<Decomposition> jittered;
        if (jitter_sigma > 0.0) {
            const ComplexMatrix h = random_hermitian_direction(model.dim, rng);
            const double angle = jitter_sigma * std::abs(rng.normal());
            jittered = target->conjugated(unitary_exp(h, angle));
            target = &*jittered;
        }
        ShotRecord rec;
        rec.shot = shot;
        rec.target_index = static_cast<int>(t);
        rec.record = measure(model, hidden, *target);
        out[base + t] = std::move(rec);
    }
}

} // namespace

std::vector<ShotRecord> run_shot_batch_serial(const FiniteSubModel& model,
                                              const QuantumState& state,
                                              std::span<const Decomposition> targets,
                                              std::uint64_t shots, std::uint64_t seed,
                                              double jitter_sigma) {
    const auto table = born_table(model, state);
    std::vector<ShotRecord> out(shots * targets.size());
    for (std::uint64_t s = 0; s < shots; ++s) {
        run_one_shot(model, table, targets, s, seed, jitter_sigma, out,
                     s * targets.size());
    }
    return out;
}

std::vector<ShotRecord> run_shot_batch(const FiniteSubModel& model,
                                       const QuantumState& state,
                                       std::span<const Decomposition> targets,
                                       std::uint64_t shots, std::uint64_t seed,
                                       double jitter_sigma) {
    const auto table = born_table(model, state);
    std::vector<ShotRecord> out(shots * targets.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(shots); ++s) {
        run_one_shot(model, table, targets, static_cast<std::uint64_t>(s), seed,
                     jitter_sigma, out, static_cast<std::size_t>(s) * targets.size());
    }
    return out;
}

nlohmann::json submodel_to_json(const FiniteSubModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["dim"] = model.dim;
    j["kind"] = to_string(model.kind);
    j["epsilon_r"] = model.epsilon_r;
    j["build_seed"] = model.build_seed;
    nlohmann::json decomps = nlohmann::json::array();
    for (const auto& d : model.decompositions) {
        decomps.push_back(decomposition_to_json(d));
    }
    j["decompositions"] = std::move(decomps);
    return j;
}

FiniteSubModel submodel_from_json(const nlohmann::json& j) {
    std::vector<Decomposition> decomps;
    for (const auto& d : j.at("decompositions")) {
        decomps.push_back(decomposition_from_json(d));
    }
    return make_submodel(std::move(decomps), j.at("epsilon_r").get<double>(),
                         j.at("build_seed").get<std::uint64_t>());
}

nlohmann::json shot_record_to_json(const ShotRecord& r) {
    nlohmann::json j;
    j["shot"] = r.shot;
    j["target"] = r.target_index;
    j["matched_index"] = r.record.matched_index;
    j["outcome_index"] = r.record.outcome_index;
    j["model_outcome"] = r.record.model_outcome_index;
    j["label"] = r.record.outcome_label;
    j["distance"] = r.record.distance;
    return j;
}

} // namespace ncsim::ck
