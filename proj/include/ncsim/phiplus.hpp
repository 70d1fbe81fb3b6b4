#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncsim/ck.hpp"
#include "ncsim/decomposition.hpp"
#include "ncsim/quantum_state.hpp"

namespace ncsim::phiplus {

// (|+z,+z> + |-z,-z>)/sqrt(2), equal to its x-basis form.
QuantumState phi_plus_state();

// The five joint-measurement contexts (Z1,Z2), (Z1,X2), (X1,Z2), (X1,X2),
// (Z1X2,X1Z2) in dim 4. Each is the joint eigenspace decomposition of its
// commuting pair with one +-1 label per factor observable; all five resolve
// into four rank-1 projectors.
std::vector<Decomposition> build_contexts();

extern const std::array<std::string, 5> context_names;

enum class Engine { oracle, ck };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct Scenario {
    Engine engine{Engine::oracle};
    std::uint64_t shots{10000};
    double jitter_sigma{0.0};
    std::uint64_t seed{0};
    bool hlzpg_reduced{false};  // only (X1,X2) and (Z1X2,X1Z2) measured
    double epsilon_r{1e-3};     // ck engine matching precision
};

struct ContextTable {
    std::string name;
    std::vector<OutcomeLabel> labels;
    std::vector<std::uint64_t> counts;
    // Empirical means of the observables defined in this context.
    std::map<std::string, double> observable_means;
};

struct CorrelationReport {
    std::vector<ContextTable> contexts;
    bool hlzpg_reduced{false};
    bool zz_assumed{false};  // reduced protocol takes Z1=Z2 from preparation
    double p_zz_agree{0.0};
    double p_xx_agree{0.0};
    double p_zxxz_opposite{0.0};
    std::uint64_t product_rule_violations{0};
    // Global valuations V(Z1),V(X1),V(Z2),V(X2) consistent with the observed
    // perfect correlations; empty is the executable contradiction.
    std::vector<std::array<int, 4>> consistent_valuations;
};

struct IdealCorrelations {
    int zz_sign{+1};    // V(Z1)V(Z2)
    int xx_sign{+1};    // V(X1)V(X2)
    int zxxz_sign{-1};  // V(Z1X2)V(X1Z2)
};

// Exhaustive check over the 2^4 candidate global valuations. Exact integer
// arithmetic, no tolerance anywhere.
std::vector<std::array<int, 4>> consistent_global_valuations(
    const IdealCorrelations& corr);

CorrelationReport run_scenario(const Scenario& s);

nlohmann::json report_to_json(const CorrelationReport& report);
std::string report_to_csv(const CorrelationReport& report);

} // namespace ncsim::phiplus
