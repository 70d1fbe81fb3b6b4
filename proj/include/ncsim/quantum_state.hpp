#pragma once

#include <Eigen/Dense>
#include <vector>

#include <json.hpp>

#include "ncsim/complex_matrix.hpp"
#include "ncsim/decomposition.hpp"

namespace ncsim {

// Pure (unit amplitude vector) or mixed (density matrix) state. All Born
// computations go through the density form, so the two representations are
// statistically interchangeable.
class QuantumState {
  public:
    static QuantumState pure(Eigen::VectorXcd amplitudes, double tol = default_tol);
    static QuantumState mixed(ComplexMatrix density, double tol = default_tol);
    static QuantumState maximally_mixed(int dim);
    static QuantumState basis_state(int dim, int index);

    int dim() const { return dim_; }
    bool is_pure() const { return pure_; }
    const Eigen::VectorXcd& amplitudes() const;
    ComplexMatrix density() const;

  private:
    QuantumState() = default;
    int dim_{0};
    bool pure_{false};
    Eigen::VectorXcd amps_;
    Eigen::MatrixXcd rho_;
};

// Born rule: p_j = Tr(rho E_j). Entries clamped to [0, 1]; the raw values
// must sum to 1 within tolerance or the decomposition/state pair is invalid.
std::vector<double> born_probabilities(const QuantumState& state,
                                       const Decomposition& decomposition,
                                       double tol = default_tol);

// Post-measurement state P_j rho P_j / Tr(rho P_j). Projective only; the
// chosen outcome must have probability above tol.
QuantumState collapse(const QuantumState& state, const Decomposition& decomposition,
                      std::size_t outcome_index, double tol = default_tol);

// JSON: {"dim": n, "kind": "pure", "amplitudes": [[re,im],...]} or
//       {"dim": n, "kind": "mixed", "density": [[[re,im],...],...]}.
nlohmann::json state_to_json(const QuantumState& s);
QuantumState state_from_json(const nlohmann::json& j, double tol = default_tol);

} // namespace ncsim
