#include "ncsim/quantum_state.hpp"

#include <algorithm>
#include <cmath>

#include "ncsim/errors.hpp"

namespace ncsim {

QuantumState QuantumState::pure(Eigen::VectorXcd amplitudes, double tol) {
    QuantumState s;
    s.dim_ = static_cast<int>(amplitudes.size());
    if (s.dim_ < 1) {
        throw DimensionError("state: dimension must be positive");
    }
    if (std::abs(amplitudes.squaredNorm() - 1.0) > tol) {
        throw ValidationError("state: amplitudes are not normalized");
    }
    s.pure_ = true;
    s.amps_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::mixed(ComplexMatrix density, double tol) {
    QuantumState s;
    s.dim_ = density.dim();
    if (!density.is_hermitian(tol)) {
        throw ValidationError("state: density matrix is not Hermitian");
    }
    if (std::abs(density.trace().real() - 1.0) > tol ||
        std::abs(density.trace().imag()) > tol) {
        throw ValidationError("state: density matrix trace is not 1");
    }
    if (!density.is_positive_semidefinite(tol)) {
        throw ValidationError("state: density matrix is not positive semidefinite");
    }
    s.pure_ = false;
    s.rho_ = density.raw();
    return s;
}

QuantumState QuantumState::maximally_mixed(int dim) {
    return mixed(ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim) / double(dim)));
}

QuantumState QuantumState::basis_state(int dim, int index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(index) = 1.0;
    return pure(std::move(v));
}

const Eigen::VectorXcd& QuantumState::amplitudes() const {
    if (!pure_) {
        throw Error("state: amplitudes requested from a mixed state");
    }
    return amps_;
}

ComplexMatrix QuantumState::density() const {
    if (pure_) {
        return ComplexMatrix(amps_ * amps_.adjoint());
    }
    return ComplexMatrix(rho_);
}

std::vector<double> born_probabilities(const QuantumState& state,
                                       const Decomposition& decomposition, double tol) {
    if (state.dim() != decomposition.dim()) {
        throw DimensionError("born_probabilities: state/decomposition dimensions differ");
    }
    const Eigen::MatrixXcd rho = state.density().raw();
    std::vector<double> probs(decomposition.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < decomposition.size(); ++j) {
        const double p = (rho * decomposition.op(j).raw()).trace().real();
        sum += p;
        probs[j] = std::clamp(p, 0.0, 1.0);
    }
    if (std::abs(sum - 1.0) > std::max(tol, 1e-9)) {
        throw ValidationError("born_probabilities: probabilities do not sum to 1");
    }
    return probs;
}

QuantumState collapse(const QuantumState& state, const Decomposition& decomposition,
                      std::size_t outcome_index, double tol) {
    if (decomposition.kind() != DecompKind::projective) {
        throw ValidationError("collapse: requires a projective decomposition");
    }
    if (state.dim() != decomposition.dim()) {
        throw DimensionError("collapse: state/decomposition dimensions differ");
    }
    if (outcome_index >= decomposition.size()) {
        throw Error("collapse: outcome index out of range");
    }
    const Eigen::MatrixXcd& p = decomposition.op(outcome_index).raw();
    if (state.is_pure()) {
        Eigen::VectorXcd v = p * state.amplitudes();
        const double norm = v.norm();
        if (norm * norm <= tol) {
            throw Error("collapse: outcome has zero probability");
        }
        return QuantumState::pure(v / norm);
    }
    const Eigen::MatrixXcd rho = state.density().raw();
    const double prob = (rho * p).trace().real();
    if (prob <= tol) {
        throw Error("collapse: outcome has zero probability");
    }
    return QuantumState::mixed(ComplexMatrix(p * rho * p / prob));
}

nlohmann::json state_to_json(const QuantumState& s) {
    nlohmann::json j;
    j["dim"] = s.dim();
    if (s.is_pure()) {
        j["kind"] = "pure";
        nlohmann::json amps = nlohmann::json::array();
        for (int i = 0; i < s.dim(); ++i) {
            amps.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
        }
        j["amplitudes"] = std::move(amps);
    } else {
        j["kind"] = "mixed";
        j["density"] = matrix_to_json(s.density());
    }
    return j;
}

QuantumState state_from_json(const nlohmann::json& j, double tol) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pure") {
        const auto& amps = j.at("amplitudes");
        Eigen::VectorXcd v(amps.size());
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const auto& entry = amps.at(i);
            if (!entry.is_array() || entry.size() != 2) {
                throw IoError("state: amplitudes must be [re, im] pairs");
            }
            v(static_cast<Eigen::Index>(i)) = std::complex<double>(
                entry.at(0).get<double>(), entry.at(1).get<double>());
        }
        return QuantumState::pure(std::move(v), tol);
    }
    if (kind == "mixed") {
        return QuantumState::mixed(matrix_from_json(j.at("density")), tol);
    }
    throw IoError("state: unknown kind " + kind);
}

} // namespace ncsim
