#pragma once

#include <span>
#include <string>
#include <vector>

#include "ncsim/complex_matrix.hpp"

namespace ncsim {

struct OperatorColouringVerdict {
    bool valid{true};
    // First violation, in terms of indices into the operator list.
    std::string violation;
};

// Checks the functional-relation criteria on a value assignment over a
// family of Hermitian operators: for every commuting pair whose sum or
// product is itself (within tol) a member of the family,
// V(A+B) = V(A)+V(B) and V(AB) = V(A)V(B) must hold within tol.
// Throws on non-Hermitian input or on a value outside its operator's
// spectrum; rule violations are reported in the verdict.
OperatorColouringVerdict validate_operator_colouring(
    std::span<const ComplexMatrix> operators, std::span<const double> values,
    double tol = default_tol);

} // namespace ncsim
