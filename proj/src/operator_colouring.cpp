#include "ncsim/operator_colouring.hpp"

#include <cmath>
#include <sstream>

#include "ncsim/errors.hpp"

namespace ncsim {

OperatorColouringVerdict validate_operator_colouring(
    std::span<const ComplexMatrix> operators, std::span<const double> values,
    double tol) {
    if (operators.size() != values.size()) {
        throw ValidationError("operator colouring: one value per operator required");
    }
    const std::size_t n = operators.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!operators[i].is_hermitian(tol)) {
            throw ValidationError("operator colouring: operator " + std::to_string(i) +
                                  " is not Hermitian");
        }
        const auto sys = hermitian_eigensystem(operators[i]);
        double closest = std::abs(sys.values.front() - values[i]);
        for (double lambda : sys.values) {
            closest = std::min(closest, std::abs(lambda - values[i]));
        }
        if (closest > std::max(tol, 1e-7)) {
            throw ValidationError("operator colouring: value for operator " +
                                  std::to_string(i) + " lies outside its spectrum");
        }
    }

    auto fail = [](std::size_t i, std::size_t j, std::size_t k, const char* rule,
                   double got, double want) {
        OperatorColouringVerdict v;
        v.valid = false;
        std::ostringstream os;
        os << rule << " rule violated: operator " << k << " vs pair (" << i << ", "
           << j << "): V = " << got << ", expected " << want;
        v.violation = os.str();
        return v;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (operators[i].dim() != operators[j].dim() ||
                !commutes(operators[i], operators[j], tol)) {
                continue;
            }
            const ComplexMatrix sum = operators[i] + operators[j];
            const ComplexMatrix product = operators[i] * operators[j];
            for (std::size_t k = 0; k < n; ++k) {
                if (operators[k].dim() != sum.dim()) {
                    continue;
                }
                if (operators[k].approx_equal(sum, tol) &&
                    std::abs(values[k] - (values[i] + values[j])) > tol) {
                    return fail(i, j, k, "sum", values[k], values[i] + values[j]);
                }
                if (operators[k].approx_equal(product, tol) &&
                    std::abs(values[k] - values[i] * values[j]) > tol) {
                    return fail(i, j, k, "product", values[k], values[i] * values[j]);
                }
            }
        }
        // A op commutes with itself: A*A and A+A may be in the family too.
        const ComplexMatrix square = operators[i] * operators[i];
        const ComplexMatrix doubled = operators[i] + operators[i];
        for (std::size_t k = 0; k < n; ++k) {
            if (operators[k].dim() != operators[i].dim()) {
                continue;
            }
            if (operators[k].approx_equal(square, tol) &&
                std::abs(values[k] - values[i] * values[i]) > tol) {
                return fail(i, i, k, "product", values[k], values[i] * values[i]);
            }
            if (operators[k].approx_equal(doubled, tol) &&
                std::abs(values[k] - 2.0 * values[i]) > tol) {
                return fail(i, i, k, "sum", values[k], 2.0 * values[i]);
            }
        }
    }
    return OperatorColouringVerdict{};
}

} // namespace ncsim
