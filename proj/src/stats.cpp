#include "ncsim/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "ncsim/errors.hpp"

namespace ncsim::stats {

double binomial_sigma(double p, std::uint64_t n) {
    if (n == 0) {
        throw Error("binomial_sigma: zero trials");
    }
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

namespace {

void check_ci_args(std::uint64_t k, std::uint64_t n, double confidence) {
    if (n == 0 || k > n) {
        throw Error("binomial bound: need 0 <= k <= n, n > 0");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error("binomial bound: confidence must be in (0, 1)");
    }
}

} // namespace

double binomial_upper_bound(std::uint64_t k, std::uint64_t n, double confidence) {
    check_ci_args(k, n, confidence);
    if (k == n) {
        return 1.0;
    }
    // Upper limit solves P(X <= k | p) = 1 - confidence, i.e. the
    // Beta(k+1, n-k) quantile at `confidence`.
    return boost::math::ibeta_inv(static_cast<double>(k + 1),
                                  static_cast<double>(n - k), confidence);
}

double binomial_lower_bound(std::uint64_t k, std::uint64_t n, double confidence) {
    check_ci_args(k, n, confidence);
    if (k == 0) {
        return 0.0;
    }
    return boost::math::ibeta_inv(static_cast<double>(k),
                                  static_cast<double>(n - k + 1), 1.0 - confidence);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DimensionError("tv_distance: distributions differ in length");
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(p[i] - q[i]);
    }
    return 0.5 * l1;
}

} // namespace ncsim::stats
