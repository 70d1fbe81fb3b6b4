#include "ncsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace ncsim {

double Rng::normal() {
    // u1 shifted away from zero so log() stays finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::pick(std::span<const double> probs) {
    const double u = u01();
    double cum = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        cum += probs[j];
        if (u < cum) {
            return j;
        }
    }
    // Rounding left the cumulative sum a hair under 1.
    return probs.size() - 1;
}

} // namespace ncsim
