#pragma once

#include <cstdint>
#include <span>

namespace ncsim::stats {

// Standard deviation of an empirical frequency over n Bernoulli(p) trials.
double binomial_sigma(double p, std::uint64_t n);

// One-sided Clopper-Pearson upper bound for the success probability after
// observing k successes in n trials, at the given confidence level.
// Exact (conservative): the true p exceeds the bound with probability at
// most 1 - confidence.
double binomial_upper_bound(std::uint64_t k, std::uint64_t n, double confidence);

// One-sided Clopper-Pearson lower bound, same convention.
double binomial_lower_bound(std::uint64_t k, std::uint64_t n, double confidence);

// Total-variation distance: half the L1 distance between two outcome
// distributions of equal length.
double tv_distance(std::span<const double> p, std::span<const double> q);

} // namespace ncsim::stats
