#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncsim/vector_set.hpp"

namespace ncsim {

// A {0,1} value per vector of a structure, total on its domain.
struct Colouring {
    std::vector<std::uint8_t> assignment;
};

struct KsVerdict {
    bool valid{false};
    std::vector<int> violated_bases;  // indices into structure.bases
};

// A colouring is valid iff every basis has exactly one vector coloured 1.
KsVerdict validate_ks_colouring(const OrthogonalityStructure& structure,
                                const Colouring& colouring);

struct SearchOutcome {
    // Engaged iff a valid colouring exists; disengaged is the
    // uncolourability certificate.
    std::optional<Colouring> colouring;
    std::uint64_t explored_nodes{0};
};

// Backtracking over vectors in most-constrained-first order (descending
// basis-membership count, ties by index). On success the returned colouring
// has been re-validated against the structure.
SearchOutcome search_colouring(const OrthogonalityStructure& structure);

// Same search over declared bases, without requiring them to be the
// computed maximal tuples. Used by harnesses that must certify exactly the
// family of contexts they ran.
SearchOutcome search_colouring_over(std::size_t vector_count,
                                    std::span<const std::vector<int>> bases);

// Exhaustive oracle: number of valid colourings over all 2^n assignments.
// Feasible for n <= 25 or so; guarded. The OpenMP kernel and the serial
// reference return identical counts.
std::uint64_t count_valid_colourings(const OrthogonalityStructure& structure);
std::uint64_t count_valid_colourings_serial(const OrthogonalityStructure& structure);

} // namespace ncsim
