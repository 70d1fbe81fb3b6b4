#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ncsim::gz {

// Primitive, sign-normalized integer representative of a rational unit
// vector in R^3: components (x, y, z) with x^2 + y^2 + z^2 = norm^2 exactly,
// gcd(x, y, z) = 1, and the first nonzero component positive. Primitivity
// forces exactly one component to be odd (squares are 0 or 1 mod 4); the
// constructor asserts it.
struct RationalUnitVector {
    std::int64_t x{0};
    std::int64_t y{0};
    std::int64_t z{0};
    std::int64_t norm{1};

    RationalUnitVector(std::int64_t x, std::int64_t y, std::int64_t z);

    std::array<std::int64_t, 3> components() const { return {x, y, z}; }
    int odd_position() const;

    friend bool operator==(const RationalUnitVector&,
                           const RationalUnitVector&) = default;
};

struct Rational64 {
    std::int64_t num{0};
    std::int64_t den{1};
};

// Canonical form of a raw rational triple: clears denominators, reduces to
// the primitive sign-normalized integer vector, and requires the direction
// to admit a rational unit representative (component square sum a perfect
// square). Exact arithmetic throughout; intermediates use arbitrary
// precision so pathological denominators cannot overflow.
RationalUnitVector reduce(const std::array<Rational64, 3>& raw);

// The parity colouring: 1 iff the unique odd component of the primitive
// form sits in the designated first position. Every orthogonal rational
// triad has its three odd positions pairwise distinct, so each triad
// receives exactly one 1; the enumeration oracle below certifies this at
// desk scale rather than taking it on trust.
int gz_colour(const RationalUnitVector& v);

using RationalTriad = std::array<RationalUnitVector, 3>;

// All unordered orthogonal triples of primitive rational unit vectors with
// |components| <= max_component. Exact integer dot products; deterministic
// ordering (lexicographic in the sorted member list). The OpenMP kernel
// and the serial reference return identical lists.
std::vector<RationalTriad> enumerate_rational_triads(int max_component);
std::vector<RationalTriad> enumerate_rational_triads_serial(int max_component);

// All primitive rational unit vectors with |components| <= max_component,
// sorted lexicographically by components.
std::vector<RationalUnitVector> enumerate_rational_unit_vectors(int max_component);

struct VerifySummary {
    int max_component{0};
    std::uint64_t vector_count{0};
    std::uint64_t triad_count{0};
    std::uint64_t violations{0};  // triads without exactly one colour-1
};

// Enumerates every triad up to max_component and checks the parity
// colouring assigns exactly one 1 per triad, plus the distinct-odd-position
// lemma underneath it.
VerifySummary verify_parity_colouring(int max_component);

} // namespace ncsim::gz
