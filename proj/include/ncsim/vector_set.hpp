#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncsim/complex_matrix.hpp"

namespace ncsim {

// Exact integer form of a rational catalogue: every vector is
// ints[i] / denominator with sum of squares == denominator^2.
struct RationalVectors {
    std::int64_t denominator{1};
    std::vector<std::vector<std::int64_t>> ints;
};

// A named set of unit vectors in R^dim, projectively identified: loading
// rejects duplicated or antiparallel pairs and sign-normalizes so the
// first nonzero component is positive.
struct VectorSet {
    std::string name;
    int dim{0};
    std::vector<Eigen::VectorXd> vectors;     // unit, sign-normalized
    std::optional<RationalVectors> rational;  // exact form when available

    bool is_rational() const { return rational.has_value(); }
};

// Catalogue file format:
//   {"name": str, "dim": n, "denominator": k or null, "vectors": [[...],...]}.
// Rational entries (denominator k) are checked exactly: unit norm
// sum(c^2) == k^2 per vector, duplicates by primitive form, orthogonality
// later by integer dot product. Real entries (denominator null) are checked
// within tol.
VectorSet vector_set_from_json(const nlohmann::json& j, double tol = default_tol);
VectorSet load_vector_set(const std::filesystem::path& path, double tol = default_tol);
nlohmann::json vector_set_to_json(const VectorSet& set);

// Orthogonality structure: all maximal orthogonal dim-tuples present in the
// set, as sorted index tuples in lexicographic order. Computed, never
// declared.
struct OrthogonalityStructure {
    VectorSet base;
    std::vector<std::vector<int>> bases;
};

OrthogonalityStructure build_orthogonality(const VectorSet& set,
                                           double tol = default_tol);

} // namespace ncsim
