#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncsim/complex_matrix.hpp"

namespace ncsim {

// Outcome label: the values the context's observables take on that
// eigenspace, e.g. [+1, -1] for a joint (Z1, X2) outcome. Size 1 for a
// single observable.
using OutcomeLabel = std::vector<double>;

enum class DecompKind { projective, povm };

std::string to_string(DecompKind kind);
DecompKind decomp_kind_from_string(const std::string& s);

// An ordered resolution of the identity: projectors (projective kind,
// P^2 = P = P^+, pairwise disjoint) or effects (povm kind, Hermitian PSD).
// Either way the operators sum to the identity within tolerance. The unit
// of "measurement context" everywhere else in the project.
class Decomposition {
  public:
    static Decomposition projective(std::vector<ComplexMatrix> projectors,
                                    std::vector<OutcomeLabel> labels,
                                    double tol = default_tol);
    static Decomposition povm(std::vector<ComplexMatrix> effects,
                              std::vector<OutcomeLabel> labels,
                              double tol = default_tol);

    DecompKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::size_t size() const { return ops_.size(); }
    const ComplexMatrix& op(std::size_t j) const { return ops_[j]; }
    std::span<const ComplexMatrix> operators() const { return ops_; }
    const OutcomeLabel& label(std::size_t j) const { return labels_[j]; }
    std::span<const OutcomeLabel> labels() const { return labels_; }

    // Conjugated copy U D U^+; stays a valid decomposition of the same kind.
    Decomposition conjugated(const ComplexMatrix& unitary) const;

  private:
    Decomposition(DecompKind kind, std::vector<ComplexMatrix> ops,
                  std::vector<OutcomeLabel> labels, double tol);
    void validate(double tol) const;

    DecompKind kind_{DecompKind::projective};
    int dim_{0};
    std::vector<ComplexMatrix> ops_;
    std::vector<OutcomeLabel> labels_;
};

// JSON: {"dim": n, "kind": "projective"|"povm",
//        "projectors"|"effects": [...matrices...], "labels": [...]}.
// A label serializes as a number when it has one entry, else as an array.
nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& j, double tol = default_tol);

// Targets file: {"dim": n, "kind": k, "decompositions": [...]}, all entries
// of the declared dimension and kind.
std::vector<Decomposition> decomposition_list_from_json(const nlohmann::json& j,
                                                        double tol = default_tol);
nlohmann::json decomposition_list_to_json(std::span<const Decomposition> list);

} // namespace ncsim
