#include "ncsim/decomposition.hpp"

#include "ncsim/errors.hpp"

namespace ncsim {

std::string to_string(DecompKind kind) {
    return kind == DecompKind::projective ? "projective" : "povm";
}

DecompKind decomp_kind_from_string(const std::string& s) {
    if (s == "projective") {
        return DecompKind::projective;
    }
    if (s == "povm") {
        return DecompKind::povm;
    }
    throw IoError("unknown decomposition kind: " + s);
}

Decomposition Decomposition::projective(std::vector<ComplexMatrix> projectors,
                                        std::vector<OutcomeLabel> labels, double tol) {
    return Decomposition(DecompKind::projective, std::move(projectors),
                         std::move(labels), tol);
}

Decomposition Decomposition::povm(std::vector<ComplexMatrix> effects,
                                  std::vector<OutcomeLabel> labels, double tol) {
    return Decomposition(DecompKind::povm, std::move(effects), std::move(labels), tol);
}

Decomposition::Decomposition(DecompKind kind, std::vector<ComplexMatrix> ops,
                             std::vector<OutcomeLabel> labels, double tol)
    : kind_(kind), ops_(std::move(ops)), labels_(std::move(labels)) {
    if (ops_.empty()) {
        throw ValidationError("decomposition: needs at least one operator");
    }
    dim_ = ops_.front().dim();
    if (labels_.empty()) {
        // Default labels are the outcome indices.
        for (std::size_t j = 0; j < ops_.size(); ++j) {
            labels_.push_back({static_cast<double>(j)});
        }
    }
    if (labels_.size() != ops_.size()) {
        throw ValidationError("decomposition: one label per operator required");
    }
    validate(tol);
}

void Decomposition::validate(double tol) const {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t j = 0; j < ops_.size(); ++j) {
        const ComplexMatrix& p = ops_[j];
        if (p.dim() != dim_) {
            throw DimensionError("decomposition: mixed operator dimensions");
        }
        if (kind_ == DecompKind::projective) {
            if (!p.is_projector(tol)) {
                throw ValidationError("decomposition: operator " + std::to_string(j) +
                                      " is not a projector within tolerance");
            }
        } else {
            if (!p.is_positive_semidefinite(tol)) {
                throw ValidationError("decomposition: effect " + std::to_string(j) +
                                      " is not Hermitian PSD within tolerance");
            }
        }
        sum += p.raw();
    }
    if ((sum - Eigen::MatrixXcd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol) {
        throw ValidationError("decomposition: operators do not sum to the identity");
    }
    if (kind_ == DecompKind::projective) {
        for (std::size_t j = 0; j < ops_.size(); ++j) {
            for (std::size_t k = j + 1; k < ops_.size(); ++k) {
                if ((ops_[j].raw() * ops_[k].raw()).cwiseAbs().maxCoeff() > tol) {
                    throw ValidationError("decomposition: projectors " +
                                          std::to_string(j) + " and " +
                                          std::to_string(k) + " overlap");
                }
            }
        }
    }
}

Decomposition Decomposition::conjugated(const ComplexMatrix& unitary) const {
    if (unitary.dim() != dim_) {
        throw DimensionError("conjugated: unitary dimension mismatch");
    }
    Decomposition out = *this;
    for (auto& p : out.ops_) {
        p = ComplexMatrix(unitary.raw() * p.raw() * unitary.raw().adjoint());
    }
    return out;
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
    nlohmann::json ops = nlohmann::json::array();
    for (std::size_t j = 0; j < d.size(); ++j) {
        ops.push_back(matrix_to_json(d.op(j)));
    }
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& label : d.labels()) {
        if (label.size() == 1) {
            labels.push_back(label[0]);
        } else {
            labels.push_back(label);
        }
    }
    nlohmann::json j;
    j["dim"] = d.dim();
    j["kind"] = to_string(d.kind());
    j[d.kind() == DecompKind::projective ? "projectors" : "effects"] = std::move(ops);
    j["labels"] = std::move(labels);
    return j;
}

Decomposition decomposition_from_json(const nlohmann::json& j, double tol) {
    DecompKind kind;
    if (j.contains("kind")) {
        kind = decomp_kind_from_string(j.at("kind").get<std::string>());
    } else if (j.contains("projectors")) {
        kind = DecompKind::projective;
    } else if (j.contains("effects")) {
        kind = DecompKind::povm;
    } else {
        throw IoError("decomposition: missing \"projectors\" or \"effects\"");
    }
    const char* field = kind == DecompKind::projective ? "projectors" : "effects";
    if (!j.contains(field)) {
        throw IoError(std::string("decomposition: missing \"") + field + "\"");
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& m : j.at(field)) {
        ops.push_back(matrix_from_json(m));
    }
    std::vector<OutcomeLabel> labels;
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            if (l.is_number()) {
                labels.push_back({l.get<double>()});
            } else {
                labels.push_back(l.get<std::vector<double>>());
            }
        }
    }
    auto d = kind == DecompKind::projective
                 ? Decomposition::projective(std::move(ops), std::move(labels), tol)
                 : Decomposition::povm(std::move(ops), std::move(labels), tol);
    if (j.contains("dim") && j.at("dim").get<int>() != d.dim()) {
        throw IoError("decomposition: declared dim does not match matrices");
    }
    return d;
}

std::vector<Decomposition> decomposition_list_from_json(const nlohmann::json& j,
                                                        double tol) {
    std::vector<Decomposition> list;
    for (const auto& entry : j.at("decompositions")) {
        list.push_back(decomposition_from_json(entry, tol));
    }
    if (list.empty()) {
        throw IoError("targets: empty decomposition list");
    }
    const int dim = j.value("dim", list.front().dim());
    const DecompKind kind = j.contains("kind")
                                ? decomp_kind_from_string(j.at("kind").get<std::string>())
                                : list.front().kind();
    for (const auto& d : list) {
        if (d.dim() != dim || d.kind() != kind) {
            throw IoError("targets: mixed dimensions or kinds in list");
        }
    }
    return list;
}

nlohmann::json decomposition_list_to_json(std::span<const Decomposition> list) {
    if (list.empty()) {
        throw ValidationError("decomposition list: empty");
    }
    nlohmann::json j;
    j["dim"] = list.front().dim();
    j["kind"] = to_string(list.front().kind());
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& d : list) {
        entries.push_back(decomposition_to_json(d));
    }
    j["decompositions"] = std::move(entries);
    return j;
}

} // namespace ncsim
