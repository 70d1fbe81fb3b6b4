#include "ncsim/vector_set.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "ncsim/errors.hpp"

namespace ncsim {

namespace {

// Primitive sign-normalized integer form, for exact duplicate detection.
std::vector<std::int64_t> primitive_form(const std::vector<std::int64_t>& v) {
    std::int64_t g = 0;
    for (auto c : v) {
        g = std::gcd(g, std::abs(c));
    }
    if (g == 0) {
        throw ValidationError("vector set: zero vector");
    }
    std::vector<std::int64_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / g;
    }
    for (auto c : out) {
        if (c != 0) {
            if (c < 0) {
                for (auto& x : out) {
                    x = -x;
                }
            }
            break;
        }
    }
    return out;
}

void sign_normalize(Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0) {
                v = -v;
            }
            return;
        }
    }
    throw ValidationError("vector set: zero vector");
}

} // namespace

VectorSet vector_set_from_json(const nlohmann::json& j, double tol) {
    VectorSet set;
    set.name = j.value("name", std::string("unnamed"));
    set.dim = j.at("dim").get<int>();
    if (set.dim < 2) {
        throw IoError("vector set: dim must be at least 2");
    }
    const bool rational = j.contains("denominator") && !j.at("denominator").is_null();

    if (rational) {
        RationalVectors rat;
        rat.denominator = j.at("denominator").get<std::int64_t>();
        if (rat.denominator < 1) {
            throw IoError("vector set: denominator must be positive");
        }
        const std::int64_t k2 = rat.denominator * rat.denominator;
        std::vector<std::vector<std::int64_t>> primitive_seen;
        for (const auto& row : j.at("vectors")) {
            auto ints = row.get<std::vector<std::int64_t>>();
            if (static_cast<int>(ints.size()) != set.dim) {
                throw IoError("vector set: vector length does not match dim");
            }
            std::int64_t norm2 = 0;
            for (auto c : ints) {
                norm2 += c * c;
            }
            if (norm2 != k2) {
                throw ValidationError("vector set: rational vector is not unit norm");
            }
            auto prim = primitive_form(ints);
            for (const auto& seen : primitive_seen) {
                if (seen == prim) {
                    throw ValidationError(
                        "vector set: projectively duplicated vectors in " + set.name);
                }
            }
            primitive_seen.push_back(prim);
            Eigen::VectorXd v(set.dim);
            for (int i = 0; i < set.dim; ++i) {
                v(i) = static_cast<double>(ints[i]) /
                       static_cast<double>(rat.denominator);
            }
            sign_normalize(v);
            set.vectors.push_back(std::move(v));
            rat.ints.push_back(std::move(ints));
        }
        // Store the sign-normalized integer forms so exact checks agree
        // with the double representation.
        for (auto& ints : rat.ints) {
            for (auto c : ints) {
                if (c != 0) {
                    if (c < 0) {
                        for (auto& x : ints) {
                            x = -x;
                        }
                    }
                    break;
                }
            }
        }
        set.rational = std::move(rat);
    } else {
        for (const auto& row : j.at("vectors")) {
            auto comps = row.get<std::vector<double>>();
            if (static_cast<int>(comps.size()) != set.dim) {
                throw IoError("vector set: vector length does not match dim");
            }
            Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(comps.data(), set.dim);
            if (std::abs(v.norm() - 1.0) > tol) {
                throw ValidationError("vector set: vector is not unit norm in " +
                                      set.name);
            }
            sign_normalize(v);
            for (const auto& seen : set.vectors) {
                if ((seen - v).cwiseAbs().maxCoeff() <= tol) {
                    throw ValidationError(
                        "vector set: projectively duplicated vectors in " + set.name);
                }
            }
            set.vectors.push_back(std::move(v));
        }
    }
    if (set.vectors.empty()) {
        throw IoError("vector set: no vectors");
    }
    return set;
}

VectorSet load_vector_set(const std::filesystem::path& path, double tol) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return vector_set_from_json(j, tol);
}

nlohmann::json vector_set_to_json(const VectorSet& set) {
    nlohmann::json j;
    j["name"] = set.name;
    j["dim"] = set.dim;
    if (set.is_rational()) {
        j["denominator"] = set.rational->denominator;
        j["vectors"] = set.rational->ints;
    } else {
        j["denominator"] = nullptr;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& v : set.vectors) {
            rows.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        }
        j["vectors"] = std::move(rows);
    }
    return j;
}

OrthogonalityStructure build_orthogonality(const VectorSet& set, double tol) {
    const int n = static_cast<int>(set.vectors.size());
    const int dim = set.dim;

    // Orthogonality graph. Exact integer dot products for rational sets.
    std::vector<std::vector<bool>> orth(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool is_orth;
            if (set.is_rational()) {
                std::int64_t dot = 0;
                for (int c = 0; c < dim; ++c) {
                    dot += set.rational->ints[i][c] * set.rational->ints[j][c];
                }
                is_orth = dot == 0;
            } else {
                is_orth = std::abs(set.vectors[i].dot(set.vectors[j])) <= tol;
            }
            orth[i][j] = orth[j][i] = is_orth;
        }
    }

    OrthogonalityStructure structure;
    structure.base = set;

    // Enumerate dim-cliques in ascending index order; output is therefore
    // lexicographic by sorted indices.
    std::vector<int> current;
    auto extend = [&](auto&& self, int start) -> void {
        if (static_cast<int>(current.size()) == dim) {
            structure.bases.push_back(current);
            return;
        }
        for (int v = start; v < n; ++v) {
            bool ok = true;
            for (int u : current) {
                if (!orth[u][v]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                current.push_back(v);
                self(self, v + 1);
                current.pop_back();
            }
        }
    };
    extend(extend, 0);
    return structure;
}

} // namespace ncsim
