#include "ncsim/complex_matrix.hpp"

#include <cmath>

#include "ncsim/errors.hpp"
#include "ncsim/rng.hpp"

namespace ncsim {

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw DimensionError("ComplexMatrix: matrix must be square");
    }
    if (m_.rows() < 1) {
        throw DimensionError("ComplexMatrix: dimension must be positive");
    }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::zero(int dim) {
    return ComplexMatrix(Eigen::MatrixXcd::Zero(dim, dim));
}

double ComplexMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

bool ComplexMatrix::approx_equal(const ComplexMatrix& o, double tol) const {
    if (dim() != o.dim()) {
        return false;
    }
    return (m_ - o.m_).cwiseAbs().maxCoeff() <= tol;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool ComplexMatrix::is_projector(double tol) const {
    return is_hermitian(tol) && (m_ * m_ - m_).cwiseAbs().maxCoeff() <= tol;
}

bool ComplexMatrix::is_positive_semidefinite(double tol) const {
    if (!is_hermitian(tol)) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("matrix +: dimension mismatch");
    }
    return ComplexMatrix(a.m_ + b.m_);
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("matrix -: dimension mismatch");
    }
    return ComplexMatrix(a.m_ - b.m_);
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("matrix *: dimension mismatch");
    }
    return ComplexMatrix(a.m_ * b.m_);
}

ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& a) {
    return ComplexMatrix(s * a.m_);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim();
    const int db = b.dim();
    Eigen::MatrixXcd out(da * db, da * db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a.raw()(i, j) * b.raw();
        }
    }
    return ComplexMatrix(std::move(out));
}

bool commutes(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.dim() != b.dim()) {
        throw DimensionError("commutes: dimension mismatch");
    }
    return (a.raw() * b.raw() - b.raw() * a.raw()).cwiseAbs().maxCoeff() <= tol;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("frobenius_distance: dimension mismatch");
    }
    return (a.raw() - b.raw()).norm();
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& a) {
    if (!a.is_hermitian(1e-7)) {
        throw ValidationError("hermitian_eigensystem: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.raw());
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_eigensystem: eigensolver failed");
    }
    EigenSystem sys;
    sys.values.assign(solver.eigenvalues().data(),
                      solver.eigenvalues().data() + a.dim());
    sys.vectors = solver.eigenvectors();
    return sys;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t) {
    const EigenSystem sys = hermitian_eigensystem(h);
    const int n = h.dim();
    Eigen::VectorXcd phases(n);
    for (int k = 0; k < n; ++k) {
        phases(k) = std::polar(1.0, t * sys.values[k]);
    }
    return ComplexMatrix(sys.vectors * phases.asDiagonal() * sys.vectors.adjoint());
}

ComplexMatrix random_hermitian_direction(int dim, Rng& rng) {
    Eigen::MatrixXcd h(dim, dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = std::complex<double>(rng.normal(), 0.0);
        for (int j = i + 1; j < dim; ++j) {
            const std::complex<double> z(rng.normal(), rng.normal());
            h(i, j) = z / std::sqrt(2.0);
            h(j, i) = std::conj(h(i, j));
        }
    }
    const double norm = h.norm();
    if (norm < 1e-300) {
        h = Eigen::MatrixXcd::Identity(dim, dim);
        return ComplexMatrix(h / h.norm());
    }
    return ComplexMatrix(h / norm);
}

ComplexMatrix sigma_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return ComplexMatrix(m);
}

ComplexMatrix sigma_y() {
    Eigen::MatrixXcd m(2, 2);
    m << std::complex<double>(0, 0), std::complex<double>(0, -1),
        std::complex<double>(0, 1), std::complex<double>(0, 0);
    return ComplexMatrix(m);
}

ComplexMatrix sigma_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return ComplexMatrix(m);
}

ComplexMatrix identity2() { return ComplexMatrix::identity(2); }

ComplexMatrix projector_onto(const Eigen::VectorXcd& v) {
    const double n = v.norm();
    if (n < 1e-12) {
        throw ValidationError("projector_onto: zero vector");
    }
    const Eigen::VectorXcd u = v / n;
    return ComplexMatrix(u * u.adjoint());
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.dim(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw IoError("matrix: expected a non-empty array of rows");
    }
    const int n = static_cast<int>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw IoError("matrix: row " + std::to_string(i) + " is not length " +
                          std::to_string(n));
        }
        for (int k = 0; k < n; ++k) {
            const auto& entry = row.at(k);
            if (!entry.is_array() || entry.size() != 2) {
                throw IoError("matrix: entries must be [re, im] pairs");
            }
            m(i, k) = std::complex<double>(entry.at(0).get<double>(),
                                           entry.at(1).get<double>());
        }
    }
    return ComplexMatrix(std::move(m));
}

} // namespace ncsim
