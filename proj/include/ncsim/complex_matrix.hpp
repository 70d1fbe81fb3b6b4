#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <json.hpp>

namespace ncsim {

// Absolute tolerance for operator-identity checks (projector idempotence,
// resolutions of the identity, commutators). Overridable per call. This is
// floating-point noise, orders of magnitude below any physical precision
// epsilon used by the sub-models; the two must never be conflated.
inline constexpr double default_tol = 1e-9;

// Dense square complex matrix, dimension <= 16 at desk scale. Immutable in
// spirit: operations return new values.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(Eigen::MatrixXcd m);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& raw() const { return m_; }
    std::complex<double> operator()(int r, int c) const { return m_(r, c); }

    ComplexMatrix adjoint() const { return ComplexMatrix(m_.adjoint()); }
    std::complex<double> trace() const { return m_.trace(); }
    double frobenius_norm() const { return m_.norm(); }
    double max_abs() const;

    // Max-magnitude entry of the difference, compared against tol.
    bool approx_equal(const ComplexMatrix& o, double tol = default_tol) const;
    bool is_hermitian(double tol = default_tol) const;
    bool is_projector(double tol = default_tol) const;
    bool is_positive_semidefinite(double tol = default_tol) const;

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& a);

  private:
    Eigen::MatrixXcd m_;
};

// Kronecker product, dimension dim(a) * dim(b).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// True iff the max-magnitude entry of AB - BA is <= tol.
bool commutes(const ComplexMatrix& a, const ComplexMatrix& b, double tol = default_tol);

// Frobenius norm of a - b; the operator distance used throughout.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSystem {
    std::vector<double> values;  // ascending
    Eigen::MatrixXcd vectors;    // columns, matching order
};

// Eigensystem of a Hermitian matrix.
EigenSystem hermitian_eigensystem(const ComplexMatrix& a);

// exp(i t H) for Hermitian H, via the eigensystem.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t);

// Random Hermitian direction with unit Frobenius norm (GUE-style draw).
class Rng;
ComplexMatrix random_hermitian_direction(int dim, Rng& rng);

// Pauli matrices and the qubit identity.
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix identity2();

// Rank-1 projector |v><v| from a (not necessarily normalized) vector.
ComplexMatrix projector_onto(const Eigen::VectorXcd& v);

// JSON: a matrix is an array of rows, each row an array of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

} // namespace ncsim
