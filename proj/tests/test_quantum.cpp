#include <doctest.h>

#include <cmath>

#include "ncsim/complex_matrix.hpp"
#include "ncsim/decomposition.hpp"
#include "ncsim/errors.hpp"
#include "ncsim/quantum_state.hpp"
#include "ncsim/rng.hpp"
#include "oracle_jacobi.hpp"

using namespace ncsim;

namespace {

std::vector<std::vector<test_oracle::Cd>> to_oracle(const ComplexMatrix& m) {
    std::vector<std::vector<test_oracle::Cd>> a(m.dim(),
                                                std::vector<test_oracle::Cd>(m.dim()));
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            a[i][j] = m(i, j);
        }
    }
    return a;
}

Decomposition z_basis_decomposition() {
    return Decomposition::projective(
        {projector_onto(Eigen::Vector2cd(1, 0)), projector_onto(Eigen::Vector2cd(0, 1))},
        {{+1.0}, {-1.0}});
}

// Two-outcome eigenspace decomposition of sigma_z (x) sigma_z, labels +-1.
Decomposition zz_eigenspace_decomposition() {
    Eigen::Vector4cd e00, e01, e10, e11;
    e00 << 1, 0, 0, 0;
    e01 << 0, 1, 0, 0;
    e10 << 0, 0, 1, 0;
    e11 << 0, 0, 0, 1;
    const ComplexMatrix plus = projector_onto(e00) + projector_onto(e11);
    const ComplexMatrix minus = projector_onto(e01) + projector_onto(e10);
    return Decomposition::projective({plus, minus}, {{+1.0}, {-1.0}});
}

QuantumState phi_plus() {
    Eigen::Vector4cd amps;
    amps << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    return QuantumState::pure(amps);
}

} // namespace

TEST_CASE("tensor: identities and the mixed-product property") {
    const ComplexMatrix i4 = tensor(identity2(), identity2());
    CHECK(i4.approx_equal(ComplexMatrix::identity(4)));
    const ComplexMatrix lhs = tensor(sigma_z(), identity2()) * tensor(identity2(), sigma_x());
    CHECK(lhs.approx_equal(tensor(sigma_z(), sigma_x())));
    CHECK(tensor(sigma_z(), sigma_x()).dim() == 4);
}

TEST_CASE("tensor: sigma_z (x) sigma_x eigenvalues via the Jacobi oracle") {
    const ComplexMatrix zx = tensor(sigma_z(), sigma_x());
    const auto oracle_values = test_oracle::jacobi_eigenvalues(to_oracle(zx));
    REQUIRE(oracle_values.size() == 4);
    CHECK(oracle_values[0] == doctest::Approx(-1.0));
    CHECK(oracle_values[1] == doctest::Approx(-1.0));
    CHECK(oracle_values[2] == doctest::Approx(+1.0));
    CHECK(oracle_values[3] == doctest::Approx(+1.0));

    // The production eigensolver agrees with the oracle.
    const auto sys = hermitian_eigensystem(zx);
    for (int i = 0; i < 4; ++i) {
        CHECK(sys.values[i] == doctest::Approx(oracle_values[i]).epsilon(1e-10));
    }
}

TEST_CASE("production and oracle eigenvalues agree on random Hermitian matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + int(rng.next_u64() % 5);
        const ComplexMatrix h = random_hermitian_direction(dim, rng);
        const auto sys = hermitian_eigensystem(h);
        const auto oracle_values = test_oracle::jacobi_eigenvalues(to_oracle(h));
        for (int i = 0; i < dim; ++i) {
            REQUIRE(sys.values[i] == doctest::Approx(oracle_values[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("commutes") {
    CHECK(commutes(tensor(sigma_z(), identity2()), tensor(identity2(), sigma_x())));
    CHECK_FALSE(commutes(sigma_z(), sigma_x()));
    // Z1X2 and X1Z2 can be measured simultaneously.
    CHECK(commutes(tensor(sigma_z(), sigma_x()), tensor(sigma_x(), sigma_z())));
    CHECK_THROWS_AS(commutes(sigma_z(), ComplexMatrix::identity(3)), DimensionError);
}

TEST_CASE("born: phi+ and the Z1Z2 eigenspaces") {
    const auto probs = born_probabilities(phi_plus(), zz_eigenspace_decomposition());
    CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("born: eigenstate and maximally mixed cases") {
    const auto probs =
        born_probabilities(QuantumState::basis_state(2, 0), z_basis_decomposition());
    CHECK(probs[0] == doctest::Approx(1.0));
    CHECK(probs[1] == doctest::Approx(0.0));

    Eigen::Vector3cd a, b, c;
    a << 1, 0, 0;
    b << 0, 1, 0;
    c << 0, 0, 1;
    const auto triad = Decomposition::projective(
        {projector_onto(a), projector_onto(b), projector_onto(c)}, {});
    const auto mixed = born_probabilities(QuantumState::maximally_mixed(3), triad);
    for (double p : mixed) {
        CHECK(p == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("born: povm with projector effects equals the projective result exactly") {
    const auto projective = z_basis_decomposition();
    const auto povm = Decomposition::povm(
        {projective.op(0), projective.op(1)},
        {projective.label(0), projective.label(1)});
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Vector2cd v(std::complex<double>(rng.normal(), rng.normal()),
                           std::complex<double>(rng.normal(), rng.normal()));
        v.normalize();
        const QuantumState state = QuantumState::pure(v);
        const auto p1 = born_probabilities(state, projective);
        const auto p2 = born_probabilities(state, povm);
        REQUIRE(p1.size() == p2.size());
        for (std::size_t j = 0; j < p1.size(); ++j) {
            REQUIRE(p1[j] == p2[j]);  // identical code path, bitwise equal
        }
    }
}

TEST_CASE("born probabilities are a distribution for random states and contexts") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 2 + int(rng.next_u64() % 3);
        // random orthonormal frame via a random unitary
        const ComplexMatrix h = random_hermitian_direction(dim, rng);
        const ComplexMatrix u = unitary_exp(h, 0.7 + rng.u01());
        std::vector<ComplexMatrix> projectors;
        for (int k = 0; k < dim; ++k) {
            projectors.push_back(projector_onto(u.raw().col(k)));
        }
        const auto d = Decomposition::projective(std::move(projectors), {});
        Eigen::VectorXcd v(dim);
        for (int k = 0; k < dim; ++k) {
            v(k) = std::complex<double>(rng.normal(), rng.normal());
        }
        v.normalize();
        const auto probs = born_probabilities(QuantumState::pure(v), d);
        double sum = 0.0;
        for (double p : probs) {
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0);
            sum += p;
        }
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("collapse: eigenstate is unchanged") {
    const QuantumState out =
        collapse(QuantumState::basis_state(2, 0), z_basis_decomposition(), 0);
    CHECK(out.is_pure());
    CHECK(std::abs(out.amplitudes()(0)) == doctest::Approx(1.0));
}

TEST_CASE("collapse: phi+ keeps X1X2 = +1 after a Z1Z2 measurement") {
    const QuantumState collapsed = collapse(phi_plus(), zz_eigenspace_decomposition(), 0);
    // X1X2 eigenspace decomposition
    const ComplexMatrix xx = tensor(sigma_x(), sigma_x());
    const ComplexMatrix id4 = ComplexMatrix::identity(4);
    const ComplexMatrix plus = ComplexMatrix(0.5 * (id4.raw() + xx.raw()));
    const ComplexMatrix minus = ComplexMatrix(0.5 * (id4.raw() - xx.raw()));
    const auto xx_decomp = Decomposition::projective({plus, minus}, {{+1.0}, {-1.0}});
    const auto probs = born_probabilities(collapsed, xx_decomp);
    CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collapse: rank-1 projector always yields the projector's state") {
    // mixed input, rank-1 outcome
    const QuantumState mixed = QuantumState::maximally_mixed(2);
    const QuantumState out = collapse(mixed, z_basis_decomposition(), 1);
    const ComplexMatrix expectation = projector_onto(Eigen::Vector2cd(0, 1));
    CHECK(out.density().approx_equal(expectation, 1e-12));
}

TEST_CASE("collapse: repeatability") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 2 + int(rng.next_u64() % 3);
        const ComplexMatrix h = random_hermitian_direction(dim, rng);
        const ComplexMatrix u = unitary_exp(h, 1.1);
        std::vector<ComplexMatrix> projectors;
        for (int k = 0; k < dim; ++k) {
            projectors.push_back(projector_onto(u.raw().col(k)));
        }
        const auto d = Decomposition::projective(std::move(projectors), {});
        Eigen::VectorXcd v(dim);
        for (int k = 0; k < dim; ++k) {
            v(k) = std::complex<double>(rng.normal(), rng.normal());
        }
        v.normalize();
        const QuantumState state = QuantumState::pure(v);
        const auto probs = born_probabilities(state, d);
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (probs[j] > 1e-3) {
                const QuantumState after = collapse(state, d, j);
                const auto again = born_probabilities(after, d);
                REQUIRE(again[j] == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("collapse errors") {
    CHECK_THROWS_AS(collapse(QuantumState::basis_state(2, 0), z_basis_decomposition(), 1),
                    Error);  // zero probability
    CHECK_THROWS_AS(
        collapse(QuantumState::basis_state(3, 0), z_basis_decomposition(), 0),
        DimensionError);
}

TEST_CASE("invalid decompositions are rejected") {
    // a non-projector "projector"
    const ComplexMatrix half = ComplexMatrix(0.5 * ComplexMatrix::identity(2).raw());
    CHECK_THROWS_AS(Decomposition::projective({half, half}, {}), ValidationError);
    // projectors that do not sum to the identity
    const ComplexMatrix p0 = projector_onto(Eigen::Vector2cd(1, 0));
    CHECK_THROWS_AS(Decomposition::projective({p0, p0}, {}), ValidationError);
    // povm effect with a negative eigenvalue
    const ComplexMatrix bad = ComplexMatrix(ComplexMatrix::identity(2).raw() * 1.5);
    const ComplexMatrix compensating =
        ComplexMatrix(ComplexMatrix::identity(2).raw() * -0.5);
    CHECK_THROWS_AS(Decomposition::povm({bad, compensating}, {}), ValidationError);
}

TEST_CASE("povm: trine decomposition validates and sums to one") {
    std::vector<ComplexMatrix> effects;
    for (int k = 0; k < 3; ++k) {
        const double angle = 2.0 * M_PI * k / 3.0;
        Eigen::Vector2cd v(std::cos(angle / 2.0), std::sin(angle / 2.0));
        effects.push_back(ComplexMatrix(projector_onto(v).raw() * (2.0 / 3.0)));
    }
    const auto trine = Decomposition::povm(std::move(effects), {});
    const auto probs = born_probabilities(QuantumState::basis_state(2, 0), trine);
    double sum = 0.0;
    for (double p : probs) {
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state validation") {
    Eigen::Vector2cd unnormalized(1.0, 1.0);
    CHECK_THROWS_AS(QuantumState::pure(unnormalized), ValidationError);
    CHECK_THROWS_AS(QuantumState::mixed(sigma_z()), ValidationError);  // trace 0
    const QuantumState mm = QuantumState::maximally_mixed(4);
    CHECK(mm.density().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("json round-trips preserve matrices, states, decompositions") {
    const ComplexMatrix zx = tensor(sigma_z(), sigma_x());
    CHECK(matrix_from_json(matrix_to_json(zx)).approx_equal(zx, 0.0));

    const QuantumState state = phi_plus();
    const QuantumState back = state_from_json(state_to_json(state));
    CHECK(back.is_pure());
    CHECK((back.amplitudes() - state.amplitudes()).norm() == 0.0);

    const QuantumState mm = QuantumState::maximally_mixed(3);
    CHECK(state_from_json(state_to_json(mm)).density().approx_equal(mm.density(), 0.0));

    const auto d = zz_eigenspace_decomposition();
    const auto d2 = decomposition_from_json(decomposition_to_json(d));
    REQUIRE(d2.size() == d.size());
    CHECK(d2.kind() == DecompKind::projective);
    for (std::size_t j = 0; j < d.size(); ++j) {
        CHECK(d2.op(j).approx_equal(d.op(j), 0.0));
        CHECK(d2.label(j) == d.label(j));
    }

    // povm kind round-trips through the "effects" field
    const auto povm = Decomposition::povm({d.op(0), d.op(1)}, {{1.0}, {0.0}});
    const auto povm_json = decomposition_to_json(povm);
    CHECK(povm_json.contains("effects"));
    CHECK_FALSE(povm_json.contains("projectors"));
    CHECK(decomposition_from_json(povm_json).kind() == DecompKind::povm);
}

TEST_CASE("approx_equal honours the tolerance parameter") {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const ComplexMatrix nudged =
        ComplexMatrix(id.raw() + Eigen::MatrixXcd::Constant(2, 2, 1e-7));
    CHECK_FALSE(id.approx_equal(nudged));       // default 1e-9
    CHECK(id.approx_equal(nudged, 1e-6));       // loosened per call
}
