#include <doctest.h>

#include "kmslab/matrix_core.hpp"
#include "kmslab/rng.hpp"

using namespace kmslab;

namespace {

CMatrix pauli_x() {
    CMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("matrix-core");

TEST_CASE("diagonal eigendecomposition sorts ascending") {
    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 2.0;
    A(1, 1) = 1.0;
    HermitianEigen eig = eig_hermitian(A);
    CHECK(eig.values(0) == doctest::Approx(1.0));
    CHECK(eig.values(1) == doctest::Approx(2.0));
    // permutation of identity columns, phase-fixed
    CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(1.0));
    CHECK(eig.vectors(1, 0).real() > 0.0);
}

TEST_CASE("pauli-x spectrum") {
    HermitianEigen eig = eig_hermitian(pauli_x());
    CHECK(eig.values(0) == doctest::Approx(-1.0));
    CHECK(eig.values(1) == doctest::Approx(1.0));
}

TEST_CASE("random hermitian reconstruction") {
    RandomSource rng(11);
    CMatrix A = random_hermitian(6, rng);
    HermitianEigen eig = eig_hermitian(A);
    CMatrix rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    CHECK(op_norm(A - rebuilt) < 1e-12 * (1.0 + op_norm(A)));
    CHECK(op_norm(eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(6, 6)) < 1e-13);
}

TEST_CASE("rejects non-hermitian input") {
    RandomSource rng(3);
    CMatrix A = random_matrix(4, rng);
    CHECK_THROWS_AS(eig_hermitian(A), NotHermitian);
}

TEST_CASE("power half on diag(4,9)") {
    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 4.0;
    A(1, 1) = 9.0;
    CMatrix R = matrix_power(A, 0.5);
    CHECK(std::abs(R(0, 0) - Complex(2, 0)) < 1e-14);
    CHECK(std::abs(R(1, 1) - Complex(3, 0)) < 1e-14);
}

TEST_CASE("exp of zero is identity") {
    CMatrix R = matrix_exp_hermitian(CMatrix::Zero(3, 3));
    CHECK(op_norm(R - CMatrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("log then exp round trip") {
    RandomSource rng(5);
    CMatrix G = random_matrix(5, rng);
    CMatrix A = G * G.adjoint() + 0.3 * CMatrix::Identity(5, 5);
    CMatrix back = matrix_exp_hermitian(matrix_log_hermitian(A));
    CHECK(op_norm(back - A) < 1e-10 * (1.0 + op_norm(A)));
}

TEST_CASE("positivity floor trips on singular input") {
    CMatrix A = CMatrix::Zero(2, 2);
    A(0, 0) = 1.0;  // second eigenvalue exactly 0
    CHECK_THROWS_AS(matrix_log_hermitian(A), NotPositiveDefinite);
    CHECK_THROWS_AS(matrix_power(A, -1.0), NotPositiveDefinite);
    CHECK_THROWS_AS(matrix_power(A, 0.5), NotPositiveDefinite);
    CHECK_NOTHROW(matrix_power(A, 2.0));  // integer powers stay defined
}

TEST_CASE("power homomorphism on a positive matrix") {
    RandomSource rng(7);
    CMatrix G = random_matrix(4, rng);
    CMatrix A = G * G.adjoint() + 0.2 * CMatrix::Identity(4, 4);
    CMatrix lhs = matrix_power(A, 0.7) * matrix_power(A, 0.55);
    CMatrix rhs = matrix_power(A, 1.25);
    CHECK(op_norm(lhs - rhs) < 1e-10 * (1.0 + op_norm(rhs)));
}

TEST_CASE("polar of a positive definite matrix") {
    RandomSource rng(9);
    CMatrix G = random_matrix(3, rng);
    CMatrix P = G * G.adjoint() + 0.5 * CMatrix::Identity(3, 3);
    PolarParts parts = polar(P);
    CHECK(op_norm(parts.isometry - CMatrix::Identity(3, 3)) < 1e-12);
    CHECK(op_norm(parts.modulus - P) < 1e-12 * op_norm(P));
}

TEST_CASE("polar of a unitary") {
    RandomSource rng(13);
    CMatrix W = random_unitary(4, rng);
    PolarParts parts = polar(W);
    CHECK(op_norm(parts.isometry - W) < 1e-12);
    CHECK(op_norm(parts.modulus - CMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("polar reconstruction and modulus consistency") {
    RandomSource rng(17);
    CMatrix A = random_matrix(4, rng);
    PolarParts parts = polar(A);
    CHECK(op_norm(A - parts.isometry * parts.modulus) < 1e-11 * (1.0 + op_norm(A)));
    // |A| agrees with (A*A)^{1/2}
    CMatrix alt = matrix_power(A.adjoint() * A, 0.5);
    CHECK(op_norm(parts.modulus - alt) < 1e-10 * (1.0 + op_norm(alt)));
    // U*U projects onto the range of |A|
    CMatrix proj = parts.isometry.adjoint() * parts.isometry;
    CHECK(op_norm(proj * parts.modulus - parts.modulus) < 1e-11);
    CHECK(op_norm(proj * proj - proj) < 1e-11);
}

TEST_CASE("rank-deficient polar keeps a partial isometry") {
    RandomSource rng(19);
    CMatrix A = CMatrix::Zero(3, 3);
    A.col(0) = random_matrix(3, rng).col(0);
    PolarParts parts = polar(A);
    CMatrix proj = parts.isometry.adjoint() * parts.isometry;
    CHECK(op_norm(proj * proj - proj) < 1e-12);
    CHECK(std::abs(proj.trace().real() - 1.0) < 1e-12);  // rank one
    CHECK(op_norm(A - parts.isometry * parts.modulus) < 1e-12);
}

TEST_SUITE_END();
