#include "kmslab/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "kmslab/rng.hpp"

namespace kmslab {

double op_norm(const CMatrix& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(A);
    return svd.singularValues()(0);
}

double hermitian_deviation(const CMatrix& A) { return op_norm(A - A.adjoint()); }

namespace {

void fix_column_phases(CMatrix& V) {
    for (Eigen::Index c = 0; c < V.cols(); ++c) {
        for (Eigen::Index r = 0; r < V.rows(); ++r) {
            Complex v = V(r, c);
            if (std::abs(v) > 1e-12) {
                V.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
}

}  // namespace

HermitianEigen eig_hermitian(const CMatrix& A, double tol_rel) {
    const double scale = 1.0 + op_norm(A);
    if (hermitian_deviation(A) > tol_rel * scale)
        throw NotHermitian("||A - A*|| exceeds tolerance");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(A);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("hermitian eigensolver did not converge");
    HermitianEigen out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    fix_column_phases(out.vectors);
    return out;
}

CMatrix matrix_function(const CMatrix& A, ScalarFn fn, double s) {
    HermitianEigen eig = eig_hermitian(A);
    const int n = static_cast<int>(eig.values.size());
    const double top = eig.values.cwiseAbs().maxCoeff();
    const double floor = kPositivityFloorRel * top;

    const bool integer_power =
        fn == ScalarFn::power && s >= 0.0 && s == std::floor(s);
    const bool needs_positive = fn == ScalarFn::log ||
                                (fn == ScalarFn::power && !integer_power);
    if (needs_positive && (n == 0 || eig.values(0) <= floor))
        throw NotPositiveDefinite("spectrum at or below the positivity floor");

    RVector f(n);
    for (int i = 0; i < n; ++i) {
        const double x = eig.values(i);
        switch (fn) {
            case ScalarFn::power: f(i) = (s == 0.0) ? 1.0 : std::pow(x, s); break;
            case ScalarFn::exp: f(i) = std::exp(x); break;
            case ScalarFn::log: f(i) = std::log(x); break;
        }
    }
    return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

CMatrix matrix_power(const CMatrix& A, double s) { return matrix_function(A, ScalarFn::power, s); }
CMatrix matrix_exp_hermitian(const CMatrix& A) { return matrix_function(A, ScalarFn::exp); }
CMatrix matrix_log_hermitian(const CMatrix& A) { return matrix_function(A, ScalarFn::log); }

CMatrix hermitian_complex_power(const HermitianEigen& eig, Complex w) {
    const int n = static_cast<int>(eig.values.size());
    const double top = eig.values.cwiseAbs().maxCoeff();
    if (n == 0 || eig.values(0) <= kPositivityFloorRel * top)
        throw NotPositiveDefinite("complex power needs a strictly positive spectrum");
    CVector f(n);
    for (int i = 0; i < n; ++i) f(i) = std::exp(w * std::log(eig.values(i)));
    return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

CMatrix exp_scaled_hermitian(const CMatrix& H, Complex w) {
    HermitianEigen eig = eig_hermitian(H);
    const int n = static_cast<int>(eig.values.size());
    CVector f(n);
    for (int i = 0; i < n; ++i) f(i) = std::exp(w * eig.values(i));
    return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

PolarParts polar(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    const double floor = sv.size() ? kSingularFloorRel * sv(0) : 0.0;
    RVector mask(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) mask(i) = sv(i) > floor ? 1.0 : 0.0;
    PolarParts out;
    out.isometry = svd.matrixU() * mask.asDiagonal() * svd.matrixV().adjoint();
    out.modulus = svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint();
    return out;
}

RVector singular_values(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A);
    return svd.singularValues();
}

CMatrix random_matrix(int dim, RandomSource& rng) {
    CMatrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = rng.cnormal();
    return A;
}

CMatrix random_hermitian(int dim, RandomSource& rng) {
    CMatrix A = random_matrix(dim, rng);
    return 0.5 * (A + A.adjoint()).eval();
}

CMatrix random_unitary(int dim, RandomSource& rng) {
    CMatrix A = random_matrix(dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(A);
    CMatrix Q = qr.householderQ();
    CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Complex d = R(i, i);
        Q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return Q;
}

CMatrix random_density(int dim, RandomSource& rng) {
    RVector p(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        p(i) = rng.uniform(0.2, 1.0);
        total += p(i);
    }
    p /= total;
    CMatrix U = random_unitary(dim, rng);
    return U * p.asDiagonal() * U.adjoint();
}

}  // namespace kmslab
