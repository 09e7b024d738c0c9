#ifndef KMSLAB_MATRIX_CORE_HPP
#define KMSLAB_MATRIX_CORE_HPP

#include "kmslab/types.hpp"

namespace kmslab {

// Relative floor below which an eigenvalue counts as non-invertible.
// Inverses and logs must fail loudly on degenerate input instead of
// regularizing, so this is a hard gate, not a clamp.
constexpr double kPositivityFloorRel = 1e-12;

// Singular values below this (relative to the largest) are exact zeros for
// norm and witness purposes.
constexpr double kSingularFloorRel = 1e-14;

struct HermitianEigen {
    RVector values;   // ascending
    CMatrix vectors;  // unitary; each column's first nonzero entry is real > 0
};

struct PolarParts {
    CMatrix isometry;  // partial isometry U with A = U|A|, U*U = range projection
    CMatrix modulus;   // |A| >= 0
};

enum class ScalarFn { power, exp, log };

// operator norm (largest singular value)
double op_norm(const CMatrix& A);

double hermitian_deviation(const CMatrix& A);  // ||A - A*||_inf

HermitianEigen eig_hermitian(const CMatrix& A, double tol_rel = 1e-10);

// f applied on the spectrum through HermitianEigen. power with non-integer or
// negative exponent and log require the spectrum above the positivity floor.
CMatrix matrix_function(const CMatrix& A, ScalarFn fn, double s = 0.0);

CMatrix matrix_power(const CMatrix& A, double s);
CMatrix matrix_exp_hermitian(const CMatrix& A);
CMatrix matrix_log_hermitian(const CMatrix& A);

// V diag(lambda^w) V* for complex w; requires a strictly positive spectrum
CMatrix hermitian_complex_power(const HermitianEigen& eig, Complex w);

// exp(M) for a (not necessarily Hermitian) matrix i*H or z*H with H Hermitian:
// computed as V diag(exp(w * lambda)) V* from the eigen data of H.
CMatrix exp_scaled_hermitian(const CMatrix& H, Complex w);

PolarParts polar(const CMatrix& A);

RVector singular_values(const CMatrix& A);  // descending

}  // namespace kmslab

#endif
