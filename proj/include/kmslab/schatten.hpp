#ifndef KMSLAB_SCHATTEN_HPP
#define KMSLAB_SCHATTEN_HPP

#include <vector>

#include "kmslab/bound_report.hpp"
#include "kmslab/matrix_core.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

// Noncommutative L_p machinery over a matrix algebra with the usual trace.
// Indices are plain doubles in [1, inf]; use kInf for the operator norm.

constexpr double kIndexTol = 1e-12;    // admissibility of 1/p sums
constexpr double kSlackTol = 1e-10;    // default inequality slack tolerance

// tau(|A|^p)^{1/p} over singular values; max singular value for p = inf
double schatten_norm(const CMatrix& A, double p);

// tau(H A); equals tau(H^{1/2} A H^{1/2}) for A >= 0. H must be PSD.
Complex weighted_functional(const CMatrix& H, const CMatrix& A);
// the symmetrized form, used as the independent oracle in tests
Complex weighted_functional_sym(const CMatrix& H, const CMatrix& A);

// tau(|A_1...A_k|) <= prod tau(|A_i|^{p_i})^{1/p_i},  sum 1/p_i = 1
BoundReport check_holder(const std::vector<CMatrix>& as, const std::vector<double>& ps,
                         std::uint64_t seed = 0);

// ||AB||_r <= ||A||_p ||B||_q,  1/p + 1/q = 1/r
BoundReport check_three_term_holder(const CMatrix& A, const CMatrix& B, double p,
                                    double q, double r, std::uint64_t seed = 0);

// ||A+B||_p <= ||A||_p + ||B||_p
BoundReport check_minkowski(const CMatrix& A, const CMatrix& B, double p,
                            std::uint64_t seed = 0);

struct DualWitness {
    CMatrix witness;  // ||witness||_q <= 1
    double attained;  // tau(A * witness), equal to ||A||_p
};

// the norm-attaining element of the unit q-ball, built from the SVD of A
DualWitness dual_witness(const CMatrix& A, double p);

// ||A||_r against the two-sided interpolation bound, 1 <= p < r < q <= inf
BoundReport check_interpolation(const CMatrix& A, double p, double r, double q,
                                std::uint64_t seed = 0);

}  // namespace kmslab

#endif
