#ifndef KMSLAB_MODULAR_GNS_HPP
#define KMSLAB_MODULAR_GNS_HPP

#include <vector>

#include "kmslab/bound_report.hpp"
#include "kmslab/matrix_core.hpp"
#include "kmslab/rng.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

// GNS data of a faithful state on a matrix algebra, realized on the
// Hilbert-Schmidt space: <X,Y> = tau(X*Y), cyclic vector rho^{1/2},
// pi(A)X = AX. Vectors in the representation space are stored as dim x dim
// matrices throughout.
//
// With the flow tau_t(A) = rho^{it} A rho^{-it} the KMS boundary identity
// holds at beta = -1. beta_convention = +1 re-parameterizes the dynamics as
// alpha_t = tau_{-t}, which moves the identity to beta = +1.
struct GnsContext {
    int dim = 0;
    CMatrix rho;
    HermitianEigen rho_eigen;
    RVector log_p;   // log of rho's eigenvalues, ascending
    CMatrix omega;   // rho^{1/2}
    double beta_convention = -1.0;

    double flow_sign() const { return beta_convention < 0 ? 1.0 : -1.0; }
};

GnsContext build_gns(const CMatrix& rho, double beta_convention = -1.0);

// rho^w X rho^{-w} for complex w (the modular operator power on HS space)
CMatrix delta_power_apply(const GnsContext& ctx, const CMatrix& X, Complex w);

// modular conjugation J: X -> X*
inline CMatrix j_apply(const CMatrix& X) { return X.adjoint(); }

// closure of A Omega -> A* Omega in closed form: X -> rho^{-1/2} X* rho^{1/2}
CMatrix s_apply(const GnsContext& ctx, const CMatrix& X);

// tau_t(A) = rho^{it} A rho^{-it} (always the modular flow, not re-parameterized)
CMatrix modular_flow(const GnsContext& ctx, const CMatrix& A, double t);

// dynamics used by the KMS checks: alpha_t = tau_{flow_sign * t}
CMatrix dynamics_flow(const GnsContext& ctx, const CMatrix& A, double t);

// F_{A,B}(z) = phi(A alpha_z(B)), entire in finite dimension
Complex kms_two_point(const GnsContext& ctx, const CMatrix& A, const CMatrix& B, Complex z);

// per-trial reports with lhs = |F(t + i beta) - phi(alpha_t(B) A)|, rhs = tol
std::vector<BoundReport> kms_check(const GnsContext& ctx, int trials,
                                   std::uint64_t seed, double tol = 1e-9);

// The modular objects as explicit data: the Delta eigenvalue grid p_i/p_j in
// the joint eigenbasis, plus the real-doubled matrix of the antilinear S.
struct ModularData {
    RMatrix delta_grid;        // (i,j) -> p_i / p_j
    RMatrix s_real;            // 2d^2 x 2d^2 real matrix of S
    RMatrix j_real;            // antilinear polar factor of s_real
    RMatrix delta_sqrt_real;   // positive polar factor of s_real
};

ModularData modular_data(const GnsContext& ctx);

// real-doubled matrix of a map on the HS space; antilinear maps become
// plain R-linear ones here, which is what makes the polar split computable
RMatrix real_doubled(const GnsContext& ctx, bool antilinear,
                     const std::function<CMatrix(const CMatrix&)>& op);

// the full invariant suite at tolerance 1e-10 (assembled-vs-closed-form S at 1e-9):
// S = J Delta^{1/2}, J^2 = 1, J Delta J = Delta^{-1}, Delta Omega = Omega,
// J Omega = Omega, state reproduction, flow isometry/group law/invariance,
// norm symmetry of left multipliers under J . J
std::vector<BoundReport> modular_invariant_checks(const GnsContext& ctx,
                                                  std::uint64_t seed);

// Schatten norm of the left multiplier pi(Q) on the HS space: the singular
// values of Q, each with multiplicity dim
double represented_schatten_norm(const CMatrix& Q, double r);

// left multiplication / right multiplication as dim^2 x dim^2 matrices
CMatrix left_multiplier_matrix(const CMatrix& Q);
CMatrix right_multiplier_matrix(const CMatrix& Q);

}  // namespace kmslab

#endif
