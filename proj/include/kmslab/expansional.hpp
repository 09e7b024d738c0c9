#ifndef KMSLAB_EXPANSIONAL_HPP
#define KMSLAB_EXPANSIONAL_HPP

#include <functional>
#include <vector>

#include "kmslab/bound_report.hpp"
#include "kmslab/modular_gns.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

struct SeriesBudget {
    enum class Policy { certified_tail, fixed_order };
    int max_order = 25;
    double tolerance = 1e-10;
    Policy policy = Policy::certified_tail;
};

// Operator-valued path on [0, horizon] with a stated sup-norm bound.
// The bound is spot-checked at the quadrature nodes.
struct OperatorPath {
    std::function<CMatrix(double)> evaluate;
    double sup_bound = 0.0;
    double horizon = 0.0;
};

enum class Side { left, right };

// Ordered exponential: sum over n of the iterated integrals of
// A(t_n)...A(t_1) (right) or A(t_1)...A(t_n) (left) over 0<=t_n<=...<=t_1<=t,
// truncated with a certified factorial tail and evaluated by panelwise
// Gauss-Legendre with refinement until stable at tolerance/10.
CMatrix expansional(const OperatorPath& path, double t, Side side, const SeriesBudget& budget);

// mutual-inverse and composition residuals:
//   Exp_l(-A)Exp_r(A) = 1, Exp_r(A)Exp_l(-A) = 1,
//   Exp_r over [0,t] then [t,t+t'] composes, same for Exp_l
std::vector<BoundReport> check_cocycle_properties(const OperatorPath& path, double t,
                                                  double tprime, const SeriesBudget& budget);

// central finite difference of t -> Exp_r against Exp_r(t) A(t)
BoundReport check_derivative_law(const OperatorPath& path, double t, double h,
                                 const SeriesBudget& budget);

// e^{it(A+B)}e^{-itB} against the ordered exponential of the
// interaction-picture path. Row [0] is the derivative-matched form
// (integrand i e^{isB}Ae^{-isB}, Exp_r), asserted; row [1] is the
// as-printed variant (no i, Exp_l), reported as informational.
std::vector<BoundReport> interchange_identity(const CMatrix& A, const CMatrix& B, double t,
                                              const SeriesBudget& budget);

struct RelativeCocycle {
    CMatrix u;      // Exp_r of -i tau^psi_s(Q)
    CMatrix u_hat;  // Exp_l of +i tau^psi_s(Q)
};

// cocycle intertwining the modular flow of psi with the flow of the
// perturbed state rho_phi ~ exp(log rho_psi - Q)
RelativeCocycle relative_cocycle(const GnsContext& ctx_psi, const CMatrix& Q, double t,
                                 const SeriesBudget& budget);

// closed-form comparison point: exp(it K) rho_psi^{-it} with K = log rho_psi - Q;
// equals u_t exactly (the normalized-state cocycle differs by the phase Z^{it})
CMatrix relative_cocycle_oracle(const GnsContext& ctx_psi, const CMatrix& Q, double t);

// intertwining residuals: [0] u tau^psi_t(A) u^{-1} = tau^phi_t(A) (asserted),
// [1] the as-printed variant u tau^psi_t(A) = tau^phi_t(A) u_hat (informational)
std::vector<BoundReport> check_cocycle_intertwining(const GnsContext& ctx_psi, const CMatrix& Q,
                                                    double t, const SeriesBudget& budget,
                                                    std::uint64_t seed);

}  // namespace kmslab

#endif
