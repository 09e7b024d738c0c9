#include "kmslab/expansional.hpp"

#include <cmath>
#include <sstream>

#include "kmslab/quadrature.hpp"

namespace kmslab {

namespace {

// sum_{n > N} x^n / n!
double factorial_tail(double x, int N) {
    if (x <= 0.0) return 0.0;
    double term = 1.0;
    for (int n = 1; n <= N; ++n) term *= x / n;
    double acc = 0.0;
    for (int n = N + 1; n <= N + 400; ++n) {
        term *= x / n;
        acc += term;
        if (term < 1e-300 || term < 1e-18 * acc) break;
    }
    return acc;
}

int certified_order(double x, const SeriesBudget& budget) {
    if (budget.policy == SeriesBudget::Policy::fixed_order) return budget.max_order;
    for (int n = 0; n <= budget.max_order; ++n)
        if (factorial_tail(x, n) <= budget.tolerance) return n;
    throw BudgetExhausted("series tail cannot reach tolerance within max_order");
}

CMatrix expansional_on_grid(const OperatorPath& path, double t, Side side, int order,
                            int panels) {
    PanelGrid grid(t, panels);
    const int m = grid.size();
    std::vector<CMatrix> avals(m);
    for (int k = 0; k < m; ++k) {
        avals[k] = path.evaluate(grid.abscissae()[k]);
        if (avals[k].cwiseAbs().maxCoeff() > path.sup_bound * (1.0 + 1e-9) + 1e-12)
            throw DomainViolation("path exceeds its stated sup bound");
    }
    const int d = static_cast<int>(avals[0].rows());
    CMatrix total = CMatrix::Identity(d, d);
    std::vector<CMatrix> layer(m, CMatrix::Identity(d, d));
    std::vector<CMatrix> integrand(m);
    for (int n = 1; n <= order; ++n) {
        for (int k = 0; k < m; ++k)
            integrand[k] = (side == Side::right) ? CMatrix(layer[k] * avals[k])
                                                 : CMatrix(avals[k] * layer[k]);
        total += grid.full_integral(integrand);  // the order-n term at the endpoint
        layer = grid.cumulative_integral(integrand);
    }
    return total;
}

}  // namespace

CMatrix expansional(const OperatorPath& path, double t, Side side, const SeriesBudget& budget) {
    if (t < 0.0 || t > path.horizon * (1.0 + 1e-12) + 1e-15)
        throw DomainViolation("t outside [0, horizon]");
    if (t == 0.0) {
        const int d = static_cast<int>(path.evaluate(0.0).rows());
        return CMatrix::Identity(d, d);
    }
    const int order = certified_order(path.sup_bound * t, budget);
    int panels = 2;
    CMatrix prev = expansional_on_grid(path, t, side, order, panels);
    for (; panels <= 64; panels *= 2) {
        CMatrix next = expansional_on_grid(path, t, side, order, panels * 2);
        if ((next - prev).cwiseAbs().maxCoeff() <= budget.tolerance / 10.0) return next;
        prev = next;
    }
    throw ConvergenceFailure("panel refinement did not stabilize");
}

std::vector<BoundReport> check_cocycle_properties(const OperatorPath& path, double t,
                                                  double tprime, const SeriesBudget& budget) {
    const int d = static_cast<int>(path.evaluate(0.0).rows());
    const CMatrix id = CMatrix::Identity(d, d);
    OperatorPath minus{[&path](double s) { return CMatrix(-path.evaluate(s)); },
                       path.sup_bound, path.horizon};
    OperatorPath shifted{[&path, t](double s) { return path.evaluate(s + t); },
                         path.sup_bound, path.horizon - t};

    CMatrix er = expansional(path, t, Side::right, budget);
    CMatrix el_minus = expansional(minus, t, Side::left, budget);
    const double tol = budget.tolerance * 100.0;

    std::vector<BoundReport> rows;
    rows.push_back(make_report("expansional.inverse_lr", d, "",
                               op_norm(el_minus * er - id), tol));
    rows.push_back(make_report("expansional.inverse_rl", d, "",
                               op_norm(er * el_minus - id), tol));

    CMatrix er_shift = expansional(shifted, tprime, Side::right, budget);
    CMatrix er_total = expansional(path, t + tprime, Side::right, budget);
    rows.push_back(make_report("expansional.compose_r", d, "",
                               op_norm(er * er_shift - er_total), tol));

    CMatrix el = expansional(path, t, Side::left, budget);
    CMatrix el_shift = expansional(shifted, tprime, Side::left, budget);
    CMatrix el_total = expansional(path, t + tprime, Side::left, budget);
    rows.push_back(make_report("expansional.compose_l", d, "",
                               op_norm(el_shift * el - el_total), tol));
    return rows;
}

BoundReport check_derivative_law(const OperatorPath& path, double t, double h,
                                 const SeriesBudget& budget) {
    CMatrix plus = expansional(path, t + h, Side::right, budget);
    CMatrix minus = expansional(path, t - h, Side::right, budget);
    CMatrix diff = (plus - minus) / (2.0 * h);
    CMatrix stated = expansional(path, t, Side::right, budget) * path.evaluate(t);
    const double resid = op_norm(diff - stated);
    const double r = path.sup_bound;
    const double curvature_scale = 10.0 * std::exp(r * t) * std::pow(1.0 + r, 3);
    const double tol = std::max(1e-6, curvature_scale * h * h);
    std::ostringstream tag;
    tag << "t=" << t << ";h=" << h;
    return make_report("expansional.derivative_law", static_cast<int>(stated.rows()),
                       tag.str(), resid, tol);
}

std::vector<BoundReport> interchange_identity(const CMatrix& A, const CMatrix& B, double t,
                                              const SeriesBudget& budget) {
    if (hermitian_deviation(A) > 1e-10 * (1 + op_norm(A)) ||
        hermitian_deviation(B) > 1e-10 * (1 + op_norm(B)))
        throw NotHermitian("interchange identity needs self-adjoint generators");
    const int d = static_cast<int>(A.rows());
    CMatrix lhs = exp_scaled_hermitian(A + B, Complex(0, t)) *
                  exp_scaled_hermitian(B, Complex(0, -t));

    auto conjugated = [&](double s) {
        CMatrix u = exp_scaled_hermitian(B, Complex(0, s));
        return CMatrix(u * A * u.adjoint());
    };
    const double bound = op_norm(A) + 1e-12;
    OperatorPath matched{[&](double s) { return CMatrix(Complex(0, 1) * conjugated(s)); },
                         bound, t};
    OperatorPath printed{[&](double s) { return conjugated(s); }, bound, t};

    CMatrix rhs_matched = expansional(matched, t, Side::right, budget);
    CMatrix rhs_printed = expansional(printed, t, Side::left, budget);

    std::vector<BoundReport> rows;
    std::ostringstream tag;
    tag << "t=" << t;
    rows.push_back(make_report("expansional.interchange", d, tag.str(),
                               op_norm(lhs - rhs_matched), budget.tolerance * 100.0));
    rows.push_back(make_report("expansional.interchange_printed_form.info", d, tag.str(),
                               op_norm(lhs - rhs_printed), budget.tolerance * 100.0));
    return rows;
}

namespace {

CMatrix flowed_perturbation_path(const GnsContext& ctx, const CMatrix& Q, double s,
                                 Complex unit) {
    return CMatrix(unit * modular_flow(ctx, Q, s));
}

}  // namespace

RelativeCocycle relative_cocycle(const GnsContext& ctx_psi, const CMatrix& Q, double t,
                                 const SeriesBudget& budget) {
    if (hermitian_deviation(Q) > 1e-10 * (1 + op_norm(Q)))
        throw NotHermitian("relative cocycle needs Q = Q*");
    const double bound = op_norm(Q) + 1e-12;
    OperatorPath forward{[&](double s) {
                             return flowed_perturbation_path(ctx_psi, Q, s, Complex(0, -1));
                         },
                         bound, std::abs(t)};
    OperatorPath backward{[&](double s) {
                              return flowed_perturbation_path(ctx_psi, Q, s, Complex(0, 1));
                          },
                          bound, std::abs(t)};
    RelativeCocycle out;
    out.u = expansional(forward, t, Side::right, budget);
    out.u_hat = expansional(backward, t, Side::left, budget);
    return out;
}

CMatrix relative_cocycle_oracle(const GnsContext& ctx_psi, const CMatrix& Q, double t) {
    CMatrix K = matrix_log_hermitian(ctx_psi.rho) - Q;
    return exp_scaled_hermitian(K, Complex(0, t)) *
           hermitian_complex_power(ctx_psi.rho_eigen, Complex(0, -t));
}

std::vector<BoundReport> check_cocycle_intertwining(const GnsContext& ctx_psi, const CMatrix& Q,
                                                    double t, const SeriesBudget& budget,
                                                    std::uint64_t seed) {
    RelativeCocycle rc = relative_cocycle(ctx_psi, Q, t, budget);
    CMatrix K = matrix_log_hermitian(ctx_psi.rho) - Q;
    CMatrix rho_phi = matrix_exp_hermitian(K);
    rho_phi /= rho_phi.trace();
    GnsContext ctx_phi = build_gns(rho_phi, ctx_psi.beta_convention);

    RandomSource rng(seed);
    const int d = ctx_psi.dim;
    double r_std = 0.0, r_printed = 0.0;
    for (int k = 0; k < 6; ++k) {
        CMatrix A = random_matrix(d, rng);
        CMatrix lhs = rc.u * modular_flow(ctx_psi, A, t) * rc.u.adjoint();
        CMatrix rhs = modular_flow(ctx_phi, A, t);
        r_std = std::max(r_std, op_norm(lhs - rhs) / op_norm(A));
        CMatrix lhs_p = rc.u * modular_flow(ctx_psi, A, t);
        CMatrix rhs_p = modular_flow(ctx_phi, A, t) * rc.u_hat;
        r_printed = std::max(r_printed, op_norm(lhs_p - rhs_p) / op_norm(A));
    }
    std::vector<BoundReport> rows;
    std::ostringstream tag;
    tag << "t=" << t;
    rows.push_back(make_report("cocycle.intertwine", d, tag.str(), r_std,
                               budget.tolerance * 1000.0, seed));
    rows.push_back(make_report("cocycle.intertwine_printed_form.info", d, tag.str(), r_printed,
                               budget.tolerance * 1000.0, seed));
    return rows;
}

}  // namespace kmslab
