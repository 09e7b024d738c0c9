#include "kmslab/modular_gns.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <sstream>

#include "kmslab/schatten.hpp"

namespace kmslab {

GnsContext build_gns(const CMatrix& rho, double beta_convention) {
    GnsContext ctx;
    ctx.dim = static_cast<int>(rho.rows());
    if (rho.rows() != rho.cols() || ctx.dim < 1)
        throw NotFaithful("density must be a nonempty square matrix");
    ctx.rho = rho;
    ctx.rho_eigen = eig_hermitian(rho);
    const double top = ctx.rho_eigen.values(ctx.dim - 1);
    if (top <= 0.0 || ctx.rho_eigen.values(0) <= kPositivityFloorRel * top)
        throw NotFaithful("density has an eigenvalue at or below the positivity floor");
    const double trace = ctx.rho_eigen.values.sum();
    if (std::abs(trace - 1.0) > 1e-10)
        throw NotNormalized("density trace differs from 1");
    ctx.log_p = ctx.rho_eigen.values.array().log();
    ctx.omega = hermitian_complex_power(ctx.rho_eigen, Complex(0.5, 0.0));
    ctx.beta_convention = beta_convention;
    return ctx;
}

CMatrix delta_power_apply(const GnsContext& ctx, const CMatrix& X, Complex w) {
    const CMatrix& V = ctx.rho_eigen.vectors;
    CMatrix Y = V.adjoint() * X * V;
    for (int a = 0; a < ctx.dim; ++a)
        for (int b = 0; b < ctx.dim; ++b)
            Y(a, b) *= std::exp(w * (ctx.log_p(a) - ctx.log_p(b)));
    return V * Y * V.adjoint();
}

CMatrix s_apply(const GnsContext& ctx, const CMatrix& X) {
    CMatrix inv_root = hermitian_complex_power(ctx.rho_eigen, Complex(-0.5, 0.0));
    return inv_root * X.adjoint() * ctx.omega;
}

CMatrix modular_flow(const GnsContext& ctx, const CMatrix& A, double t) {
    return delta_power_apply(ctx, A, Complex(0.0, t));
}

CMatrix dynamics_flow(const GnsContext& ctx, const CMatrix& A, double t) {
    return modular_flow(ctx, A, ctx.flow_sign() * t);
}

Complex kms_two_point(const GnsContext& ctx, const CMatrix& A, const CMatrix& B, Complex z) {
    const Complex w = Complex(0.0, 1.0) * ctx.flow_sign() * z;
    return (ctx.rho * A * delta_power_apply(ctx, B, w)).trace();
}

std::vector<BoundReport> kms_check(const GnsContext& ctx, int trials,
                                   std::uint64_t seed, double tol) {
    std::vector<BoundReport> rows;
    rows.reserve(trials);
    RandomSource rng(seed);
    for (int k = 0; k < trials; ++k) {
        CMatrix A = random_matrix(ctx.dim, rng);
        CMatrix B = random_matrix(ctx.dim, rng);
        const double t = rng.uniform(-2.0, 2.0);
        const Complex boundary = kms_two_point(ctx, A, B, Complex(t, ctx.beta_convention));
        const Complex flipped = (ctx.rho * dynamics_flow(ctx, B, t) * A).trace();
        const double dev = std::abs(boundary - flipped);
        std::ostringstream tag;
        tag << "t=" << t;
        rows.push_back(make_report("kms_boundary", ctx.dim, tag.str(), dev, tol, seed));
    }
    return rows;
}

RMatrix real_doubled(const GnsContext& ctx, bool antilinear,
                     const std::function<CMatrix(const CMatrix&)>& op) {
    const int d = ctx.dim;
    const int n2 = d * d;
    RMatrix M(2 * n2, 2 * n2);
    CMatrix basis = CMatrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
        for (int a = 0; a < d; ++a) {
            const int k = a + d * b;
            basis(a, b) = Complex(1.0, 0.0);
            CMatrix y = op(basis);
            basis(a, b) = Complex(0.0, 1.0);
            CMatrix yi = antilinear ? op(basis) : CMatrix(Complex(0.0, 1.0) * y);
            basis(a, b) = Complex(0.0, 0.0);
            for (int bb = 0; bb < d; ++bb) {
                for (int aa = 0; aa < d; ++aa) {
                    const int r = aa + d * bb;
                    M(r, k) = std::real(y(aa, bb));
                    M(n2 + r, k) = std::imag(y(aa, bb));
                    M(r, n2 + k) = std::real(yi(aa, bb));
                    M(n2 + r, n2 + k) = std::imag(yi(aa, bb));
                }
            }
        }
    }
    return M;
}

ModularData modular_data(const GnsContext& ctx) {
    ModularData out;
    out.delta_grid.resize(ctx.dim, ctx.dim);
    for (int i = 0; i < ctx.dim; ++i)
        for (int j = 0; j < ctx.dim; ++j)
            out.delta_grid(i, j) = ctx.rho_eigen.values(i) / ctx.rho_eigen.values(j);
    out.s_real = real_doubled(ctx, true, [&](const CMatrix& X) { return s_apply(ctx, X); });
    Eigen::JacobiSVD<RMatrix> svd(out.s_real, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.j_real = svd.matrixU() * svd.matrixV().transpose();
    out.delta_sqrt_real =
        svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
    return out;
}

CMatrix left_multiplier_matrix(const CMatrix& Q) {
    const int d = static_cast<int>(Q.rows());
    CMatrix M = CMatrix::Zero(d * d, d * d);
    for (int b = 0; b < d; ++b)
        M.block(b * d, b * d, d, d) = Q;
    return M;
}

CMatrix right_multiplier_matrix(const CMatrix& Q) {
    const int d = static_cast<int>(Q.rows());
    CMatrix M = CMatrix::Zero(d * d, d * d);
    // vec(X Q) = (Q^T kron I) vec(X), column-major
    for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
            M.block(b * d, c * d, d, d) = Q(c, b) * CMatrix::Identity(d, d);
    return M;
}

double represented_schatten_norm(const CMatrix& Q, double r) {
    if (std::isinf(r)) return schatten_norm(Q, kInf);
    const double d = static_cast<double>(Q.rows());
    return std::pow(d, 1.0 / r) * schatten_norm(Q, r);
}

namespace {

double frob(const CMatrix& X) { return X.norm(); }

}  // namespace

std::vector<BoundReport> modular_invariant_checks(const GnsContext& ctx,
                                                  std::uint64_t seed) {
    std::vector<BoundReport> rows;
    RandomSource rng(seed);
    const int d = ctx.dim;
    const int probes = 8;

    double r_s = 0, r_j2 = 0, r_jdj = 0, r_state = 0, r_group = 0, r_inv = 0;
    double r_iso = 0, r_jqj = 0;
    for (int k = 0; k < probes; ++k) {
        CMatrix X = random_matrix(d, rng);
        const double nx = frob(X);
        r_s = std::max(r_s, frob(s_apply(ctx, X) -
                                 j_apply(delta_power_apply(ctx, X, Complex(0.5, 0)))) / nx);
        r_j2 = std::max(r_j2, frob(j_apply(j_apply(X)) - X) / nx);
        r_jdj = std::max(r_jdj,
                         frob(j_apply(delta_power_apply(ctx, j_apply(X), Complex(1, 0))) -
                              delta_power_apply(ctx, X, Complex(-1, 0))) / nx);

        CMatrix A = random_matrix(d, rng);
        const Complex lhs_state = (ctx.omega.adjoint() * (A * ctx.omega)).trace();
        const Complex rhs_state = (ctx.rho * A).trace();
        r_state = std::max(r_state, std::abs(lhs_state - rhs_state));

        const double t1 = rng.uniform(-1.5, 1.5), t2 = rng.uniform(-1.5, 1.5);
        r_group = std::max(r_group,
                           frob(modular_flow(ctx, modular_flow(ctx, A, t1), t2) -
                                modular_flow(ctx, A, t1 + t2)) / frob(A));
        r_inv = std::max(r_inv, std::abs((ctx.rho * modular_flow(ctx, A, t1)).trace() -
                                         (ctx.rho * A).trace()));

        for (double p : {1.0, 2.0, kInf})
            for (double t : {-1.0, 0.3, 7.0})
                r_iso = std::max(r_iso, std::abs(schatten_norm(modular_flow(ctx, A, t), p) -
                                                 schatten_norm(A, p)));

        // J pi(Q) J is right multiplication by Q*; its represented Schatten
        // norms must match pi(Q)'s
        CMatrix Q = random_matrix(d, rng);
        for (double r : {2.0, 4.0}) {
            const double left = schatten_norm(left_multiplier_matrix(Q), r);
            const double right = schatten_norm(right_multiplier_matrix(Q.adjoint()), r);
            r_jqj = std::max(r_jqj, std::abs(left - right) / left);
        }
    }

    rows.push_back(make_report("modular.s_eq_jdelta", d, "", r_s, 1e-10, seed));
    rows.push_back(make_report("modular.j_squared", d, "", r_j2, 1e-10, seed));
    rows.push_back(make_report("modular.jdj_delta_inv", d, "", r_jdj, 1e-10, seed));
    rows.push_back(make_report("modular.delta_omega", d, "",
                               frob(delta_power_apply(ctx, ctx.omega, Complex(1, 0)) - ctx.omega),
                               1e-10, seed));
    rows.push_back(make_report("modular.j_omega", d, "", frob(j_apply(ctx.omega) - ctx.omega),
                               1e-10, seed));
    rows.push_back(make_report("modular.state_reproduction", d, "", r_state, 1e-11, seed));
    rows.push_back(make_report("modular.flow_group_law", d, "", r_group, 1e-10, seed));
    rows.push_back(make_report("modular.state_invariance", d, "", r_inv, 1e-10, seed));
    rows.push_back(make_report("modular.flow_isometry", d, "p in {1,2,inf}", r_iso, 1e-10, seed));
    rows.push_back(make_report("modular.jqj_norm_symmetry", d, "r in {2,4}", r_jqj, 1e-10, seed));

    // assembled antilinear S against the closed forms, through its real polar split
    ModularData md = modular_data(ctx);
    RMatrix j_closed = real_doubled(ctx, true, [&](const CMatrix& X) { return j_apply(X); });
    RMatrix d_closed = real_doubled(ctx, false, [&](const CMatrix& X) {
        return delta_power_apply(ctx, X, Complex(0.5, 0));
    });
    const double dev = std::max((md.j_real - j_closed).cwiseAbs().maxCoeff(),
                                (md.delta_sqrt_real - d_closed).cwiseAbs().maxCoeff());
    rows.push_back(make_report("modular.s_polar_consistency", d, "", dev, 1e-9, seed));
    return rows;
}

}  // namespace kmslab
