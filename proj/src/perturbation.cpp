#include "kmslab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <map>

#include "kmslab/quadrature.hpp"
#include "kmslab/schatten.hpp"

namespace kmslab {

namespace {
constexpr double kImTol = 1e-12;
}

bool SimplexDomain::contains(const std::vector<double>& im, double margin) const {
    if (static_cast<int>(im.size()) != n) return false;
    double total = 0.0;
    for (double y : im) {
        if (y >= -margin) return false;
        total += y;
    }
    return total > -alpha + margin && total < -margin * n;
}

std::vector<std::vector<double>> SimplexDomain::vertex_patterns() const {
    std::vector<std::vector<double>> out;
    out.emplace_back(n, 0.0);
    for (int l = 0; l < n; ++l) {
        std::vector<double> y(n, 0.0);
        y[l] = -alpha;
        out.push_back(std::move(y));
    }
    return out;
}

std::vector<double> SimplexDomain::sample_interior(RandomSource& rng) const {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> y(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] = -rng.uniform(1e-3, alpha - 1e-3);
            total += y[i];
        }
        if (total > -alpha + 1e-3) return y;
    }
    throw ConvergenceFailure("interior sampling of the simplex failed");
}

CMatrix multi_time_vector(const MultiTimeConfig& cfg) {
    if (!cfg.ctx) throw ValidationError("missing GNS context");
    if (cfg.Q_list.size() != cfg.z_list.size())
        throw ValidationError("Q and z lists differ in length");
    const GnsContext& ctx = *cfg.ctx;
    CMatrix x = ctx.omega;
    for (std::size_t j = 0; j < cfg.Q_list.size(); ++j) {
        const Complex z = cfg.z_list[j];
        if (z.imag() > kImTol || z.imag() < -0.5 - kImTol)
            throw DomainViolation("Im z outside [-1/2, 0]");
        x = cfg.Q_list[j] * x;
        x = delta_power_apply(ctx, x, Complex(0, 1) * z);
    }
    return x;
}

namespace {

double gns_norm(const CMatrix& x) { return x.norm(); }

// H is the rank-one projector onto the cyclic vector, and its square root the
// projector itself up to the scalar ||Omega||. Both candidate prefactors are
// computed from that single singular value:
//   statement form: ||H||_p^{1/2} = ||Omega||,   proof form: ||H^{1/2}||_{2p} = ||Omega||
double tr_rhs(const GnsContext& ctx, const std::vector<CMatrix>& qs, double /*p*/, double q,
              TrBound which, bool proof_variant) {
    const int n = static_cast<int>(qs.size());
    const double sv = ctx.omega.squaredNorm();  // singular value of H
    const double hfac = proof_variant ? std::sqrt(sv) : std::sqrt(sv);
    if (which == TrBound::TR0) {
        double prod = 1.0;
        for (const auto& Q : qs) prod *= represented_schatten_norm(Q, 2.0 * n * q);
        return hfac * prod;
    }
    double best = 0.0;
    for (int l = 0; l <= n - 1; ++l) {
        double prod = 1.0;
        for (int j = 1; j <= l; ++j)
            prod *= represented_schatten_norm(qs[j - 1], 4.0 * l * q);
        for (int j = l + 1; j <= n; ++j)
            prod *= represented_schatten_norm(qs[j - 1], 4.0 * (n - l) * q);
        best = std::max(best, prod);
    }
    return hfac * best;
}

}  // namespace

std::vector<BoundReport> check_tr_bounds(const GnsContext& ctx,
                                         const std::vector<CMatrix>& Q_list, double p,
                                         double q, TrBound which, int interior_points,
                                         std::uint64_t seed) {
    if (std::abs(inv_index(p) + inv_index(q) - 1.0) > kIndexTol)
        throw IndexMismatch("p and q must be conjugate");
    const int n = static_cast<int>(Q_list.size());
    if (n == 0) throw ValidationError("need at least one perturbation");

    if (which == TrBound::TR0) {
        // hypothesis: the represented Schatten norms of Q and J Q J agree
        for (int m = 1; m <= n; ++m) {
            for (const auto& Q : Q_list) {
                const double r = 2.0 * m * q;
                const double left = schatten_norm(left_multiplier_matrix(Q), r);
                const double right = schatten_norm(right_multiplier_matrix(Q.adjoint()), r);
                if (std::abs(left - right) > 1e-8 * std::max(1.0, left))
                    throw HypothesisViolated("J Q J norm symmetry fails");
            }
        }
    }

    const double rhs_main = tr_rhs(ctx, Q_list, p, q, which, false);
    const double rhs_proof = tr_rhs(ctx, Q_list, p, q, which, true);
    const char* label = which == TrBound::TR0 ? "tr0" : "tr1";

    SimplexDomain dom{n, 0.5};
    RandomSource rng(seed);
    std::vector<std::vector<double>> im_samples = dom.vertex_patterns();
    for (int k = 0; k < interior_points; ++k) im_samples.push_back(dom.sample_interior(rng));

    std::vector<BoundReport> rows;
    MultiTimeConfig cfg;
    cfg.ctx = &ctx;
    cfg.Q_list = Q_list;
    cfg.p = p;
    cfg.q = q;
    for (const auto& im : im_samples) {
        cfg.z_list.clear();
        for (int j = 0; j < n; ++j) cfg.z_list.emplace_back(rng.uniform(-2.0, 2.0), im[j]);
        const double lhs = gns_norm(multi_time_vector(cfg));
        std::ostringstream tag;
        tag << "n=" << n << ";q=" << q;
        rows.push_back(make_report(label, ctx.dim, tag.str(), lhs, rhs_main, seed));
        if (which == TrBound::TR0)
            rows.push_back(make_report(std::string(label) + ".proof_variant", ctx.dim,
                                       tag.str(), lhs, rhs_proof, seed));
    }
    return rows;
}

BoundReport morera_analyticity_probe(const GnsContext& ctx,
                                     const std::vector<CMatrix>& Q_list,
                                     const std::vector<Complex>& base_z, int vary_coord,
                                     const std::array<Complex, 3>& triangle,
                                     std::uint64_t seed) {
    const int n = static_cast<int>(Q_list.size());
    SimplexDomain dom{n, 0.5};
    for (const Complex& corner : triangle) {
        std::vector<double> im;
        for (int j = 0; j < n; ++j)
            im.push_back(j == vary_coord ? corner.imag() : base_z[j].imag());
        if (!dom.contains(im, 1e-9))
            throw DomainViolation("triangle leaves the interior of the tube");
    }

    RandomSource rng(seed);
    CMatrix xi = random_matrix(ctx.dim, rng);
    xi /= xi.norm();

    MultiTimeConfig cfg;
    cfg.ctx = &ctx;
    cfg.Q_list = Q_list;
    cfg.z_list = base_z;
    auto g = [&](Complex w) {
        cfg.z_list[vary_coord] = w;
        CMatrix v = multi_time_vector(cfg);
        return Complex((xi.conjugate().cwiseProduct(v)).sum());
    };

    Complex contour(0, 0);
    double perimeter = 0.0, peak = 0.0;
    for (int e = 0; e < 3; ++e) {
        const Complex a = triangle[e], b = triangle[(e + 1) % 3];
        PanelGrid grid(1.0, 2);
        std::vector<Complex> vals(grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            const Complex w = a + grid.abscissae()[k] * (b - a);
            vals[k] = g(w);
            peak = std::max(peak, std::abs(vals[k]));
        }
        contour += (b - a) * grid.full_integral(vals);
        perimeter += std::abs(b - a);
    }
    std::ostringstream tag;
    tag << "n=" << n << ";coord=" << vary_coord;
    return make_report("morera", ctx.dim, tag.str(), std::abs(contour),
                       1e-8 * perimeter * std::max(peak, 1e-300), seed);
}

void ConvergenceTrace::write_csv(std::ostream& os) const {
    os << "order,term_norm,partial_norm,certified_tail\n";
    for (std::size_t i = 0; i < orders.size(); ++i)
        os << orders[i] << ',' << format_double(term_norms[i]) << ','
           << format_double(partial_norms[i]) << ',' << format_double(certified_tails[i])
           << '\n';
}

namespace {

// -------------------------------------------------------------------------
// simplex series engine: sum_n w^n sum_{paths} (prod B') W-kernel, grouped by
// the multiset of eigenvalue indices visited (the kernel is a divided
// difference, symmetric in the accumulated nodes)

using Key = std::uint64_t;  // 8-bit counts per eigen index, dims <= 8

inline Key bump(Key key, int a) { return key + (Key(1) << (8 * a)); }
inline int count_of(Key key, int a) { return int((key >> (8 * a)) & 0xff); }

struct SeriesResult {
    CMatrix vec;
    ConvergenceTrace trace;
};

// certified remainder: kappa-type prefactor times the factorial tail of
// (|w| T ||B||)
double series_tail(double spread, Complex w, double T, double bnorm, int after_order) {
    double x = std::abs(w) * T * bnorm;
    double term = 1.0;
    for (int n = 1; n <= after_order; ++n) term *= x / n;
    double acc = 0.0;
    for (int n = after_order + 1; n <= after_order + 500; ++n) {
        term *= x / n;
        acc += term;
        if (term < 1e-300 || term < 1e-18 * acc) break;
    }
    return std::exp(std::abs(w.real()) * spread * T) * acc;
}

SeriesResult simplex_series(const GnsContext& ctx, const CMatrix& B, Complex w, double T,
                            const SeriesBudget& budget) {
    const int d = ctx.dim;
    if (d > 8) throw ValidationError("series engine supports dim <= 8");
    const CMatrix& V = ctx.rho_eigen.vectors;
    const CMatrix Bp = V.adjoint() * B * V;
    const RVector& logp = ctx.log_p;  // ascending
    const double spread = logp(d - 1) - logp(0);
    const double bnorm = op_norm(B);

    int order_cap = budget.max_order;
    if (budget.policy == SeriesBudget::Policy::certified_tail) {
        int n = 0;
        while (n <= budget.max_order &&
               series_tail(spread, w, T, bnorm, n) > budget.tolerance)
            ++n;
        if (n > budget.max_order)
            throw BudgetExhausted("certified series tail cannot reach tolerance");
        order_cap = n;
    }

    std::map<Key, Complex> kernel_memo;
    auto kernel = [&](Key key) -> Complex {
        auto it = kernel_memo.find(key);
        if (it != kernel_memo.end()) return it->second;
        // expand the multiset in ascending node order
        std::vector<double> nodes;
        for (int a = 0; a < d; ++a)
            for (int c = 0; c < count_of(key, a); ++c) nodes.push_back(logp(a));
        std::vector<Complex> mu(nodes.size() - 1);
        for (std::size_t i = 1; i < nodes.size(); ++i)
            mu[i - 1] = w * (nodes[i] - nodes[i - 1]);
        const Complex val = std::exp(w * T * nodes.front()) * simplex_weight(mu, T);
        kernel_memo.emplace(key, val);
        return val;
    };

    // polynomial transfer: coefficient matrices by visited-index multiset
    std::map<Key, CMatrix> coef;
    for (int i = 0; i < d; ++i) {
        CMatrix c = CMatrix::Zero(d, d);
        c(i, i) = 1.0;
        coef[bump(0, i)] = std::move(c);
    }

    SeriesResult out;
    out.vec = CMatrix::Zero(d, d);
    CMatrix partial_eig = CMatrix::Zero(d, d);
    Complex wpow(1.0, 0.0);
    for (int n = 0; n <= order_cap; ++n) {
        if (n > 0) {
            std::map<Key, CMatrix> next;
            for (const auto& [key, c] : coef) {
                CMatrix m = Bp * c;
                for (int a = 0; a < d; ++a) {
                    auto [it, inserted] = next.try_emplace(bump(key, a));
                    if (inserted) it->second = CMatrix::Zero(d, d);
                    it->second.row(a) += m.row(a);
                }
            }
            coef = std::move(next);
            wpow *= w;
        }
        CMatrix term = CMatrix::Zero(d, d);
        for (const auto& [key, c] : coef) {
            const Complex k = kernel(key);
            term += k * c;
        }
        for (int i = 0; i < d; ++i) {
            const Complex start = std::sqrt(ctx.rho_eigen.values(i)) *
                                  std::exp(-w * T * logp(i));
            term.col(i) *= start;
        }
        term *= wpow;
        partial_eig += term;
        out.trace.orders.push_back(n);
        out.trace.term_norms.push_back(term.norm());
        out.trace.partial_norms.push_back(partial_eig.norm());
        out.trace.certified_tails.push_back(series_tail(spread, w, T, bnorm, n));
    }
    out.vec = V * partial_eig * V.adjoint();
    return out;
}

}  // namespace

std::pair<CMatrix, ConvergenceTrace> perturbed_kms_vector(const GnsContext& ctx,
                                                          const CMatrix& Q,
                                                          const SeriesBudget& budget) {
    if (hermitian_deviation(Q) > 1e-10 * (1 + op_norm(Q)))
        throw NotHermitian("perturbation must be self-adjoint");
    SeriesResult r = simplex_series(ctx, CMatrix(-Q), Complex(1.0, 0.0), 0.5, budget);
    return {r.vec, r.trace};
}

CMatrix perturbed_vector_oracle(const GnsContext& ctx, const CMatrix& Q) {
    CMatrix K = matrix_log_hermitian(ctx.rho) - Q;
    return exp_scaled_hermitian(K, Complex(0.5, 0.0));
}

std::vector<BoundReport> cr1_domination_check(const GnsContext& ctx, const CMatrix& Q,
                                              double q_index, const ConvergenceTrace& trace) {
    std::vector<BoundReport> rows;
    const double h_half = std::sqrt(ctx.omega.squaredNorm());
    double log_half_pow = 0.0;  // log((1/2)^n / n!)
    for (std::size_t i = 0; i < trace.orders.size(); ++i) {
        const int n = trace.orders[i];
        double bound;
        if (n == 0) {
            bound = h_half;
        } else {
            const double a = represented_schatten_norm(Q, 4.0 * q_index) *
                             std::pow(represented_schatten_norm(Q, 4.0 * (n > 1 ? n - 1 : 1) *
                                                                       q_index),
                                      n - 1.0);
            const double b = std::pow(represented_schatten_norm(Q, 4.0 * n * q_index),
                                      double(n));
            log_half_pow += std::log(0.5) - std::log(double(n));
            bound = std::exp(log_half_pow) * std::max(a, b) * h_half;
        }
        std::ostringstream tag;
        tag << "order=" << n << ";q=" << q_index;
        rows.push_back(make_report("cr1_domination", ctx.dim, tag.str(), trace.term_norms[i],
                                   bound));
    }
    return rows;
}

std::vector<BoundReport> interpolation_inequality_check(const CMatrix& Qpos, double q_index,
                                                        int n, const std::vector<double>& zs) {
    HermitianEigen eig = eig_hermitian(Qpos);
    if (eig.values(0) < -1e-12 * std::abs(eig.values(eig.values.size() - 1)))
        throw NotPositiveDefinite("interpolation inequality needs Q >= 0");
    auto tau_pow = [&](double s) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > 0.0) acc += std::pow(eig.values(i), s);
        return acc;
    };
    const double q4 = 4.0 * q_index;
    const double rhs = std::pow(tau_pow(q4), 1.0 / q4) *
                       std::pow(std::pow(tau_pow(4.0 * (n - 1) * q_index),
                                         1.0 / (4.0 * (n - 1) * q_index)),
                                n - 1.0);
    std::vector<BoundReport> rows;
    for (double z : zs) {
        if (z < 1.0 || z > n - 1.0) throw DomainViolation("z outside [1, n-1]");
        const double lhs = std::pow(tau_pow(4.0 * z * q_index), 1.0 / q4) *
                           std::pow(tau_pow(4.0 * (n - z) * q_index), 1.0 / q4);
        std::ostringstream tag;
        tag << "n=" << n << ";z=" << z << ";q=" << q_index;
        rows.push_back(make_report("riesz_thorin_step", static_cast<int>(Qpos.rows()),
                                   tag.str(), lhs, rhs));
    }
    return rows;
}

std::vector<BoundReport> perturbed_state_kms_check(const GnsContext& ctx, const CMatrix& Q,
                                                   const SeriesBudget& budget, int trials,
                                                   std::uint64_t seed) {
    auto [vec, trace] = perturbed_kms_vector(ctx, Q, budget);
    vec /= vec.norm();
    const CMatrix rho_q = vec * vec.adjoint();

    CMatrix G = Q - matrix_log_hermitian(ctx.rho);
    CMatrix ref = exp_scaled_hermitian(G, Complex(-1.0, 0.0));
    ref /= ref.trace();

    std::vector<BoundReport> rows;
    rows.push_back(make_report("perturbed.state_density", ctx.dim, "",
                               0.5 * schatten_norm(rho_q - ref, 1.0), 1e-7, seed));

    RandomSource rng(seed);
    HermitianEigen eig_g = eig_hermitian(G);
    auto flow_g = [&](const CMatrix& X, Complex z) {
        // e^{izG} X e^{-izG}
        CMatrix u = eig_g.vectors.adjoint() * X * eig_g.vectors;
        for (int a = 0; a < ctx.dim; ++a)
            for (int b = 0; b < ctx.dim; ++b)
                u(a, b) *= std::exp(Complex(0, 1) * z * (eig_g.values(a) - eig_g.values(b)));
        return CMatrix(eig_g.vectors * u * eig_g.vectors.adjoint());
    };
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        CMatrix A = random_matrix(ctx.dim, rng);
        CMatrix B = random_matrix(ctx.dim, rng);
        const double t = rng.uniform(-1.5, 1.5);
        const Complex lhs = (rho_q * A * flow_g(B, Complex(t, 1.0))).trace();
        const Complex rhs = (rho_q * flow_g(B, Complex(t, 0.0)) * A).trace();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::ostringstream tag;
    tag << "beta=+1;trials=" << trials;
    rows.push_back(make_report("perturbed.kms_boundary", ctx.dim, tag.str(), worst, 1e-7,
                               seed));
    return rows;
}

BoundReport analytic_exponential_identity(const GnsContext& ctx, const CMatrix& Q, Complex z,
                                          const SeriesBudget& budget) {
    if (z.real() <= 0.0 || z.real() >= 0.5)
        throw DomainViolation("Re z outside (0, 1/2)");
    if (hermitian_deviation(Q) > 1e-10 * (1 + op_norm(Q)))
        throw NotHermitian("perturbation must be self-adjoint");
    SeriesResult r = simplex_series(ctx, Q, 2.0 * z, 0.5, budget);
    CMatrix h = matrix_log_hermitian(ctx.rho);
    CMatrix oracle = exp_scaled_hermitian(h + Q, z) * ctx.omega * exp_scaled_hermitian(h, -z);
    std::ostringstream tag;
    tag << "z=" << z.real() << "+" << z.imag() << "i";
    return make_report("analytic_exponential", ctx.dim, tag.str(), (r.vec - oracle).norm(),
                       1e-6);
}

ConvergenceTrace approximation_stability(const GnsContext& ctx, const CMatrix& Q,
                                         const std::vector<double>& cuts,
                                         const SeriesBudget& budget) {
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] <= cuts[i - 1]) throw ValidationError("cuts must be increasing");
    HermitianEigen eig = eig_hermitian(Q);
    auto [full, full_trace] = perturbed_kms_vector(ctx, Q, budget);

    ConvergenceTrace out;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        RVector kept = eig.values;
        for (Eigen::Index i = 0; i < kept.size(); ++i)
            if (std::abs(kept(i)) > cuts[k]) kept(i) = 0.0;
        CMatrix Qk = eig.vectors * kept.asDiagonal() * eig.vectors.adjoint();
        auto [vk, tk] = perturbed_kms_vector(ctx, Qk, budget);
        out.orders.push_back(static_cast<int>(k));
        out.term_norms.push_back((vk - full).norm());
        out.partial_norms.push_back(vk.norm());
        out.certified_tails.push_back(tk.certified_tails.back());
    }
    return out;
}

}  // namespace kmslab
