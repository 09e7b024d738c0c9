#include "kmslab/exponentiable.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kmslab/matrix_core.hpp"

namespace kmslab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log of an upper bound for sum_{j>N} x^j/j!; +inf until N+2 > x
double log_factorial_tail_bound(double x, int N) {
    if (x <= 0.0) return kNegInf;
    if (x >= N + 2.0) return kPosInf;
    return (N + 1.0) * std::log(x) - std::lgamma(N + 2.0) - std::log1p(-x / (N + 2.0));
}

std::optional<DivergenceWitness> find_divergence_witness(const StepFunction& f, double p,
                                                         double lambda,
                                                         double threshold = 1e6) {
    const double a = 1.0 / p;
    for (int m = 1; m <= 512; ++m) {
        const double r = f.ratio_lower(0.0, a, lambda, 2, m);
        if (r >= 1.0) {
            DivergenceWitness w;
            w.level_m0 = m;
            w.ratio = r;
            w.at_lambda = lambda;
            w.threshold = threshold;
            // lower-bound comparison series: mu_k^{1/p} (e^{lambda v_k} - 1)
            double partial = 0.0;
            for (int k = m; k <= m + 1000000; ++k) {
                const double x = lambda * f.value(k);
                const double lg = a * f.log_measure(k) + x + std::log1p(-std::exp(-x));
                partial += std::exp(lg);
                if (partial > threshold) {
                    w.order_nstar = k;
                    w.partial_sum = partial;
                    return w;
                }
            }
            w.order_nstar = -1;  // ratio certificate alone
            w.partial_sum = partial;
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace

nlohmann::json DivergenceWitness::to_json() const {
    return {{"level_m0", level_m0}, {"ratio", ratio},      {"at_lambda", at_lambda},
            {"order", order_nstar}, {"partial_sum", partial_sum}, {"threshold", threshold}};
}

nlohmann::json ExponentiabilityCertificate::to_json() const {
    nlohmann::json j;
    switch (verdict) {
        case Verdict::converges: j["verdict"] = "converges"; break;
        case Verdict::diverges: j["verdict"] = "diverges"; break;
        case Verdict::inconclusive: j["verdict"] = "inconclusive"; break;
    }
    if (std::isfinite(value)) j["value"] = value;
    j["orders_used"] = orders_used;
    j["tail_bound"] = tail_bound;
    if (witness) j["witness"] = witness->to_json();
    return j;
}

double lp_norm_step(const StepFunction& f, double p) {
    if (p < 1.0) throw IndexOrdering("p must be >= 1");
    LevelSum s = certified_level_sum(f, p, 1.0, 0.0, 0, 1e-12);
    return std::exp(s.log_value / p);
}

ExponentiabilityCertificate exponentiable_series(const StepFunction& f, double p,
                                                 double lambda, const SeriesBudget& budget) {
    if (p < 1.0) throw IndexOrdering("p must be >= 1");
    ExponentiabilityCertificate cert;

    if (std::isinf(lambda)) {
        // all-lambda class: structural verdicts
        if (!f.infinite() || f.mu_ratio_vanishes()) {
            cert.verdict = ExponentiabilityCertificate::Verdict::converges;
            return cert;
        }
        // geometric measures lose to e^{lambda v} for some finite lambda
        for (double cand = 1.0; cand <= 4096.0; cand *= 2.0) {
            if (auto w = find_divergence_witness(f, p, cand)) {
                cert.verdict = ExponentiabilityCertificate::Verdict::diverges;
                cert.witness = w;
                return cert;
            }
        }
        return cert;  // inconclusive
    }
    if (lambda <= 0.0) throw ValidationError("lambda must be positive");

    if (f.infinite()) {
        if (auto w = find_divergence_witness(f, p, lambda)) {
            cert.verdict = ExponentiabilityCertificate::Verdict::diverges;
            cert.value = kPosInf;
            cert.witness = w;
            return cert;
        }
    }

    if (p == 1.0) {
        // exact exchange: sum_m mu_m (e^{lambda v_m} - 1)
        LevelSum s = certified_level_sum(f, 0.0, 1.0, lambda, 2, 1e-13);
        cert.verdict = ExponentiabilityCertificate::Verdict::converges;
        cert.value = std::exp(s.log_value);
        cert.tail_bound = std::exp(s.log_tail);
        cert.orders_used = s.levels_used;
        return cert;
    }

    // p > 1: level horizon from the subadditive comparison series, then the
    // outer series in log space with a factorial remainder for the truncation
    const double a = 1.0 / p;
    LevelSum horizon;
    try {
        horizon = certified_level_sum(f, 0.0, a, lambda, 2, 1e-14);
    } catch (const TailNotCertified&) {
        return cert;  // inconclusive: no convergence certificate, no divergence witness
    }
    const int M = horizon.levels_used;
    const double level_tail = std::exp(horizon.log_tail);

    std::vector<double> log_v(M + 1), log_mu(M + 1);
    for (int m = 1; m <= M; ++m) {
        log_v[m] = std::log(f.value(m));
        log_mu[m] = f.log_measure(m);
    }
    double log_total_mu = kNegInf;
    for (int m = 1; m <= M; ++m) log_total_mu = logsumexp(log_total_mu, log_mu[m]);
    const double x_top = lambda * f.value(M);

    double sum = 0.0;
    for (int n = 1; n <= budget.max_order; ++n) {
        double inner = kNegInf;  // log sum_m v^{np} mu
        for (int m = 1; m <= M; ++m) inner = logsumexp(inner, n * p * log_v[m] + log_mu[m]);
        const double log_tn = n * std::log(lambda) + inner / p - std::lgamma(n + 1.0);
        if (log_tn > 700.0) return cert;  // value overflows a double: inconclusive
        sum += std::exp(log_tn);

        const double log_rem = a * log_total_mu + log_factorial_tail_bound(x_top, n);
        const double target = std::log(std::max(budget.tolerance, 1e-15)) +
                              std::log(std::max(1.0, sum));
        if (log_rem <= target) {
            cert.verdict = ExponentiabilityCertificate::Verdict::converges;
            cert.value = sum;
            cert.orders_used = n;
            cert.tail_bound = level_tail + std::exp(log_rem);
            return cert;
        }
    }
    return cert;  // inconclusive: outer budget exhausted
}

MatrixExponentiability exponentiable_matrix(const CMatrix& A, double tau_scale, double p,
                                            double lambda) {
    if (p < 1.0) throw IndexOrdering("p must be >= 1");
    MatrixExponentiability out;
    RVector sv = singular_values(A);
    const int d = static_cast<int>(sv.size());
    out.sup_norm = d > 0 ? sv(0) : 0.0;

    out.growth.reserve(64);
    for (int n = 1; n <= 64; ++n) {
        double acc = kNegInf;
        for (int i = 0; i < d; ++i)
            if (sv(i) > 0.0) acc = logsumexp(acc, n * std::log(sv(i)));
        const double log_trace = acc + std::log(tau_scale);
        out.growth.push_back(acc == kNegInf ? 0.0 : std::exp(log_trace / n));
    }

    auto& cert = out.cert;
    cert.verdict = ExponentiabilityCertificate::Verdict::converges;
    if (out.sup_norm == 0.0 || std::isinf(lambda)) {
        cert.value = std::isinf(lambda) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
        return out;
    }
    double sum = 0.0;
    const double x = lambda * out.sup_norm;
    for (int n = 1; n <= 100000; ++n) {
        double inner = kNegInf;
        for (int i = 0; i < d; ++i)
            if (sv(i) > 0.0) inner = logsumexp(inner, n * p * std::log(sv(i)));
        inner += std::log(tau_scale);
        sum += std::exp(n * std::log(lambda) + inner / p - std::lgamma(n + 1.0));
        const double log_rem = std::log(tau_scale * d) / p + log_factorial_tail_bound(x, n);
        if (log_rem <= std::log(1e-14) + std::log(std::max(1.0, sum))) {
            cert.orders_used = n;
            cert.tail_bound = std::exp(log_rem);
            break;
        }
    }
    cert.value = sum;
    return out;
}

ConvexityProbe convexity_probe(const StepFunction& f, const StepFunction& g, double theta,
                               double p, const SeriesBudget& budget) {
    ConvexityProbe out;
    out.f_cert = exponentiable_series(f, p, 1.0, budget);
    out.g_cert = exponentiable_series(g, p, 1.0, budget);
    if (out.f_cert.verdict != ExponentiabilityCertificate::Verdict::converges ||
        out.g_cert.verdict != ExponentiabilityCertificate::Verdict::converges)
        throw ValidationError("convexity probe needs both inputs certified convergent");
    StepFunction combo = convex_combination(f, g, theta);
    out.combo_cert = exponentiable_series(combo, p, 1.0, budget);
    const double lhs = out.combo_cert.value;
    const double rhs = theta * out.f_cert.value + (1.0 - theta) * out.g_cert.value;
    std::ostringstream tag;
    tag << "theta=" << theta << ";p=" << p;
    out.convex_bound = make_report("exponentiable.convexity", 0, tag.str(), lhs,
                                   rhs + 1e-9 * (1.0 + rhs));
    return out;
}

BoundReport scaling_law_check(const StepFunction& f, double lambda, double p,
                              const SeriesBudget& budget) {
    ExponentiabilityCertificate at_lambda = exponentiable_series(f, p, lambda, budget);
    ExponentiabilityCertificate scaled =
        exponentiable_series(f.scaled_values(lambda), p, 1.0, budget);
    std::ostringstream tag;
    tag << "lambda=" << lambda << ";p=" << p;
    using V = ExponentiabilityCertificate::Verdict;
    if (at_lambda.verdict != scaled.verdict)
        return make_report("exponentiable.scaling_law", 0, tag.str(), 1.0, 0.0);
    if (at_lambda.verdict == V::converges) {
        const double dev = std::abs(at_lambda.value - scaled.value) /
                           std::max(1.0, std::abs(at_lambda.value));
        return make_report("exponentiable.scaling_law", 0, tag.str(), dev, 1e-9);
    }
    if (at_lambda.verdict == V::diverges) {
        const double dev = std::abs(at_lambda.witness->ratio - scaled.witness->ratio);
        return make_report("exponentiable.scaling_law", 0, tag.str(), dev, 1e-9);
    }
    return make_report("exponentiable.scaling_law.info", 0, tag.str(), 0.0, 0.0);
}

std::vector<std::pair<double, double>> measurability_profile(
    const StepFunction& f, const std::vector<double>& thresholds) {
    std::vector<std::pair<double, double>> out;
    for (double lam : thresholds) {
        if (lam < 0.0) throw ValidationError("thresholds must be nonnegative");
        int keep = 0;
        if (f.infinite()) {
            keep = static_cast<int>(std::floor(lam / f.value_scale() + 1e-12));
        } else {
            while (keep < f.finite_count() && f.value(keep + 1) <= lam) ++keep;
        }
        out.emplace_back(lam, f.tail_measure_after(keep));
    }
    return out;
}

std::pair<StepFunction, double> density_approximation(const StepFunction& f, double p,
                                                      double cut) {
    if (cut < 0.0) throw ValidationError("cut must be nonnegative");
    int keep = 0;
    if (f.infinite()) {
        keep = static_cast<int>(std::floor(cut / f.value_scale() + 1e-12));
    } else {
        while (keep < f.finite_count() && f.value(keep + 1) <= cut) ++keep;
    }
    std::vector<StepLevel> head;
    for (int m = 1; m <= keep; ++m) head.push_back({f.value(m), f.measure(m)});

    double residual = 0.0;
    if (f.infinite()) {
        LevelSum tail = certified_level_sum(f, p, 1.0, 0.0, 0, 1e-12, keep + 1);
        residual = std::exp(tail.log_value / p);
    } else if (keep < f.finite_count()) {
        double acc = kNegInf;
        for (int m = keep + 1; m <= f.finite_count(); ++m)
            acc = logsumexp(acc, p * std::log(f.value(m)) + f.log_measure(m));
        residual = std::exp(acc / p);
    }
    return {StepFunction::finite(std::move(head)), residual};
}

}  // namespace kmslab
