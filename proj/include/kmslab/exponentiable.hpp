#ifndef KMSLAB_EXPONENTIABLE_HPP
#define KMSLAB_EXPONENTIABLE_HPP

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kmslab/bound_report.hpp"
#include "kmslab/expansional.hpp"
#include "kmslab/step_function.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

struct DivergenceWitness {
    int level_m0 = 0;          // first level with certified comparison ratio >= 1
    double ratio = 0.0;        // the certified lower ratio
    double at_lambda = 0.0;    // lambda the witness was produced at
    long long order_nstar = 0; // index at which partial lower-bound sums pass threshold
    double partial_sum = 0.0;
    double threshold = 0.0;
    nlohmann::json to_json() const;
};

struct ExponentiabilityCertificate {
    enum class Verdict { converges, diverges, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    double value = std::numeric_limits<double>::quiet_NaN();
    int orders_used = 0;
    double tail_bound = 0.0;
    std::optional<DivergenceWitness> witness;
    nlohmann::json to_json() const;
};

// (sum_m v_m^p mu_m)^{1/p} with certified relative tail <= 1e-12
double lp_norm_step(const StepFunction& f, double p);

// sum_{n>=1} lambda^n ||f^n||_p / n!. p = 1 is summed exactly in the
// exchanged per-level form; p > 1 sums the outer series in log space against
// a two-part tail certificate (level horizon + factorial remainder of the
// truncation). lambda may be kInf for the all-lambda class; the value field
// is then NaN and only the verdict is meaningful. Verdicts are certificate-
// backed: budget exhaustion yields `inconclusive`, never a guess.
ExponentiabilityCertificate exponentiable_series(const StepFunction& f, double p,
                                                 double lambda, const SeriesBudget& budget);

struct MatrixExponentiability {
    ExponentiabilityCertificate cert;
    std::vector<double> growth;  // tau(|A|^n)^{1/n}, n = 1..64
    double sup_norm = 0.0;
};

// finite dimension: always converges; also reports the growth diagnostic
// tau(|A|^n)^{1/n} -> ||A||
MatrixExponentiability exponentiable_matrix(const CMatrix& A, double tau_scale, double p,
                                            double lambda);

struct ConvexityProbe {
    ExponentiabilityCertificate f_cert, g_cert, combo_cert;
    BoundReport convex_bound;  // value(combo) <= theta value(f) + (1-theta) value(g)
};

ConvexityProbe convexity_probe(const StepFunction& f, const StepFunction& g, double theta,
                               double p, const SeriesBudget& budget);

// membership of f at lambda iff membership of lambda*f at 1, with equal values
BoundReport scaling_law_check(const StepFunction& f, double lambda, double p,
                              const SeriesBudget& budget);

// (threshold, tail measure tau(E_(threshold,inf))) pairs, non-increasing
std::vector<std::pair<double, double>> measurability_profile(
    const StepFunction& f, const std::vector<double>& thresholds);

// truncation at value cut plus the exact p-norm of the discarded tail
std::pair<StepFunction, double> density_approximation(const StepFunction& f, double p,
                                                      double cut);

}  // namespace kmslab

#endif
