#ifndef KMSLAB_STEP_FUNCTION_HPP
#define KMSLAB_STEP_FUNCTION_HPP

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kmslab/types.hpp"

namespace kmslab {

struct StepLevel {
    double value;
    double measure;
};

// Nonnegative step function given by a strictly increasing level sequence
// v_m with measures mu_m > 0 (Lebesgue units). Two built-in closed-form
// generators with infinitely many levels:
//   example1: v_m = c m, mu_m = 2 m / (m+1)!       (factorially thin tails)
//   example2: v_m = c m, mu_m = 2 (1 - 1/(2e)) (2e)^{-m}  (geometric tails)
// plus arbitrary finite level lists. The closed forms make term-ratio
// certificates computable, which is what every infinite sum here runs on.
class StepFunction {
public:
    enum class Kind { finite_list, example1, example2 };

    static StepFunction example1(double value_scale = 1.0);
    static StepFunction example2(double value_scale = 1.0);
    static StepFunction finite(std::vector<StepLevel> levels);

    static StepFunction from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Kind kind() const { return kind_; }
    double value_scale() const { return scale_; }
    bool infinite() const { return kind_ != Kind::finite_list; }
    int finite_count() const { return static_cast<int>(levels_.size()); }

    double value(int m) const;        // 1-based
    double measure(int m) const;
    double log_measure(int m) const;
    double total_measure() const;      // exact
    double tail_measure_after(int m) const;  // sum of mu over levels > m, exact

    // true when mu_{m+1}/mu_m -> 0, i.e. the exponential factor e^{lam v}
    // is eventually beaten for every lam (membership in the all-lambda class)
    bool mu_ratio_vanishes() const;

    // Certified bounds on g_{m+1}/g_m for g_m = v_m^s mu_m^a E(lam v_m),
    // E = 1 / e^x / (e^x - 1) for exp_kind 0/1/2. The upper bound is
    // non-increasing in m, so a value < 1 certifies a geometric tail from m on;
    // the lower bound is valid for every later level, so a value >= 1
    // certifies divergence of the sum.
    double ratio_upper(double s, double a, double lam, int exp_kind, int m) const;
    double ratio_lower(double s, double a, double lam, int exp_kind, int m) const;

    // scale the function's values by c (the measures are untouched)
    StepFunction scaled_values(double c) const;

private:
    StepFunction() = default;
    Kind kind_ = Kind::finite_list;
    double scale_ = 1.0;
    std::vector<StepLevel> levels_;  // finite_list only
};

struct LevelSum {
    double log_value;
    double log_tail;  // -inf when the sum is exact
    int levels_used;
};

// certified log of sum_{m >= first_level} g_m for the shape above; stops when
// the geometric tail bound drops below rel_tol * partial sum. Throws
// TailNotCertified when no certificate is reached within level_cap levels.
LevelSum certified_level_sum(const StepFunction& f, double s, double a, double lam,
                             int exp_kind, double rel_tol, int first_level = 1,
                             int level_cap = 100000);

// decreasing-rearrangement overlay of two step functions on the common
// refinement of their level sets; combine is applied pointwise.
// Throws RefinementOverflow past the level cap.
StepFunction refine_combine(const StepFunction& f, const StepFunction& g,
                            const std::function<double(double, double)>& combine,
                            int level_cap = 100000);

StepFunction convex_combination(const StepFunction& f, const StepFunction& g, double theta);
StepFunction pointwise_product(const StepFunction& f, const StepFunction& g);

double logsumexp(double a, double b);

}  // namespace kmslab

#endif
