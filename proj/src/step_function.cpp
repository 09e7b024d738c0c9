#include "kmslab/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

namespace kmslab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kTwoE = 2.0 * M_E;
}  // namespace

double logsumexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

StepFunction StepFunction::example1(double value_scale) {
    StepFunction f;
    f.kind_ = Kind::example1;
    f.scale_ = value_scale;
    return f;
}

StepFunction StepFunction::example2(double value_scale) {
    StepFunction f;
    f.kind_ = Kind::example2;
    f.scale_ = value_scale;
    return f;
}

StepFunction StepFunction::finite(std::vector<StepLevel> levels) {
    // canonical form: positive values, strictly increasing, duplicate values merged
    std::vector<StepLevel> kept;
    for (const auto& l : levels) {
        if (l.value < 0.0 || l.measure < 0.0)
            throw ValidationError("step function levels need value >= 0 and measure >= 0");
        if (l.value > 0.0 && l.measure > 0.0) kept.push_back(l);
    }
    std::sort(kept.begin(), kept.end(),
              [](const StepLevel& a, const StepLevel& b) { return a.value < b.value; });
    std::vector<StepLevel> merged;
    for (const auto& l : kept) {
        if (!merged.empty() && l.value <= merged.back().value * (1.0 + 1e-14))
            merged.back().measure += l.measure;
        else
            merged.push_back(l);
    }
    StepFunction f;
    f.kind_ = Kind::finite_list;
    f.levels_ = std::move(merged);
    return f;
}

StepFunction StepFunction::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "closed_form") {
        const std::string name = j.at("name").get<std::string>();
        double scale = 1.0;
        if (j.contains("params") && j["params"].contains("value_scale"))
            scale = j["params"]["value_scale"].get<double>();
        if (name == "example1") return example1(scale);
        if (name == "example2") return example2(scale);
        throw ValidationError("unknown closed_form name: " + name);
    }
    if (kind == "finite_list") {
        std::vector<StepLevel> levels;
        for (const auto& pair : j.at("levels"))
            levels.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        return finite(std::move(levels));
    }
    throw ValidationError("unknown step function kind: " + kind);
}

nlohmann::json StepFunction::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case Kind::example1:
        case Kind::example2:
            j["kind"] = "closed_form";
            j["name"] = kind_ == Kind::example1 ? "example1" : "example2";
            j["params"] = {{"value_scale", scale_}};
            break;
        case Kind::finite_list: {
            j["kind"] = "finite_list";
            auto arr = nlohmann::json::array();
            for (const auto& l : levels_) arr.push_back({l.value, l.measure});
            j["levels"] = arr;
            break;
        }
    }
    return j;
}

double StepFunction::value(int m) const {
    switch (kind_) {
        case Kind::finite_list: return levels_.at(m - 1).value;
        default: return scale_ * m;
    }
}

double StepFunction::measure(int m) const {
    switch (kind_) {
        case Kind::finite_list: return levels_.at(m - 1).measure;
        default: return std::exp(log_measure(m));
    }
}

double StepFunction::log_measure(int m) const {
    switch (kind_) {
        case Kind::finite_list: return std::log(levels_.at(m - 1).measure);
        case Kind::example1:
            return std::log(2.0) + std::log(double(m)) - std::lgamma(double(m) + 2.0);
        case Kind::example2:
            return std::log(2.0 * (1.0 - 1.0 / kTwoE)) - m * std::log(kTwoE);
    }
    return kNegInf;
}

double StepFunction::total_measure() const {
    switch (kind_) {
        case Kind::finite_list: {
            double acc = 0.0;
            for (const auto& l : levels_) acc += l.measure;
            return acc;
        }
        case Kind::example1: return 2.0;       // telescoping sum of 2m/(m+1)!
        case Kind::example2: return 1.0 / M_E; // geometric sum
    }
    return 0.0;
}

double StepFunction::tail_measure_after(int m) const {
    if (m <= 0) return total_measure();
    switch (kind_) {
        case Kind::finite_list: {
            double acc = 0.0;
            for (int k = m + 1; k <= finite_count(); ++k) acc += levels_[k - 1].measure;
            return acc;
        }
        case Kind::example1:
            return 2.0 * std::exp(-std::lgamma(double(m) + 2.0));  // 2/(m+1)!
        case Kind::example2:
            return 2.0 * std::pow(kTwoE, -(m + 1.0));
    }
    return 0.0;
}

bool StepFunction::mu_ratio_vanishes() const {
    return kind_ == Kind::example1;
}

namespace {

double exp_factor_ratio_upper(double lam, double v_m, double dv, int exp_kind) {
    switch (exp_kind) {
        case 0: return 1.0;
        case 1: return std::exp(lam * dv);
        default: {
            const double x = lam * v_m;
            if (x <= 0.0) return std::numeric_limits<double>::infinity();
            return std::exp(lam * dv) / (1.0 - std::exp(-x));
        }
    }
}

double exp_factor_ratio_lower(double lam, double dv, int exp_kind) {
    return exp_kind == 0 ? 1.0 : std::exp(lam * dv);
}

}  // namespace

double StepFunction::ratio_upper(double s, double a, double lam, int exp_kind, int m) const {
    switch (kind_) {
        case Kind::finite_list:
            return 0.0;  // no tail
        case Kind::example1: {
            const double vr = std::pow((m + 1.0) / m, s);
            const double mr = std::pow((m + 1.0) / (double(m) * (m + 2.0)), a);
            return vr * mr * exp_factor_ratio_upper(lam, scale_ * m, scale_, exp_kind);
        }
        case Kind::example2: {
            const double vr = std::pow((m + 1.0) / m, s);
            const double mr = std::pow(kTwoE, -a);
            return vr * mr * exp_factor_ratio_upper(lam, scale_ * m, scale_, exp_kind);
        }
    }
    return 0.0;
}

double StepFunction::ratio_lower(double s, double a, double lam, int exp_kind, int m) const {
    switch (kind_) {
        case Kind::finite_list:
        case Kind::example1:
            return 0.0;  // example1's mu-ratio tends to 0: no useful lower bound
        case Kind::example2: {
            (void)s;  // values increase, so the v-part is >= 1
            (void)m;
            return std::pow(kTwoE, -a) * exp_factor_ratio_lower(lam, scale_, exp_kind);
        }
    }
    return 0.0;
}

StepFunction StepFunction::scaled_values(double c) const {
    if (c <= 0.0) throw ValidationError("value scale must be positive");
    if (kind_ == Kind::finite_list) {
        std::vector<StepLevel> levels = levels_;
        for (auto& l : levels) l.value *= c;
        return finite(std::move(levels));
    }
    StepFunction f = *this;
    f.scale_ *= c;
    return f;
}

namespace {

double log_term(const StepFunction& f, double s, double a, double lam, int exp_kind, int m) {
    const double v = f.value(m);
    double acc = a * f.log_measure(m);
    if (s != 0.0) acc += s * std::log(v);
    if (exp_kind == 1) acc += lam * v;
    if (exp_kind == 2) {
        const double x = lam * v;
        acc += x + std::log1p(-std::exp(-x));
    }
    return acc;
}

}  // namespace

LevelSum certified_level_sum(const StepFunction& f, double s, double a, double lam,
                             int exp_kind, double rel_tol, int first_level, int level_cap) {
    LevelSum out{kNegInf, kNegInf, 0};
    if (!f.infinite()) {
        for (int m = first_level; m <= f.finite_count(); ++m) {
            out.log_value = logsumexp(out.log_value, log_term(f, s, a, lam, exp_kind, m));
            ++out.levels_used;
        }
        return out;
    }
    for (int m = first_level; m <= first_level + level_cap; ++m) {
        const double lt = log_term(f, s, a, lam, exp_kind, m);
        out.log_value = logsumexp(out.log_value, lt);
        ++out.levels_used;
        const double r = f.ratio_upper(s, a, lam, exp_kind, m);
        if (r < 1.0) {
            const double log_tail = lt + std::log(r) - std::log1p(-r);
            if (log_tail <= std::log(rel_tol) + out.log_value) {
                out.log_tail = log_tail;
                return out;
            }
        }
    }
    throw TailNotCertified("no geometric tail certificate within the level cap");
}

StepFunction refine_combine(const StepFunction& f, const StepFunction& g,
                            const std::function<double(double, double)>& combine,
                            int level_cap) {
    // materialize certified truncations, then overlay the decreasing
    // rearrangements segment by segment
    auto truncate = [&](const StepFunction& h) {
        std::vector<StepLevel> levels;
        if (!h.infinite()) {
            for (int m = 1; m <= h.finite_count(); ++m) levels.push_back({h.value(m), h.measure(m)});
            return levels;
        }
        const double total = h.total_measure();
        for (int m = 1; m <= level_cap; ++m) {
            levels.push_back({h.value(m), h.measure(m)});
            if (h.tail_measure_after(m) <= 1e-13 * total) return levels;
        }
        throw RefinementOverflow("level cap exceeded while truncating an infinite generator");
    };
    std::vector<StepLevel> lf = truncate(f), lg = truncate(g);
    if (static_cast<int>(lf.size() + lg.size()) > level_cap)
        throw RefinementOverflow("common refinement exceeds the level cap");

    // decreasing rearrangement: largest values first
    std::reverse(lf.begin(), lf.end());
    std::reverse(lg.begin(), lg.end());
    std::vector<StepLevel> combined;
    std::size_t i = 0, j = 0;
    double used_f = 0.0, used_g = 0.0;
    while (i < lf.size() || j < lg.size()) {
        const double vf = i < lf.size() ? lf[i].value : 0.0;
        const double vg = j < lg.size() ? lg[j].value : 0.0;
        const double rem_f = i < lf.size() ? lf[i].measure - used_f
                                           : std::numeric_limits<double>::infinity();
        const double rem_g = j < lg.size() ? lg[j].measure - used_g
                                           : std::numeric_limits<double>::infinity();
        const double width = std::min(rem_f, rem_g);
        combined.push_back({combine(vf, vg), width});
        if (i < lf.size()) {
            used_f += width;
            if (used_f >= lf[i].measure * (1.0 - 1e-15)) { ++i; used_f = 0.0; }
        }
        if (j < lg.size()) {
            used_g += width;
            if (used_g >= lg[j].measure * (1.0 - 1e-15)) { ++j; used_g = 0.0; }
        }
    }
    return StepFunction::finite(std::move(combined));
}

StepFunction convex_combination(const StepFunction& f, const StepFunction& g, double theta) {
    if (theta < 0.0 || theta > 1.0) throw ValidationError("theta outside [0,1]");
    return refine_combine(f, g, [theta](double a, double b) {
        return theta * a + (1.0 - theta) * b;
    });
}

StepFunction pointwise_product(const StepFunction& f, const StepFunction& g) {
    return refine_combine(f, g, [](double a, double b) { return a * b; });
}

}  // namespace kmslab
