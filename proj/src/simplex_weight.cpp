#include "kmslab/simplex_weight.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kmslab/quadrature.hpp"

namespace kmslab {

namespace {

constexpr int kMaxPower = 4096;

const double* log_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxPower + 2, 0.0);
        for (int i = 1; i < kMaxPower + 2; ++i) t[i] = t[i - 1] + std::log(double(i));
        return t;
    }();
    return table.data();
}

inline double log_factorial(int n) { return log_factorial_table()[n]; }

double mag(double x) { return std::abs(x); }
double mag(const Complex& x) { return std::abs(x); }

// polynomial block attached to one exponent: sum_m coef[m] e^{lambda s} s^m / m!
template <typename S>
struct ExpFamily {
    S lambda;
    std::vector<S> coef;
};

template <typename S>
using TermList = std::vector<ExpFamily<S>>;

template <typename S>
std::vector<S>& family_coeffs(TermList<S>& list, S lambda) {
    for (auto& f : list)
        if (mag(f.lambda - lambda) <= 1e-13 * (1.0 + mag(lambda))) return f.coef;
    list.push_back({lambda, {}});
    return list.back().coef;
}

template <typename S>
void add_coef(std::vector<S>& coefs, int power, S value) {
    if (static_cast<int>(coefs.size()) <= power) coefs.resize(power + 1, S(0));
    coefs[power] += value;
}

// log of an upper bound for |coef e^{lambda s} s^m / m!| over s in [0, T]
template <typename S>
double log_term_bound(S coef, S lambda, int m, double T) {
    if (mag(coef) == 0.0) return -std::numeric_limits<double>::infinity();
    const double re = std::real(Complex(lambda));
    return std::log(mag(coef)) + m * std::log(T) - log_factorial(m) +
           std::max(0.0, re) * T;
}

// integral_0^T e^{nu t} t^k / k! dt appended to `out` as terms in T.
// Taylor branch when |nu| T <= k + 3 (single-signed terms for nu >= 0),
// closed form otherwise, where the alternating prefactors stay O(1).
template <typename S>
void integrate_term(TermList<S>& out, S coef, S nu, int k, double T) {
    if (mag(coef) == 0.0) return;
    if (mag(nu) * T <= k + 3.0) {
        auto& poly = family_coeffs(out, S(0));
        S factor = coef;  // coefficient of T^{k+j+1}/(k+j+1)!: coef nu^j C(k+j, j)
        double peak = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 400; ++j) {
            const int m = k + j + 1;
            if (m > kMaxPower) break;
            add_coef(poly, m, factor);
            const double lb = log_term_bound(factor, S(0), m, T);
            peak = std::max(peak, lb);
            if (j > mag(nu) * T + 4.0 && lb < peak - 60.0) break;
            factor *= nu * (double(k + j + 1) / double(j + 1));
        }
    } else {
        const S inv = S(1.0) / nu;
        S factor = coef * inv;
        {
            auto& fam = family_coeffs(out, nu);
            for (int j = 0; j <= k; ++j) {
                add_coef(fam, k - j, factor);
                if (j < k) factor *= -inv;
            }
        }
        add_coef(family_coeffs(out, S(0)), 0, -factor);
    }
}

template <typename S>
void prune(TermList<S>& list, double T) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& f : list)
        for (int m = 0; m < static_cast<int>(f.coef.size()); ++m)
            peak = std::max(peak, log_term_bound(f.coef[m], f.lambda, m, T));
    for (auto& f : list)
        for (int m = 0; m < static_cast<int>(f.coef.size()); ++m)
            if (log_term_bound(f.coef[m], f.lambda, m, T) < peak - 90.0) f.coef[m] = S(0);
    list.erase(std::remove_if(list.begin(), list.end(),
                              [](const ExpFamily<S>& f) {
                                  for (const auto& c : f.coef)
                                      if (mag(c) != 0.0) return false;
                                  return true;
                              }),
               list.end());
}

template <typename S>
S evaluate(const TermList<S>& list, double T) {
    S acc(0);
    const double logT = std::log(T);
    for (const auto& f : list) {
        S poly(0);
        for (int m = static_cast<int>(f.coef.size()) - 1; m >= 0; --m) {
            if (mag(f.coef[m]) == 0.0) continue;
            const double lp = m * logT - log_factorial(m);
            poly += f.coef[m] * std::exp(lp);
        }
        acc += poly * std::exp(f.lambda * T);
    }
    return acc;
}

template <typename S>
S simplex_weight_impl(const std::vector<S>& mu, double T) {
    if (T < 0.0) throw DomainViolation("simplex weight needs T >= 0");
    if (mu.empty()) return S(1);
    if (T == 0.0) return S(0);
    TermList<S> current;
    family_coeffs(current, S(0)).assign(1, S(1));
    // fold from the innermost time variable outward
    for (std::size_t i = mu.size(); i-- > 0;) {
        TermList<S> next;
        for (const auto& f : current)
            for (int m = 0; m < static_cast<int>(f.coef.size()); ++m)
                if (mag(f.coef[m]) != 0.0)
                    integrate_term(next, f.coef[m], S(f.lambda + mu[i]), m, T);
        prune(next, T);
        current = std::move(next);
    }
    return evaluate(current, T);
}

}  // namespace

double simplex_weight(const std::vector<double>& mu, double T) {
    return simplex_weight_impl(mu, T);
}

Complex simplex_weight(const std::vector<Complex>& mu, double T) {
    return simplex_weight_impl(mu, T);
}

double simplex_weight_quadrature(const std::vector<double>& mu, double T, int panels) {
    if (mu.empty()) return 1.0;
    if (T <= 0.0) return 0.0;
    std::function<double(std::size_t, double)> rec = [&](std::size_t i, double s) -> double {
        if (i == mu.size()) return 1.0;
        PanelGrid grid(s, panels);
        std::vector<Complex> vals(grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            const double u = grid.abscissae()[k];
            vals[k] = std::exp(mu[i] * u) * rec(i + 1, u);
        }
        return std::real(grid.full_integral(vals));
    };
    return rec(0, T);
}

}  // namespace kmslab
