#include "kmslab/quadrature.hpp"

#include <cmath>

namespace kmslab {

namespace {

constexpr int N = 16;

long double legendre(int n, long double x) {
    long double p0 = 1.0L, p1 = x;
    if (n == 0) return p0;
    for (int k = 2; k <= n; ++k) {
        long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

long double legendre_deriv(int n, long double x) {
    return n * (x * legendre(n, x) - legendre(n - 1, x)) / (x * x - 1.0L);
}

GaussLegendre16 build() {
    GaussLegendre16 g{};
    long double xs[N], ws[N];
    for (int i = 0; i < N; ++i) {
        // Newton from the Chebyshev-like initial guess
        long double x = std::cos(M_PI * (i + 0.75L) / (N + 0.5L));
        for (int it = 0; it < 100; ++it) {
            long double dx = legendre(N, x) / legendre_deriv(N, x);
            x -= dx;
            if (std::abs(dx) < 1e-20L) break;
        }
        long double d = legendre_deriv(N, x);
        xs[N - 1 - i] = x;  // ascending order
        ws[N - 1 - i] = 2.0L / ((1.0L - x * x) * d * d);
    }
    for (int i = 0; i < N; ++i) {
        g.nodes[i] = static_cast<double>(xs[i]);
        g.weights[i] = static_cast<double>(ws[i]);
    }

    // Legendre coefficients of the interpolant: c_m = (2m+1)/2 sum_i w_i P_m(x_i) f_i
    // antiderivative from -1: m = 0 -> x+1; m >= 1 -> (P_{m+1} - P_{m-1})/(2m+1)
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            long double acc = 0.0L;
            for (int m = 0; m < N; ++m) {
                long double c = (2.0L * m + 1.0L) / 2.0L * ws[i] * legendre(m, xs[i]);
                long double anti;
                if (m == 0)
                    anti = xs[j] + 1.0L;
                else
                    anti = (legendre(m + 1, xs[j]) - legendre(m - 1, xs[j])) / (2.0L * m + 1.0L);
                acc += c * anti;
            }
            g.cumulative[j][i] = static_cast<double>(acc);
        }
    }
    return g;
}

}  // namespace

const GaussLegendre16& GaussLegendre16::get() {
    static const GaussLegendre16 instance = build();
    return instance;
}

PanelGrid::PanelGrid(double T, int panels) : T_(T), panels_(panels) {
    const auto& g = GaussLegendre16::get();
    half_width_ = T / (2.0 * panels);
    abscissae_.reserve(static_cast<std::size_t>(panels) * N);
    for (int p = 0; p < panels; ++p) {
        const double mid = T * (2 * p + 1) / (2.0 * panels);
        for (int i = 0; i < N; ++i) abscissae_.push_back(mid + half_width_ * g.nodes[i]);
    }
}

template <typename V>
static std::vector<V> cumulative_impl(const PanelGrid& grid, const std::vector<V>& values,
                                      double half_width) {
    const auto& g = GaussLegendre16::get();
    const int panels = grid.panels();
    std::vector<V> out(values.size());
    V carry = values[0];
    carry = carry - carry;  // zero of the right shape
    for (int p = 0; p < panels; ++p) {
        V panel_total = carry - carry;
        for (int i = 0; i < N; ++i)
            panel_total += half_width * g.weights[i] * values[p * N + i];
        for (int j = 0; j < N; ++j) {
            V partial = carry - carry;
            for (int i = 0; i < N; ++i)
                partial += half_width * g.cumulative[j][i] * values[p * N + i];
            out[p * N + j] = carry + partial;
        }
        carry += panel_total;
    }
    return out;
}

template <typename V>
static V full_impl(const PanelGrid& grid, const std::vector<V>& values, double half_width) {
    const auto& g = GaussLegendre16::get();
    V acc = values[0] - values[0];
    for (int p = 0; p < grid.panels(); ++p)
        for (int i = 0; i < N; ++i) acc += half_width * g.weights[i] * values[p * N + i];
    return acc;
}

std::vector<CMatrix> PanelGrid::cumulative_integral(const std::vector<CMatrix>& values) const {
    return cumulative_impl(*this, values, half_width_);
}
CMatrix PanelGrid::full_integral(const std::vector<CMatrix>& values) const {
    return full_impl(*this, values, half_width_);
}
std::vector<Complex> PanelGrid::cumulative_integral(const std::vector<Complex>& values) const {
    return cumulative_impl(*this, values, half_width_);
}
Complex PanelGrid::full_integral(const std::vector<Complex>& values) const {
    return full_impl(*this, values, half_width_);
}

}  // namespace kmslab
