#ifndef KMSLAB_QUADRATURE_HPP
#define KMSLAB_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "kmslab/types.hpp"

namespace kmslab {

// 16-node Gauss-Legendre rule on [-1,1] plus the in-panel cumulative
// integration matrix K: (K g)_j = integral of the degree-15 interpolant of g
// from -1 to node j. Nodes/weights/K are computed once in long double.
struct GaussLegendre16 {
    std::array<double, 16> nodes;
    std::array<double, 16> weights;
    std::array<std::array<double, 16>, 16> cumulative;  // K
    static const GaussLegendre16& get();
};

// Panel grid over [0, T]: all functions are represented by their values at
// the panel Gauss nodes; cumulative_integral maps node values of g to node
// values of s -> integral_0^s g, exactly for piecewise degree-15 integrands.
class PanelGrid {
public:
    PanelGrid(double T, int panels);

    int size() const { return static_cast<int>(abscissae_.size()); }
    double T() const { return T_; }
    int panels() const { return panels_; }
    const std::vector<double>& abscissae() const { return abscissae_; }

    // matrix-valued integrand: values[k] at abscissae()[k]
    std::vector<CMatrix> cumulative_integral(const std::vector<CMatrix>& values) const;
    CMatrix full_integral(const std::vector<CMatrix>& values) const;

    std::vector<Complex> cumulative_integral(const std::vector<Complex>& values) const;
    Complex full_integral(const std::vector<Complex>& values) const;

private:
    double T_;
    int panels_;
    double half_width_;
    std::vector<double> abscissae_;
};

}  // namespace kmslab

#endif
