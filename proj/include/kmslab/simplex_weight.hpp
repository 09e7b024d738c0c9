#ifndef KMSLAB_SIMPLEX_WEIGHT_HPP
#define KMSLAB_SIMPLEX_WEIGHT_HPP

#include <vector>

#include "kmslab/types.hpp"

namespace kmslab {

// W(mu_1..mu_n; T) = integral of exp(sum mu_k t_k) over the ordered simplex
// 0 <= t_n <= ... <= t_1 <= T, by the recursion
//   W(mu_1..mu_n; T) = int_0^T e^{mu_1 s} W(mu_2..mu_n; s) ds
// carried symbolically on sums of c * e^{lambda s} s^k / k! terms. Integrals
// whose exponent nu satisfies |nu| T <= k + 3 are expanded in a Taylor series
// (terms of one sign for nu >= 0), the rest in closed form; this keeps every
// near-confluent exponent pair in the cancellation-free branch.
//
// Equals the divided difference of x -> e^{Tx} over the nodes
// {0, mu_1, mu_1+mu_2, ...}; in particular it is symmetric under
// permutations of those accumulated nodes.
double simplex_weight(const std::vector<double>& mu, double T);

// same kernel with complex exponents (used by the analytically continued series)
Complex simplex_weight(const std::vector<Complex>& mu, double T);

// independent nested Gauss-Legendre evaluation, for cross-checks
double simplex_weight_quadrature(const std::vector<double>& mu, double T, int panels = 8);

}  // namespace kmslab

#endif
