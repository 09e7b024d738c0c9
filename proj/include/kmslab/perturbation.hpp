#ifndef KMSLAB_PERTURBATION_HPP
#define KMSLAB_PERTURBATION_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "kmslab/bound_report.hpp"
#include "kmslab/expansional.hpp"
#include "kmslab/modular_gns.hpp"
#include "kmslab/rng.hpp"
#include "kmslab/simplex_weight.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

// the ordered simplex {t_i < 0, -alpha < sum t_i < 0} whose tube carries the
// multiple-time correlation vectors
struct SimplexDomain {
    int n = 1;
    double alpha = 0.5;

    bool contains(const std::vector<double>& im, double margin = 0.0) const;
    // extreme points of the closure: the origin and -i alpha e_l
    std::vector<std::vector<double>> vertex_patterns() const;
    std::vector<double> sample_interior(RandomSource& rng) const;
};

struct MultiTimeConfig {
    const GnsContext* ctx = nullptr;
    std::vector<CMatrix> Q_list;   // left multipliers on the GNS space
    std::vector<Complex> z_list;   // -1/2 <= Im z_j <= 0
    double p = 2.0, q = 2.0;       // conjugate indices entering the bounds
};

// Delta^{i z_n} Q_n ... Delta^{i z_1} Q_1 Omega, exactly on the Delta eigen grid
CMatrix multi_time_vector(const MultiTimeConfig& cfg);

enum class TrBound { TR0, TR1 };

// vector norm against the stated bound, at the vertex patterns of the closed
// tube plus seeded interior points.  TR0 first verifies the J Q J norm
// symmetry hypothesis and reports both candidate right-hand sides
// (statement form with ||H||_p^{1/2} and proof form with ||H^{1/2}||_{2p}).
std::vector<BoundReport> check_tr_bounds(const GnsContext& ctx,
                                         const std::vector<CMatrix>& Q_list, double p,
                                         double q, TrBound which, int interior_points,
                                         std::uint64_t seed);

// closed contour integral of <xi, A^n(z) Omega> around a triangle in one
// coordinate; vanishing modulus is the analyticity probe
BoundReport morera_analyticity_probe(const GnsContext& ctx,
                                     const std::vector<CMatrix>& Q_list,
                                     const std::vector<Complex>& base_z, int vary_coord,
                                     const std::array<Complex, 3>& triangle,
                                     std::uint64_t seed);

// W(mu; T): see simplex_weight.hpp (re-exported here as the series kernel)

struct ConvergenceTrace {
    std::vector<int> orders;
    std::vector<double> term_norms;
    std::vector<double> partial_norms;
    std::vector<double> certified_tails;
    void write_csv(std::ostream& os) const;  // order,term_norm,partial_norm,certified_tail
};

// sum_n (-1)^n int_{0<=t_n<=...<=t_1<=1/2} Delta^{t_n} Q Delta^{t_{n-1}-t_n} Q
// ... Delta^{t_1-t_2} Q Omega, evaluated per order as a path sum over the
// Delta eigen grid with simplex_weight kernels
std::pair<CMatrix, ConvergenceTrace> perturbed_kms_vector(const GnsContext& ctx,
                                                          const CMatrix& Q,
                                                          const SeriesBudget& budget);

// closed form the series sums to: exp((log rho - Q)/2) as an HS matrix
CMatrix perturbed_vector_oracle(const GnsContext& ctx, const CMatrix& Q);

// per-order norm domination: ||term_n|| <= (1/2)^n/n! max{...} ||H||_p^{1/2}
std::vector<BoundReport> cr1_domination_check(const GnsContext& ctx, const CMatrix& Q,
                                              double q_index, const ConvergenceTrace& trace);

// tau(Q^{4zq})^{1/4q} tau(Q^{4(n-z)q})^{1/4q} <= ||Q||_{4q} ||Q||_{4(n-1)q}^{n-1}
// for positive Q at real z in [1, n-1]
std::vector<BoundReport> interpolation_inequality_check(const CMatrix& Qpos, double q_index,
                                                        int n, const std::vector<double>& zs);

// state built from the series vector: KMS boundary identity for the
// perturbed dynamics Ad(e^{itG}), G = -log rho + Q, at beta = +1, plus the
// trace-distance match with e^{-G}/Z'
std::vector<BoundReport> perturbed_state_kms_check(const GnsContext& ctx, const CMatrix& Q,
                                                   const SeriesBudget& budget, int trials,
                                                   std::uint64_t seed);

// z-scaled series against exp(z (log Delta + pi(Q))) Omega, 0 < Re z < 1/2
BoundReport analytic_exponential_identity(const GnsContext& ctx, const CMatrix& Q, Complex z,
                                          const SeriesBudget& budget);

// spectral upper cuts Q_k -> Q: vector differences per cut (order = cut index,
// term_norm = ||Phi(Q_k) - Phi(Q)||)
ConvergenceTrace approximation_stability(const GnsContext& ctx, const CMatrix& Q,
                                         const std::vector<double>& cuts,
                                         const SeriesBudget& budget);

}  // namespace kmslab

#endif
