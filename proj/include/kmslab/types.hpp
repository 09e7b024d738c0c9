#ifndef KMSLAB_TYPES_HPP
#define KMSLAB_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kmslab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Error taxonomy shared by all modules. Every failure mode carries the name
// used in the module contracts so callers can match on type.
#define KMSLAB_DEFINE_ERROR(Name)                                 \
    struct Name : std::runtime_error {                            \
        explicit Name(const std::string& what_arg)                \
            : std::runtime_error(std::string(#Name ": ") + what_arg) {} \
    }

KMSLAB_DEFINE_ERROR(NotHermitian);
KMSLAB_DEFINE_ERROR(ConvergenceFailure);
KMSLAB_DEFINE_ERROR(NotPositiveDefinite);
KMSLAB_DEFINE_ERROR(NotFaithful);
KMSLAB_DEFINE_ERROR(NotNormalized);
KMSLAB_DEFINE_ERROR(IndexMismatch);
KMSLAB_DEFINE_ERROR(IndexOrdering);
KMSLAB_DEFINE_ERROR(ZeroInput);
KMSLAB_DEFINE_ERROR(BudgetExhausted);
KMSLAB_DEFINE_ERROR(DomainViolation);
KMSLAB_DEFINE_ERROR(HypothesisViolated);
KMSLAB_DEFINE_ERROR(TailNotCertified);
KMSLAB_DEFINE_ERROR(RefinementOverflow);
KMSLAB_DEFINE_ERROR(ConfigInvalid);
KMSLAB_DEFINE_ERROR(ParseError);
KMSLAB_DEFINE_ERROR(ValidationError);
KMSLAB_DEFINE_ERROR(IoFailure);

#undef KMSLAB_DEFINE_ERROR

constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf_index(double p) { return std::isinf(p); }

// reciprocal with the 1/inf = 0 convention used by all Hoelder-index checks
inline double inv_index(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace kmslab

#endif
