#include "kmslab/schatten.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace kmslab {

double schatten_norm(const CMatrix& A, double p) {
    RVector sv = singular_values(A);
    if (sv.size() == 0) return 0.0;
    const double top = sv(0);
    if (top <= 0.0) return 0.0;
    if (std::isinf(p)) return top;
    const double floor = kSingularFloorRel * top;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > floor) acc += std::pow(sv(i) / top, p);
    return top * std::pow(acc, 1.0 / p);
}

Complex weighted_functional(const CMatrix& H, const CMatrix& A) {
    return (H * A).trace();
}

Complex weighted_functional_sym(const CMatrix& H, const CMatrix& A) {
    HermitianEigen eig = eig_hermitian(H);
    RVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
    CMatrix h = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
    return (h * A * h).trace();
}

BoundReport check_holder(const std::vector<CMatrix>& as, const std::vector<double>& ps,
                         std::uint64_t seed) {
    if (as.empty() || as.size() != ps.size())
        throw IndexMismatch("factor/index count mismatch");
    double inv_sum = 0.0;
    for (double p : ps) inv_sum += inv_index(p);
    if (std::abs(inv_sum - 1.0) > kIndexTol)
        throw IndexMismatch("sum of 1/p_i must be 1");

    CMatrix prod = as[0];
    for (std::size_t i = 1; i < as.size(); ++i) prod = (prod * as[i]).eval();
    const double lhs = schatten_norm(prod, 1.0);
    double rhs = 1.0;
    std::ostringstream tag;
    for (std::size_t i = 0; i < as.size(); ++i) {
        rhs *= schatten_norm(as[i], ps[i]);
        tag << (i ? ";" : "") << "p" << i + 1 << "=" << ps[i];
    }
    return make_report("holder", static_cast<int>(as[0].rows()), tag.str(), lhs, rhs, seed);
}

BoundReport check_three_term_holder(const CMatrix& A, const CMatrix& B, double p,
                                    double q, double r, std::uint64_t seed) {
    if (std::abs(inv_index(p) + inv_index(q) - inv_index(r)) > kIndexTol)
        throw IndexMismatch("1/p + 1/q must equal 1/r");
    const double lhs = schatten_norm(A * B, r);
    const double rhs = schatten_norm(A, p) * schatten_norm(B, q);
    std::ostringstream tag;
    tag << "p=" << p << ";q=" << q << ";r=" << r;
    return make_report("holder3", static_cast<int>(A.rows()), tag.str(), lhs, rhs, seed);
}

BoundReport check_minkowski(const CMatrix& A, const CMatrix& B, double p,
                            std::uint64_t seed) {
    const double lhs = schatten_norm(A + B, p);
    const double rhs = schatten_norm(A, p) + schatten_norm(B, p);
    std::ostringstream tag;
    tag << "p=" << p;
    return make_report("minkowski", static_cast<int>(A.rows()), tag.str(), lhs, rhs, seed);
}

DualWitness dual_witness(const CMatrix& A, double p) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) throw ZeroInput("dual witness of the zero matrix");
    const double floor = kSingularFloorRel * sv(0);

    DualWitness out;
    if (std::isinf(p)) {
        // rank-one unit-trace witness from the top singular pair
        out.witness = svd.matrixV().col(0) * svd.matrixU().col(0).adjoint();
    } else if (p == 1.0) {
        // adjoint of the polar isometry completed to a unitary
        out.witness = svd.matrixV() * svd.matrixU().adjoint();
    } else {
        const double np = schatten_norm(A, p);
        RVector g(sv.size());
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            g(i) = sv(i) > floor ? std::pow(sv(i) / np, p - 1.0) : 0.0;
        out.witness = svd.matrixV() * g.asDiagonal() * svd.matrixU().adjoint();
    }
    out.attained = std::real((A * out.witness).trace());
    return out;
}

BoundReport check_interpolation(const CMatrix& A, double p, double r, double q,
                                std::uint64_t seed) {
    if (!(1.0 <= p && p < r && r < q)) throw IndexOrdering("need 1 <= p < r < q <= inf");
    const double lhs = schatten_norm(A, r);
    double rhs;
    if (std::isinf(q)) {
        rhs = std::pow(schatten_norm(A, p), p / r) *
              std::pow(schatten_norm(A, kInf), 1.0 - p / r);
    } else {
        const double e1 = p / (q - p) * (q / r - 1.0);
        const double e2 = q / (q - p) * (1.0 - p / r);
        rhs = std::pow(schatten_norm(A, p), e1) * std::pow(schatten_norm(A, q), e2);
    }
    std::ostringstream tag;
    tag << "p=" << p << ";r=" << r << ";q=" << q;
    return make_report("interpolation", static_cast<int>(A.rows()), tag.str(), lhs, rhs, seed);
}

}  // namespace kmslab
