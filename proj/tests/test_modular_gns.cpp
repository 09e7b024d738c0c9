#include <doctest.h>

#include "kmslab/modular_gns.hpp"
#include "kmslab/schatten.hpp"

using namespace kmslab;

namespace {

CMatrix diag2(double a, double b) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

double max_dev(const std::vector<BoundReport>& rows) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.lhs);
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("modular-gns");

TEST_CASE("build_gns validates the density") {
    CHECK_THROWS_AS(build_gns(diag2(0.5, 0.6)), NotNormalized);
    CHECK_THROWS_AS(build_gns(diag2(1.0, 0.0)), NotFaithful);
    CHECK_NOTHROW(build_gns(diag2(2.0 / 3.0, 1.0 / 3.0)));
}

TEST_CASE("tracial state has trivial modular action") {
    GnsContext ctx = build_gns(0.25 * CMatrix::Identity(4, 4));
    RandomSource rng(31);
    CMatrix X = random_matrix(4, rng);
    CHECK(op_norm(delta_power_apply(ctx, X, Complex(0.7, 0.3)) - X) < 1e-13);
    CHECK(op_norm(modular_flow(ctx, X, 2.0) - X) < 1e-13);
}

TEST_CASE("delta eigenvalue on a matrix unit") {
    GnsContext ctx = build_gns(diag2(2.0 / 3.0, 1.0 / 3.0));
    CMatrix e12 = CMatrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    CMatrix out = delta_power_apply(ctx, e12, Complex(1.0, 0.0));
    CHECK(op_norm(out - 2.0 * e12) < 1e-13);  // rho E12 rho^{-1} = 2 E12

    // oracle: assemble S on the real-doubled HS space, polar-decompose, apply
    // the positive part twice to E12
    ModularData md = modular_data(ctx);
    RMatrix delta_real = md.delta_sqrt_real * md.delta_sqrt_real;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
    v(2) = 1.0;  // Re part of E12, column-major index a=0,b=1
    Eigen::VectorXd w = delta_real * v;
    CHECK((w - 2.0 * v).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(md.delta_grid(1, 0) - 0.5) < 1e-13);
}

TEST_CASE("invariant suite on random faithful states") {
    RandomSource rng(32);
    for (int dim : {2, 5}) {
        GnsContext ctx = build_gns(random_density(dim, rng));
        for (const auto& row : modular_invariant_checks(ctx, 77)) {
            INFO(row.name);
            CHECK(row.slack >= 0.0);
        }
    }
}

TEST_CASE("flow fixes time zero and commutants") {
    GnsContext ctx = build_gns(diag2(0.7, 0.3));
    RandomSource rng(33);
    CMatrix A = random_matrix(2, rng);
    CHECK(op_norm(modular_flow(ctx, A, 0.0) - A) < 1e-14);
    CMatrix C = diag2(1.5, -0.25);  // commutes with rho
    for (double t : {-1.0, 0.3, 7.0})
        CHECK(op_norm(modular_flow(ctx, C, t) - C) < 1e-12);
}

TEST_CASE("flow preserves all Schatten norms") {
    RandomSource rng(34);
    GnsContext ctx = build_gns(random_density(4, rng));
    CMatrix A = random_matrix(4, rng);
    for (double p : {1.0, 2.0, kInf})
        for (double t : {-1.0, 0.3, 7.0})
            CHECK(std::abs(schatten_norm(modular_flow(ctx, A, t), p) - schatten_norm(A, p)) <
                  1e-10);
}

TEST_CASE("two-point function degenerate slices") {
    RandomSource rng(35);
    GnsContext ctx = build_gns(random_density(3, rng));
    CMatrix A = random_matrix(3, rng), B = random_matrix(3, rng);
    CHECK(std::abs(kms_two_point(ctx, A, B, Complex(0, 0)) - (ctx.rho * A * B).trace()) <
          1e-13);
    for (Complex z : {Complex(0.4, -0.2), Complex(-1.0, 0.5)})
        CHECK(std::abs(kms_two_point(ctx, CMatrix::Identity(3, 3), B, z) -
                       (ctx.rho * delta_power_apply(ctx, B, Complex(0, 1) * z)).trace()) <
              1e-12);
}

TEST_CASE("boundary identity at the modular convention") {
    RandomSource rng(36);
    GnsContext ctx = build_gns(random_density(3, rng));
    CMatrix A = random_matrix(3, rng), B = random_matrix(3, rng);
    for (double t : {-2.0, 0.0, 1.5}) {
        const Complex lhs = kms_two_point(ctx, A, B, Complex(t, ctx.beta_convention));
        const Complex rhs = (ctx.rho * dynamics_flow(ctx, B, t) * A).trace();
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("re-parameterized dynamics moves the identity to beta = +1") {
    RandomSource rng(37);
    CMatrix rho = random_density(3, rng);
    GnsContext plus = build_gns(rho, +1.0);
    CHECK(max_dev(kms_check(plus, 100, 99)) < 1e-10);
}

TEST_CASE("kms_check on tracial and generic states") {
    GnsContext tracial = build_gns(0.5 * CMatrix::Identity(2, 2));
    CHECK(max_dev(kms_check(tracial, 50, 41)) < 1e-13);
    GnsContext generic = build_gns(diag2(2.0 / 3.0, 1.0 / 3.0));
    CHECK(max_dev(kms_check(generic, 100, 42)) < 1e-10);
    RandomSource rng(43);
    GnsContext six = build_gns(random_density(6, rng));
    CHECK(max_dev(kms_check(six, 200, 44)) < 1e-9);
}

TEST_CASE("represented multiplier norms match the assembled superoperator") {
    RandomSource rng(38);
    CMatrix Q = random_matrix(3, rng);
    for (double r : {1.0, 2.0, 3.5, kInf}) {
        const double direct = represented_schatten_norm(Q, r);
        const double assembled = schatten_norm(left_multiplier_matrix(Q), r);
        CHECK(std::abs(direct - assembled) < 1e-10 * (1.0 + direct));
    }
}

TEST_SUITE_END();
