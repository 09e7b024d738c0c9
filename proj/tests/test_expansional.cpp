#include <doctest.h>

#include "kmslab/expansional.hpp"

using namespace kmslab;

namespace {

CMatrix pauli(int which) {
    CMatrix s(2, 2);
    if (which == 0) s << 0, 1, 1, 0;
    if (which == 1) s << 0, Complex(0, -1), Complex(0, 1), 0;
    if (which == 2) s << 1, 0, 0, -1;
    return s;
}

// independent oracle: RK4 on U' = U A(t) (right orientation) from the identity
CMatrix ode_right(const std::function<CMatrix(double)>& A, double t, int steps) {
    const int d = static_cast<int>(A(0.0).rows());
    CMatrix U = CMatrix::Identity(d, d);
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        const double s = k * h;
        CMatrix k1 = U * A(s);
        CMatrix k2 = (U + 0.5 * h * k1) * A(s + 0.5 * h);
        CMatrix k3 = (U + 0.5 * h * k2) * A(s + 0.5 * h);
        CMatrix k4 = (U + h * k3) * A(s + h);
        U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return U;
}

SeriesBudget tight_budget() {
    SeriesBudget b;
    b.tolerance = 1e-10;
    return b;
}

GnsContext two_level_context() {
    CMatrix r = CMatrix::Zero(2, 2);
    r(0, 0) = 2.0 / 3.0;
    r(1, 1) = 1.0 / 3.0;
    return build_gns(r);
}

}  // namespace

TEST_SUITE_BEGIN("expansional");

TEST_CASE("constant path reduces to the matrix exponential") {
    RandomSource rng(51);
    CMatrix A = random_hermitian(3, rng);
    OperatorPath path{[A](double) { return A; }, op_norm(A) + 1e-12, 2.0};
    const double t = 0.8;
    CMatrix target = exp_scaled_hermitian(A, Complex(t, 0.0));
    CHECK(op_norm(expansional(path, t, Side::right, tight_budget()) - target) < 1e-9);
    CHECK(op_norm(expansional(path, t, Side::left, tight_budget()) - target) < 1e-9);
}

TEST_CASE("zero path gives the identity") {
    OperatorPath path{[](double) { return CMatrix(CMatrix::Zero(2, 2)); }, 0.0, 1.0};
    CHECK(op_norm(expansional(path, 0.7, Side::right, tight_budget()) -
                  CMatrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("time-dependent path against the ODE oracle") {
    auto a = [](double s) { return CMatrix(pauli(0) + s * pauli(2)); };
    OperatorPath path{a, 2.1, 1.0};
    CMatrix direct = expansional(path, 1.0, Side::right, tight_budget());
    CMatrix oracle = ode_right(a, 1.0, 4000);
    CHECK(op_norm(direct - oracle) < 1e-8);
}

TEST_CASE("budget exhaustion is detected before summing") {
    OperatorPath path{[](double) { return CMatrix(80.0 * CMatrix::Identity(2, 2)); }, 80.0,
                      1.0};
    SeriesBudget small;
    small.max_order = 10;
    CHECK_THROWS_AS(expansional(path, 1.0, Side::right, small), BudgetExhausted);
}

TEST_CASE("cocycle properties for a constant path") {
    CMatrix A = 0.4 * pauli(2);
    OperatorPath path{[A](double) { return A; }, op_norm(A), 2.0};
    for (const auto& r : check_cocycle_properties(path, 0.5, 0.4, tight_budget())) {
        INFO(r.name);
        CHECK(r.lhs < 1e-12);
    }
}

TEST_CASE("cocycle properties for an affine random path") {
    RandomSource rng(52);
    CMatrix A = random_hermitian(3, rng), B = random_hermitian(3, rng);
    OperatorPath path{[A, B](double s) { return CMatrix(A + s * B); },
                      op_norm(A) + op_norm(B) + 1e-9, 1.0};
    for (const auto& r : check_cocycle_properties(path, 0.5, 0.5, tight_budget())) {
        INFO(r.name);
        CHECK(r.lhs < 1e-7);
    }
    // composition over [0,t] . [t, t+0] is exact
    auto rows = check_cocycle_properties(path, 0.5, 0.0, tight_budget());
    CHECK(rows[2].lhs < 1e-12);
    CHECK(rows[3].lhs < 1e-12);
}

TEST_CASE("derivative law") {
    CMatrix A = 0.7 * pauli(0);
    OperatorPath constant{[A](double) { return A; }, op_norm(A), 2.0};
    CHECK(check_derivative_law(constant, 0.6, 1e-4, tight_budget()).slack >= 0.0);

    OperatorPath zero{[](double) { return CMatrix(CMatrix::Zero(2, 2)); }, 0.0, 2.0};
    CHECK(check_derivative_law(zero, 0.5, 1e-4, tight_budget()).lhs < 1e-13);

    RandomSource rng(53);
    CMatrix C = random_hermitian(3, rng), D = random_hermitian(3, rng);
    OperatorPath path{[C, D](double s) { return CMatrix(C + std::sin(s) * D); },
                      op_norm(C) + op_norm(D) + 1e-9, 2.0};
    BoundReport r = check_derivative_law(path, 0.7, 1e-4, tight_budget());
    CHECK(r.lhs < 1e-6);
}

TEST_CASE("interchange identity: degenerate and generic cases") {
    SeriesBudget budget = tight_budget();
    CMatrix zero = CMatrix::Zero(2, 2);
    CMatrix A = 0.8 * pauli(0);
    auto rows_b0 = interchange_identity(A, zero, 0.9, budget);
    CHECK(rows_b0[0].lhs < 1e-9);

    // commuting generators collapse both sides to e^{itA}
    auto rows_comm = interchange_identity(A, CMatrix(2.0 * A), 0.5, budget);
    CHECK(rows_comm[0].lhs < 1e-9);

    auto rows = interchange_identity(pauli(0), pauli(2), 0.7, budget);
    CHECK(rows[0].name == "expansional.interchange");
    CHECK(rows[0].lhs < 1e-8);
    CHECK(is_informational(rows[1]));
    // the as-printed form does not close for noncommuting generators
    CHECK(rows[1].lhs > 1e-3);

    RandomSource rng(55);
    CHECK_THROWS_AS(interchange_identity(random_matrix(2, rng), zero, 0.5, budget),
                    NotHermitian);
}

TEST_CASE("relative cocycle trivial and commuting cases") {
    SeriesBudget budget = tight_budget();
    GnsContext ctx = two_level_context();
    RelativeCocycle trivial = relative_cocycle(ctx, CMatrix::Zero(2, 2), 0.6, budget);
    CHECK(op_norm(trivial.u - CMatrix::Identity(2, 2)) < 1e-12);
    CHECK(op_norm(trivial.u_hat - CMatrix::Identity(2, 2)) < 1e-12);

    CMatrix Qc = CMatrix::Zero(2, 2);  // commutes with rho
    Qc(0, 0) = 0.4;
    Qc(1, 1) = -0.2;
    const double t = 0.7;
    RelativeCocycle rc = relative_cocycle(ctx, Qc, t, budget);
    CMatrix expected = exp_scaled_hermitian(Qc, Complex(0, -t));
    CHECK(op_norm(rc.u - expected) < 1e-9);
}

TEST_CASE("relative cocycle against the two-flow oracle") {
    SeriesBudget budget = tight_budget();
    GnsContext ctx = two_level_context();
    CMatrix Q = 0.3 * pauli(0);
    RelativeCocycle rc = relative_cocycle(ctx, Q, 0.5, budget);
    CHECK(op_norm(rc.u * rc.u_hat - CMatrix::Identity(2, 2)) < 1e-8);
    CHECK(op_norm(rc.u_hat * rc.u - CMatrix::Identity(2, 2)) < 1e-8);
    CHECK(op_norm(rc.u_hat - rc.u.adjoint()) < 1e-8);
    CHECK(op_norm(rc.u - relative_cocycle_oracle(ctx, Q, 0.5)) < 1e-7);
    CHECK(op_norm(rc.u.adjoint() * rc.u - CMatrix::Identity(2, 2)) < 1e-8);  // unitary

    for (const auto& r : check_cocycle_intertwining(ctx, Q, 0.5, budget, 7)) {
        INFO(r.name);
        if (!is_informational(r)) CHECK(r.lhs < 1e-7);
    }
}

TEST_CASE("cocycle composition through the transported factor") {
    SeriesBudget budget = tight_budget();
    RandomSource rng(54);
    GnsContext ctx = build_gns(random_density(3, rng));
    CMatrix Q = random_hermitian(3, rng);
    Q *= 0.8 / std::max(0.8, op_norm(Q));
    const double t = 0.4, s = 0.3;
    RelativeCocycle ut = relative_cocycle(ctx, Q, t, budget);
    RelativeCocycle us = relative_cocycle(ctx, Q, s, budget);
    RelativeCocycle uts = relative_cocycle(ctx, Q, t + s, budget);
    CHECK(op_norm(uts.u - ut.u * modular_flow(ctx, us.u, t)) < 1e-7);
}

TEST_SUITE_END();
