#include <cmath>

#include <gtest/gtest.h>

#include "deadcore/core.hpp"
#include "gen.hpp"

using namespace deadcore;

namespace {

ProblemParams P(double p, double q, int dim = 1, double lambda = 1.0) { return ProblemParams::with_constant(p, q, dim, lambda); }

}  // namespace

TEST(Exponents, KnownValues)
{
    const auto e = compute_exponents(P(2, 0.5));
    EXPECT_DOUBLE_EQ(e.alpha0, 4.0);
    EXPECT_DOUBLE_EQ(e.theta, 2.0);
    EXPECT_DOUBLE_EQ(e.alpha_sharp, 2.0);
    EXPECT_DOUBLE_EQ(e.grad_alpha, 3.0);

    const auto f = compute_exponents(P(3, 0.5));
    EXPECT_DOUBLE_EQ(f.alpha0, 2.0);
    EXPECT_DOUBLE_EQ(f.theta, 1.0);
    EXPECT_DOUBLE_EQ(f.alpha_sharp, 1.5);
    EXPECT_DOUBLE_EQ(f.grad_alpha, 1.0);

    const auto g = compute_exponents(P(2, 0));
    EXPECT_DOUBLE_EQ(g.alpha0, 2.0);
    EXPECT_DOUBLE_EQ(g.theta, 2.0);
}

TEST(Exponents, CriticalCaseRejected)
{
    const auto c = ProblemParams::with_constant(2, 1, 1, 1.0, true);
    EXPECT_THROW(compute_exponents(c), InvalidArgument);
    EXPECT_THROW(cpq_constant(c), InvalidArgument);
}

TEST(Exponents, ThetaIdentityOnRandomParams)
{
    gen::Gen g(11);
    for (int k = 0; k < 200; ++k) {
        const auto params = g.params();
        const auto e = compute_exponents(params);
        // θ = α₀(1 − q), grad exponent = α₀ − 1, α₀ ≥ α♯.
        EXPECT_NEAR(e.theta, e.alpha0 * (1.0 - params.q), 1e-12 * e.theta);
        EXPECT_NEAR(e.grad_alpha, e.alpha0 - 1.0, 1e-12 * e.alpha0);
        EXPECT_GE(e.alpha0, e.alpha_sharp - 1e-12);
    }
}

TEST(Params, ValidationMessages)
{
    ProblemParams bad;
    bad.p = 1.5;
    bad.q = 1.2;
    try {
        bad.validate();
        FAIL();
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("p must be >= 2"), std::string::npos);
        EXPECT_NE(msg.find("q must satisfy"), std::string::npos);
    }
    EXPECT_THROW(ProblemParams::with_constant(2, 0.5, 1, 1.0, true), InvalidArgument);
    EXPECT_THROW(ProblemParams::with_constant(2, 0.5, 0, 1.0), InvalidArgument);
    EXPECT_THROW(ProblemParams::with_constant(2, 0.5, 1, 0.0), InvalidArgument);
}

TEST(Params, FieldModulusBoundsChecked)
{
    ProblemParams params;
    params.lambda_lo = 0.5;
    params.lambda_hi = 2.0;
    params.lambda0 = Modulus::field([](double x, double) { return 1.0 + x; });
    params.validate();
    EXPECT_DOUBLE_EQ(params.lambda_at(0.5, 0.0), 1.5);
    EXPECT_THROW(params.lambda_at(1.5, 0.0), InvalidArgument);
    EXPECT_THROW(cpq_constant(params), InvalidArgument);
}

TEST(PositivePower, Conventions)
{
    EXPECT_EQ(positive_power(-1.0, 0.5), 0.0);
    EXPECT_EQ(positive_power(0.0, 0.0), 0.0);
    EXPECT_EQ(positive_power(3.0, 0.0), 1.0);
    EXPECT_EQ(positive_power(4.0, 0.5), 2.0);
    EXPECT_EQ(positive_power(4.0, 1.0), 4.0);
}

TEST(Cpq, OneDimensionalValues)
{
    EXPECT_NEAR(cpq_constant(P(2, 0)), 0.5, 1e-15);
    EXPECT_NEAR(cpq_constant(P(2, 0.5)), 1.0 / 144.0, 1e-16);
    EXPECT_NEAR(cpq_constant(P(3, 0.5)), 0.25, 1e-15);
}

// u = C x^α₀ solves (|u'|^{p−2}u')' = λ u^q iff the two monomials have equal coefficients.
TEST(Cpq, SolvesProfileOdeSymbolically)
{
    gen::Gen g(7);
    for (int k = 0; k < 200; ++k) {
        const auto params = g.params();
        const double p = params.p, q = params.q, lambda = params.lambda0.constant_value();
        const double a = p / (p - q - 1.0);
        const double C = cpq_constant(params);
        // (|u'|^{p-2} u')' = (Cα)^{p-1} (α−1)(p−1) x^{(α−1)(p−1)−1}
        const double lhs = std::pow(C * a, p - 1.0) * (a - 1.0) * (p - 1.0);
        const double rhs = lambda * std::pow(C, q);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << "p=" << p << " q=" << q;
        EXPECT_NEAR((a - 1.0) * (p - 1.0) - 1.0, a * q, 1e-10);
    }
}

TEST(Cpq, RadialValuesSolveRadialOde)
{
    // u = C r^α: r^{1−N}(r^{N−1}|u'|^{p−2}u')' = (Cα)^{p−1}((α−1)(p−1) + N − 1) r^{αq}
    gen::Gen g(8);
    for (int k = 0; k < 100; ++k) {
        const int N = g.integer(1, 4);
        const auto params = g.params(N);
        const double p = params.p, q = params.q, lambda = params.lambda0.constant_value();
        const double a = p / (p - q - 1.0);
        const double C = cpq_constant(params);
        const double lhs = std::pow(C * a, p - 1.0) * ((a - 1.0) * (p - 1.0) + N - 1.0);
        EXPECT_NEAR(lhs / (lambda * std::pow(C, q)), 1.0, 1e-10);
    }
}

TEST(BarrierConstants, HandEvaluatedValues)
{
    EXPECT_NEAR(barrier_constant_nondeg(P(2, 0.5)), 1.0 / 16.0, 1e-15);
    EXPECT_NEAR(barrier_constant_nondeg(P(2, 0)), 0.25, 1e-15);
    EXPECT_NEAR(supersolution_constant_nondeg(P(2, 0.5)), 1.0 / 576.0, 1e-16);
    EXPECT_NEAR(supersolution_constant_nondeg(P(2, 0)), 0.25, 1e-15);
    EXPECT_NEAR(barrier_constant_growth(P(2, 0), 1.0), 0.5, 1e-15);
    EXPECT_NEAR(barrier_constant_growth(P(2, 0.5), 1.0), 1.0 / 144.0, 1e-16);
    EXPECT_THROW(barrier_constant_growth(P(2, 0.5), 0.0), InvalidArgument);
}

TEST(BarrierConstants, CorrectedNeverExceedsStated)
{
    gen::Gen g(9);
    for (int k = 0; k < 200; ++k) {
        const auto params = g.params(g.integer(1, 3));
        EXPECT_LE(supersolution_constant_nondeg(params), barrier_constant_nondeg(params) * (1 + 1e-12));
        EXPECT_GT(supersolution_constant_nondeg(params), 0.0);
    }
}

TEST(BarrierConstants, GrowthScalesWithA)
{
    // 𝔠₁(a) a^{(p−1)/(p−1−q)} does not depend on a.
    gen::Gen g(10);
    for (int k = 0; k < 100; ++k) {
        const auto params = g.params();
        const double e = (params.p - 1.0) / (params.p - 1.0 - params.q);
        const double a = g.uniform(0.1, 10.0);
        EXPECT_NEAR(barrier_constant_growth(params, a) * std::pow(a, e), barrier_constant_growth(params, 1.0),
                    1e-10 * barrier_constant_growth(params, 1.0));
    }
}
