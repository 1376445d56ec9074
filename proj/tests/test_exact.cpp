#include <cmath>

#include <gtest/gtest.h>

#include "deadcore/exact.hpp"
#include "gen.hpp"

using namespace deadcore;

namespace {

ProblemParams P(double p, double q, int dim = 1, double lambda = 1.0) { return ProblemParams::with_constant(p, q, dim, lambda); }
ProblemParams critical(double p, int dim = 1) { return ProblemParams::with_constant(p, p - 1.0, dim, 1.0, true); }

Point pt(double x) { return Point{x}; }

std::vector<SpaceTimePoint> lower_unit_cylinder(int dim, int n)
{
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            Point x(dim, 0.0);
            x[0] = -1.0 + (i + 0.5) * 2.0 / n;
            if (dim > 1)
                x[1] = 0.3 * x[0];
            pts.push_back({x, -(l + 0.5) / n});
        }
    return pts;
}

}  // namespace

TEST(ClosedForms, OdeDeadCoreValues)
{
    const auto cf = make_ode_deadcore(P(2, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(evaluate(cf, pt(0.3), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(evaluate(cf, pt(0.3), 1.0), 0.25);
    EXPECT_EQ(evaluate(cf, pt(0.3), 2.0), 0.0);
    EXPECT_EQ(evaluate(cf, pt(0.3), 7.0), 0.0);
}

TEST(ClosedForms, HalfSpaceValues)
{
    const auto cf = make_halfspace(P(2, 0.5));
    EXPECT_NEAR(evaluate(cf, pt(2.0), 0.0), 1.0 / 9.0, 1e-15);
    EXPECT_EQ(evaluate(cf, pt(-0.5), 0.0), 0.0);
    const auto neg = make_halfspace(P(2, 0.5), 0, -1);
    EXPECT_NEAR(evaluate(neg, pt(-2.0), 3.0), 1.0 / 9.0, 1e-15);
    EXPECT_EQ(evaluate(neg, pt(0.5), 0.0), 0.0);
    EXPECT_THROW(make_halfspace(P(2, 0.5), 0, 2), InvalidArgument);
    EXPECT_THROW(make_halfspace(P(2, 0.5), 1), InvalidArgument);
    EXPECT_THROW(evaluate(cf, Point{0.1, 0.2}, 0.0), DomainError);
}

TEST(ClosedForms, HalfSpaceUsesOneDimensionalConstant)
{
    const auto cf = make_halfspace(P(2, 0.5, 3));
    EXPECT_NEAR(evaluate(cf, Point{2.0, 5.0, -1.0}, 0.0), 1.0 / 9.0, 1e-15);
}

TEST(ClosedForms, RadialMatchesHalfSpaceInOneDimension)
{
    const auto r = make_radial(P(3, 0.5), Point{0.0}, 0.0);
    const auto h = make_halfspace(P(3, 0.5));
    for (double x : {0.1, 0.5, 0.9})
        EXPECT_DOUBLE_EQ(evaluate(r, pt(x), 0.0), evaluate(h, pt(x), 0.0));
    EXPECT_DOUBLE_EQ(evaluate(r, pt(-0.5), 0.0), evaluate(h, pt(0.5), 0.0));
    EXPECT_THROW(make_radial(P(3, 0.5, 2), Point{0.0}, 0.0), InvalidArgument);
    EXPECT_THROW(make_radial(P(3, 0.5), Point{0.0}, -1.0), InvalidArgument);
}

TEST(ClosedForms, BarrierDomains)
{
    const auto nd = make_barrier_nondeg(P(2, 0));
    EXPECT_THROW(evaluate(nd, pt(0.0), 0.1), DomainError);
    const auto gr = make_barrier_growth(P(2, 0), 1.0, 2.0);
    EXPECT_THROW(evaluate(gr, pt(0.0), -0.1), DomainError);
    EXPECT_THROW(make_barrier_growth(P(2, 0), 1.0, 0.0), InvalidArgument);
    EXPECT_THROW(make_barrier_nondeg(P(2, 0), -1.0), InvalidArgument);
}

TEST(ClosedForms, NondegBarrierAtQuadraticCase)
{
    // p = 2, q = 0, c = 1/4: Φ̂ = (x² − t)/4.
    const auto cf = make_barrier_nondeg(P(2, 0));
    EXPECT_DOUBLE_EQ(cf.amplitude, 0.25);
    for (double x : {-0.7, 0.0, 0.4})
        for (double t : {-1.0, -0.3, 0.0})
            EXPECT_NEAR(evaluate(cf, pt(x), t), (x * x - t) / 4.0, 1e-15);
}

TEST(ClosedForms, FreeBoundaryDistance)
{
    EXPECT_DOUBLE_EQ(free_boundary_distance(make_halfspace(P(2, 0.5)), pt(-0.3), 0.0), 0.3);
    EXPECT_DOUBLE_EQ(free_boundary_distance(make_ode_deadcore(P(2, 0.5), 2.0), pt(5.0), 1.5), 0.5);
    EXPECT_DOUBLE_EQ(free_boundary_distance(make_radial(P(2, 0.5), Point{0.0}, 0.25), pt(0.75), 0.0), 0.5);
    EXPECT_DOUBLE_EQ(free_boundary_distance(make_barrier_nondeg(P(2, 0.5)), pt(0.3), -0.4), 0.5);
    EXPECT_TRUE(std::isinf(free_boundary_distance(critical_solutions(critical(2), CriticalVariant::exp_sum), pt(0), 0)));
}

TEST(Residual, FourthOrderStencilReproducesQuarticProfile)
{
    const auto cf = make_halfspace(P(2, 0.5));
    const double h = 2.0 / 256;
    double worst = 0.0;
    for (int i = 2; i <= 128; ++i)
        worst = std::max(worst, std::abs(pde_residual(cf, pt(i * h), 0.0, h, Stencil::fourth_order)));
    EXPECT_LE(worst, 1e-9);
}

TEST(Residual, SecondOrderStencilDefectIsExactlyHSquaredOver72)
{
    // Central second difference of x⁴/144 is x²/12 + h²/72, and √u = x²/12.
    const auto cf = make_halfspace(P(2, 0.5));
    for (double h : {0.1, 0.05, 0.01})
        for (double x : {0.3, 0.6, 0.9})
            EXPECT_NEAR(pde_residual(cf, pt(x), 0.0, h), h * h / 72.0, 1e-12);
}

TEST(Residual, RejectsStencilsNearFreeBoundary)
{
    const auto cf = make_halfspace(P(2, 0.5));
    EXPECT_THROW(pde_residual(cf, pt(0.01), 0.0, 0.01), DomainError);
    EXPECT_THROW(pde_residual(cf, pt(0.5), 0.0, 0.0), InvalidArgument);
    const auto nd = make_barrier_nondeg(P(2, 0.5));
    EXPECT_THROW(pde_residual(nd, pt(0.5), -0.005, 0.01), DomainError);
}

TEST(Residual, OdeProfileResidualVanishes)
{
    // Time stencil is exact on the quadratic (q = 1/2) profile; q = 1/4 converges at second order.
    EXPECT_NEAR(pde_residual(make_ode_deadcore(P(2, 0.5), 2.0), pt(0.1), 1.0, 0.01), 0.0, 1e-13);
    const auto cf = make_ode_deadcore(P(2, 0.25), 2.0);
    const double r1 = std::abs(pde_residual(cf, pt(0.1), 1.0, 0.02));
    const double r2 = std::abs(pde_residual(cf, pt(0.1), 1.0, 0.01));
    EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.05);
}

TEST(Residual, RadialProfilesOnRandomParams)
{
    gen::Gen g(21);
    for (int k = 0; k < 40; ++k) {
        const int N = g.integer(1, 3);
        const auto params = g.params(N);
        const auto cf = make_radial(params, Point(N, 0.0), 0.0);
        Point x(N, 0.0);
        x[0] = g.uniform(0.4, 0.9);
        const auto parts = residual_parts(cf, x, 0.0, 1e-3, Stencil::fourth_order);
        EXPECT_LE(std::abs(parts.value()), 1e-7 * parts.scale()) << "p=" << params.p << " q=" << params.q << " N=" << N;
    }
}

TEST(Residual, CriticalSolutions)
{
    const auto s = critical_solutions(critical(2), CriticalVariant::exp_sum);
    double prev = std::abs(pde_residual(s, pt(0.3), 0.5, 0.1));
    for (double h : {0.05, 0.025, 0.0125}) {
        const double r = std::abs(pde_residual(s, pt(0.3), 0.5, h));
        EXPECT_NEAR(std::log2(prev / r), 2.0, 0.1);
        prev = r;
    }
    const auto e = critical_solutions(critical(3), CriticalVariant::exp_direction);
    const auto pe = residual_parts(e, pt(0.2), 0.0, 1e-3, Stencil::fourth_order);
    EXPECT_LE(std::abs(pe.value()), 1e-9 * pe.scale());
    const auto tp = critical_solutions(critical(3), CriticalVariant::time_power);
    EXPECT_DOUBLE_EQ(evaluate(tp, pt(0.0), 2.0), 0.5);  // 1/t
    const auto pt_ = residual_parts(tp, pt(0.0), 1.0, 1e-3, Stencil::fourth_order);
    EXPECT_LE(std::abs(pt_.value()), 1e-9 * pt_.scale());
    EXPECT_THROW(critical_solutions(critical(3), CriticalVariant::exp_sum), InvalidArgument);
    EXPECT_THROW(critical_solutions(critical(2), CriticalVariant::time_power), InvalidArgument);
    EXPECT_THROW(critical_solutions(P(2, 0.5), CriticalVariant::exp_sum), InvalidArgument);
    EXPECT_THROW(evaluate(tp, pt(0.0), 0.0), DomainError);
}

TEST(Barriers, StatedNondegConstantIsNotASupersolution)
{
    const auto pts = lower_unit_cylinder(1, 10);
    const auto stated = barrier_supersolution_check(make_barrier_nondeg(P(2, 0.5)), pts, 1e-4);
    EXPECT_FALSE(stated.pass);
    EXPECT_GT(stated.worst, 0.5);
    const auto corrected = barrier_supersolution_check(make_barrier_nondeg(P(2, 0.5), 1.0 / 576), pts, 1e-4);
    EXPECT_TRUE(corrected.pass) << corrected.worst;
    const auto tenfold = barrier_supersolution_check(make_barrier_nondeg(P(2, 0.5), 10.0 / 576), pts, 1e-4);
    EXPECT_FALSE(tenfold.pass);
}

TEST(Barriers, CorrectedNondegConstantIsSupersolutionOnRandomParams)
{
    gen::Gen g(31);
    for (int k = 0; k < 30; ++k) {
        const int N = g.integer(1, 2);
        const auto params = g.params(N);
        const auto cf = make_barrier_nondeg(params, supersolution_constant_nondeg(params));
        const auto rep = barrier_supersolution_check(cf, lower_unit_cylinder(N, 6), 1e-4, 1e-6, Stencil::fourth_order);
        EXPECT_TRUE(rep.pass) << "p=" << params.p << " q=" << params.q << " N=" << N << " worst=" << rep.worst;
    }
}

TEST(Barriers, GrowthBarrierIsSupersolutionOnRandomParams)
{
    gen::Gen g(32);
    for (int k = 0; k < 30; ++k) {
        const int N = g.integer(1, 2);
        const auto params = g.params(N);
        const auto cf = make_barrier_growth(params, g.uniform(0.5, 4.0), g.uniform(0.5, 4.0));
        auto pts = lower_unit_cylinder(N, 6);
        for (auto& s : pts)
            s.t = -s.t;
        const auto rep = barrier_supersolution_check(cf, pts, 1e-4, 1e-6, Stencil::fourth_order);
        EXPECT_TRUE(rep.pass) << "p=" << params.p << " q=" << params.q << " worst=" << rep.worst;
    }
}

TEST(Barriers, GrowthBarrierDependsOnlyOnRatio)
{
    gen::Gen g(33);
    for (int k = 0; k < 50; ++k) {
        const auto params = g.params();
        const double a = g.uniform(0.5, 3.0), b = g.uniform(0.5, 3.0), s = g.uniform(0.5, 4.0);
        const auto f1 = make_barrier_growth(params, a, b), f2 = make_barrier_growth(params, s * a, s * b);
        const double x = g.uniform(-1, 1), t = g.uniform(0, 1);
        const double v = evaluate(f1, pt(x), t);
        EXPECT_NEAR(evaluate(f2, pt(x), t), v, 1e-10 * std::max(v, 1e-300));
    }
}

TEST(Barriers, FindGrowthBarrierDominatesTarget)
{
    const auto params = P(2, 0.5);
    const auto hs = make_halfspace(params);
    auto target = [&](const Point& x, double t) { return evaluate(hs, x, t); };
    const auto fit = find_growth_barrier(params, target, parabolic_boundary_samples(1, 16));
    ASSERT_TRUE(fit.has_value());
    EXPECT_GE(fit->margin, 0.0);
    const auto phi = make_barrier_growth(params, fit->a, fit->b);
    for (const auto& s : parabolic_boundary_samples(1, 16))
        EXPECT_GE(evaluate(phi, s.x, s.t), target(s.x, s.t));
    auto huge = [](const Point&, double) { return 1e30; };
    EXPECT_FALSE(find_growth_barrier(params, huge, parabolic_boundary_samples(1, 4), 2).has_value());
    EXPECT_THROW(find_growth_barrier(params, target, {}), InvalidArgument);
}
