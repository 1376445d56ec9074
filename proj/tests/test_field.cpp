#include <sstream>

#include <gtest/gtest.h>

#include "deadcore/field.hpp"

using namespace deadcore;

namespace {

SpaceTimeField linear_field()
{
    SpaceTimeField f;
    f.grid = GridSpec::interval(-1.0, 1.0, 8, 1.0);
    f.params = ProblemParams::with_constant(2, 0.5, 1, 1.0);
    f.times = {0.0, 0.5, 1.0};
    for (double t : f.times) {
        std::vector<double> s;
        for (int i = 0; i <= 8; ++i)
            s.push_back(2.0 + f.grid.x(i) + 3.0 * t);
        f.slices.push_back(s);
    }
    return f;
}

}  // namespace

TEST(GridSpec, ValidationListsEveryProblem)
{
    GridSpec g = GridSpec::interval(1.0, -1.0, 4, -1.0);
    g.cfl_sigma = 0.7;
    try {
        g.validate();
        FAIL();
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        for (const char* part : {"nx must be >= 8", "xr > xl", "t_end", "cfl_sigma"})
            EXPECT_NE(msg.find(part), std::string::npos) << part;
    }
    GridSpec ok = GridSpec::interval(-1, 1, 8, 1.0);
    ok.cfl_sigma = 5.0;
    EXPECT_THROW(ok.validate(), InvalidArgument);
    ok.unchecked_cfl = true;
    EXPECT_NO_THROW(ok.validate());
}

TEST(GridSpec, NodesHitEndpointsExactly)
{
    const auto g = GridSpec::interval(-0.3, 0.7, 7, 1.0);
    EXPECT_EQ(g.x(0), -0.3);
    EXPECT_EQ(g.x(7), 0.7);
    EXPECT_EQ(g.nodes(), 8);
    const auto r = GridSpec::radial(1.5, 3, 9, 1.0);
    EXPECT_EQ(r.x(0), 0.0);
    EXPECT_EQ(r.x(9), 1.5);
}

TEST(SpaceTimeField, FindTime)
{
    const auto f = linear_field();
    EXPECT_EQ(f.find_time(0.5), 1u);
    EXPECT_EQ(f.find_time(0.5 + 1e-14), 1u);
    EXPECT_EQ(f.find_time(0.25), SpaceTimeField::npos);
    EXPECT_EQ(f.find_time(2.0), SpaceTimeField::npos);
}

TEST(SpaceTimeField, BilinearSamplingIsExactOnLinearData)
{
    const auto f = linear_field();
    for (double x : {-1.0, -0.33, 0.0, 0.71, 1.0})
        for (double t : {0.0, 0.2, 0.5, 0.9, 1.0})
            EXPECT_NEAR(f.sample(x, t), 2.0 + x + 3.0 * t, 1e-14);
    EXPECT_THROW(f.sample(1.5, 0.5), DomainError);
    EXPECT_THROW(f.sample(0.0, 1.5), DomainError);
}

TEST(SpaceTimeField, RadialSamplingReflects)
{
    SpaceTimeField f;
    f.grid = GridSpec::radial(1.0, 2, 8, 0.0);
    f.times = {0.0};
    f.slices = {std::vector<double>(9)};
    for (int i = 0; i <= 8; ++i)
        f.slices[0][i] = f.grid.x(i);
    EXPECT_DOUBLE_EQ(f.sample_x(-0.3, 0), 0.3);
}

TEST(SpaceTimeField, NodeWeightsIntegrateConstants)
{
    SpaceTimeField f;
    f.grid = GridSpec::interval(-1, 2, 12, 0.0);
    double s = 0.0;
    for (int i = 0; i <= 12; ++i)
        s += f.node_weight(i);
    EXPECT_NEAR(s, 3.0, 1e-14);
    for (int N : {1, 2, 3}) {
        f.grid = GridSpec::radial(2.0, N, 16, 0.0);
        s = 0.0;
        for (int i = 0; i <= 16; ++i)
            s += f.node_weight(i);
        EXPECT_NEAR(s, std::pow(2.0, N) / N, 1e-12);
    }
}

TEST(SpaceTimeField, SampleClosedForm)
{
    const auto params = ProblemParams::with_constant(2, 0.5, 1, 1.0);
    const auto f = sample_closed_form(make_halfspace(params), GridSpec::interval(-1, 1, 16, 1.0), {0.0, 1.0});
    ASSERT_EQ(f.times.size(), 2u);
    EXPECT_NEAR(f.slices[1][16], 1.0 / 144.0, 1e-16);
    EXPECT_EQ(f.slices[0][0], 0.0);
    EXPECT_NEAR(f.boundary.right(0.3), 1.0 / 144.0, 1e-16);
}

TEST(TimeLadder, EndpointsExact)
{
    const auto t = time_ladder(0.0, 0.3, 3);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_EQ(t.back(), 0.3);
    EXPECT_NEAR(t[1], 0.1, 1e-16);
}

TEST(SnapshotCsv, RoundTripIsExact)
{
    auto f = linear_field();
    f.slices[1][3] = 1.0 / 3.0;
    std::ostringstream os;
    write_snapshot_csv(os, f);
    SpaceTimeField g;
    g.grid = f.grid;
    std::istringstream is(os.str());
    read_snapshot_csv(is, g);
    EXPECT_EQ(g.times, f.times);
    EXPECT_EQ(g.slices, f.slices);
    std::ostringstream again;
    write_snapshot_csv(again, g);
    EXPECT_EQ(again.str(), os.str());
}

TEST(SnapshotCsv, RejectsMalformedInput)
{
    SpaceTimeField g;
    g.grid = GridSpec::interval(-1, 1, 8, 1.0);
    std::istringstream no_header("0,0,0\n");
    EXPECT_THROW(read_snapshot_csv(no_header, g), InvalidArgument);
    std::istringstream short_slice("t,x,u\n0,0,1\n0,0.25,1\n");
    EXPECT_THROW(read_snapshot_csv(short_slice, g), InvalidArgument);
    std::istringstream garbage("t,x,u\n0;1;2\n");
    EXPECT_THROW(read_snapshot_csv(garbage, g), InvalidArgument);
}
