#include "normsol/numerics.hpp"
#include "normsol/params.hpp"
#include "normsol/radial_profile.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace normsol;

TEST(Numerics, SimpsonIsExactForCubics)
{
    for (std::size_t n : {5u, 6u, 9u, 10u}) {
        const auto x = uniform_nodes(0.0, 2.0, n);
        std::vector<double> f;
        for (double t : x)
            f.push_back(t * t * t - t + 1.0);
        EXPECT_NEAR(simpson(f, x[1] - x[0]), 4.0 - 2.0 + 2.0, 1e-13) << n;
    }
}

TEST(Numerics, TridiagonalSolveMatchesApply)
{
    Tridiagonal a(5);
    for (std::size_t i = 0; i < 5; ++i)
        a.diag[i] = 4.0 + i;
    for (std::size_t i = 0; i < 4; ++i) {
        a.lower[i] = -1.0;
        a.upper[i] = 0.5 * i;
    }
    const std::vector<double> x{1, -2, 3, 0.5, 7};
    const auto sol = a.solve(a.apply(x));
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_NEAR(sol.x[i], x[i], 1e-13);
    EXPECT_GT(sol.rcond, 0.1);
}

TEST(Numerics, SingularTridiagonalIsReported)
{
    // first two rows are both [1 1 0]
    Tridiagonal a(3);
    a.diag = {1.0, 1.0, 1.0};
    a.lower = {1.0, 1.0};
    a.upper = {1.0, 0.0};
    try {
        a.solve(std::vector<double>{1, 2, 3});
        FAIL() << "expected SingularOperator";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularOperator);
    }
}

TEST(Numerics, FindRootRequiresBracket)
{
    auto f = [](double x) { return x * x - 2.0; };
    EXPECT_NEAR(find_root(f, 0.0, 2.0, f(0.0), f(2.0), 1e-14), std::sqrt(2.0), 1e-12);
    try {
        find_root(f, 2.0, 3.0, f(2.0), f(3.0), 1e-12);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BracketFailed);
    }
}

TEST(Params, RegimeClassification)
{
    EXPECT_EQ(make_params(1, 5.0).regime, Regime::MassCritical);
    EXPECT_EQ(make_params(1, 3.0).regime, Regime::Subcritical);
    EXPECT_EQ(make_params(1, 7.0).regime, Regime::Supercritical);
    EXPECT_EQ(make_params(2, 3.0).regime, Regime::MassCritical);
    EXPECT_EQ(make_params(3, 1.0 + 4.0 / 3.0).regime, Regime::MassCritical);
    EXPECT_EQ(make_params(3, 3.0).regime, Regime::Supercritical);
    EXPECT_THROW(make_params(1, 1.0), Error);
    EXPECT_THROW(make_params(3, 5.0), Error);
    EXPECT_THROW(make_params(0, 3.0), Error);
}

TEST(Params, SphereArea)
{
    EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-15);
    EXPECT_NEAR(unit_sphere_area(2), 2.0 * std::numbers::pi, 1e-14);
    EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-14);
}

TEST(RadialProfileTest, HermiteInterpolationAndTail)
{
    RadialProfile f;
    f.nodes = uniform_nodes(0.0, 10.0, 201);
    for (double r : f.nodes)
        f.values.push_back(std::exp(-r * r / 4.0));
    f.dvalues = derivative_samples(f.values, f.step(), Parity::Even);
    f.tail_rate = -5.0;
    f.validate();
    for (double r : {0.013, 1.27, 3.333, 7.9})
        EXPECT_NEAR(f(r), std::exp(-r * r / 4.0), 1e-8) << r;
    EXPECT_DOUBLE_EQ(f(-1.27), f(1.27));
    EXPECT_NEAR(f(11.0), f.values.back() * std::exp(-5.0), 1e-30);
}
