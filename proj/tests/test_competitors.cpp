#include "ncover/competitors.hpp"
#include "ncover/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <numbers>
#include <sstream>

using namespace ncover;
using namespace ncover::testing;

TEST(Twist, ProfilesFixTheBoundary) {
    const TwistMap p = make_twist(TwistProfile::polynomial, 0.3, 1);
    EXPECT_EQ(p.w(1.0), 0.0);
    EXPECT_NEAR(p.w(0.0), 0.3, 1e-15);
    EXPECT_NEAR(p.w_prime(0.5), -0.3, 1e-15);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TwistMap b = make_twist(TwistProfile::bump, -0.4, seed);
        double peak = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double r = k / 1000.0;
            if (r <= 0.25 || r >= 0.75) EXPECT_EQ(b.w(r), 0.0);
            peak = std::max(peak, std::abs(b.w(r)));
        }
        EXPECT_LE(peak, 0.4 + 1e-15);
        EXPECT_GT(peak, 0.39);
    }
    const TwistMap zero = make_twist(TwistProfile::bump, 0.0, 3);
    for (double r : {0.1, 0.5, 0.9}) EXPECT_EQ(zero.w(r), 0.0);
}

TEST(Twist, ScalingAndComposition) {
    const TwistMap a = TwistMap::polynomial(0.2), b = TwistMap::bump(0.5, 0.3, 0.7);
    const TwistMap ab = compose(a, b), s = b.scaled(-2.0);
    for (double r : {0.2, 0.45, 0.6}) {
        EXPECT_NEAR(ab.w(r), a.w(r) + b.w(r), 1e-15);
        EXPECT_NEAR(ab.w_prime(r), a.w_prime(r) + b.w_prime(r), 1e-15);
        EXPECT_NEAR(s.w(r), -2.0 * b.w(r), 1e-15);
    }
    EXPECT_EQ(TwistMap::identity().w(0.4), 0.0);
}

TEST(Twist, RejectsBadInput) {
    EXPECT_THROW(make_twist(TwistProfile::bump, std::numeric_limits<double>::infinity(), 1), ParameterError);
    EXPECT_THROW(TwistMap::bump(1.0, 0.6, 0.4), ParameterError);
    EXPECT_THROW(TwistMap::bump(1.0, 0.2, 1.0), ParameterError);
    EXPECT_EQ(parse_twist_profile("bump"), TwistProfile::bump);
    EXPECT_THROW(parse_twist_profile("hamiltonian"), ParameterError);
}

TEST(Compose, IdentityLeavesMapUnchanged) {
    const PolarGrid grid = make_grid(8, 16);
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(3);
    const VectorField a = sample_map(u, grid), b = compose(u, TwistMap::identity(), grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        EXPECT_LT(norm(a.values()[n] - b.values()[n]), 1e-15);
        EXPECT_LT(max_abs_diff(a.gradients()[n], b.gradients()[n]), 1e-14);
    }
}

TEST(Compose, IncompressibleWithBoundaryTrace) {
    const PolarGrid grid = make_grid(100, 100);
    for (int n : {2, 3}) {
        const OneHomogeneousMap u = OneHomogeneousMap::ncover(n);
        const VectorField base = sample_map(u, grid);
        const VectorField v = compose(u, compose(TwistMap::polynomial(0.7), TwistMap::bump(-1.2, 0.3, 0.7)), grid);
        EXPECT_LE(det_defect(v), 1e-12);
        ASSERT_EQ(v.boundary_trace().size(), base.boundary_trace().size());
        for (std::size_t k = 0; k < v.boundary_trace().size(); ++k)
            EXPECT_LE(norm(v.boundary_trace()[k] - base.boundary_trace()[k]), 1e-12);
    }
}

TEST(Compose, GradientMatchesFiniteDifferences) {
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(2);
    const TwistMap psi = compose(TwistMap::polynomial(0.4), TwistMap::bump(0.6, 0.3, 0.8));
    const auto value = [&](Vec2 x) {
        const double r = norm(x), t = std::atan2(x.y, x.x);
        return r * u.g(t + psi.w(r));
    };
    const PolarGrid grid = make_grid(6, 8);
    const VectorField v = compose(u, psi, grid);
    const double h = 1e-6;
    for (int i = 0; i < grid.radial_count(); ++i) {
        for (int k = 0; k < grid.angular_count(); ++k) {
            const Vec2 x = grid.radius(i) * e_radial(grid.theta(k));
            EXPECT_LT(norm(value(x) - v.value(i, k)), 1e-14);
            const Vec2 dx = (1 / (2 * h)) * (value(x + Vec2{h, 0}) - value(x - Vec2{h, 0}));
            const Vec2 dy = (1 / (2 * h)) * (value(x + Vec2{0, h}) - value(x - Vec2{0, h}));
            EXPECT_LT(max_abs_diff(v.gradient(i, k), Mat2{dx.x, dy.x, dx.y, dy.y}), 1e-7);
        }
    }
}

TEST(Probes, CertifiedParametersHaveNonnegativeGaps) {
    const ProbeReport r = probe_minimality(2, 3, 1, 40, 0.5, 7, make_grid(128, 256));
    EXPECT_TRUE(r.certified);
    EXPECT_EQ(r.probes.size(), 40u);
    EXPECT_NEAR(r.gap_tolerance, 1e-8 * (1 + 3.5 * std::numbers::pi), 1e-12);
    EXPECT_TRUE(r.min_gap_ok);
    EXPECT_GE(r.min_gap, -r.gap_tolerance);
    EXPECT_LE(r.max_residual, 1e-6);
    EXPECT_LE(r.max_det_err, 1e-12);
}

TEST(Probes, ZeroAmplitudeAndDeterminism) {
    const PolarGrid grid = make_grid(16, 32);
    const ProbeReport z = probe_minimality(3, 5, 1, 10, 0.0, 1, grid);
    for (const ProbeRecord& p : z.probes) {
        EXPECT_EQ(p.gap, 0.0);
        EXPECT_EQ(p.amplitude, 0.0);
    }
    const ProbeReport a = probe_minimality(2, 3, 1, 10, 0.5, 99, grid), b = probe_minimality(2, 3, 1, 10, 0.5, 99, grid);
    for (std::size_t p = 0; p < a.probes.size(); ++p) EXPECT_EQ(a.probes[p].gap, b.probes[p].gap);
}

TEST(Probes, UncertifiedParametersReportOnly) {
    const ProbeReport r = probe_minimality(2, 8, 1, 10, 0.5, 3, make_grid(16, 32));
    EXPECT_FALSE(r.certified);
    EXPECT_EQ(r.probes.size(), 10u);
}

TEST(Probes, RejectsBadArguments) {
    const PolarGrid grid = make_grid(8, 16);
    EXPECT_THROW(probe_minimality(2, 3, 1, 0, 0.5, 1, grid), ParameterError);
    EXPECT_THROW(probe_minimality(2, 3, 1, 5, -0.5, 1, grid), ParameterError);
}

TEST(GapScaling, QuadraticPinch) {
    const PolarGrid grid = make_grid(64, 128);
    const std::vector<double> amps{0.0, 0.0125, 0.025, 0.05, 0.1, 0.2};
    for (const TwistMap& twist : {TwistMap::polynomial(1.0), TwistMap::bump(1.0, 0.3, 0.7)}) {
        const std::vector<double> gaps = strict_gap_scaling(2, 3, 1, twist, amps, grid);
        ASSERT_EQ(gaps.size(), amps.size());
        EXPECT_EQ(gaps[0], 0.0);
        for (std::size_t k = 2; k < 5; ++k) {
            const double ratio = gaps[k] / gaps[k - 1];
            EXPECT_GE(ratio, 3.5);
            EXPECT_LE(ratio, 4.5);
        }
        for (std::size_t k = 1; k < gaps.size(); ++k) EXPECT_GT(gaps[k], gaps[k - 1]);
    }
    EXPECT_THROW(strict_gap_scaling(2, 3, 1, TwistMap::polynomial(1.0), {0.2, 0.1}, grid), ParameterError);
}

TEST(ProbeCsv, Layout) {
    const ProbeReport r = probe_minimality(2, 3, 1, 3, 0.2, 5, make_grid(8, 16));
    std::ostringstream os;
    write_probe_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "probe_id,amplitude,gap,predicted_gap,residual,det_err");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 3);
}
