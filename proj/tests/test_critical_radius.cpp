#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rholab/critical_radius.hpp"
#include "rholab/grid_ops.hpp"
#include "rholab/parallel.hpp"
#include "support.hpp"

using namespace rholab;
using namespace rholab::testing;

namespace {

Potential unit_potential(std::int64_t n, double half) {
    return Potential{cube_field(n, half, FieldKind::potential, [](auto) { return 1.0; })};
}

Potential harmonic_potential(std::int64_t n, double half) {
    return Potential{cube_field(n, half, FieldKind::potential, [](auto x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; })};
}

double grid_ratio(const RadiusGrid& g) { return std::pow(g.r_max / g.r_min, 1.0 / (g.count - 1)); }

/// Independent check of both comparison bounds over every ordered pair.
bool comparison_holds(const GridField& rho, const std::vector<std::size_t>& sample, double c0, double n0) {
    for (std::size_t a : sample)
        for (std::size_t b : sample) {
            const Point x = rho.cell_center(a);
            const Point y = rho.cell_center(b);
            const double t = 1.0 + dist(x, y) / rho[a];
            const double upper = c0 * rho[a] * std::pow(t, n0 / (n0 + 1.0));
            const double lower = rho[a] * std::pow(t, -n0) / c0;
            if (rho[b] > upper * (1.0 + 1e-12) || rho[b] < lower * (1.0 - 1e-12)) return false;
        }
    return true;
}

}  // namespace

TEST(ComputeRho, UnitPotentialMatchesAnalyticValue) {
    const Potential pot = unit_potential(32, 2.0);
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    const RhoField rf = compute_rho_field(pot, grid);
    const double exact = std::sqrt(3.0 / (4.0 * std::numbers::pi));
    const double step = grid_ratio(grid);
    for (std::size_t k = 0; k < rf.rho.size(); ++k) {
        ASSERT_LE(rf.rho[k], exact * step);
        ASSERT_GE(rf.rho[k] * step, exact);
    }
    EXPECT_EQ(rf.below_grid + rf.above_grid, 0u);
    const auto v = rf.rho.values();
    EXPECT_EQ(*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()));
}

TEST(ComputeRho, HarmonicPotentialAtOrigin) {
    const Potential pot = harmonic_potential(32, 2.0);
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    const RhoValue r = compute_rho_at(pot, Point{0.0, 0.0, 0.0}, grid);
    const double exact = std::pow(5.0 / (4.0 * std::numbers::pi), 0.25);
    const double step = grid_ratio(grid);
    EXPECT_EQ(r.flag, RhoFlag::none);
    EXPECT_LE(r.rho, exact * step);
    EXPECT_GE(r.rho * step, exact);
}

TEST(ComputeRho, ZeroPotentialIsAboveGrid) {
    const Potential pot{cube_field(8, 1.0, FieldKind::potential, [](auto) { return 0.0; })};
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    const RhoField rf = compute_rho_field(pot, grid);
    EXPECT_EQ(rf.above_grid, rf.rho.size());
    EXPECT_DOUBLE_EQ(rf.rho[0], grid.r_max);
}

TEST(ComputeRho, HugePotentialIsBelowGrid) {
    const Potential pot{cube_field(8, 1.0, FieldKind::potential, [](auto) { return 1e9; })};
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    const RhoValue r = compute_rho_at(pot, Point{0.1, 0.1, 0.1}, grid);
    EXPECT_EQ(r.flag, RhoFlag::below_grid);
    EXPECT_EQ(r.rho, grid.r_min);
}

TEST(ComputeRho, RejectsBadInputs) {
    const GridField flat = GridField::constant(Box::centered(2, 1.0), {4, 4}, FieldKind::potential, 1.0);
    EXPECT_THROW(compute_rho_at(Potential{flat}, Point{0.0, 0.0}, RadiusGrid{0.1, 1.0, 64}), std::invalid_argument);
    const Potential pot = unit_potential(8, 1.0);
    EXPECT_THROW(compute_rho_at(pot, Point{0.0, 0.0, 0.0}, RadiusGrid{0.1, 1.0, 8}), std::invalid_argument);
    Potential low = pot;
    low.rh_exponent = 1.2;
    EXPECT_THROW(compute_rho_at(low, Point{0.0, 0.0, 0.0}, RadiusGrid{0.1, 1.0, 64}), std::invalid_argument);
}

TEST(ComputeRho, HermiteComparability) {
    const Potential pot = harmonic_potential(32, 4.0);
    const RhoField rf = compute_rho_field(pot, RadiusGrid::for_field(pot.field));
    double lo = INFINITY;
    double hi = 0.0;
    for (std::size_t k = 0; k < rf.rho.size(); ++k) {
        const Point x = rf.rho.cell_center(k);
        const double v = rf.rho[k] * (1.0 + std::hypot(x[0], x[1], x[2]));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LE(hi / lo, 10.0);
}

TEST(ComputeRho, LargerPotentialShrinksRho) {
    const Potential pot = harmonic_potential(12, 2.0);
    Potential big = pot;
    big.field = pot.field.map([](double v) { return 4.0 * v + 0.5; }, FieldKind::potential);
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    const RhoField a = compute_rho_field(pot, grid);
    const RhoField b = compute_rho_field(big, grid);
    for (std::size_t k = 0; k < a.rho.size(); ++k) EXPECT_LE(b.rho[k], a.rho[k]);
}

TEST(ComputeRho, ScheduleIndependent) {
    const Potential pot = harmonic_potential(12, 2.0);
    const RadiusGrid grid = RadiusGrid::for_field(pot.field);
    set_thread_count(1);
    const RhoField a = compute_rho_field(pot, grid);
    set_thread_count(4);
    const RhoField b = compute_rho_field(pot, grid);
    set_thread_count(0);
    for (std::size_t k = 0; k < a.rho.size(); ++k) EXPECT_EQ(a.rho[k], b.rho[k]);
}

TEST(RhoComparison, ConstantRhoGivesUnitConstant) {
    const GridField rho = cube_field(6, 1.0, FieldKind::rho, [](auto) { return 0.3; });
    const auto est = estimate_rho_comparison(rho, {0.5, 1.0, 2.0});
    EXPECT_EQ(est.c0, 1.0);
    for (const auto& [n0, c0] : est.candidates) EXPECT_EQ(c0, 1.0);
    EXPECT_EQ(est.n0, 0.5);
}

TEST(RhoComparison, FittedConstantIsTightAndMonotone) {
    const GridField rho = cube_field(8, 3.0, FieldKind::rho, [](auto x) { return 1.0 / (1.0 + std::hypot(x[0], x[1], x[2])); });
    const ComparisonOptions opts{512, {}};
    const auto sample = comparison_sample(rho, opts);
    double prev = INFINITY;
    for (double n0 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double c0 = fit_c0(rho, sample, n0);
        EXPECT_TRUE(std::isfinite(c0));
        EXPECT_GE(c0, 1.0);
        EXPECT_TRUE(comparison_holds(rho, sample, c0, n0));
        if (c0 > 1.0) EXPECT_FALSE(comparison_holds(rho, sample, c0 * (1.0 - 1e-9), n0));
        EXPECT_LE(c0, prev * (1.0 + 1e-12));
        prev = c0;
    }
    EXPECT_THROW(estimate_rho_comparison(rho, {}), std::invalid_argument);
}

TEST(RhoComparison, IncludeListIsSampled) {
    const GridField rho = cube_field(8, 3.0, FieldKind::rho, [](auto x) { return 1.0 + x[0] * x[0]; });
    const auto sample = comparison_sample(rho, ComparisonOptions{16, {5, 77, 300}});
    for (std::size_t k : {5u, 77u, 300u}) EXPECT_NE(std::find(sample.begin(), sample.end(), k), sample.end());
}

TEST(WindowEstimate, PassesWithFittedConstantsAndFailsUndersized) {
    const Potential pot = harmonic_potential(16, 4.0);
    const RhoField rf = compute_rho_field(pot, RadiusGrid::for_field(pot.field));
    const auto est = estimate_rho_comparison(rf.rho, {0.5, 1.0, 2.0, 4.0}, ComparisonOptions{rf.rho.size(), {}});
    const auto balls = lattice_balls(rf.rho, 3, {0.1, 0.5, 1.0, 2.0, 4.0}, false);
    const CheckReport ok = check_window_estimate(rf.rho, est, balls);
    EXPECT_TRUE(ok.passed());
    EXPECT_EQ(ok.violations, 0u);
    EXPECT_LE(ok.fitted, 1.0 + 1e-12);
    const CheckReport bad = check_window_estimate(rf.rho, est, balls, 0.5);
    EXPECT_FALSE(bad.passed());
    EXPECT_GT(bad.violations, 0u);
    ASSERT_TRUE(bad.witness.has_value());
    EXPECT_EQ(bad.witness->shape, "ball");
}

TEST(WindowEstimate, ConstantRhoIsTightForSmallBalls) {
    const GridField rho = cube_field(8, 1.0, FieldKind::rho, [](auto) { return 0.5; });
    const auto est = estimate_rho_comparison(rho, {1.0});
    const CheckReport rep = check_window_estimate(rho, est, {BallSpec{{0.125, 0.125, 0.125}, 1e-8}});
    EXPECT_TRUE(rep.passed());
    EXPECT_NEAR(rep.fitted, 1.0, 1e-6);
}

TEST(ReverseHolder, UnitPotentialIsExactlyOne) {
    const Potential pot = unit_potential(8, 1.0);
    const auto balls = lattice_balls(pot.field, 2, {0.3, 0.6}, false);
    const CheckReport rep = reverse_holder_constant(pot, 2.0, balls);
    EXPECT_EQ(rep.fitted, 1.0);
}

TEST(ReverseHolder, HarmonicConstantStableUnderRefinement) {
    std::vector<double> fitted;
    const std::vector<BallSpec> balls = {{{0.0, 0.0, 0.0}, 1.0}, {{0.5, 0.5, 0.5}, 0.75}, {{-1.0, 0.0, 0.5}, 0.5}, {{1.0, 1.0, 0.0}, 0.9}};
    for (std::int64_t n : {16, 32}) {
        const Potential pot = harmonic_potential(n, 2.0);
        const CheckReport rep = reverse_holder_constant(pot, 1.5, balls);
        EXPECT_TRUE(std::isfinite(rep.fitted));
        fitted.push_back(rep.fitted);
    }
    EXPECT_LE(rel_err(fitted[0], fitted[1]), 0.10);
}

TEST(ReverseHolder, PolynomialFiniteForEverySampledExponent) {
    const Potential pot{cube_field(12, 2.0, FieldKind::potential, [](auto x) { return std::pow(x[0], 4) + x[1] * x[1]; })};
    const auto balls = lattice_balls(pot.field, 2, {0.4, 0.8, 1.6}, false);
    for (double s : {1.5, 2.0, 4.0, 8.0}) EXPECT_TRUE(std::isfinite(reverse_holder_constant(pot, s, balls).fitted));
}
