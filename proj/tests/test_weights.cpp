#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rholab/grid_ops.hpp"
#include "rholab/seminorms.hpp"
#include "rholab/weights.hpp"
#include "support.hpp"

using namespace rholab;
using namespace rholab::testing;

namespace {

GridField flat_rho(std::int64_t n, double half, double value = 0.5) {
    return cube_field(n, half, FieldKind::rho, [value](auto) { return value; });
}

GridField power_weight(std::int64_t n, double half, double gamma) {
    return cube_field(n, half, FieldKind::weight, [gamma](auto x) { return std::pow(1.0 + std::hypot(x[0], x[1], x[2]), gamma); });
}

std::vector<FamilyItem> inner_balls(const GridField& f, std::int64_t stride, std::vector<double> radii) {
    return ball_items(f, lattice_balls(f, stride, std::move(radii), true), Extension::clamp);
}

double max_factor(const GridField& rho, const std::vector<FamilyItem>& items, double theta) {
    double m = 0.0;
    for (const FamilyItem& it : items) m = std::max(m, theta_factor(rho, it, theta));
    return m;
}

/// Class constant straight from the cell lists, p > 1 or p = 1, optional q.
double brute_class_constant(const GridField& w, const GridField& rho, double p, std::optional<double> q, double theta,
                            const std::vector<FamilyItem>& items) {
    double best = 0.0;
    for (const FamilyItem& it : items) {
        const auto cells = brute_ball_cells(w, it.center, it.scale);
        const double n = static_cast<double>(cells.size());
        double a = 0.0, b = 0.0, lo = INFINITY;
        for (std::size_t k : cells) {
            a += q ? std::pow(w[k], *q) : w[k];
            lo = std::min(lo, w[k]);
            if (p > 1.0) b += q ? std::pow(w[k], -p / (p - 1.0)) : std::pow(w[k], -1.0 / (p - 1.0));
        }
        a /= n;
        b /= n;
        const double outer = q ? 1.0 / *q : 1.0 / p;
        const double core = p > 1.0 ? std::pow(a, outer) * std::pow(b, (p - 1.0) / p) : std::pow(a, outer) / lo;
        best = std::max(best, std::pow(1.0 + it.scale / rho[rho.locate(it.center)], -theta) * core);
    }
    return best;
}

}  // namespace

TEST(ClassConstants, UnitWeightIsOne) {
    const GridField rho = flat_rho(8, 1.0);
    const GridField w = cube_field(8, 1.0, FieldKind::weight, [](auto) { return 1.0; });
    const auto balls = inner_balls(w, 2, {0.3, 0.6});
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        EXPECT_DOUBLE_EQ(ap_constant(w, rho, p, 0.0, balls).value, 1.0);
        EXPECT_DOUBLE_EQ(apq_constant(w, rho, p, p + 1.0, 0.0, balls).value, 1.0);
        EXPECT_NEAR(ap_constant(w, rho, p, 1.5, balls).value, max_factor(rho, balls, 1.5), 1e-14);
    }
}

TEST(ClassConstants, MatchBruteForceSweep) {
    const GridField rho = cube_field(10, 1.0, FieldKind::rho, [](auto x) { return 0.3 + 0.2 * x[0] * x[0]; });
    const auto balls = inner_balls(rho, 2, {0.25, 0.5, 0.8});
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const GridField w = rough_weight(10, 1.0, seed);
        for (double theta : {0.0, 0.8}) {
            EXPECT_LE(rel_err(ap_constant(w, rho, 2.0, theta, balls).value, brute_class_constant(w, rho, 2.0, {}, theta, balls)), 1e-10);
            EXPECT_LE(rel_err(ap_constant(w, rho, 1.0, theta, balls).value, brute_class_constant(w, rho, 1.0, {}, theta, balls)), 1e-10);
            EXPECT_LE(rel_err(apq_constant(w, rho, 1.0, 2.0, theta, balls).value, brute_class_constant(w, rho, 1.0, 2.0, theta, balls)), 1e-10);
            EXPECT_LE(rel_err(apq_constant(w, rho, 1.5, 3.0, theta, balls).value, brute_class_constant(w, rho, 1.5, 3.0, theta, balls)), 1e-10);
        }
    }
}

TEST(ClassConstants, MonotoneInThetaAndP) {
    const GridField rho = flat_rho(8, 1.0, 0.4);
    const auto balls = inner_balls(rho, 1, {0.2, 0.4, 0.7});
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const GridField w = rough_weight(8, 1.0, seed);
        double prev = INFINITY;
        for (double theta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double v = ap_constant(w, rho, 2.0, theta, balls).value;
            EXPECT_LE(v, prev);
            EXPECT_GE(v, max_factor(rho, balls, theta) * (1.0 - 1e-12));
            EXPECT_LE(apq_constant(w, rho, 1.5, 3.0, theta + 1.0, balls).value, apq_constant(w, rho, 1.5, 3.0, theta, balls).value);
            prev = v;
        }
        double prev_p = INFINITY;
        for (double p : {1.0, 1.25, 2.0, 3.0, 6.0}) {
            const double v = ap_constant(w, rho, p, 0.7, balls).value;
            EXPECT_LE(v, prev_p * (1.0 + 1e-12));
            prev_p = v;
        }
    }
}

TEST(ClassConstants, PowerWeightStableAsWindowDoubles) {
    std::vector<double> values;
    for (auto [n, half] : {std::pair<std::int64_t, double>{16, 2.0}, {32, 4.0}}) {
        const GridField rho = flat_rho(n, half, 0.62);
        const GridField w = power_weight(n, half, 4.0);
        const double v = ap_constant(w, rho, 2.0, 2.0, inner_balls(w, 2, {0.25, 0.5, 1.0})).value;
        EXPECT_TRUE(std::isfinite(v));
        values.push_back(v);
    }
    EXPECT_LE(rel_err(values[0], values[1]), 0.20);
}

TEST(ClassConstants, RejectsBadWeights) {
    const GridField rho = flat_rho(4, 1.0);
    const auto balls = inner_balls(rho, 1, {0.5});
    const GridField f = cube_field(4, 1.0, FieldKind::function, [](auto) { return 1.0; });
    EXPECT_THROW(ap_constant(f, rho, 2.0, 0.0, balls), std::invalid_argument);
    const GridField w = cube_field(4, 1.0, FieldKind::weight, [](auto) { return 1.0; });
    EXPECT_THROW(ap_constant(w, rho, 0.5, 0.0, balls), std::invalid_argument);
    EXPECT_THROW(apq_constant(w, rho, 2.0, 2.0, 0.0, balls), std::invalid_argument);
    EXPECT_THROW(ap_constant(w, rho, 2.0, 0.0, {}), std::invalid_argument);
    EXPECT_THROW(GridField::constant(Box::centered(3, 1.0), {4, 4, 4}, FieldKind::weight, 0.0), std::invalid_argument);
}

TEST(Conversion, ExponentArithmetic) {
    const ConversionExponents a = conversion_exponents(2.0, 4.0, 1.5);
    EXPECT_DOUBLE_EQ(a.t, 3.0);
    EXPECT_DOUBLE_EQ(a.theta, 1.5 * 4.0 / 3.0);
    const ConversionExponents b = conversion_exponents(1.0, 2.0, 0.75);
    EXPECT_EQ(b.t, 1.0);
    EXPECT_EQ(b.theta, 1.5);
    EXPECT_THROW(conversion_exponents(2.0, 2.0, 1.0), std::invalid_argument);
}

TEST(Conversion, UnitAndPowerWeights) {
    const GridField rho = flat_rho(8, 1.0);
    const auto balls = inner_balls(rho, 2, {0.3, 0.6});
    const GridField one = cube_field(8, 1.0, FieldKind::weight, [](auto) { return 1.0; });
    const CheckReport u = apq_to_ap_check(one, rho, 2.0, 4.0, 0.0, balls);
    EXPECT_TRUE(u.passed());
    EXPECT_DOUBLE_EQ(*u.find_metric("apq_constant"), 1.0);
    EXPECT_DOUBLE_EQ(*u.find_metric("at_constant"), 1.0);
    const CheckReport g = apq_to_ap_check(power_weight(8, 1.0, 1.0), rho, 1.0, 2.0, 1.0, balls);
    EXPECT_TRUE(g.passed());
    EXPECT_TRUE(std::isfinite(*g.find_metric("at_constant")));
    for (std::uint64_t seed = 0; seed < 4; ++seed) EXPECT_TRUE(apq_to_ap_check(rough_weight(8, 1.0, seed), rho, 1.5, 3.0, 0.5, balls).passed());
}

TEST(ReverseHolderWeight, UnitWeightFitsOne) {
    const GridField rho = flat_rho(8, 1.0);
    const GridField w = cube_field(8, 1.0, FieldKind::weight, [](auto) { return 1.0; });
    const auto cubes = cube_items(w, dyadic_family(whole_range(w)));
    const auto est = weight_reverse_holder(w, rho, 2.0, 1.0, 1.0, {0.05, 0.1, 0.5}, cubes);
    EXPECT_EQ(est.c, 1.0);
    for (const auto& [eps, c] : est.candidates) EXPECT_EQ(c, 1.0);
    EXPECT_DOUBLE_EQ(est.delta, est.epsilon / (1.0 + est.epsilon));
    EXPECT_GT(est.eta, 1.0);
    EXPECT_THROW(weight_reverse_holder(w, rho, 2.0, 1.0, 1.0, {}, cubes), std::invalid_argument);
}

TEST(ReverseHolderWeight, EtaFormulaAndPowerWeight) {
    EXPECT_DOUBLE_EQ(rh_eta(3, 2.0, 1.0, 1.0, 0.1), 2.0 + 4.0 * 2.0 * 0.5 + 2.0 * 3.0 * 0.1 / 1.1);
    const GridField rho = flat_rho(16, 2.0, 0.62);
    const GridField w = power_weight(16, 2.0, 4.0);
    const auto cubes = cube_items(w, dyadic_family(whole_range(w)));
    const auto est = weight_reverse_holder(w, rho, 2.0, 2.0, 1.0, {0.1}, cubes);
    EXPECT_TRUE(std::isfinite(est.c));
    EXPECT_GE(est.c, 1.0);
    EXPECT_DOUBLE_EQ(est.delta, 0.1 / 1.1);
}

TEST(MeasureComparison, RandomSubsetsHold) {
    const GridField rho = flat_rho(16, 2.0, 0.62);
    const GridField w = power_weight(16, 2.0, 4.0);
    const auto cubes = cube_items(w, dyadic_family(whole_range(w)));
    const auto est = weight_reverse_holder(w, rho, 2.0, 2.0, 1.0, {0.05, 0.1, 0.3}, cubes);
    const CheckReport rep = measure_comparison_check(w, rho, est, cubes, 7, 2000);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.rows.size(), 2000u);
    EXPECT_EQ(rep.violations, 0u);
}

TEST(MeasureComparison, SingleCellOfUnitWeight) {
    const GridField rho = flat_rho(8, 1.0);
    const GridField w = cube_field(8, 1.0, FieldKind::weight, [](auto) { return 1.0; });
    const auto root = cube_items(w, {whole_range(w)});
    const auto est = weight_reverse_holder(w, rho, 1.0, 1.0, 1.0, {0.1}, root);
    const double frac = 1.0 / 512.0;
    EXPECT_LT(frac, est.c * std::pow(frac, est.delta));
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const auto cells = draw_subset(w, root[0], SubsetKind::subcube, rng);
        EXPECT_FALSE(cells.empty());
        for (std::size_t c : cells) EXPECT_LT(c, w.size());
    }
    EXPECT_TRUE(measure_comparison_check(w, rho, est, root, 1, 500).passed());
}

TEST(MaximalOperator, ConstantAndUnweighted) {
    const GridField rho = flat_rho(8, 1.0, 0.5);
    const GridField c = cube_field(8, 1.0, FieldKind::function, [](auto) { return -2.5; });
    const Point x{0.125, 0.125, 0.125};
    const std::vector<double> radii{0.2, 0.4, 0.8};
    EXPECT_DOUBLE_EQ(maximal_operator(c, rho, 1.0, x, radii), 2.5 * std::pow(1.0 + 0.2 / 0.5, -1.0));
    const GridField f = noise_field(8, 1.0, 4, FieldKind::function, -1.0, 1.0);
    double brute = 0.0;
    for (double r : radii) {
        const auto cells = brute_ball_cells(f, x, r);
        double s = 0.0;
        for (std::size_t k : cells) s += std::abs(f[k]);
        brute = std::max(brute, s / static_cast<double>(cells.size()));
    }
    EXPECT_NEAR(maximal_operator(f, rho, 0.0, x, radii), brute, 1e-14);
    EXPECT_THROW(maximal_operator(f, rho, 0.0, x, {}), std::invalid_argument);
}

TEST(MaximalOperator, SpikeDecaysWithDistance) {
    const GridField rho = flat_rho(16, 2.0, 1.0);
    std::vector<double> v(rho.size(), 0.0);
    const std::size_t spike = rho.locate(Point{0.1, 0.1, 0.1});
    v[spike] = 1.0;
    const GridField f = rho.with_values(v, FieldKind::function);
    std::vector<double> radii;
    for (int k = 1; k <= 32; ++k) radii.push_back(0.125 * k);
    double prev = INFINITY;
    for (double d : {0.0, 0.5, 1.0, 1.5}) {
        const double m = maximal_operator(f, rho, 1.0, Point{0.125 + d, 0.125, 0.125}, radii);
        EXPECT_LT(m, prev);
        prev = m;
    }
}

TEST(A1Maximal, UnitPowerAndSuperGrowth) {
    const std::vector<double> radii{0.125, 0.25, 0.5, 1.0, 2.0};
    {
        const GridField rho = flat_rho(8, 1.0, 0.5);
        const GridField w = cube_field(8, 1.0, FieldKind::weight, [](auto) { return 1.0; });
        std::vector<std::size_t> cells(w.size());
        std::iota(cells.begin(), cells.end(), 0);
        const CheckReport rep = a1_maximal_check(w, rho, 1.0, cells, radii, {1.0, 2.0}, inner_balls(w, 2, {0.3}));
        EXPECT_TRUE(rep.passed());
        EXPECT_NEAR(rep.fitted, 1.0 / 1.25, 1e-12);
        const CheckReport g = a1_maximal_check(power_weight(8, 1.0, 1.0), rho, 2.0, cells, radii, {2.0}, inner_balls(w, 2, {0.3}));
        EXPECT_TRUE(g.passed());
        EXPECT_TRUE(std::isfinite(g.fitted));
    }
    auto origin_constant = [](double half, auto&& weight) {
        const auto n = static_cast<std::int64_t>(8 * half);
        const GridField rho = flat_rho(n, half, 0.5);
        const GridField w = cube_field(n, half, FieldKind::weight, weight);
        std::vector<double> rs;
        for (int k = 1; k <= 8 * static_cast<int>(half); ++k) rs.push_back(0.125 * k);
        return a1_maximal_check(w, rho, 2.0, {w.locate(Point{0.01, 0.01, 0.01})}, rs, {}, {}).fitted;
    };
    auto super = [](auto x) { return std::exp(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
    auto tame = [](auto x) { return 1.0 + std::hypot(x[0], x[1], x[2]); };
    std::vector<double> fast, slow;
    for (double half : {2.0, 3.0, 4.0}) {
        fast.push_back(origin_constant(half, super));
        slow.push_back(origin_constant(half, tame));
    }
    EXPECT_GT(fast[1], 10.0 * fast[0]);
    EXPECT_GT(fast[2], 10.0 * fast[1]);
    EXPECT_LT(slow[2], 2.0 * slow[0]);
}

TEST(Doubling, UnitWeightNearVolumeRatio) {
    const GridField w = cube_field(32, 2.0, FieldKind::weight, [](auto) { return 1.0; });
    const CheckReport rep = doubling_diagnostic(w, {BallSpec{{0.0625, 0.0625, 0.0625}, 0.8}, BallSpec{{0.2, -0.2, 0.1}, 0.85}});
    EXPECT_EQ(rep.verdict, Verdict::diagnostic);
    EXPECT_TRUE(rep.passed());
    for (const CheckRow& r : rep.rows) EXPECT_NEAR(r.lhs, 8.0, 0.8);
    EXPECT_EQ(*rep.find_metric("clipped_doubles"), 0.0);
}

TEST(Doubling, SpikeWeightPlacementDependence) {
    const GridField base = cube_field(16, 2.0, FieldKind::weight, [](auto) { return 1e-6; });
    std::vector<double> v(base.values().begin(), base.values().end());
    v[base.locate(Point{0.1, 0.1, 0.1})] = 1.0;
    const GridField w = base.with_values(v, FieldKind::weight);
    const CheckReport rep = doubling_diagnostic(w, {BallSpec{{0.125, 0.125, 0.125}, 0.3}, BallSpec{{0.875, 0.125, 0.125}, 0.4}});
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_LT(rep.rows[0].lhs, 1.01);
    EXPECT_GT(rep.rows[1].lhs, 1000.0);
}
