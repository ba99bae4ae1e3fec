#include <gtest/gtest.h>

#include <cmath>

#include "rholab/grid_ops.hpp"
#include "rholab/seminorms.hpp"
#include "support.hpp"

using namespace rholab;
using namespace rholab::testing;

namespace {

GridField hermite_rho(std::int64_t n, double half) {
    return cube_field(n, half, FieldKind::rho, [](auto x) { return 1.0 / (1.0 + std::hypot(x[0], x[1], x[2])); });
}

std::optional<double> beta_for(SeminormFamily fam) {
    return uses_balls(fam) ? std::optional<double>(0.5) : std::nullopt;
}

std::vector<FamilyItem> dyadic_items(const GridField& f) { return cube_items(f, dyadic_family(whole_range(f))); }

std::vector<FamilyItem> some_balls(const GridField& f) {
    return ball_items(f, lattice_balls(f, 2, {0.2, 0.45, 0.9}, false), Extension::clamp);
}

double brute_factor(const GridField& rho, const Point& c, double r, double theta) {
    return std::pow(1.0 + r / rho[rho.locate(c)], -theta);
}

/// BLO value recomputed cube by cube from raw cell lists.
double brute_blo(const GridField& f, const GridField& rho, double theta) {
    double best = 0.0;
    for (const CellRange& q : dyadic_family(whole_range(f))) {
        const auto cells = brute_block_cells(f, q);
        const CubeSpec spec = cube_of(f, q);
        best = std::max(best, brute_factor(rho, spec.center, spec.side, theta) * (brute_mean(f, cells) - brute_min(f, cells)));
    }
    return best;
}

double brute_cam_star(const GridField& f, const GridField& rho, double theta, double beta,
                      const std::vector<FamilyItem>& balls) {
    double best = 0.0;
    for (const FamilyItem& b : balls) {
        const auto cells = brute_ball_cells(f, b.center, b.scale);
        const double vol = 4.0 / 3.0 * std::numbers::pi * std::pow(b.scale, 3);
        const double covered = static_cast<double>(cells.size()) * f.cell_volume();
        const double v = covered * (brute_mean(f, cells) - brute_min(f, cells)) / std::pow(vol, 1.0 + beta / 3.0);
        best = std::max(best, brute_factor(rho, b.center, b.scale, theta) * v);
    }
    return best;
}

}  // namespace

TEST(Oscillation, ConstantHalfIndicatorAndShift) {
    const GridField c = cube_field(4, 1.0, FieldKind::function, [](auto) { return 2.0; });
    const CubeSpec root{{0.0, 0.0, 0.0}, 2.0};
    EXPECT_EQ(blo_oscillation(c, root), 0.0);
    EXPECT_EQ(bmo_oscillation(c, root), 0.0);
    const GridField half = cube_field(4, 1.0, FieldKind::function, [](auto x) { return x[0] < 0.0 ? 1.0 : 0.0; });
    EXPECT_DOUBLE_EQ(blo_oscillation(half, root), 0.5);
    const GridField pm = half.map([](double v) { return 2.0 * v - 1.0; }, FieldKind::function);
    EXPECT_DOUBLE_EQ(bmo_oscillation(pm, root), 1.0);
    const GridField shifted = half.map([](double v) { return v + 17.25; }, FieldKind::function);
    EXPECT_DOUBLE_EQ(blo_oscillation(shifted, root), 0.5);
}

TEST(Seminorm, OctantIndicatorMatchesExhaustiveOracle) {
    const GridField rho = hermite_rho(8, 1.0);
    const auto items = dyadic_items(rho);
    const GridField one = cube_field(8, 1.0, FieldKind::function, [](auto x) { return x[0] < 0 && x[1] < 0 && x[2] < 0 ? 1.0 : 0.0; });
    const GridField rest = one.map([](double v) { return 1.0 - v; }, FieldKind::function);
    const SeminormSpec spec{SeminormFamily::blo, 0.0, std::nullopt};
    EXPECT_DOUBLE_EQ(seminorm(one, rho, spec, items).value, brute_blo(one, rho, 0.0));
    EXPECT_DOUBLE_EQ(seminorm(one, rho, spec, items).value, 1.0 / 8.0);
    EXPECT_DOUBLE_EQ(seminorm(rest, rho, spec, items).value, 7.0 / 8.0);
    const SeminormSpec grown{SeminormFamily::blo, 1.0, std::nullopt};
    EXPECT_LE(seminorm(one, rho, grown, items).value, seminorm(one, rho, spec, items).value);
    EXPECT_NEAR(seminorm(one, rho, grown, items).value, brute_blo(one, rho, 1.0), 1e-15);
}

TEST(Seminorm, CampanatoStarMatchesBruteBalls) {
    const GridField rho = hermite_rho(10, 1.0);
    const auto balls = some_balls(rho);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GridField f = noise_field(10, 1.0, seed, FieldKind::function, -1.0, 1.0);
        for (double theta : {0.0, 0.7}) {
            const SeminormSpec spec{SeminormFamily::cam_star, theta, 0.5};
            EXPECT_LE(rel_err(seminorm(f, rho, spec, balls).value, brute_cam_star(f, rho, theta, 0.5, balls)), 1e-12);
        }
    }
}

TEST(Seminorm, ConstantFieldIsZeroForEveryFamily) {
    const GridField rho = hermite_rho(8, 1.0);
    const GridField c = cube_field(8, 1.0, FieldKind::function, [](auto) { return -3.0; });
    for (SeminormFamily fam : {SeminormFamily::bmo, SeminormFamily::blo, SeminormFamily::cam, SeminormFamily::cam_star}) {
        const auto items = uses_balls(fam) ? some_balls(rho) : dyadic_items(rho);
        EXPECT_EQ(seminorm(c, rho, SeminormSpec{fam, 1.0, beta_for(fam)}, items).value, 0.0);
    }
}

TEST(Seminorm, RejectsInvalidSpecs) {
    const GridField rho = hermite_rho(4, 1.0);
    const GridField f = noise_field(4, 1.0, 1, FieldKind::function, 0.0, 1.0);
    EXPECT_THROW(seminorm(f, rho, SeminormSpec{SeminormFamily::blo, 0.0, std::nullopt}, {}), std::invalid_argument);
    EXPECT_THROW(seminorm(f, rho, SeminormSpec{SeminormFamily::cam, 0.0, std::nullopt}, some_balls(rho)),
                 std::invalid_argument);
    EXPECT_THROW(seminorm(f, rho, SeminormSpec{SeminormFamily::blo, -1.0, std::nullopt}, dyadic_items(rho)),
                 std::invalid_argument);
    EXPECT_THROW(seminorm(f, rho, SeminormSpec{SeminormFamily::blo, 0.0, std::nullopt}, some_balls(rho)),
                 std::invalid_argument);
    EXPECT_THROW(parse_seminorm_family("BLOB"), std::invalid_argument);
    EXPECT_EQ(parse_seminorm_family("CAM_STAR"), SeminormFamily::cam_star);
}

TEST(SeminormProperties, ShiftScaleAndFamilyMonotonicity) {
    const GridField rho = hermite_rho(8, 1.0);
    const auto cubes = dyadic_items(rho);
    const auto balls = some_balls(rho);
    const std::vector<FamilyItem> half_cubes(cubes.begin(), cubes.begin() + static_cast<std::ptrdiff_t>(cubes.size() / 2));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const GridField f = noise_field(8, 1.0, seed + 50, FieldKind::function, -2.0, 3.0);
        const double c = rng.uniform(-10.0, 10.0);
        const double lambda = rng.uniform(0.1, 5.0);
        const GridField shifted = f.map([c](double v) { return v + c; }, FieldKind::function);
        const GridField scaled = f.map([lambda](double v) { return lambda * v; }, FieldKind::function);
        const double theta = rng.uniform(0.0, 2.0);
        for (SeminormFamily fam : {SeminormFamily::bmo, SeminormFamily::blo, SeminormFamily::cam, SeminormFamily::cam_star}) {
            const auto& items = uses_balls(fam) ? balls : cubes;
            const SeminormSpec spec{fam, theta, beta_for(fam)};
            const double base = seminorm(f, rho, spec, items).value;
            EXPECT_LE(rel_err(seminorm(shifted, rho, spec, items).value, base), 1e-9);
            EXPECT_LE(rel_err(seminorm(scaled, rho, spec, items).value, lambda * base), 1e-12);
        }
        const SeminormSpec blo{SeminormFamily::blo, theta, std::nullopt};
        EXPECT_LE(seminorm(f, rho, blo, half_cubes).value, seminorm(f, rho, blo, cubes).value);
    }
}

TEST(SeminormProperties, BmoBoundedByTwiceBloPerCube) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GridField f = noise_field(8, 1.0, seed, FieldKind::function, -1.0, 1.0);
        for (const CellRange& q : dyadic_family(whole_range(f))) {
            const CubeSpec spec = cube_of(f, q);
            EXPECT_LE(bmo_oscillation(f, spec), 2.0 * blo_oscillation(f, spec) * (1.0 + 1e-12));
        }
    }
}

TEST(RelationChecks, RandomFieldsHaveNoViolations) {
    const GridField rho = hermite_rho(8, 1.0);
    const auto cubes = dyadic_items(rho);
    const auto balls = some_balls(rho);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GridField f = noise_field(8, 1.0, seed, FieldKind::function, 0.0, 1.0);
        const CheckReport rep = relation_checks(f, rho, {2.0, 0.0, 0.5}, 0.5, cubes, balls);
        EXPECT_TRUE(rep.passed());
        EXPECT_EQ(rep.violations, 0u);
    }
}

TEST(RelationChecks, ConstantFieldDegeneratesToZero) {
    const GridField rho = hermite_rho(4, 1.0);
    const GridField c = cube_field(4, 1.0, FieldKind::function, [](auto) { return 1.0; });
    const CheckReport rep = relation_checks(c, rho, {0.0, 1.0}, 0.5, dyadic_items(rho), some_balls(rho));
    EXPECT_TRUE(rep.passed());
    for (const CheckRow& r : rep.rows) {
        EXPECT_EQ(r.lhs, 0.0);
        EXPECT_EQ(r.rhs, 0.0);
    }
}

TEST(RelationChecks, SpikeIsStrict) {
    const GridField rho = hermite_rho(4, 1.0);
    std::vector<double> v(64, 0.0);
    v[0] = 1.0;
    const GridField f = rho.with_values(v, FieldKind::function);
    const auto cubes = dyadic_items(rho);
    const SeminormSpec bmo{SeminormFamily::bmo, 0.0, std::nullopt};
    const SeminormSpec blo{SeminormFamily::blo, 0.0, std::nullopt};
    EXPECT_LT(seminorm(f, rho, bmo, cubes).value, 2.0 * seminorm(f, rho, blo, cubes).value);
}
