#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rholab/grid.hpp"
#include "rholab/region.hpp"

namespace rholab {

double cube_mean(const GridField& field, const CubeSpec& q);
double cube_essinf(const GridField& field, const CubeSpec& q);
double ball_integral(const GridField& field, const BallSpec& b, Extension ext);

/// Minimum cell value over a region (covered cells, padded copies included).
double region_min(const GridField& field, const Region& region);
double region_max(const GridField& field, const Region& region);
/// Plain average of covered cell values, accumulated in long double.
double region_mean(const GridField& field, const Region& region);

struct DyadicPolicy {
    CubeSpec root;
};
struct AllAlignedPolicy {
    std::int64_t max_count = 100000;
};
struct SampledPolicy {
    std::uint64_t seed = 0;
    std::int64_t budget = 0;
};
using CubePolicy = std::variant<DyadicPolicy, AllAlignedPolicy, SampledPolicy>;

std::vector<CubeSpec> enumerate_cubes(const GridField& field, const CubePolicy& policy);
std::vector<CellRange> enumerate_cube_ranges(const GridField& field, const CubePolicy& policy);

/// Full dyadic tree below root, coarse to fine, each level ordered by cell
/// coordinates. Root sides must be equal powers of two.
std::vector<CellRange> dyadic_family(const CellRange& root);
bool is_dyadic_root(const CellRange& range);
CellRange whole_range(const GridField& field);

/// Balls centered at every stride-th cell center along each axis, one per
/// radius. With inside_only, balls reaching past the box are dropped.
std::vector<BallSpec> lattice_balls(const GridField& field, std::int64_t stride, const std::vector<double>& radii,
                                    bool inside_only);
/// Reproducible random balls with cell-center centers and radii in [r_min, r_max].
std::vector<BallSpec> sampled_balls(const GridField& field, std::uint64_t seed, std::int64_t budget, double r_min,
                                    double r_max, bool inside_only);
bool ball_inside_box(const GridField& field, const BallSpec& b);

}  // namespace rholab
