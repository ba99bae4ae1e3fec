#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rholab/grid.hpp"
#include "rholab/report.hpp"

namespace rholab {

/// Geometric radius sequence r_min * (r_max / r_min)^(j / (count - 1)).
struct RadiusGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int count = 64;

    std::vector<double> radii() const;
    void validate() const;
    /// [smallest spacing, window diameter] with the given count.
    static RadiusGrid for_field(const GridField& field, int count = 64);
};

/// A nonnegative potential together with how balls see past the window.
struct Potential {
    GridField field;
    Extension extension = Extension::constant_pad;
    double rh_exponent = 2.0;  // claimed reverse Hölder class RH_s
};

enum class RhoFlag : std::uint8_t { none, below_grid, above_grid };

struct RhoValue {
    double rho = 0.0;
    RhoFlag flag = RhoFlag::none;
};

RhoValue compute_rho_at(const Potential& pot, std::span<const double> x, const RadiusGrid& grid);

struct RhoField {
    GridField rho;
    std::vector<RhoFlag> flags;
    std::size_t below_grid = 0;
    std::size_t above_grid = 0;
};

RhoField compute_rho_field(const Potential& pot, const RadiusGrid& grid);

struct ComparisonOptions {
    std::size_t max_points = 1024;
    /// Cells always sampled, in addition to the strided subset.
    std::vector<std::size_t> include;
};

/// Fitted constants for the two-sided comparison of rho at pairs of points.
struct RhoComparisonEstimate {
    double n0 = 1.0;
    double c0 = 1.0;
    std::size_t pairs = 0;
    std::vector<std::size_t> sample;  // flat cell indices of the sampled points
    std::size_t worst_x = 0;
    std::size_t worst_y = 0;
    std::vector<std::pair<double, double>> candidates;  // (n0, fitted c0)
};

/// Smallest c0 making both comparison bounds hold for one n0 over the sample.
double fit_c0(const GridField& rho, const std::vector<std::size_t>& sample, double n0, std::size_t* worst_x = nullptr,
              std::size_t* worst_y = nullptr);

std::vector<std::size_t> comparison_sample(const GridField& rho, const ComparisonOptions& opts);

RhoComparisonEstimate estimate_rho_comparison(const GridField& rho, const std::vector<double>& n0_candidates,
                                              const ComparisonOptions& opts = {});

/// 1 + r/rho(x) <= c0 (1 + r/rho(x0))^(n0+1) for every covered cell x of
/// every ball; c0_scale < 1 deliberately undersizes the constant.
CheckReport check_window_estimate(const GridField& rho, const RhoComparisonEstimate& est,
                                  const std::vector<BallSpec>& balls, double c0_scale = 1.0);

/// Empirical RH_s constant: max over balls of (avg V^s)^(1/s) / avg V.
CheckReport reverse_holder_constant(const Potential& pot, double s, const std::vector<BallSpec>& balls);

}  // namespace rholab
