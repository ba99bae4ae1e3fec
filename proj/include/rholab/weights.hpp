#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rholab/grid.hpp"
#include "rholab/region.hpp"
#include "rholab/report.hpp"
#include "rholab/rng.hpp"

namespace rholab {

struct WeightConstantReport {
    double p = 1.0;
    std::optional<double> q;
    double theta = 0.0;
    double value = 0.0;
    std::size_t witness = 0;
    std::size_t family_size = 0;
    std::vector<double> table;  // per item, theta factor included
};

/// Per-item averages of the powers of a weight that the class constants need.
struct WeightAverages {
    long double mean = 0.0L;      // avg w
    long double mean_dual = 0.0L; // avg w^(-1/(p-1)) for p > 1
    long double mean_q = 0.0L;    // avg w^q
    long double mean_qdual = 0.0L;// avg w^(-p') for p > 1
    double min = 0.0;
};

/// Conjugate exponent p' = p/(p-1); infinite for p = 1.
double conjugate(double p);

/// Product of averages without the theta factor.
double ap_core(const WeightAverages& a, double p);
double apq_core(const WeightAverages& a, double p, double q);
WeightAverages weight_averages(const GridField& w, const Region& region, double p, std::optional<double> q);

WeightConstantReport ap_constant(const GridField& w, const GridField& rho, double p, double theta,
                                 const std::vector<FamilyItem>& family);
WeightConstantReport apq_constant(const GridField& w, const GridField& rho, double p, double q, double theta,
                                  const std::vector<FamilyItem>& family);

/// Exponent of the reverse Hölder growth factor for the given constants.
double rh_eta(std::size_t dim, double p, double theta, double n0, double epsilon);

struct WeightRegularityEstimate {
    double epsilon = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    double c = 1.0;
    double p = 1.0;
    double theta = 0.0;
    double n0 = 1.0;
    std::size_t witness = 0;
    std::vector<std::pair<double, double>> candidates;  // (epsilon, fitted C)
};

WeightRegularityEstimate weight_reverse_holder(const GridField& w, const GridField& rho, double p, double theta,
                                               double n0, const std::vector<double>& epsilons,
                                               const std::vector<FamilyItem>& cubes);

enum class SubsetKind { cell_union, subcube, level_set };

/// Cells of a subset of an item region, flat indices with multiplicity one.
std::vector<std::size_t> draw_subset(const GridField& w, const FamilyItem& item, SubsetKind kind, Rng& rng);

/// w(E)/w(Q) <= C (|E|/|Q|)^delta (1 + r/rho)^eta over random subsets E.
CheckReport measure_comparison_check(const GridField& w, const GridField& rho, const WeightRegularityEstimate& est,
                                     const std::vector<FamilyItem>& cubes, std::uint64_t seed, std::size_t draws);

struct ConversionExponents {
    double t = 1.0;
    double theta = 0.0;    // theta tilde, or theta* when p = 1
    double exponent = 1.0; // [w^q]_{A_t} per item equals apq per item to this power
};

ConversionExponents conversion_exponents(double p, double q, double theta);

CheckReport apq_to_ap_check(const GridField& w, const GridField& rho, double p, double q, double theta,
                            const std::vector<FamilyItem>& family);

/// max over radii of (1 + r/rho(x))^(-theta) avg_{B(x,r)} |f|, balls clamped to the box.
double maximal_operator(const GridField& f, const GridField& rho, double theta, std::span<const double> x,
                        const std::vector<double>& radii);

CheckReport a1_maximal_check(const GridField& w, const GridField& rho, double theta,
                             const std::vector<std::size_t>& cells, const std::vector<double>& radii,
                             const std::vector<double>& theta_grid, const std::vector<FamilyItem>& balls);

CheckReport doubling_diagnostic(const GridField& w, const std::vector<BallSpec>& balls);

}  // namespace rholab
