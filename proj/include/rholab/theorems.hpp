#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rholab/critical_radius.hpp"
#include "rholab/grid.hpp"
#include "rholab/region.hpp"
#include "rholab/report.hpp"
#include "rholab/weights.hpp"

namespace rholab {

/// Long double sums over one item's covered cells, with g = f - min f.
struct ItemSums {
    long double cells = 0.0L;
    long double g = 0.0L;          // sum g
    long double w = 0.0L;          // sum w
    long double gp_w = 0.0L;       // sum g^p w
    long double w_dual = 0.0L;     // sum w^(-1/(p-1))
    long double wq = 0.0L;         // sum w^q
    long double gq_wq = 0.0L;      // sum g^q w^q
    long double gp_wp = 0.0L;      // sum g^p w^p
    long double w_qdual = 0.0L;    // sum w^(-p')
    long double wp = 0.0L;         // sum w^p
    double w_min = 0.0;
    double f_min = 0.0;
    double f_max = 0.0;
};

ItemSums item_sums(const GridField& f, const GridField& w, const Region& region, double p, std::optional<double> q);

/// Exponents shared by the weighted characterization checks.
struct TheoremParams {
    double p = 1.0;
    std::optional<double> q;
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::optional<double> beta;  // ball checks only
};

/// Weighted L^p (or L^q with w^q) average of f - essinf against
/// (1 + r/rho)^((n0+1) theta1 + eta/p) times the BLO seminorm.
CheckReport thm1_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& cubes, const WeightRegularityEstimate& reg,
                         const RhoComparisonEstimate& est);
CheckReport thm2_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& cubes, const WeightRegularityEstimate& reg,
                         const RhoComparisonEstimate& est);

/// Per-item Hölder chains plus the assembled seminorm bound. With ball items
/// and a beta the chains carry the |B|^(-beta/d) normalizer.
CheckReport thm1_converse_chain(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                                const std::vector<FamilyItem>& items);
CheckReport thm2_converse_chain(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                                const std::vector<FamilyItem>& items);

/// Both estimates relating the q- and p-integrals of w, and when f is
/// given the two-sided bridge between the theorem and corollary forms.
CheckReport corollary_bridges(const GridField& w, const GridField& rho, const TheoremParams& tp,
                              const std::vector<FamilyItem>& cubes, const GridField* f = nullptr);

/// Sampled point pairs as flat cell indices.
std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(const GridField& field, std::uint64_t seed,
                                                              std::size_t count);

CheckReport lipschitz_pointwise_check(const GridField& f, const GridField& rho, double beta, double theta,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                      const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est);

CheckReport thm3_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est);
CheckReport thm4_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est);

/// Whole-window integral of (f - essinf_B f)/(r^(d+gamma) + |x - x0|^(d+gamma))
/// against the seminorm scale. Balls with beta use the CAM_STAR seminorm of
/// norm_family; cubes without beta use the BLO seminorm.
CheckReport tail_integral_check(const GridField& f, const GridField& rho, std::optional<double> beta, double theta,
                                double gamma, const std::vector<FamilyItem>& items,
                                const std::vector<FamilyItem>& norm_family);

/// Declares a bound on a fitted constant: rows whose ratio exceeds it count
/// as violations.
void apply_bound(CheckReport& rep, double bound);

/// Relative drift |c_{k+1}/c_k - 1| between successive fitted constants.
CheckReport stability_check(const std::string& id, const std::vector<RefinementStep>& steps, double tolerance);

}  // namespace rholab
