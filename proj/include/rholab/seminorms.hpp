#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rholab/grid.hpp"
#include "rholab/region.hpp"
#include "rholab/report.hpp"

namespace rholab {

enum class SeminormFamily { bmo, blo, cam, cam_star };

std::string_view to_string(SeminormFamily family);
SeminormFamily parse_seminorm_family(std::string_view text);
bool uses_balls(SeminormFamily family);

struct SeminormSpec {
    SeminormFamily family = SeminormFamily::blo;
    double theta = 0.0;
    std::optional<double> beta;  // required for the Campanato families

    void validate() const;
};

struct SeminormReport {
    double value = 0.0;
    std::size_t witness = 0;  // index into the family; meaningless when table is empty
    std::vector<double> table;  // weighted normalized oscillation per item
};

/// Min, max, plain mean and mean |f - mean| over the covered cells.
struct RegionStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double mean_abs_dev = 0.0;
    std::int64_t cells = 0;
};

RegionStats region_stats(const GridField& f, const Region& region);

double blo_oscillation(const GridField& f, const CubeSpec& q);
double bmo_oscillation(const GridField& f, const CubeSpec& q);

/// (1 + r/rho(x0))^(-theta) with r the item scale.
double theta_factor(const GridField& rho, const FamilyItem& item, double theta);
/// 1 + r/rho(x0).
double growth_base(const GridField& rho, const FamilyItem& item);

/// Normalized oscillation of one item without the theta factor.
double item_oscillation(const GridField& f, const FamilyItem& item, SeminormFamily family,
                        std::optional<double> beta);

SeminormReport seminorm(const GridField& f, const GridField& rho, const SeminormSpec& spec,
                        const std::vector<FamilyItem>& family);

/// BMO <= 2 BLO, CAM <= 2 CAM*, per item and as family maxima, and
/// nonincreasing values along the sorted theta list.
CheckReport relation_checks(const GridField& f, const GridField& rho, const std::vector<double>& thetas, double beta,
                            const std::vector<FamilyItem>& cubes, const std::vector<FamilyItem>& balls);

}  // namespace rholab
