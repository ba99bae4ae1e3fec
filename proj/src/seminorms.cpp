#include "rholab/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rholab/parallel.hpp"

namespace rholab {

std::string_view to_string(SeminormFamily family) {
    switch (family) {
        case SeminormFamily::bmo: return "BMO";
        case SeminormFamily::blo: return "BLO";
        case SeminormFamily::cam: return "CAM";
        case SeminormFamily::cam_star: return "CAM_STAR";
    }
    return "BLO";
}

SeminormFamily parse_seminorm_family(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (t == "BMO") return SeminormFamily::bmo;
    if (t == "BLO") return SeminormFamily::blo;
    if (t == "CAM") return SeminormFamily::cam;
    if (t == "CAM_STAR" || t == "CAM*" || t == "CAMSTAR") return SeminormFamily::cam_star;
    throw std::invalid_argument("unknown seminorm family: " + std::string(text));
}

bool uses_balls(SeminormFamily family) {
    return family == SeminormFamily::cam || family == SeminormFamily::cam_star;
}

void SeminormSpec::validate() const {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be >= 0");
    if (uses_balls(family)) {
        if (!beta) throw std::invalid_argument("beta is required for Campanato families");
        if (!(*beta > 0.0 && *beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
    } else if (beta) {
        throw std::invalid_argument("beta only applies to Campanato families");
    }
}

RegionStats region_stats(const GridField& f, const Region& region) {
    if (region.empty()) throw std::invalid_argument("empty region");
    RegionStats st;
    st.cells = region.cells;
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    long double sum = 0.0L;
    for_each_cell(f, region, [&](std::size_t flat, std::int64_t mult) {
        const double v = f[flat];
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
        sum += static_cast<long double>(mult) * v;
    });
    const long double n = static_cast<long double>(region.cells);
    const long double mean = sum / n;
    long double dev = 0.0L;
    for_each_cell(f, region, [&](std::size_t flat, std::int64_t mult) {
        dev += static_cast<long double>(mult) * std::abs(static_cast<long double>(f[flat]) - mean);
    });
    st.mean = static_cast<double>(mean);
    st.mean_abs_dev = static_cast<double>(dev / n);
    // Rounding can push the mean a hair outside [min, max] for constant data.
    st.mean = std::clamp(st.mean, st.min, st.max);
    return st;
}

double blo_oscillation(const GridField& f, const CubeSpec& q) {
    const RegionStats st = region_stats(f, cube_region(f, resolve_cube(f, q)));
    return st.mean - st.min;
}

double bmo_oscillation(const GridField& f, const CubeSpec& q) {
    return region_stats(f, cube_region(f, resolve_cube(f, q))).mean_abs_dev;
}

double growth_base(const GridField& rho, const FamilyItem& item) {
    return 1.0 + item.scale / rho_at(rho, item.center);
}

double theta_factor(const GridField& rho, const FamilyItem& item, double theta) {
    if (theta == 0.0) return 1.0;
    return std::pow(growth_base(rho, item), -theta);
}

double item_oscillation(const GridField& f, const FamilyItem& item, SeminormFamily family,
                        std::optional<double> beta) {
    const RegionStats st = region_stats(f, item.region);
    switch (family) {
        case SeminormFamily::bmo: return st.mean_abs_dev;
        case SeminormFamily::blo: return st.mean - st.min;
        case SeminormFamily::cam:
        case SeminormFamily::cam_star: {
            const double d = static_cast<double>(f.dim());
            const double covered = covered_volume(f, item.region);
            const double osc = family == SeminormFamily::cam ? st.mean_abs_dev : st.mean - st.min;
            return covered * osc / std::pow(item.analytic_volume, 1.0 + beta.value_or(1.0) / d);
        }
    }
    return 0.0;
}

SeminormReport seminorm(const GridField& f, const GridField& rho, const SeminormSpec& spec,
                        const std::vector<FamilyItem>& family) {
    spec.validate();
    if (family.empty()) throw std::invalid_argument("empty family");
    if (!f.same_geometry(rho)) throw std::invalid_argument("f and rho must share a grid");
    const Shape want = uses_balls(spec.family) ? Shape::ball : Shape::cube;
    for (const FamilyItem& it : family)
        if (it.shape != want) throw std::invalid_argument("family geometry does not match the seminorm");
    SeminormReport rep;
    rep.table = parallel_map<double>(family.size(), [&](std::size_t i) {
        return theta_factor(rho, family[i], spec.theta) * item_oscillation(f, family[i], spec.family, spec.beta);
    });
    for (std::size_t i = 0; i < rep.table.size(); ++i) {
        if (rep.table[i] > rep.value) {
            rep.value = rep.table[i];
            rep.witness = i;
        }
    }
    return rep;
}

CheckReport relation_checks(const GridField& f, const GridField& rho, const std::vector<double>& thetas, double beta,
                            const std::vector<FamilyItem>& cubes, const std::vector<FamilyItem>& balls) {
    if (thetas.empty()) throw std::invalid_argument("no theta values");
    std::vector<double> ts = thetas;
    std::sort(ts.begin(), ts.end());
    CheckReport rep;
    rep.id = "seminorm-relations";
    rep.param("beta", beta);
    for (std::size_t i = 0; i < ts.size(); ++i) rep.param("theta" + std::to_string(i), ts[i]);
    constexpr double tol = 1e-12;

    std::size_t per_item = 0;
    auto family_values = [&](SeminormFamily fam, const std::vector<FamilyItem>& items) {
        std::vector<SeminormReport> out;
        for (double t : ts) {
            SeminormSpec spec{fam, t, uses_balls(fam) ? std::optional<double>(beta) : std::nullopt};
            out.push_back(seminorm(f, rho, spec, items));
        }
        return out;
    };
    auto pair_checks = [&](const std::vector<FamilyItem>& items, SeminormFamily low, SeminormFamily high,
                           const std::string& name) {
        if (items.empty()) return;
        const auto lo = family_values(low, items);
        const auto hi = family_values(high, items);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const std::string at = " theta=" + std::to_string(ts[k]);
            rep.add_row(name + at, lo[k].value, 2.0 * hi[k].value, tol);
            for (std::size_t i = 0; i < items.size(); ++i)
                if (!leq_rel(lo[k].table[i], 2.0 * hi[k].table[i], tol)) ++per_item;
            if (k > 0) {
                rep.add_row(std::string(to_string(low)) + " monotone" + at, lo[k].value, lo[k - 1].value, tol);
                rep.add_row(std::string(to_string(high)) + " monotone" + at, hi[k].value, hi[k - 1].value, tol);
            }
        }
    };
    pair_checks(cubes, SeminormFamily::bmo, SeminormFamily::blo, "BMO <= 2 BLO");
    pair_checks(balls, SeminormFamily::cam, SeminormFamily::cam_star, "CAM <= 2 CAM_STAR");
    rep.violations += per_item;
    rep.metric("per_item_violations", static_cast<double>(per_item));
    if (!rep.rows.empty()) rep.fitted = rep.rows[argmax_ratio(rep.rows)].ratio;
    rep.finalize();
    return rep;
}

}  // namespace rholab
