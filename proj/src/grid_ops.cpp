#include "rholab/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rholab/rng.hpp"
#include "rholab/summed_area_table.hpp"

namespace rholab {

double cube_mean(const GridField& field, const CubeSpec& q) {
    const CellRange range = resolve_cube(field, q);
    return static_cast<double>(SummedAreaTable(field).mean(range));
}

double cube_essinf(const GridField& field, const CubeSpec& q) {
    return region_min(field, cube_region(field, resolve_cube(field, q)));
}

double ball_integral(const GridField& field, const BallSpec& b, Extension ext) {
    const RowPrefix prefix(field);
    return static_cast<double>(prefix.ball_sum(field, b, ext) * static_cast<long double>(field.cell_volume()));
}

double region_min(const GridField& field, const Region& region) {
    double m = std::numeric_limits<double>::infinity();
    for_each_cell(field, region, [&](std::size_t flat, std::int64_t) { m = std::min(m, field[flat]); });
    return m;
}

double region_max(const GridField& field, const Region& region) {
    double m = -std::numeric_limits<double>::infinity();
    for_each_cell(field, region, [&](std::size_t flat, std::int64_t) { m = std::max(m, field[flat]); });
    return m;
}

double region_mean(const GridField& field, const Region& region) {
    if (region.empty()) throw std::invalid_argument("empty region");
    long double s = 0.0L;
    for_each_cell(field, region, [&](std::size_t flat, std::int64_t mult) {
        s += static_cast<long double>(mult) * field[flat];
    });
    return static_cast<double>(s / static_cast<long double>(region.cells));
}

CellRange whole_range(const GridField& field) {
    return CellRange{Index(field.dim(), 0), field.counts()};
}

bool is_dyadic_root(const CellRange& range) {
    if (range.dim() == 0) return false;
    const std::int64_t n = range.len[0];
    if (n <= 0 || (n & (n - 1)) != 0) return false;
    return std::all_of(range.len.begin(), range.len.end(), [n](std::int64_t l) { return l == n; });
}

std::vector<CellRange> dyadic_family(const CellRange& root) {
    if (!is_dyadic_root(root)) throw std::invalid_argument("root is not a power-of-two cube");
    const std::size_t d = root.dim();
    std::vector<CellRange> out;
    for (std::int64_t len = root.len[0]; len >= 1; len /= 2) {
        const std::int64_t per_axis = root.len[0] / len;
        Index pos(d, 0);
        while (true) {
            CellRange c{Index(d), Index(d, len)};
            for (std::size_t i = 0; i < d; ++i) c.lo[i] = root.lo[i] + pos[i] * len;
            out.push_back(std::move(c));
            std::size_t k = d;
            bool done = true;
            while (k-- > 0) {
                if (++pos[k] < per_axis) {
                    done = false;
                    break;
                }
                pos[k] = 0;
            }
            if (done) break;
        }
    }
    return out;
}

namespace {

std::vector<CellRange> all_aligned(const GridField& field, std::int64_t max_count) {
    if (max_count <= 0) throw std::invalid_argument("max_count must be positive");
    if (!field.isotropic()) throw std::invalid_argument("all-aligned cubes need isotropic spacing");
    const std::size_t d = field.dim();
    const std::int64_t smallest = *std::min_element(field.counts().begin(), field.counts().end());
    std::int64_t total = 0;
    for (std::int64_t m = 1; m <= smallest; ++m) {
        std::int64_t c = 1;
        for (auto n : field.counts()) c *= n - m + 1;
        total += c;
        if (total > max_count) throw std::invalid_argument("all-aligned family exceeds max_count");
    }
    std::vector<CellRange> out;
    out.reserve(static_cast<std::size_t>(total));
    for (std::int64_t m = 1; m <= smallest; ++m) {
        Index pos(d, 0);
        while (true) {
            out.push_back(CellRange{pos, Index(d, m)});
            std::size_t k = d;
            bool done = true;
            while (k-- > 0) {
                if (++pos[k] <= field.counts()[k] - m) {
                    done = false;
                    break;
                }
                pos[k] = 0;
            }
            if (done) break;
        }
    }
    return out;
}

std::vector<CellRange> sampled(const GridField& field, const SampledPolicy& p) {
    if (p.budget <= 0) throw std::invalid_argument("sampled family budget must be positive");
    if (!field.isotropic()) throw std::invalid_argument("sampled cubes need isotropic spacing");
    const std::size_t d = field.dim();
    const std::int64_t smallest = *std::min_element(field.counts().begin(), field.counts().end());
    Rng rng(p.seed);
    std::vector<CellRange> out;
    out.reserve(static_cast<std::size_t>(p.budget));
    for (std::int64_t b = 0; b < p.budget; ++b) {
        const std::int64_t m = 1 + rng.index(smallest);
        CellRange c{Index(d), Index(d, m)};
        for (std::size_t i = 0; i < d; ++i) c.lo[i] = rng.index(field.counts()[i] - m + 1);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::vector<CellRange> enumerate_cube_ranges(const GridField& field, const CubePolicy& policy) {
    if (const auto* dy = std::get_if<DyadicPolicy>(&policy)) {
        const CellRange root = resolve_cube(field, dy->root);
        if (!is_dyadic_root(root)) throw std::invalid_argument("dyadic root must span a power-of-two number of cells");
        return dyadic_family(root);
    }
    if (const auto* all = std::get_if<AllAlignedPolicy>(&policy)) return all_aligned(field, all->max_count);
    return sampled(field, std::get<SampledPolicy>(policy));
}

std::vector<CubeSpec> enumerate_cubes(const GridField& field, const CubePolicy& policy) {
    std::vector<CubeSpec> out;
    for (const CellRange& r : enumerate_cube_ranges(field, policy)) out.push_back(cube_of(field, r));
    return out;
}

bool ball_inside_box(const GridField& field, const BallSpec& b) {
    const Box box = field.box();
    for (std::size_t i = 0; i < field.dim(); ++i) {
        if (b.center[i] - b.radius < box.origin[i] || b.center[i] + b.radius > box.origin[i] + box.extent[i])
            return false;
    }
    return true;
}

std::vector<BallSpec> lattice_balls(const GridField& field, std::int64_t stride, const std::vector<double>& radii,
                                    bool inside_only) {
    if (stride <= 0) throw std::invalid_argument("stride must be positive");
    if (radii.empty()) throw std::invalid_argument("radius list is empty");
    const std::size_t d = field.dim();
    std::vector<BallSpec> out;
    Index idx(d, 0);
    while (true) {
        Point c(d);
        for (std::size_t i = 0; i < d; ++i) c[i] = field.center_coord(i, idx[i]);
        for (double r : radii) {
            BallSpec b{c, r};
            if (!inside_only || ball_inside_box(field, b)) out.push_back(std::move(b));
        }
        std::size_t k = d;
        bool done = true;
        while (k-- > 0) {
            idx[k] += stride;
            if (idx[k] < field.counts()[k]) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if (done) break;
    }
    return out;
}

std::vector<BallSpec> sampled_balls(const GridField& field, std::uint64_t seed, std::int64_t budget, double r_min,
                                    double r_max, bool inside_only) {
    if (budget <= 0) throw std::invalid_argument("sampled ball budget must be positive");
    if (!(r_min > 0.0) || r_max < r_min) throw std::invalid_argument("invalid radius range");
    Rng rng(seed);
    std::vector<BallSpec> out;
    std::int64_t attempts = 0;
    while (static_cast<std::int64_t>(out.size()) < budget) {
        if (++attempts > budget * 1000) throw std::invalid_argument("no admissible balls for the requested radii");
        Point c(field.dim());
        for (std::size_t i = 0; i < field.dim(); ++i) c[i] = field.center_coord(i, rng.index(field.counts()[i]));
        const double r = r_min * std::pow(r_max / r_min, rng.uniform());
        BallSpec b{std::move(c), r};
        if (!inside_only || ball_inside_box(field, b)) out.push_back(std::move(b));
    }
    return out;
}

}  // namespace rholab
