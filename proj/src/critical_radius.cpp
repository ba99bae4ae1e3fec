#include "rholab/critical_radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rholab/parallel.hpp"
#include "rholab/region.hpp"

namespace rholab {

std::vector<double> RadiusGrid::radii() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(count));
    const double ratio = std::log(r_max / r_min);
    for (int j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = r_min * std::exp(ratio * j / (count - 1));
    out.back() = r_max;
    return out;
}

void RadiusGrid::validate() const {
    if (count < 16) throw std::invalid_argument("radius grid needs at least 16 radii");
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw std::invalid_argument("radius grid needs 0 < r_min < r_max");
}

RadiusGrid RadiusGrid::for_field(const GridField& field, int count) {
    const Box box = field.box();
    double diam2 = 0.0;
    for (double e : box.extent) diam2 += e * e;
    return RadiusGrid{*std::min_element(field.spacing().begin(), field.spacing().end()), std::sqrt(diam2), count};
}

namespace {

void validate_potential(const Potential& pot) {
    const std::size_t d = pot.field.dim();
    if (d < 3) throw std::invalid_argument("critical radius needs dim >= 3");
    if (pot.field.kind() != FieldKind::potential) throw std::invalid_argument("field kind must be potential");
    if (!(pot.rh_exponent >= static_cast<double>(d) / 2.0))
        throw std::invalid_argument("reverse Hölder exponent must satisfy s >= d/2");
}

RhoValue scan(const GridField& field, const RowPrefix& prefix, Extension ext, std::span<const double> x,
              const std::vector<double>& radii) {
    const double dm2 = static_cast<double>(field.dim()) - 2.0;
    const long double hd = field.cell_volume();
    BallSpec ball{Point(x.begin(), x.end()), 0.0};
    std::size_t best = radii.size();
    std::size_t j = 0;
    while (j < radii.size()) {
        ball.radius = radii[j];
        const double integral = static_cast<double>(prefix.ball_sum(field, ball, ext) * hd);
        const double scale = std::pow(radii[j], dm2);
        if (integral <= scale) {
            best = j;
            ++j;
            continue;
        }
        // Larger balls cover supersets of cells, so the integral can only grow.
        const double floor = integral * (1.0 - 1e-12);
        ++j;
        while (j < radii.size() && std::pow(radii[j], dm2) < floor) ++j;
    }
    if (best == radii.size()) return {radii.front(), RhoFlag::below_grid};
    if (best + 1 == radii.size()) return {radii.back(), RhoFlag::above_grid};
    return {radii[best], RhoFlag::none};
}

}  // namespace

RhoValue compute_rho_at(const Potential& pot, std::span<const double> x, const RadiusGrid& grid) {
    validate_potential(pot);
    if (x.size() != pot.field.dim()) throw std::invalid_argument("point dimension mismatch");
    const RowPrefix prefix(pot.field);
    return scan(pot.field, prefix, pot.extension, x, grid.radii());
}

RhoField compute_rho_field(const Potential& pot, const RadiusGrid& grid) {
    validate_potential(pot);
    const auto radii = grid.radii();
    const RowPrefix prefix(pot.field);
    const auto values = parallel_map<RhoValue>(pot.field.size(), [&](std::size_t i) {
        const Point c = pot.field.cell_center(i);
        return scan(pot.field, prefix, pot.extension, c, radii);
    });
    std::vector<double> rho(values.size());
    RhoField out{pot.field.with_values(std::vector<double>(values.size(), 1.0), FieldKind::rho), {}, 0, 0};
    out.flags.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        rho[i] = values[i].rho;
        out.flags[i] = values[i].flag;
        if (values[i].flag == RhoFlag::below_grid) ++out.below_grid;
        if (values[i].flag == RhoFlag::above_grid) ++out.above_grid;
    }
    out.rho = pot.field.with_values(std::move(rho), FieldKind::rho);
    return out;
}

std::vector<std::size_t> comparison_sample(const GridField& rho, const ComparisonOptions& opts) {
    if (opts.max_points == 0) throw std::invalid_argument("max_points must be positive");
    const std::size_t n = rho.size();
    std::vector<std::size_t> sample;
    if (n <= opts.max_points) {
        sample.resize(n);
        for (std::size_t i = 0; i < n; ++i) sample[i] = i;
    } else {
        const std::size_t stride = (n + opts.max_points - 1) / opts.max_points;
        for (std::size_t i = 0; i < n; i += stride) sample.push_back(i);
    }
    for (std::size_t i : opts.include) {
        if (i >= n) throw std::out_of_range("included sample cell outside the rho field");
        sample.push_back(i);
    }
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    return sample;
}

double fit_c0(const GridField& rho, const std::vector<std::size_t>& sample, double n0, std::size_t* worst_x,
              std::size_t* worst_y) {
    if (!(n0 > 0.0)) throw std::invalid_argument("N0 candidates must be positive");
    const double a = n0 / (n0 + 1.0);
    const std::size_t m = sample.size();
    std::vector<Point> pts(m);
    std::vector<double> logs(m);
    for (std::size_t i = 0; i < m; ++i) {
        pts[i] = rho.cell_center(sample[i]);
        logs[i] = std::log(rho[sample[i]]);
    }
    struct Best {
        double value = 0.0;
        std::size_t x = 0, y = 0;
    };
    const auto rows = parallel_map<Best>(m, [&](std::size_t i) {
        Best best{0.0, sample[i], sample[i]};
        const double rx = rho[sample[i]];
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            double dist2 = 0.0;
            for (std::size_t k = 0; k < pts[i].size(); ++k) {
                const double t = pts[i][k] - pts[j][k];
                dist2 += t * t;
            }
            const double lt = std::log1p(std::sqrt(dist2) / rx);
            const double lr = logs[j] - logs[i];
            const double v = std::max(lr - a * lt, -n0 * lt - lr);
            if (v > best.value) best = {v, sample[i], sample[j]};
        }
        return best;
    });
    Best best{0.0, sample.empty() ? 0 : sample[0], sample.empty() ? 0 : sample[0]};
    for (const Best& b : rows)
        if (b.value > best.value) best = b;
    if (worst_x) *worst_x = best.x;
    if (worst_y) *worst_y = best.y;
    return std::exp(best.value);
}

RhoComparisonEstimate estimate_rho_comparison(const GridField& rho, const std::vector<double>& n0_candidates,
                                              const ComparisonOptions& opts) {
    if (n0_candidates.empty()) throw std::invalid_argument("no N0 candidates");
    if (rho.kind() != FieldKind::rho) throw std::invalid_argument("field kind must be rho");
    RhoComparisonEstimate est;
    est.sample = comparison_sample(rho, opts);
    est.pairs = est.sample.size() * (est.sample.size() - 1);
    double best_c0 = std::numeric_limits<double>::infinity();
    for (double n0 : n0_candidates) {
        std::size_t wx = 0, wy = 0;
        const double c0 = fit_c0(rho, est.sample, n0, &wx, &wy);
        est.candidates.emplace_back(n0, c0);
        if (c0 < best_c0 || (c0 == best_c0 && n0 < est.n0)) {
            best_c0 = c0;
            est.n0 = n0;
            est.c0 = c0;
            est.worst_x = wx;
            est.worst_y = wy;
        }
    }
    return est;
}

CheckReport check_window_estimate(const GridField& rho, const RhoComparisonEstimate& est,
                                  const std::vector<BallSpec>& balls, double c0_scale) {
    if (!(c0_scale > 0.0)) throw std::invalid_argument("c0 scale must be positive");
    CheckReport rep;
    rep.id = "window-estimate";
    const double c0 = est.c0 * c0_scale;
    rep.param("c0", c0);
    rep.param("n0", est.n0);
    rep.param("c0_scale", c0_scale);
    struct Worst {
        double lhs = 0.0, rhs = 1.0;
        bool used = false;
    };
    const auto worst = parallel_map<Worst>(balls.size(), [&](std::size_t i) {
        const BallSpec& b = balls[i];
        const Region region = ball_region(rho, b, Extension::clamp);
        Worst w;
        if (region.empty()) return w;
        w.used = true;
        const double rho0 = rho_at(rho, b.center);
        const double rhs = c0 * std::pow(1.0 + b.radius / rho0, est.n0 + 1.0);
        double best_ratio = -1.0;
        for_each_cell(rho, region, [&](std::size_t flat, std::int64_t) {
            const double lhs = 1.0 + b.radius / rho[flat];
            if (lhs / rhs > best_ratio) {
                best_ratio = lhs / rhs;
                w.lhs = lhs;
                w.rhs = rhs;
            }
        });
        return w;
    });
    std::vector<std::size_t> ball_of_row;
    for (std::size_t i = 0; i < worst.size(); ++i) {
        if (!worst[i].used) continue;
        rep.add_row("ball " + std::to_string(i), worst[i].lhs, worst[i].rhs, 1e-12);
        ball_of_row.push_back(i);
    }
    if (!rep.rows.empty()) {
        const std::size_t k = argmax_ratio(rep.rows);
        rep.fitted = rep.rows[k].ratio;
        const std::size_t ball = ball_of_row[k];
        rep.witness = Witness{"ball", balls[ball].center, balls[ball].radius, {}, ball};
    }
    rep.metric("balls", static_cast<double>(rep.rows.size()));
    rep.finalize();
    return rep;
}

CheckReport reverse_holder_constant(const Potential& pot, double s, const std::vector<BallSpec>& balls) {
    if (!(s > 1.0)) throw std::invalid_argument("reverse Hölder exponent must exceed 1");
    if (pot.field.kind() != FieldKind::potential) throw std::invalid_argument("field kind must be potential");
    CheckReport rep;
    rep.id = "reverse-holder";
    rep.param("s", s);
    const RowPrefix plain(pot.field);
    const RowPrefix powered(pot.field, [s](double v) { return std::pow(v, s); });
    struct Item {
        double value = 0.0;
        bool skipped = true;
    };
    const auto items = parallel_map<Item>(balls.size(), [&](std::size_t i) {
        const Region region = ball_region(pot.field, balls[i], pot.extension);
        if (region.empty()) return Item{};
        const long double n = static_cast<long double>(region.cells);
        const long double avg = plain.sum(region) / n;
        if (!(avg > 0.0L)) return Item{};
        const long double avg_s = powered.sum(region) / n;
        return Item{static_cast<double>(std::pow(avg_s, 1.0L / s) / avg), false};
    });
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].skipped) {
            ++skipped;
            continue;
        }
        CheckRow row{"ball " + std::to_string(i), items[i].value, 1.0, items[i].value};
        if (items[i].value > rep.fitted || !rep.witness) {
            rep.fitted = items[i].value;
            rep.witness = Witness{"ball", balls[i].center, balls[i].radius, {}, i};
        }
        rep.rows.push_back(std::move(row));
    }
    rep.bound = std::numeric_limits<double>::infinity();
    rep.metric("skipped", static_cast<double>(skipped));
    rep.verdict = std::isfinite(rep.fitted) ? Verdict::pass : Verdict::fail;
    return rep;
}

}  // namespace rholab
