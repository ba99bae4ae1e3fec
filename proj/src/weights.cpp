#include "rholab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rholab/grid_ops.hpp"
#include "rholab/parallel.hpp"
#include "rholab/seminorms.hpp"

namespace rholab {

double conjugate(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

double ap_core(const WeightAverages& a, double p) {
    if (p == 1.0) return static_cast<double>(a.mean / a.min);
    return static_cast<double>(std::pow(a.mean, 1.0L / p) * std::pow(a.mean_dual, (p - 1.0L) / p));
}

double apq_core(const WeightAverages& a, double p, double q) {
    const long double lq = std::pow(a.mean_q, 1.0L / q);
    if (p == 1.0) return static_cast<double>(lq / a.min);
    return static_cast<double>(lq * std::pow(a.mean_qdual, 1.0L / conjugate(p)));
}

namespace {

void validate_weight(const GridField& w, const GridField& rho) {
    if (w.kind() != FieldKind::weight) throw std::invalid_argument("field kind must be weight");
    if (!w.same_geometry(rho)) throw std::invalid_argument("weight and rho must share a grid");
}

/// Row prefix tables of the powers of w used by the class constants.
struct WeightTables {
    RowPrefix mean;
    std::optional<RowPrefix> dual;
    std::optional<RowPrefix> pow_q;
    std::optional<RowPrefix> qdual;

    WeightTables(const GridField& w, double p, std::optional<double> q) : mean(w) {
        if (p > 1.0) dual.emplace(w, [p](double v) { return std::pow(v, -1.0 / (p - 1.0)); });
        if (q) {
            const double qq = *q;
            pow_q.emplace(w, [qq](double v) { return std::pow(v, qq); });
            if (p > 1.0) {
                const double pc = conjugate(p);
                qdual.emplace(w, [pc](double v) { return std::pow(v, -pc); });
            }
        }
    }

    WeightAverages averages(const GridField& w, const Region& region) const {
        WeightAverages a;
        const long double n = static_cast<long double>(region.cells);
        a.mean = mean.sum(region) / n;
        if (dual) a.mean_dual = dual->sum(region) / n;
        if (pow_q) a.mean_q = pow_q->sum(region) / n;
        if (qdual) a.mean_qdual = qdual->sum(region) / n;
        a.min = region_min(w, region);
        return a;
    }
};

WeightConstantReport sweep(const GridField& w, const GridField& rho, double p, std::optional<double> q, double theta,
                           const std::vector<FamilyItem>& family) {
    validate_weight(w, rho);
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (q && !(*q > p)) throw std::invalid_argument("q must exceed p");
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
    if (family.empty()) throw std::invalid_argument("empty family");
    const WeightTables tables(w, p, q);
    WeightConstantReport rep;
    rep.p = p;
    rep.q = q;
    rep.theta = theta;
    rep.family_size = family.size();
    rep.table = parallel_map<double>(family.size(), [&](std::size_t i) {
        const WeightAverages a = tables.averages(w, family[i].region);
        const double core = q ? apq_core(a, p, *q) : ap_core(a, p);
        return theta_factor(rho, family[i], theta) * core;
    });
    for (std::size_t i = 0; i < rep.table.size(); ++i) {
        if (rep.table[i] > rep.value) {
            rep.value = rep.table[i];
            rep.witness = i;
        }
    }
    return rep;
}

}  // namespace

WeightAverages weight_averages(const GridField& w, const Region& region, double p, std::optional<double> q) {
    if (region.empty()) throw std::invalid_argument("empty region");
    WeightAverages a;
    const long double n = static_cast<long double>(region.cells);
    const long double pc = p > 1.0 ? static_cast<long double>(conjugate(p)) : 0.0L;
    for_each_cell(w, region, [&](std::size_t flat, std::int64_t mult) {
        const long double v = w[flat];
        const long double m = static_cast<long double>(mult);
        a.mean += m * v;
        if (p > 1.0) a.mean_dual += m * std::pow(v, -1.0L / (p - 1.0L));
        if (q) {
            a.mean_q += m * std::pow(v, static_cast<long double>(*q));
            if (p > 1.0) a.mean_qdual += m * std::pow(v, -pc);
        }
    });
    a.mean /= n;
    a.mean_dual /= n;
    a.mean_q /= n;
    a.mean_qdual /= n;
    a.min = region_min(w, region);
    return a;
}

WeightConstantReport ap_constant(const GridField& w, const GridField& rho, double p, double theta,
                                 const std::vector<FamilyItem>& family) {
    return sweep(w, rho, p, std::nullopt, theta, family);
}

WeightConstantReport apq_constant(const GridField& w, const GridField& rho, double p, double q, double theta,
                                  const std::vector<FamilyItem>& family) {
    return sweep(w, rho, p, q, theta, family);
}

double rh_eta(std::size_t dim, double p, double theta, double n0, double epsilon) {
    const double d = static_cast<double>(dim);
    return theta * p + (theta + d) * p * n0 / (n0 + 1.0) + (n0 + 1.0) * d * epsilon / (1.0 + epsilon);
}

WeightRegularityEstimate weight_reverse_holder(const GridField& w, const GridField& rho, double p, double theta,
                                               double n0, const std::vector<double>& epsilons,
                                               const std::vector<FamilyItem>& cubes) {
    validate_weight(w, rho);
    if (epsilons.empty()) throw std::invalid_argument("no epsilon candidates");
    if (cubes.empty()) throw std::invalid_argument("empty family");
    if (!(p >= 1.0) || !(theta >= 0.0) || !(n0 > 0.0)) throw std::invalid_argument("invalid p, theta or N0");
    const RowPrefix plain(w);
    WeightRegularityEstimate best;
    best.c = std::numeric_limits<double>::infinity();
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
        const double eta = rh_eta(w.dim(), p, theta, n0, eps);
        if (!(eta > 1.0)) throw std::invalid_argument("eta must exceed 1");
        const RowPrefix powered(w, [eps](double v) { return std::pow(v, 1.0 + eps); });
        const auto ratios = parallel_map<double>(cubes.size(), [&](std::size_t i) {
            const Region& reg = cubes[i].region;
            const long double n = static_cast<long double>(reg.cells);
            const long double lhs = std::pow(powered.sum(reg) / n, 1.0L / (1.0L + eps));
            const long double rhs = plain.sum(reg) / n * std::pow(static_cast<long double>(growth_base(rho, cubes[i])), eta);
            return static_cast<double>(lhs / rhs);
        });
        double c = 1.0;
        std::size_t witness = 0;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (ratios[i] > c) {
                c = ratios[i];
                witness = i;
            }
        }
        best.candidates.emplace_back(eps, c);
        if (c < best.c) {
            best.c = c;
            best.epsilon = eps;
            best.eta = eta;
            best.delta = eps / (1.0 + eps);
            best.witness = witness;
        }
    }
    best.p = p;
    best.theta = theta;
    best.n0 = n0;
    return best;
}

std::vector<std::size_t> draw_subset(const GridField& w, const FamilyItem& item, SubsetKind kind, Rng& rng) {
    std::vector<std::size_t> cells;
    for_each_cell(w, item.region, [&](std::size_t flat, std::int64_t mult) {
        if (mult != 1) throw std::invalid_argument("subsets need regions without padded cells");
        cells.push_back(flat);
    });
    std::vector<std::size_t> out;
    if (kind == SubsetKind::subcube && item.shape == Shape::cube) {
        const std::size_t d = w.dim();
        CellRange sub{Index(d), Index(d)};
        for (std::size_t i = 0; i < d; ++i) {
            sub.len[i] = 1 + rng.index(item.range.len[i]);
            sub.lo[i] = item.range.lo[i] + rng.index(item.range.len[i] - sub.len[i] + 1);
        }
        for_each_cell(w, cube_region(w, sub), [&](std::size_t flat, std::int64_t) { out.push_back(flat); });
        return out;
    }
    if (kind == SubsetKind::level_set) {
        const double t = w[cells[static_cast<std::size_t>(rng.index(static_cast<std::int64_t>(cells.size())))]];
        const bool above = rng.uniform() < 0.5;
        for (std::size_t c : cells)
            if (above ? w[c] >= t : w[c] < t) out.push_back(c);
        return out;
    }
    const double density = rng.uniform();
    for (std::size_t c : cells)
        if (rng.uniform() < density) out.push_back(c);
    return out;
}

CheckReport measure_comparison_check(const GridField& w, const GridField& rho, const WeightRegularityEstimate& est,
                                     const std::vector<FamilyItem>& cubes, std::uint64_t seed, std::size_t draws) {
    validate_weight(w, rho);
    if (cubes.empty()) throw std::invalid_argument("empty family");
    CheckReport rep;
    rep.id = "measure-comparison";
    rep.param("epsilon", est.epsilon);
    rep.param("delta", est.delta);
    rep.param("eta", est.eta);
    rep.param("c", est.c);
    rep.param("seed", static_cast<double>(seed));
    const RowPrefix plain(w);
    struct Draw {
        double lhs = 0.0, rhs = 0.0;
        std::size_t item = 0;
    };
    const auto results = parallel_map<Draw>(draws, [&](std::size_t k) {
        Rng rng(hash_combine(seed, k));
        const std::size_t i = static_cast<std::size_t>(rng.index(static_cast<std::int64_t>(cubes.size())));
        const auto kind = static_cast<SubsetKind>(rng.index(3));
        const std::vector<std::size_t> subset = draw_subset(w, cubes[i], kind, rng);
        long double we = 0.0L;
        for (std::size_t c : subset) we += w[c];
        const long double wq = plain.sum(cubes[i].region);
        const double frac = static_cast<double>(subset.size()) / static_cast<double>(cubes[i].region.cells);
        const double rhs = est.c * std::pow(frac, est.delta) * std::pow(growth_base(rho, cubes[i]), est.eta);
        return Draw{static_cast<double>(we / wq), rhs, i};
    });
    for (std::size_t k = 0; k < results.size(); ++k) rep.add_row("draw " + std::to_string(k), results[k].lhs, results[k].rhs, 1e-12);
    if (!rep.rows.empty()) {
        const std::size_t k = argmax_ratio(rep.rows);
        rep.fitted = rep.rows[k].ratio;
        const FamilyItem& it = cubes[results[k].item];
        rep.witness = Witness{"cube", it.center, it.scale, {}, results[k].item};
    }
    rep.finalize();
    return rep;
}

ConversionExponents conversion_exponents(double p, double q, double theta) {
    if (!(p >= 1.0) || !(q > p)) throw std::invalid_argument("need 1 <= p < q");
    if (p == 1.0) return {1.0, theta * q, q};
    const double pc = conjugate(p);
    const double t = 1.0 + q / pc;
    return {t, theta / (1.0 / q + 1.0 / pc), q / t};
}

CheckReport apq_to_ap_check(const GridField& w, const GridField& rho, double p, double q, double theta,
                            const std::vector<FamilyItem>& family) {
    const ConversionExponents ex = conversion_exponents(p, q, theta);
    const WeightConstantReport apq = apq_constant(w, rho, p, q, theta, family);
    const GridField wq = w.map([q](double v) { return std::pow(v, q); }, FieldKind::weight);
    const WeightConstantReport at = ap_constant(wq, rho, ex.t, ex.theta, family);
    CheckReport rep;
    rep.id = "apq-to-at";
    rep.param("p", p);
    rep.param("q", q);
    rep.param("theta", theta);
    rep.param("t", ex.t);
    rep.param("theta_converted", ex.theta);
    rep.param("exponent", ex.exponent);
    for (std::size_t i = 0; i < family.size(); ++i)
        rep.add_row("item " + std::to_string(i), at.table[i], std::pow(apq.table[i], ex.exponent), 1e-10);
    rep.metric("apq_constant", apq.value);
    rep.metric("at_constant", at.value);
    rep.metric("apq_constant_power", std::pow(apq.value, ex.exponent));
    if (!rep.rows.empty()) {
        const std::size_t k = argmax_ratio(rep.rows);
        rep.fitted = rep.rows[k].ratio;
        rep.witness = Witness{family[k].shape == Shape::ball ? "ball" : "cube", family[k].center, family[k].scale, {}, k};
    }
    if (!std::isfinite(at.value)) ++rep.violations;
    rep.finalize();
    return rep;
}

namespace {

double maximal_with(const GridField& f, const RowPrefix& abs_prefix, const GridField& rho, double theta,
                    std::span<const double> x, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("empty radius grid");
    const double rx = rho_at(rho, x);
    double best = 0.0;
    bool any = false;
    BallSpec ball{Point(x.begin(), x.end()), 0.0};
    for (double r : radii) {
        ball.radius = r;
        long double sum = 0.0L;
        std::int64_t cells = 0;
        visit_ball_spans(f, ball, Extension::clamp, [&](const RowSpan& s) {
            sum += abs_prefix.sum(s);
            cells += s.len;
        });
        if (cells == 0) continue;
        any = true;
        const double avg = static_cast<double>(sum / static_cast<long double>(cells));
        best = std::max(best, std::pow(1.0 + r / rx, -theta) * avg);
    }
    if (!any) throw std::invalid_argument("no radius covers a cell");
    return best;
}

}  // namespace

double maximal_operator(const GridField& f, const GridField& rho, double theta, std::span<const double> x,
                        const std::vector<double>& radii) {
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
    const RowPrefix abs_prefix(f, [](double v) { return std::abs(v); });
    return maximal_with(f, abs_prefix, rho, theta, x, radii);
}

CheckReport a1_maximal_check(const GridField& w, const GridField& rho, double theta,
                             const std::vector<std::size_t>& cells, const std::vector<double>& radii,
                             const std::vector<double>& theta_grid, const std::vector<FamilyItem>& balls) {
    validate_weight(w, rho);
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
    CheckReport rep;
    rep.id = "a1-maximal";
    rep.param("theta", theta);
    const RowPrefix abs_prefix(w, [](double v) { return std::abs(v); });
    const auto ratios = parallel_map<double>(cells.size(), [&](std::size_t i) {
        const Point x = w.cell_center(cells[i]);
        return maximal_with(w, abs_prefix, rho, theta, x, radii) / w[cells[i]];
    });
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        rep.rows.push_back(CheckRow{"cell " + std::to_string(cells[i]), ratios[i], 1.0, ratios[i]});
        if (ratios[i] > rep.fitted) {
            rep.fitted = ratios[i];
            rep.witness = Witness{"point", w.cell_center(cells[i]), 0.0, {}, cells[i]};
        }
    }
    rep.bound = std::numeric_limits<double>::infinity();
    for (double t : theta_grid) {
        const double v = balls.empty() ? 0.0 : ap_constant(w, rho, 1.0, t, balls).value;
        rep.metric("a1_constant theta=" + std::to_string(t), v);
        if (!std::isfinite(v)) ++rep.violations;
    }
    if (!std::isfinite(rep.fitted)) ++rep.violations;
    rep.finalize();
    return rep;
}

CheckReport doubling_diagnostic(const GridField& w, const std::vector<BallSpec>& balls) {
    if (w.kind() != FieldKind::weight) throw std::invalid_argument("field kind must be weight");
    CheckReport rep;
    rep.id = "doubling";
    const RowPrefix plain(w);
    std::size_t clipped = 0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        const Region inner = ball_region(w, balls[i], Extension::clamp);
        if (inner.empty()) continue;
        const Region outer = ball_region(w, BallSpec{balls[i].center, 2.0 * balls[i].radius}, Extension::clamp);
        if (outer.clipped) ++clipped;
        const double ratio = static_cast<double>(plain.sum(outer) / plain.sum(inner));
        rep.rows.push_back(CheckRow{"ball " + std::to_string(i), ratio, 1.0, ratio});
        if (ratio > rep.fitted) {
            rep.fitted = ratio;
            rep.witness = Witness{"ball", balls[i].center, balls[i].radius, {}, i};
        }
    }
    rep.bound = std::numeric_limits<double>::infinity();
    rep.metric("clipped_doubles", static_cast<double>(clipped));
    rep.verdict = Verdict::diagnostic;
    return rep;
}

}  // namespace rholab
