#include "rholab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rholab/grid_ops.hpp"
#include "rholab/parallel.hpp"
#include "rholab/rng.hpp"
#include "rholab/seminorms.hpp"

namespace rholab {

namespace {

constexpr double chain_tol = 1e-10;
constexpr double inf = std::numeric_limits<double>::infinity();

std::string item_label(const FamilyItem& it, std::size_t k) {
    return std::string(it.shape == Shape::ball ? "ball " : "cube ") + std::to_string(k);
}

Witness item_witness(const FamilyItem& it, std::size_t k) {
    return Witness{it.shape == Shape::ball ? "ball" : "cube", it.center, it.scale, {}, k};
}

double safe_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? inf : 0.0;
}

void push_ratio_row(CheckReport& rep, std::string label, double lhs, double rhs) {
    rep.rows.push_back(CheckRow{std::move(label), lhs, rhs, safe_ratio(lhs, rhs)});
}

void check_inputs(const GridField& f, const GridField& w, const GridField& rho, const std::vector<FamilyItem>& items) {
    if (items.empty()) throw std::invalid_argument("empty family");
    if (!f.same_geometry(w) || !f.same_geometry(rho)) throw std::invalid_argument("fields must share a grid");
    if (w.kind() != FieldKind::weight) throw std::invalid_argument("weight field required");
}

void check_exponents(const TheoremParams& tp, bool need_q) {
    if (!(tp.p >= 1.0) || !std::isfinite(tp.p)) throw std::invalid_argument("p must be >= 1");
    if (need_q && (!tp.q || !(*tp.q > tp.p) || !std::isfinite(*tp.q)))
        throw std::invalid_argument("q must exceed p");
    if (tp.theta1 < 0.0 || tp.theta2 < 0.0) throw std::invalid_argument("theta must be >= 0");
    if (tp.beta && !(*tp.beta > 0.0 && *tp.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

void set_params(CheckReport& rep, const TheoremParams& tp) {
    rep.param("p", tp.p);
    if (tp.q) rep.param("q", *tp.q);
    rep.param("theta1", tp.theta1);
    rep.param("theta2", tp.theta2);
    if (tp.beta) rep.param("beta", *tp.beta);
}

/// Fitted constant and witness from the ratio table.
void fit_from_rows(CheckReport& rep, const std::vector<FamilyItem>& items) {
    if (rep.rows.empty()) return;
    const std::size_t k = argmax_ratio(rep.rows);
    rep.fitted = rep.rows[k].ratio;
    if (k < items.size()) rep.witness = item_witness(items[k], k);
}

/// |B|^(-beta/d) for balls with a beta, 1 otherwise.
double oscillation_normalizer(const FamilyItem& it, std::optional<double> beta, std::size_t dim) {
    if (it.shape != Shape::ball || !beta) return 1.0;
    return std::pow(it.analytic_volume, -*beta / static_cast<double>(dim));
}

double family_seminorm(const GridField& f, const GridField& rho, double theta, std::optional<double> beta,
                       const std::vector<FamilyItem>& items) {
    SeminormSpec spec;
    spec.theta = theta;
    if (items.front().shape == Shape::ball) {
        if (!beta) throw std::invalid_argument("ball families need beta");
        spec.family = SeminormFamily::cam_star;
        spec.beta = beta;
    } else {
        spec.family = SeminormFamily::blo;
    }
    return seminorm(f, rho, spec, items).value;
}

/// Finite forward constant passes; the declared bound is applied separately.
void finish_forward(CheckReport& rep, const std::vector<FamilyItem>& items) {
    fit_from_rows(rep, items);
    rep.bound = inf;
    rep.verdict = std::isfinite(rep.fitted) ? Verdict::pass : Verdict::fail;
    if (!std::isfinite(rep.fitted)) rep.violations = 1;
}

enum class Variant { lp, lq };

CheckReport forward_impl(const std::string& id, Variant variant, const GridField& f, const GridField& w,
                         const GridField& rho, const TheoremParams& tp, const std::vector<FamilyItem>& items,
                         double eta, const RhoComparisonEstimate& est) {
    check_inputs(f, w, rho, items);
    const bool balls = items.front().shape == Shape::ball;
    check_exponents(tp, variant == Variant::lq);
    if (balls && !tp.beta) throw std::invalid_argument("ball checks need beta");
    CheckReport rep;
    rep.id = id;
    set_params(rep, tp);
    rep.param("n0", est.n0);
    rep.param("c0", est.c0);
    if (!balls) rep.param("eta", eta);

    const double norm = family_seminorm(f, rho, tp.theta1, tp.beta, items);
    const double power = variant == Variant::lp ? tp.p : *tp.q;
    const double exponent = (est.n0 + 1.0) * tp.theta1 + (balls ? 0.0 : eta / power);
    const std::size_t d = f.dim();
    struct Out {
        double lhs;
        double rhs;
        double pointwise;
    };
    const auto out = parallel_map<Out>(items.size(), [&](std::size_t i) {
        const FamilyItem& it = items[i];
        const ItemSums s = item_sums(f, w, it.region, tp.p, tp.q);
        const double l = variant == Variant::lp
                             ? std::pow(static_cast<double>(s.gp_w / s.w), 1.0 / tp.p)
                             : std::pow(static_cast<double>(s.gq_wq / s.wq), 1.0 / *tp.q);
        const double nf = oscillation_normalizer(it, tp.beta, d);
        const double scale = std::pow(growth_base(rho, it), exponent) * norm;
        return Out{nf * l, scale, safe_ratio(nf * (s.f_max - s.f_min), scale)};
    });
    double pointwise = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        push_ratio_row(rep, item_label(items[i], i), out[i].lhs, out[i].rhs);
        pointwise = std::max(pointwise, out[i].pointwise);
    }
    rep.metric("seminorm", norm);
    rep.metric("growth_exponent", exponent);
    const double wc = variant == Variant::lp ? ap_constant(w, rho, tp.p, tp.theta2, items).value
                                             : apq_constant(w, rho, tp.p, *tp.q, tp.theta2, items).value;
    rep.metric("weight_constant", wc);
    if (balls) rep.metric("pointwise_fitted", pointwise);
    finish_forward(rep, items);
    return rep;
}

CheckReport converse_impl(const std::string& id, Variant variant, const GridField& f, const GridField& w,
                          const GridField& rho, const TheoremParams& tp, const std::vector<FamilyItem>& items) {
    check_inputs(f, w, rho, items);
    check_exponents(tp, variant == Variant::lq);
    const bool balls = items.front().shape == Shape::ball;
    if (balls && !tp.beta) throw std::invalid_argument("ball chains need beta");
    CheckReport rep;
    rep.id = id;
    set_params(rep, tp);
    const std::size_t d = f.dim();
    const double hd = f.cell_volume();
    const double p = tp.p;
    const double pc = conjugate(p);
    const double q = tp.q.value_or(p);

    struct Out {
        std::vector<CheckRow> rows;
        double hyp = 0.0;      // normalized weighted average over (1 + r/rho)^(theta1 - theta2)
        double hyp_swap = 0.0; // same with the exponent reversed
        double cover = 1.0;
    };
    const auto out = parallel_map<Out>(items.size(), [&](std::size_t i) {
        const FamilyItem& it = items[i];
        const ItemSums s = item_sums(f, w, it.region, p, tp.q);
        const std::string at = " " + item_label(it, i);
        const double vol = static_cast<double>(s.cells) * hd;
        const double mean_g = static_cast<double>(s.g / s.cells);
        const double inv_min = 1.0 / s.w_min;
        Out o;
        auto row = [&](std::string label, double lhs, double rhs) {
            o.rows.push_back(CheckRow{std::move(label) + at, lhs, rhs, safe_ratio(lhs, rhs)});
        };
        double l = 0.0;
        if (variant == Variant::lp) {
            if (p > 1.0) {
                row("holder", mean_g,
                    std::pow(static_cast<double>(s.gp_w) * hd, 1.0 / p) *
                        std::pow(static_cast<double>(s.w_dual) * hd, 1.0 / pc) / vol);
            } else {
                row("ess-sup", mean_g, static_cast<double>(s.gp_w) * hd * inv_min / vol);
            }
            l = std::pow(static_cast<double>(s.gp_w / s.w), 1.0 / p);
        } else {
            const double lq_int = std::pow(static_cast<double>(s.gq_wq) * hd, 1.0 / q);
            if (p > 1.0) {
                const double dual = std::pow(static_cast<double>(s.w_qdual) * hd, 1.0 / pc);
                row("holder", mean_g, std::pow(static_cast<double>(s.gp_wp) * hd, 1.0 / p) * dual / vol);
                row("power-mean", std::pow(static_cast<double>(s.gp_wp / s.cells), 1.0 / p),
                    std::pow(static_cast<double>(s.gq_wq / s.cells), 1.0 / q));
                row("assembled", mean_g, std::pow(vol, 1.0 / p - 1.0 / q) / vol * lq_int * dual);
            } else {
                row("ess-sup", mean_g, static_cast<double>(s.gp_wp) * hd * inv_min / vol);
                row("power-mean", static_cast<double>(s.gp_wp / s.cells),
                    std::pow(static_cast<double>(s.gq_wq / s.cells), 1.0 / q));
                row("assembled", mean_g, std::pow(vol, 1.0 - 1.0 / q) / vol * lq_int * inv_min);
            }
            l = std::pow(static_cast<double>(s.gq_wq / s.wq), 1.0 / q);
        }
        const double nf = oscillation_normalizer(it, tp.beta, d);
        const double base = growth_base(rho, it);
        o.hyp = nf * l / std::pow(base, tp.theta1 - tp.theta2);
        o.hyp_swap = nf * l / std::pow(base, tp.theta2 - tp.theta1);
        if (balls) o.cover = covered_volume(f, it.region) / it.analytic_volume;
        return o;
    });

    double k = 0.0;
    double k_swap = 0.0;
    double cover = 0.0;
    for (const Out& o : out) {
        for (const CheckRow& r : o.rows) rep.add_row(r.label, r.lhs, r.rhs, chain_tol);
        k = std::max(k, o.hyp);
        k_swap = std::max(k_swap, o.hyp_swap);
        cover = std::max(cover, o.cover);
    }
    const double wc = variant == Variant::lp ? ap_constant(w, rho, p, tp.theta2, items).value
                                             : apq_constant(w, rho, p, q, tp.theta2, items).value;
    const double norm = family_seminorm(f, rho, tp.theta1, tp.beta, items);
    rep.add_row("seminorm <= hypothesis constant x weight constant", norm, cover * k * wc, chain_tol);
    rep.metric("hypothesis_constant", k);
    rep.metric("hypothesis_constant_swapped", k_swap);
    rep.metric("weight_constant", wc);
    rep.metric("seminorm", norm);
    if (balls) rep.metric("max_cover_ratio", cover);
    const std::size_t w_idx = argmax_ratio(rep.rows);
    rep.fitted = rep.rows[w_idx].ratio;
    // rows come in equal-sized groups per item ahead of the assembled row
    const std::size_t per_item = out.front().rows.size();
    if (w_idx / per_item < items.size()) rep.witness = item_witness(items[w_idx / per_item], w_idx / per_item);
    rep.finalize();
    return rep;
}

}  // namespace

ItemSums item_sums(const GridField& f, const GridField& w, const Region& region, double p, std::optional<double> q) {
    ItemSums s;
    s.f_min = region_min(f, region);
    s.f_max = region_max(f, region);
    s.w_min = region_min(w, region);
    const double pc = conjugate(p);
    const bool dual = p > 1.0;
    for_each_cell(f, region, [&](std::size_t k, std::int64_t mult) {
        const long double m = static_cast<long double>(mult);
        const double g = f[k] - s.f_min;
        const double wk = w[k];
        s.cells += m;
        s.g += m * g;
        s.w += m * wk;
        const double gp = std::pow(g, p);
        const double wp = std::pow(wk, p);
        s.gp_w += m * gp * wk;
        s.gp_wp += m * gp * wp;
        s.wp += m * wp;
        if (dual) {
            s.w_dual += m * std::pow(wk, -1.0 / (p - 1.0));
            s.w_qdual += m * std::pow(wk, -pc);
        }
        if (q) {
            const double wq = std::pow(wk, *q);
            s.wq += m * wq;
            s.gq_wq += m * std::pow(g, *q) * wq;
        }
    });
    if (s.cells <= 0.0L) throw std::invalid_argument("empty item region");
    return s;
}

CheckReport thm1_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& cubes, const WeightRegularityEstimate& reg,
                         const RhoComparisonEstimate& est) {
    if (!cubes.empty() && cubes.front().shape != Shape::cube) throw std::invalid_argument("cube family required");
    return forward_impl("lp-cubes-forward", Variant::lp, f, w, rho, tp, cubes, reg.eta, est);
}

CheckReport thm2_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& cubes, const WeightRegularityEstimate& reg,
                         const RhoComparisonEstimate& est) {
    if (!cubes.empty() && cubes.front().shape != Shape::cube) throw std::invalid_argument("cube family required");
    return forward_impl("lq-cubes-forward", Variant::lq, f, w, rho, tp, cubes, reg.eta, est);
}

CheckReport thm3_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est) {
    if (!balls.empty() && balls.front().shape != Shape::ball) throw std::invalid_argument("ball family required");
    return forward_impl("lp-balls-forward", Variant::lp, f, w, rho, tp, balls, 0.0, est);
}

CheckReport thm4_forward(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                         const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est) {
    if (!balls.empty() && balls.front().shape != Shape::ball) throw std::invalid_argument("ball family required");
    return forward_impl("lq-balls-forward", Variant::lq, f, w, rho, tp, balls, 0.0, est);
}

CheckReport thm1_converse_chain(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                                const std::vector<FamilyItem>& items) {
    const bool balls = !items.empty() && items.front().shape == Shape::ball;
    return converse_impl(balls ? "lp-balls-converse" : "lp-cubes-converse", Variant::lp, f, w, rho, tp, items);
}

CheckReport thm2_converse_chain(const GridField& f, const GridField& w, const GridField& rho, const TheoremParams& tp,
                                const std::vector<FamilyItem>& items) {
    const bool balls = !items.empty() && items.front().shape == Shape::ball;
    return converse_impl(balls ? "lq-balls-converse" : "lq-cubes-converse", Variant::lq, f, w, rho, tp, items);
}

CheckReport corollary_bridges(const GridField& w, const GridField& rho, const TheoremParams& tp,
                              const std::vector<FamilyItem>& cubes, const GridField* f) {
    check_inputs(f ? *f : w, w, rho, cubes);
    check_exponents(tp, true);
    const bool balls = cubes.front().shape == Shape::ball;
    if (f && balls && !tp.beta) throw std::invalid_argument("ball families need beta");
    CheckReport rep;
    rep.id = "corollary-bridges";
    set_params(rep, tp);
    const double p = tp.p;
    const double q = *tp.q;
    const double hd = w.cell_volume();
    const double wc = apq_constant(w, rho, p, q, tp.theta2, cubes).value;
    const std::size_t d = w.dim();
    const GridField& fw = f ? *f : w;

    struct Out {
        std::vector<CheckRow> rows;
        double cor = 0.0;
        double cover = 1.0;
    };
    const auto out = parallel_map<Out>(cubes.size(), [&](std::size_t i) {
        const FamilyItem& it = cubes[i];
        const ItemSums s = item_sums(fw, w, it.region, p, q);
        const std::string at = " " + item_label(it, i);
        const double vol = static_cast<double>(s.cells) * hd;
        const double iq = std::pow(static_cast<double>(s.wq) * hd, 1.0 / q);
        const double ip = std::pow(static_cast<double>(s.wp) * hd, 1.0 / p);
        const double base = growth_base(rho, it);
        const double shift = std::pow(vol, 1.0 / q - 1.0 / p);
        Out o;
        auto row = [&](std::string label, double lhs, double rhs) {
            o.rows.push_back(CheckRow{std::move(label) + at, lhs, rhs, safe_ratio(lhs, rhs)});
        };
        row("q-integral upper", iq, wc * std::pow(base, tp.theta2) * shift * ip);
        row("q-integral lower", shift * ip, iq);
        if (f) {
            const double gq = std::pow(static_cast<double>(s.gq_wq) * hd, 1.0 / q);
            const double lq = gq / iq;
            const double lcor = gq / (shift * ip);
            row("corollary lower", lq, lcor);
            row("corollary upper", lcor, wc * std::pow(base, tp.theta2) * lq);
            o.cor = oscillation_normalizer(it, tp.beta, d) * lcor / std::pow(base, tp.theta1 - tp.theta2);
            if (balls) o.cover = covered_volume(w, it.region) / it.analytic_volume;
        }
        return o;
    });
    double k = 0.0;
    double cover = 0.0;
    for (const Out& o : out) {
        for (const CheckRow& r : o.rows) rep.add_row(r.label, r.lhs, r.rhs, chain_tol);
        k = std::max(k, o.cor);
        cover = std::max(cover, o.cover);
    }
    rep.metric("weight_constant", wc);
    if (f) {
        const double norm = family_seminorm(*f, rho, tp.theta1, tp.beta, cubes);
        rep.add_row("seminorm <= corollary constant x weight constant", norm, cover * k * wc, chain_tol);
        rep.metric("corollary_constant", k);
        rep.metric("seminorm", norm);
    }
    const std::size_t w_idx = argmax_ratio(rep.rows);
    rep.fitted = rep.rows[w_idx].ratio;
    const std::size_t per_item = out.front().rows.size();
    if (w_idx / per_item < cubes.size()) rep.witness = item_witness(cubes[w_idx / per_item], w_idx / per_item);
    rep.finalize();
    return rep;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(const GridField& field, std::uint64_t seed,
                                                              std::size_t count) {
    if (field.size() < 2) throw std::invalid_argument("need at least two cells");
    Rng rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(count);
    while (pairs.size() < count) {
        const std::size_t a = rng.index(field.size());
        const std::size_t b = rng.index(field.size());
        if (a != b) pairs.emplace_back(a, b);
    }
    return pairs;
}

CheckReport lipschitz_pointwise_check(const GridField& f, const GridField& rho, double beta, double theta,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                      const std::vector<FamilyItem>& balls, const RhoComparisonEstimate& est) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (theta < 0.0) throw std::invalid_argument("theta must be >= 0");
    if (pairs.empty()) throw std::invalid_argument("no point pairs");
    if (balls.empty() || balls.front().shape != Shape::ball) throw std::invalid_argument("ball family required");
    if (!f.same_geometry(rho)) throw std::invalid_argument("f and rho must share a grid");
    CheckReport rep;
    rep.id = "lipschitz-pointwise";
    rep.param("beta", beta);
    rep.param("theta", theta);
    rep.param("n0", est.n0);
    SeminormSpec spec{SeminormFamily::cam, theta, beta};
    const double norm = seminorm(f, rho, spec, balls).value;
    spec.theta = (est.n0 + 1.0) * theta;
    const double converse = seminorm(f, rho, spec, balls).value;
    const auto rows = parallel_map<CheckRow>(pairs.size(), [&](std::size_t k) {
        const auto [a, b] = pairs[k];
        const Point x = f.cell_center(a);
        const Point y = f.cell_center(b);
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
        const double dist = std::sqrt(d2);
        const double lhs = std::abs(f[a] - f[b]);
        const double rhs = norm * std::pow(dist, beta) * std::pow(1.0 + dist / rho[a] + dist / rho[b], theta);
        return CheckRow{"pair " + std::to_string(k), lhs, rhs, safe_ratio(lhs, rhs)};
    });
    rep.rows = rows;
    const std::size_t k = argmax_ratio(rep.rows);
    rep.fitted = rep.rows[k].ratio;
    rep.witness = Witness{"pair", f.cell_center(pairs[k].first), 0.0, f.cell_center(pairs[k].second), k};
    rep.metric("seminorm", norm);
    rep.metric("converse_seminorm", converse);
    rep.bound = inf;
    rep.verdict = std::isfinite(rep.fitted) ? Verdict::pass : Verdict::fail;
    if (!std::isfinite(rep.fitted)) rep.violations = 1;
    return rep;
}

CheckReport tail_integral_check(const GridField& f, const GridField& rho, std::optional<double> beta, double theta,
                                double gamma, const std::vector<FamilyItem>& items,
                                const std::vector<FamilyItem>& norm_family) {
    if (items.empty() || norm_family.empty()) throw std::invalid_argument("empty family");
    if (!f.same_geometry(rho)) throw std::invalid_argument("f and rho must share a grid");
    if (theta < 0.0) throw std::invalid_argument("theta must be >= 0");
    const Shape want = beta ? Shape::ball : Shape::cube;
    for (const FamilyItem& it : items)
        if (it.shape != want) throw std::invalid_argument("family geometry does not match the seminorm");
    if (norm_family.front().shape != want) throw std::invalid_argument("norm family geometry mismatch");
    if (beta) {
        if (!(*beta > 0.0 && *beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
        if (!(gamma > *beta + theta)) throw std::invalid_argument("gamma must exceed beta + theta");
    } else if (!(gamma > theta)) {
        throw std::invalid_argument("gamma must exceed theta");
    }
    CheckReport rep;
    rep.id = beta ? "ball-tail" : "cube-tail";
    if (beta) rep.param("beta", *beta);
    rep.param("theta", theta);
    rep.param("gamma", gamma);
    const double norm = family_seminorm(f, rho, theta, beta, norm_family);
    const std::size_t d = f.dim();
    const double power = static_cast<double>(d) + gamma;
    const double hd = f.cell_volume();
    const auto rows = parallel_map<CheckRow>(items.size(), [&](std::size_t i) {
        const FamilyItem& it = items[i];
        const double low = region_min(f, it.region);
        const double r = it.scale;
        const double rpow = std::pow(r, power);
        long double acc = 0.0L;
        std::vector<std::int64_t> idx(d);
        for (std::size_t k = 0; k < f.size(); ++k) {
            f.unflatten(k, idx);
            double d2 = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                const double dx = f.center_coord(a, idx[a]) - it.center[a];
                d2 += dx * dx;
            }
            acc += (f[k] - low) / (rpow + std::pow(d2, 0.5 * power));
        }
        const double lhs = static_cast<double>(acc) * hd;
        const double rhs = norm * std::pow(r, beta.value_or(0.0) - gamma) * std::pow(growth_base(rho, it), theta);
        return CheckRow{item_label(it, i), lhs, rhs, safe_ratio(lhs, rhs)};
    });
    rep.rows = rows;
    rep.metric("seminorm", norm);
    finish_forward(rep, items);
    return rep;
}

void apply_bound(CheckReport& rep, double bound) {
    if (!(bound > 0.0)) throw std::invalid_argument("bound must be > 0");
    rep.bound = bound;
    rep.violations = 0;
    for (const CheckRow& r : rep.rows)
        if (!(r.ratio <= bound)) ++rep.violations;
    if (rep.rows.empty() && !(rep.fitted <= bound)) rep.violations = 1;
    rep.verdict = rep.violations == 0 ? Verdict::pass : Verdict::fail;
}

CheckReport stability_check(const std::string& id, const std::vector<RefinementStep>& steps, double tolerance) {
    if (steps.size() < 2) throw std::invalid_argument("stability needs at least two steps");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    CheckReport rep;
    rep.id = id;
    rep.param("tolerance", tolerance);
    rep.bound = tolerance;
    rep.refinement = steps;
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
        const double a = steps[k].fitted;
        const double b = steps[k + 1].fitted;
        double drift = 0.0;
        if (!std::isfinite(a) || !std::isfinite(b)) drift = inf;
        else if (a != 0.0) drift = std::abs(b / a - 1.0);
        else if (b != 0.0) drift = inf;
        rep.add_row(steps[k].label + " -> " + steps[k + 1].label, drift, tolerance, 0.0);
    }
    rep.fitted = 0.0;
    for (const CheckRow& r : rep.rows) rep.fitted = std::max(rep.fitted, r.lhs);
    rep.finalize();
    return rep;
}

}  // namespace rholab
