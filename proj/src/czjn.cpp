#include "rholab/czjn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rholab/grid_ops.hpp"
#include "rholab/parallel.hpp"
#include "rholab/region.hpp"
#include "rholab/seminorms.hpp"
#include "rholab/summed_area_table.hpp"

namespace rholab {

namespace {

constexpr double kSlack = 1e-12;

std::vector<CellRange> dyadic_children(const CellRange& c) {
    const std::size_t d = c.dim();
    const std::int64_t half = c.len[0] / 2;
    std::vector<CellRange> out;
    out.reserve(std::size_t{1} << d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        CellRange child{c.lo, Index(d, half)};
        // Highest bit drives axis 0 so children come out in lexicographic order.
        for (std::size_t i = 0; i < d; ++i)
            if (mask & (std::size_t{1} << (d - 1 - i))) child.lo[i] += half;
        out.push_back(std::move(child));
    }
    return out;
}

bool lex_less(const CellRange& a, const CellRange& b) { return a.lo < b.lo || (a.lo == b.lo && a.len < b.len); }

double pow_2d(std::size_t d) { return std::ldexp(1.0, static_cast<int>(d)); }

double root_growth(const GridField& rho, const CellRange& root) {
    const CubeSpec q = cube_of(rho, root);
    return 1.0 + q.side / rho_at(rho, q.center);
}

long double direct_sum(const GridField& f, const CellRange& range) {
    long double s = 0.0L;
    for_each_cell(f, cube_region(f, range), [&](std::size_t flat, std::int64_t) { s += f[flat]; });
    return s;
}

}  // namespace

int CZTree::depth() const {
    int k = 0;
    for (std::size_t g = 1; g < generations.size(); ++g)
        if (!generations[g].empty()) k = static_cast<int>(g);
    return k;
}

double dyadic_blo_norm(const GridField& f, const GridField& rho, const CellRange& root, double theta) {
    const auto items = cube_items(f, dyadic_family(root));
    return seminorm(f, rho, SeminormSpec{SeminormFamily::blo, theta, std::nullopt}, items).value;
}

double cz_threshold(const GridField& rho, const CellRange& cube, double sigma, double norm, double theta) {
    const CubeSpec q = cube_of(rho, cube);
    const double growth = 1.0 + q.side / rho_at(rho, q.center);
    return sigma * norm * (theta == 0.0 ? 1.0 : std::pow(growth, theta));
}

namespace {

void descend(const SummedAreaTable& sat, const CellRange& s, double parent_inf, double threshold,
             std::vector<CellRange>& out) {
    const double mean = static_cast<double>(sat.mean(s) - static_cast<long double>(parent_inf));
    if (mean > threshold) {
        out.push_back(s);
        return;
    }
    if (s.len[0] < 2) return;
    for (const CellRange& child : dyadic_children(s)) descend(sat, child, parent_inf, threshold, out);
}

std::vector<CZNode> generation_with(const GridField& f, const SummedAreaTable& sat, const std::vector<CZNode>& parents,
                                    double sigma, double theta, double norm, const GridField& rho) {
    const auto per_parent = parallel_map<std::vector<CellRange>>(parents.size(), [&](std::size_t i) {
        std::vector<CellRange> selected;
        const CZNode& p = parents[i];
        if (p.cube.len[0] < 2 || norm == 0.0) return selected;
        for (const CellRange& child : dyadic_children(p.cube)) descend(sat, child, p.essinf, p.own_threshold, selected);
        return selected;
    });
    std::vector<CZNode> out;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        for (const CellRange& c : per_parent[i]) {
            CZNode node;
            node.cube = c;
            node.generation = parents[i].generation + 1;
            node.parent = static_cast<std::ptrdiff_t>(i);
            node.mean_osc = static_cast<double>(sat.mean(c) - static_cast<long double>(parents[i].essinf));
            node.essinf = region_min(f, cube_region(f, c));
            node.threshold = parents[i].own_threshold;
            node.own_threshold = cz_threshold(rho, c, sigma, norm, theta);
            out.push_back(std::move(node));
        }
    }
    std::sort(out.begin(), out.end(), [](const CZNode& a, const CZNode& b) { return lex_less(a.cube, b.cube); });
    return out;
}

void validate_cz(const GridField& f, const GridField& rho, const CellRange& root, double sigma, double theta) {
    if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
    if (!is_dyadic_root(root)) throw std::invalid_argument("root must span a power-of-two number of cells per axis");
    if (!f.same_geometry(rho)) throw std::invalid_argument("f and rho must share a grid");
    cube_region(f, root);
}

}  // namespace

std::vector<CZNode> cz_generation(const GridField& f, const std::vector<CZNode>& parents, double sigma, double theta,
                                  double norm, const GridField& rho) {
    if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
    for (const CZNode& p : parents)
        if (!is_dyadic_root(p.cube)) throw std::invalid_argument("parent cube is not dyadically subdividable");
    const SummedAreaTable sat(f);
    return generation_with(f, sat, parents, sigma, theta, norm, rho);
}

CZTree cz_decompose(const GridField& f, const CellRange& root, double sigma, double theta, const GridField& rho,
                    int max_depth) {
    validate_cz(f, rho, root, sigma, theta);
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    CZTree tree;
    tree.root = root;
    tree.sigma = sigma;
    tree.theta = theta;
    tree.max_depth = max_depth;
    tree.norm = dyadic_blo_norm(f, rho, root, theta);

    const SummedAreaTable sat(f);
    CZNode top;
    top.cube = root;
    top.essinf = region_min(f, cube_region(f, root));
    top.mean_osc = static_cast<double>(sat.mean(root) - static_cast<long double>(top.essinf));
    top.own_threshold = cz_threshold(rho, root, sigma, tree.norm, theta);
    if (tree.norm > 0.0 && !(top.mean_osc < top.own_threshold))
        throw std::invalid_argument("entry condition violated: root oscillation reaches the threshold");
    tree.generations.push_back({top});
    if (tree.norm == 0.0) return tree;

    for (int k = 1; k <= max_depth + 1; ++k) {
        auto next = generation_with(f, sat, tree.generations.back(), sigma, theta, tree.norm, rho);
        if (next.empty()) break;
        if (k == max_depth + 1) {
            tree.depth_exhausted = true;
            break;
        }
        for (const CZNode& n : next)
            if (n.cube.cells() == 1) tree.reached_cells = true;
        tree.generations.push_back(std::move(next));
    }
    return tree;
}

CheckReport cz_verify_properties(const CZTree& tree, const GridField& f, const GridField& rho) {
    CheckReport rep;
    rep.id = "cz-properties";
    rep.param("sigma", tree.sigma);
    rep.param("theta", tree.theta);
    rep.param("norm", tree.norm);
    const std::size_t d = f.dim();
    const double two_d = pow_2d(d);
    const double hd = f.cell_volume();
    std::size_t viol[5] = {0, 0, 0, 0, 0};
    const double root_measure = static_cast<double>(tree.root.cells()) * hd;

    if (tree.generations.empty() || tree.generations[0].size() != 1 || !(tree.generations[0][0].cube == tree.root)) {
        ++viol[0];
    }
    for (std::size_t k = 0; k < tree.generations.size(); ++k) {
        const auto& gen = tree.generations[k];

        // (A): dyadic, strictly inside the parent, pairwise disjoint.
        std::vector<std::uint8_t> covered(f.size(), 0);
        for (const CZNode& n : gen) {
            bool ok = is_dyadic_root(n.cube) && tree.root.contains(n.cube);
            for (std::size_t i = 0; ok && i < d; ++i)
                if ((n.cube.lo[i] - tree.root.lo[i]) % n.cube.len[i] != 0) ok = false;
            if (k > 0) {
                const auto& prev = tree.generations[k - 1];
                if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= prev.size()) {
                    ok = false;
                } else {
                    const CellRange& p = prev[static_cast<std::size_t>(n.parent)].cube;
                    if (!p.contains(n.cube) || p == n.cube) ok = false;
                }
            }
            if (ok) {
                for_each_cell(f, cube_region(f, n.cube), [&](std::size_t flat, std::int64_t) {
                    if (covered[flat]) ok = false;
                    covered[flat] = 1;
                });
            }
            if (!ok) ++viol[0];
        }
    }
    for (std::size_t k = 0; k < tree.generations.size() && !viol[0]; ++k) {
        const auto& gen = tree.generations[k];
        const std::vector<CZNode>* children = k + 1 < tree.generations.size() ? &tree.generations[k + 1] : nullptr;
        if (k > 0) {
            double total = 0.0;
            for (const CZNode& n : gen) total += static_cast<double>(n.cube.cells()) * hd;
            rep.add_row("generation " + std::to_string(k) + " measure", total,
                        root_measure / std::pow(tree.sigma, static_cast<double>(k)), kSlack);
        }
        for (std::size_t pi = 0; pi < gen.size(); ++pi) {
            const CZNode& p = gen[pi];
            const double p_inf = region_min(f, cube_region(f, p.cube));
            const double t = cz_threshold(rho, p.cube, tree.sigma, tree.norm, tree.theta);
            std::vector<std::uint8_t> in_child;
            long double child_cells = 0.0L;
            if (children) {
                for (const CZNode& c : *children) {
                    if (c.parent != static_cast<std::ptrdiff_t>(pi)) continue;
                    child_cells += static_cast<long double>(c.cube.cells());
                    const long double n = static_cast<long double>(c.cube.cells());
                    const double mean = static_cast<double>(direct_sum(f, c.cube) / n - p_inf);
                    // (B): threshold < mean <= 2^d threshold, and no larger dyadic cube inside p qualifies.
                    if (!(mean > t * (1.0 - kSlack)) || !leq_rel(mean, two_d * t, kSlack)) ++viol[1];
                    CellRange a = c.cube;
                    while (a.len[0] < p.cube.len[0]) {
                        for (std::size_t i = 0; i < d; ++i) {
                            a.lo[i] = tree.root.lo[i] + ((a.lo[i] - tree.root.lo[i]) / (2 * a.len[i])) * (2 * a.len[i]);
                            a.len[i] *= 2;
                        }
                        if (a == p.cube) break;
                        const long double an = static_cast<long double>(a.cells());
                        const double amean = static_cast<double>(direct_sum(f, a) / an - p_inf);
                        if (!leq_rel(amean, t, kSlack)) ++viol[1];
                    }
                    // (C): 0 <= essinf(child) - essinf(parent) <= 2^d threshold.
                    const double jump = region_min(f, cube_region(f, c.cube)) - p_inf;
                    if (jump < 0.0 || !leq_rel(jump, two_d * t, kSlack)) ++viol[2];
                    if (in_child.empty()) in_child.assign(f.size(), 0);
                    for_each_cell(f, cube_region(f, c.cube), [&](std::size_t flat, std::int64_t) { in_child[flat] = 1; });
                }
            }
            // (D): children of p cover at most |p|/sigma.
            if (!leq_rel(static_cast<double>(child_cells), static_cast<double>(p.cube.cells()) / tree.sigma, kSlack))
                ++viol[3];
            // (E): off the children, f - essinf(p) <= threshold cell by cell.
            for_each_cell(f, cube_region(f, p.cube), [&](std::size_t flat, std::int64_t) {
                if (!in_child.empty() && in_child[flat]) return;
                if (!leq_rel(f[flat] - p_inf, t, kSlack)) ++viol[4];
            });
        }
    }
    const char* names[5] = {"A", "B", "C", "D", "E"};
    for (int i = 0; i < 5; ++i) {
        rep.metric(std::string("violations_") + names[i], static_cast<double>(viol[i]));
        rep.violations += viol[i];
    }
    rep.metric("depth", tree.depth());
    rep.metric("depth_exhausted", tree.depth_exhausted ? 1.0 : 0.0);
    rep.metric("reached_cells", tree.reached_cells ? 1.0 : 0.0);
    if (!rep.rows.empty()) rep.fitted = rep.rows[argmax_ratio(rep.rows)].ratio;
    rep.finalize();
    return rep;
}

std::vector<std::size_t> cz_lookup_cells(const GridField& rho, const CZTree& tree) {
    std::vector<std::size_t> out{rho.locate(cube_of(rho, tree.root).center)};
    for (const auto& gen : tree.generations)
        for (const CZNode& n : gen) out.push_back(rho.locate(cube_of(rho, n.cube).center));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CheckReport cz_inclusion_check(const CZTree& tree, const GridField& f, const GridField& rho,
                               const RhoComparisonEstimate& est) {
    CheckReport rep;
    rep.id = "cz-inclusion";
    const std::size_t d = f.dim();
    const double f0 = root_growth(rho, tree.root);
    const double unit = std::pow(est.c0, tree.theta) * tree.sigma * pow_2d(d) *
                        std::pow(f0, (est.n0 + 1.0) * tree.theta) * tree.norm;
    rep.param("c0", est.c0);
    rep.param("n0", est.n0);
    rep.param("unit", unit);
    const Region root_region = cube_region(f, tree.root);
    const double inf_q = region_min(f, root_region);
    const int depth = tree.depth();
    for (int k = 1; k <= depth + 1; ++k) {
        std::vector<std::uint8_t> inside(f.size(), 0);
        if (static_cast<std::size_t>(k) < tree.generations.size())
            for (const CZNode& n : tree.generations[static_cast<std::size_t>(k)])
                for_each_cell(f, cube_region(f, n.cube), [&](std::size_t flat, std::int64_t) { inside[flat] = 1; });
        double worst = 0.0;
        for_each_cell(f, root_region, [&](std::size_t flat, std::int64_t) {
            if (!inside[flat]) worst = std::max(worst, f[flat] - inf_q);
        });
        rep.add_row("k=" + std::to_string(k), worst, k * unit, kSlack);
    }
    if (!rep.rows.empty()) rep.fitted = rep.rows[argmax_ratio(rep.rows)].ratio;
    rep.finalize();
    return rep;
}

double jn_c2(std::size_t dim, double c0, double theta) {
    return 1.0 / (std::pow(c0, theta) * pow_2d(dim) * std::numbers::e);
}

std::vector<double> linear_grid(double span, std::size_t count) {
    if (count < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = span * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

JNReport jn_tail_verify(const GridField& f, const CellRange& root, double theta, const GridField& rho,
                        const RhoComparisonEstimate& est, const std::vector<double>& lambdas) {
    validate_cz(f, rho, root, 2.0, theta);
    if (lambdas.empty()) throw std::invalid_argument("empty lambda grid");
    JNReport rep;
    rep.lambdas = lambdas;
    rep.theta = theta;
    rep.c0 = est.c0;
    rep.n0 = est.n0;
    rep.c1 = std::numbers::e;
    rep.c2 = jn_c2(f.dim(), est.c0, theta);
    rep.norm = dyadic_blo_norm(f, rho, root, theta);
    rep.growth = root_growth(rho, root);
    const Region region = cube_region(f, root);
    const double hd = f.cell_volume();
    rep.measure = static_cast<double>(region.cells) * hd;
    const double inf_q = region_min(f, region);
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(region.cells));
    for_each_cell(f, region, [&](std::size_t flat, std::int64_t) { g.push_back(f[flat] - inf_q); });
    std::sort(g.begin(), g.end());
    const double damp = std::pow(rep.growth, -(est.n0 + 1.0) * theta);
    for (double lambda : lambdas) {
        const auto above = static_cast<double>(g.end() - std::upper_bound(g.begin(), g.end(), lambda));
        const double emp = above * hd;
        double bound = 0.0;
        if (rep.norm > 0.0) {
            bound = rep.c1 * rep.measure * std::exp(-damp * rep.c2 * lambda / rep.norm);
        } else {
            bound = lambda <= 0.0 ? rep.c1 * rep.measure : 0.0;
        }
        rep.empirical.push_back(emp);
        rep.bound.push_back(bound);
        if (!leq_rel(emp, bound, kSlack)) ++rep.violations;
    }
    rep.passed = rep.violations == 0;
    return rep;
}

Json to_json(const JNReport& r) {
    Json j;
    j["id"] = "john-nirenberg";
    j["verdict"] = r.passed ? "pass" : "fail";
    j["violations"] = r.violations;
    j["constants"] = Json{{"c1", r.c1}, {"c2", r.c2}, {"c0", r.c0}, {"n0", r.n0}, {"theta", r.theta}};
    j["norm"] = r.norm;
    j["growth"] = r.growth;
    j["measure"] = r.measure;
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
        rows.push_back(Json{{"lambda", r.lambdas[i]}, {"empirical", r.empirical[i]}, {"bound", r.bound[i]}});
    j["rows"] = rows;
    return j;
}

CheckReport exp_integrability_check(const GridField& f, const CellRange& root, double theta, const GridField& rho,
                                    const RhoComparisonEstimate& est, double gamma) {
    validate_cz(f, rho, root, 2.0, theta);
    const double c2 = jn_c2(f.dim(), est.c0, theta);
    if (!(gamma > 0.0) || !(gamma < c2)) throw std::invalid_argument("gamma must lie in (0, c2)");
    CheckReport rep;
    rep.id = "exp-integrability";
    rep.param("theta", theta);
    rep.param("gamma", gamma);
    rep.param("c2", c2);
    const double norm = dyadic_blo_norm(f, rho, root, theta);
    const double growth = root_growth(rho, root);
    const double damp = std::pow(growth, -(est.n0 + 1.0) * theta);
    const Region region = cube_region(f, root);
    const double hd = f.cell_volume();
    const double measure = static_cast<double>(region.cells) * hd;
    const double inf_q = region_min(f, region);
    long double integral = 0.0L;
    for_each_cell(f, region, [&](std::size_t flat, std::int64_t) {
        const double arg = norm > 0.0 ? damp * gamma / norm * (f[flat] - inf_q) : 0.0;
        integral += std::exp(static_cast<long double>(arg));
    });
    const double value = static_cast<double>(integral) * hd;
    const double c_stated = std::numbers::e / (1.0 - gamma / c2) + 1.0;
    const double c_layer = 1.0 + std::numbers::e * gamma / (c2 - gamma);
    rep.add_row("stated constant", value, c_stated * measure, kSlack);
    rep.add_row("layer-cake constant", value, c_layer * measure, kSlack);
    rep.metric("norm", norm);
    rep.metric("c_stated", c_stated);
    rep.metric("c_layer_cake", c_layer);
    rep.fitted = value / measure;
    rep.bound = c_stated;
    rep.finalize();
    return rep;
}

}  // namespace rholab
