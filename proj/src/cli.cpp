#include "rholab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "rholab/critical_radius.hpp"
#include "rholab/czjn.hpp"
#include "rholab/field_io.hpp"
#include "rholab/grid_ops.hpp"
#include "rholab/parallel.hpp"
#include "rholab/report.hpp"
#include "rholab/seminorms.hpp"
#include "rholab/theorems.hpp"
#include "rholab/weights.hpp"

namespace rholab {

namespace {

const std::vector<std::string> subcommands = {"rho", "seminorm", "weight", "cz", "jn", "check", "generate"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const std::string& part : split(s, ','))
        if (!part.empty()) out.push_back(parse_double(part));
    if (out.empty()) throw std::invalid_argument("empty list: " + s);
    return out;
}

struct Options {
    // shared
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::int64_t grid = 16;
    double window = 2.0;
    std::size_t dim = 3;
    unsigned threads = 0;
    std::string potential = "gen:potential-one";
    std::string extension = "constant-pad";
    int radii = 64;
    double r_min = 0.0;
    double r_max = 0.0;
    double rh_exponent = 2.0;
    std::string n0s = "0.5,1,2,4,8";
    std::size_t max_points = 1024;
    int max_level = -1;
    std::string ball_radii;
    std::int64_t ball_stride = 0;
    // fields
    std::string f = "gen:power:beta=0.5";
    std::string weight = "gen:weight-power:gamma=0";
    // exponents
    double theta = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double p = 1.0;
    std::optional<double> q;
    std::optional<double> beta;
    double gamma = 1.0;
    std::string family = "BLO";
    std::string shape = "cube";
    std::string thetas = "0,0.5,1,2";
    bool relations = false;
    // weight extras
    std::size_t draws = 0;
    std::string epsilons = "0.05,0.1,0.2,0.5,1";
    // rho extras
    double c0_scale = 1.0;
    std::string rho_out;
    // cz / jn
    double sigma = std::numbers::e;
    int max_depth = 64;
    int lambdas = 64;
    double lambda_span = 20.0;
    double gamma_fraction = 0.5;
    // check
    std::string theorem;
    std::size_t pairs = 4096;
    std::optional<double> bound;
    // generate
    std::string kind = "constant";
    GeneratorSpec gen;
    std::string center;
};

/// Parsed command-line state plus the fields it resolves to.
class Session {
public:
    Session(const Options& o, CLI::App* sub, bool seed_given) : o_(o), sub_(sub), seed_given_(seed_given) {}

    const Options& opts() const { return o_; }

    std::uint64_t seed(const char* what) const {
        if (!seed_given_) throw std::invalid_argument(std::string(what) + " is randomized and needs --seed");
        return o_.seed;
    }

    Box box() const { return Box::centered(o_.dim, o_.window); }
    std::vector<std::int64_t> counts() const { return std::vector<std::int64_t>(o_.dim, o_.grid); }

    GridField field(const std::string& source, FieldKind kind) {
        GridField g = [&] {
            if (source.rfind("gen:", 0) == 0) {
                GeneratorSpec spec = parse_generator_source(source);
                Generated out = geometry_ ? generate(spec, geometry_->box(), geometry_->counts())
                                          : generate(spec, box(), counts());
                if (out.bound) bounds_[source] = *out.bound;
                return out.field;
            }
            return load_field(source);
        }();
        if (g.kind() != kind) {
            std::vector<double> values(g.values().begin(), g.values().end());
            g = g.with_values(std::move(values), kind);
        }
        if (geometry_ && !geometry_->same_geometry(g)) throw std::invalid_argument("field geometry mismatch: " + source);
        if (!geometry_) geometry_ = g;
        return g;
    }

    std::optional<double> construction_bound(const std::string& source) const {
        auto it = bounds_.find(source);
        if (it == bounds_.end()) return std::nullopt;
        return it->second;
    }

    const GridField& rho() {
        if (!rho_) {
            Potential pot{field(o_.potential, FieldKind::potential), parse_extension(o_.extension), o_.rh_exponent};
            RadiusGrid rg = RadiusGrid::for_field(pot.field, o_.radii);
            if (o_.r_min > 0.0) rg.r_min = o_.r_min;
            if (o_.r_max > 0.0) rg.r_max = o_.r_max;
            potential_ = pot;
            rho_field_ = compute_rho_field(pot, rg);
            rho_ = rho_field_->rho;
        }
        return *rho_;
    }

    const RhoField& rho_field() {
        rho();
        return *rho_field_;
    }

    const Potential& potential() {
        rho();
        return *potential_;
    }

    RhoComparisonEstimate estimate(std::vector<std::size_t> include = {}) {
        ComparisonOptions co;
        co.max_points = o_.max_points;
        co.include = std::move(include);
        return estimate_rho_comparison(rho(), parse_list(o_.n0s), co);
    }

    std::vector<FamilyItem> cubes() {
        const GridField& g = rho();
        const CellRange root = whole_range(g);
        std::vector<CellRange> ranges = dyadic_family(root);
        if (o_.max_level >= 0) {
            const std::int64_t min_len = std::max<std::int64_t>(1, root.len[0] >> o_.max_level);
            std::erase_if(ranges, [&](const CellRange& r) { return r.len[0] < min_len; });
        }
        return cube_items(g, ranges);
    }

    std::vector<FamilyItem> balls() {
        const GridField& g = rho();
        std::vector<double> radii;
        if (o_.ball_radii.empty()) radii = {o_.window / 8.0, o_.window / 4.0, o_.window / 2.0};
        else radii = parse_list(o_.ball_radii);
        const std::int64_t stride = o_.ball_stride > 0 ? o_.ball_stride : std::max<std::int64_t>(1, o_.grid / 8);
        auto specs = lattice_balls(g, stride, radii, true);
        if (specs.empty()) throw std::invalid_argument("no ball fits inside the window");
        return ball_items(g, specs, Extension::clamp);
    }

    std::vector<BallSpec> ball_specs() {
        std::vector<BallSpec> out;
        for (const FamilyItem& it : balls()) out.push_back(BallSpec{it.center, it.scale});
        return out;
    }

    Json params() const {
        Json j = Json::object();
        for (const CLI::Option* opt : sub_->get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "out" || name == "threads" || name == "config") continue;
            if (opt->count() > 0) {
                j[name] = opt->results().back();
            } else {
                j[name] = opt->get_default_str();
            }
        }
        return j;
    }

private:
    const Options& o_;
    CLI::App* sub_;
    bool seed_given_;
    std::optional<GridField> geometry_;
    std::optional<GridField> rho_;
    std::optional<RhoField> rho_field_;
    std::optional<Potential> potential_;
    std::map<std::string, double> bounds_;
};

Json witness_of(const FamilyItem& it, std::size_t k) {
    return to_json(Witness{it.shape == Shape::ball ? "ball" : "cube", it.center, it.scale, {}, k});
}

struct Outcome {
    std::vector<CheckReport> reports;
    Json extra = Json::object();
    bool passed = true;
};

Outcome cmd_rho(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const RhoField& rf = s.rho_field();
    const auto vals = rf.rho.values();
    res.extra["rho_min"] = *std::min_element(vals.begin(), vals.end());
    res.extra["rho_max"] = *std::max_element(vals.begin(), vals.end());
    res.extra["below_grid"] = rf.below_grid;
    res.extra["above_grid"] = rf.above_grid;
    const RhoComparisonEstimate est = s.estimate();
    res.extra["n0"] = est.n0;
    res.extra["c0"] = est.c0;
    res.extra["pairs"] = est.pairs;
    if (!o.rho_out.empty()) write_field(o.rho_out, rf.rho);
    res.reports.push_back(check_window_estimate(rf.rho, est, s.ball_specs(), o.c0_scale));
    std::vector<BallSpec> rh_balls = s.ball_specs();
    res.reports.push_back(reverse_holder_constant(s.potential(), o.rh_exponent, rh_balls));
    return res;
}

Outcome cmd_seminorm(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const GridField f = s.field(o.f, FieldKind::function);
    SeminormSpec spec;
    spec.family = parse_seminorm_family(o.family);
    spec.theta = o.theta;
    spec.beta = o.beta;
    const auto items = uses_balls(spec.family) ? s.balls() : s.cubes();
    const SeminormReport rep = seminorm(f, s.rho(), spec, items);
    res.extra["family"] = std::string(to_string(spec.family));
    res.extra["value"] = rep.value;
    res.extra["family_size"] = items.size();
    if (!rep.table.empty()) res.extra["witness"] = witness_of(items[rep.witness], rep.witness);
    if (auto b = s.construction_bound(o.f)) res.extra["construction_bound"] = *b;
    if (o.relations)
        res.reports.push_back(relation_checks(f, s.rho(), parse_list(o.thetas), o.beta.value_or(0.5), s.cubes(), s.balls()));
    return res;
}

Outcome cmd_weight(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const GridField w = s.field(o.weight, FieldKind::weight);
    const auto items = o.shape == "ball" ? s.balls() : s.cubes();
    const WeightConstantReport rep = o.q ? apq_constant(w, s.rho(), o.p, *o.q, o.theta, items)
                                         : ap_constant(w, s.rho(), o.p, o.theta, items);
    res.extra["value"] = rep.value;
    res.extra["family_size"] = rep.family_size;
    if (!items.empty()) res.extra["witness"] = witness_of(items[rep.witness], rep.witness);
    if (o.draws > 0) {
        const std::uint64_t seed = s.seed("measure comparison");
        const auto cubes = s.cubes();
        const RhoComparisonEstimate est = s.estimate();
        const auto reg = weight_reverse_holder(w, s.rho(), o.p, o.theta, est.n0, parse_list(o.epsilons), cubes);
        res.extra["epsilon"] = reg.epsilon;
        res.extra["eta"] = reg.eta;
        res.extra["rh_constant"] = reg.c;
        res.reports.push_back(measure_comparison_check(w, s.rho(), reg, cubes, seed, o.draws));
    }
    return res;
}

Outcome cmd_cz(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const GridField f = s.field(o.f, FieldKind::function);
    const CZTree tree = cz_decompose(f, whole_range(f), o.sigma, o.theta, s.rho(), o.max_depth);
    Json gens = Json::array();
    for (const auto& g : tree.generations) gens.push_back(g.size());
    res.extra["norm"] = tree.norm;
    res.extra["generation_sizes"] = gens;
    res.extra["depth_exhausted"] = tree.depth_exhausted;
    res.extra["reached_cells"] = tree.reached_cells;
    res.reports.push_back(cz_verify_properties(tree, f, s.rho()));
    const RhoComparisonEstimate est = s.estimate(cz_lookup_cells(s.rho(), tree));
    res.reports.push_back(cz_inclusion_check(tree, f, s.rho(), est));
    return res;
}

Outcome cmd_jn(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const GridField f = s.field(o.f, FieldKind::function);
    const CellRange root = whole_range(f);
    const CZTree tree = cz_decompose(f, root, o.sigma, o.theta, s.rho(), o.max_depth);
    const RhoComparisonEstimate est = s.estimate(cz_lookup_cells(s.rho(), tree));
    const double norm = dyadic_blo_norm(f, s.rho(), root, o.theta);
    const JNReport jn = jn_tail_verify(f, root, o.theta, s.rho(), est, linear_grid(o.lambda_span * norm, o.lambdas));
    res.extra["john_nirenberg"] = to_json(jn);
    res.passed = jn.passed;
    const double c2 = jn_c2(f.dim(), est.c0, o.theta);
    res.reports.push_back(exp_integrability_check(f, root, o.theta, s.rho(), est, o.gamma_fraction * c2));
    return res;
}

TheoremParams theorem_params(const Options& o) {
    TheoremParams tp;
    tp.p = o.p;
    tp.q = o.q;
    tp.theta1 = o.theta1;
    tp.theta2 = o.theta2;
    tp.beta = o.beta;
    return tp;
}

Outcome cmd_check(Session& s) {
    const Options& o = s.opts();
    Outcome res;
    const std::string& t = o.theorem;
    const GridField f = s.field(o.f, FieldKind::function);
    const TheoremParams tp = theorem_params(o);
    auto bounded = [&](CheckReport r) {
        if (o.bound) apply_bound(r, *o.bound);
        return r;
    };
    if (t == "6.1" || t == "6.2") {
        const GridField w = s.field(o.weight, FieldKind::weight);
        const auto cubes = s.cubes();
        const RhoComparisonEstimate est = s.estimate();
        const auto reg = weight_reverse_holder(w, s.rho(), o.p, o.theta2, est.n0, parse_list(o.epsilons), cubes);
        if (t == "6.1") {
            res.reports.push_back(bounded(thm1_forward(f, w, s.rho(), tp, cubes, reg, est)));
            res.reports.push_back(thm1_converse_chain(f, w, s.rho(), tp, cubes));
        } else {
            res.reports.push_back(bounded(thm2_forward(f, w, s.rho(), tp, cubes, reg, est)));
            res.reports.push_back(thm2_converse_chain(f, w, s.rho(), tp, cubes));
        }
    } else if (t == "6.3" || t == "6.4") {
        const GridField w = s.field(o.weight, FieldKind::weight);
        const auto balls = s.balls();
        const RhoComparisonEstimate est = s.estimate();
        if (t == "6.3") {
            res.reports.push_back(bounded(thm3_forward(f, w, s.rho(), tp, balls, est)));
            res.reports.push_back(thm1_converse_chain(f, w, s.rho(), tp, balls));
        } else {
            res.reports.push_back(bounded(thm4_forward(f, w, s.rho(), tp, balls, est)));
            res.reports.push_back(thm2_converse_chain(f, w, s.rho(), tp, balls));
        }
    } else if (t == "cor") {
        const GridField w = s.field(o.weight, FieldKind::weight);
        res.reports.push_back(corollary_bridges(w, s.rho(), tp, s.cubes(), &f));
    } else if (t == "5.3") {
        if (!o.beta) throw std::invalid_argument("5.3 needs --beta");
        const auto balls = s.balls();
        res.reports.push_back(bounded(tail_integral_check(f, s.rho(), o.beta, o.theta, o.gamma, balls, balls)));
    } else if (t == "5.4") {
        const auto cubes = s.cubes();
        res.reports.push_back(bounded(tail_integral_check(f, s.rho(), std::nullopt, o.theta, o.gamma, cubes, cubes)));
    } else if (t == "4.6") {
        if (!o.beta) throw std::invalid_argument("4.6 needs --beta");
        const auto pairs = sample_pairs(f, s.seed("pair sampling"), o.pairs);
        res.reports.push_back(
            bounded(lipschitz_pointwise_check(f, s.rho(), *o.beta, o.theta, pairs, s.balls(), s.estimate())));
    } else {
        throw std::invalid_argument("unknown theorem: " + t);
    }
    return res;
}

Outcome cmd_generate(Session& s) {
    const Options& o = s.opts();
    if (o.out.empty()) throw std::invalid_argument("generate needs --out");
    GeneratorSpec spec = o.gen;
    spec.kind = parse_generator_kind(o.kind);
    spec.seed = o.seed;
    if (!o.center.empty()) spec.center = parse_list(o.center);
    const Generated g = generate(spec, s.box(), s.counts());
    if (o.format == "csv") {
        std::ofstream file(o.out);
        if (!file) throw std::runtime_error("cannot open " + o.out);
        write_csv_field(file, g.field);
    } else {
        write_field(o.out, g.field);
    }
    Outcome res;
    const auto vals = g.field.values();
    res.extra["kind"] = std::string(to_string(g.field.kind()));
    res.extra["cells"] = g.field.size();
    res.extra["min"] = *std::min_element(vals.begin(), vals.end());
    res.extra["max"] = *std::max_element(vals.begin(), vals.end());
    if (g.bound) res.extra["construction_bound"] = *g.bound;
    return res;
}

void add_shared(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "Report path (stdout when empty)");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "Seed for randomized families");
    sub->add_option("--grid", o.grid, "Cells per axis for generated fields")->check(CLI::Range(2, 4096));
    sub->add_option("--window", o.window, "Half-width A of the window [-A, A]^d")->check(CLI::PositiveNumber);
    sub->add_option("--dim", o.dim, "Dimension of generated fields")->check(CLI::Range(1, 8));
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--potential", o.potential, "Potential source: file or gen:...");
    sub->add_option("--extension", o.extension, "Ball extension outside the window");
    sub->add_option("--radii", o.radii, "Radius grid size for rho")->check(CLI::Range(16, 100000));
    sub->add_option("--r-min", o.r_min, "Smallest radius of the rho grid");
    sub->add_option("--r-max", o.r_max, "Largest radius of the rho grid");
    sub->add_option("--rh-exponent", o.rh_exponent, "Reverse Hölder exponent s");
    sub->add_option("--n0", o.n0s, "Comparison exponent candidates");
    sub->add_option("--max-points", o.max_points, "Comparison sample size");
    sub->add_option("--max-level", o.max_level, "Deepest dyadic level in cube families (-1 = all)");
    sub->add_option("--ball-radii", o.ball_radii, "Ball family radii");
    sub->add_option("--ball-stride", o.ball_stride, "Ball family center stride in cells");
}

void add_field_opts(CLI::App* sub, Options& o, bool weight) {
    sub->add_option("--f", o.f, "Function source: file or gen:...");
    if (weight) sub->add_option("--weight", o.weight, "Weight source: file or gen:...");
}

void write_report(const Options& o, const Json& doc, const Outcome& res, std::ostream& out) {
    std::ostringstream buf;
    if (o.format == "csv") {
        for (const CheckReport& r : res.reports) {
            buf << "# " << r.id << '\n';
            write_rows_csv(buf, r);
        }
    } else {
        buf << doc.dump(2) << '\n';
    }
    if (o.out.empty()) {
        out << buf.str();
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + o.out);
    file << buf.str();
}

}  // namespace

GeneratorSpec parse_generator_source(std::string_view text) {
    if (text.rfind("gen:", 0) != 0) throw std::invalid_argument("generator sources start with gen:");
    const std::string body(text.substr(4));
    const auto colon = body.find(':');
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(trim(body.substr(0, colon)));
    if (colon == std::string::npos) return spec;
    for (const std::string& kv : split(body.substr(colon + 1), ',')) {
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("generator parameter needs key=value: " + kv);
        const std::string key = trim(kv.substr(0, eq));
        const std::string val = trim(kv.substr(eq + 1));
        if (key == "value") spec.value = parse_double(val);
        else if (key == "beta") spec.beta = parse_double(val);
        else if (key == "gamma") spec.gamma = parse_double(val);
        else if (key == "seed") spec.seed = std::stoull(val);
        else if (key == "depth") spec.depth = std::stoi(val);
        else if (key == "step") spec.step = parse_double(val);
        else if (key == "count") spec.count = std::stoul(val);
        else if (key == "radius") spec.radius = parse_double(val);
        else if (key == "axis") spec.axis = std::stoul(val);
        else if (key == "center") {
            spec.center.clear();
            for (const std::string& c : split(val, '/')) spec.center.push_back(parse_double(c));
        } else {
            throw std::invalid_argument("unknown generator parameter: " + key);
        }
    }
    return spec;
}

std::vector<std::string> read_flat_config(const std::string& path, std::string* command) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (key == "command") {
            if (command) *command = val;
            continue;
        }
        tokens.push_back("--" + key + "=" + val);
    }
    return tokens;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
    Options o;
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) {
            config_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        } else {
            args.push_back(raw[i]);
        }
    }

    try {
        if (!config_path.empty()) {
            std::string command;
            std::vector<std::string> tokens = read_flat_config(config_path, &command);
            auto pos = std::find_first_of(args.begin(), args.end(), subcommands.begin(), subcommands.end());
            if (pos == args.end()) {
                if (command.empty()) throw std::invalid_argument("no subcommand given");
                args.insert(args.begin(), command);
                pos = args.begin();
            }
            args.insert(pos + 1, tokens.begin(), tokens.end());
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    CLI::App app{"Critical-radius function spaces laboratory", std::string(tool_name)};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    CLI::App* rho = app.add_subcommand("rho", "Critical radius field, comparison fit and window check");
    add_shared(rho, o);
    rho->add_option("--c0-scale", o.c0_scale, "Multiplier on the fitted comparison constant");
    rho->add_option("--rho-out", o.rho_out, "Write the rho field (RSF1)");

    CLI::App* sem = app.add_subcommand("seminorm", "Adapted BMO/BLO/Campanato seminorms");
    add_shared(sem, o);
    add_field_opts(sem, o, false);
    sem->add_option("--family", o.family, "BMO, BLO, CAM or CAM_STAR");
    sem->add_option("--theta", o.theta, "Growth exponent")->check(CLI::NonNegativeNumber);
    sem->add_option("--beta", o.beta, "Campanato exponent");
    sem->add_option("--thetas", o.thetas, "Theta list for the relation checks");
    sem->add_flag("--relations", o.relations, "Also check the order relations");

    CLI::App* wt = app.add_subcommand("weight", "Adapted Muckenhoupt constants");
    add_shared(wt, o);
    add_field_opts(wt, o, true);
    wt->add_option("--p", o.p, "Exponent p >= 1");
    wt->add_option("--q", o.q, "Second exponent q > p (A_{p,q})");
    wt->add_option("--theta", o.theta, "Growth exponent")->check(CLI::NonNegativeNumber);
    wt->add_option("--shape", o.shape, "cube or ball family")->check(CLI::IsMember({"cube", "ball"}));
    wt->add_option("--draws", o.draws, "Random subsets for the measure comparison check");
    wt->add_option("--epsilons", o.epsilons, "Reverse Hölder exponent candidates");

    CLI::App* cz = app.add_subcommand("cz", "Stopping-time decomposition and its properties");
    add_shared(cz, o);
    add_field_opts(cz, o, false);
    cz->add_option("--sigma", o.sigma, "Threshold multiplier > 1");
    cz->add_option("--theta", o.theta, "Growth exponent")->check(CLI::NonNegativeNumber);
    cz->add_option("--max-depth", o.max_depth, "Generation cap");

    CLI::App* jn = app.add_subcommand("jn", "John-Nirenberg tail and exponential integrability");
    add_shared(jn, o);
    add_field_opts(jn, o, false);
    jn->add_option("--sigma", o.sigma, "Threshold multiplier > 1");
    jn->add_option("--theta", o.theta, "Growth exponent")->check(CLI::NonNegativeNumber);
    jn->add_option("--max-depth", o.max_depth, "Generation cap");
    jn->add_option("--lambdas", o.lambdas, "Lambda grid size")->check(CLI::PositiveNumber);
    jn->add_option("--lambda-span", o.lambda_span, "Lambda grid span in seminorm units");
    jn->add_option("--gamma-fraction", o.gamma_fraction, "Integrability exponent as a fraction of c2");

    CLI::App* chk = app.add_subcommand("check", "Weighted characterization and tail checks");
    add_shared(chk, o);
    add_field_opts(chk, o, true);
    chk->add_option("--theorem", o.theorem, "Which inequality to check")
        ->required()
        ->check(CLI::IsMember({"6.1", "6.2", "6.3", "6.4", "cor", "5.3", "5.4", "4.6"}));
    chk->add_option("--p", o.p, "Exponent p >= 1");
    chk->add_option("--q", o.q, "Exponent q > p");
    chk->add_option("--theta", o.theta, "Growth exponent for 4.6, 5.3, 5.4")->check(CLI::NonNegativeNumber);
    chk->add_option("--theta1", o.theta1, "Seminorm growth exponent")->check(CLI::NonNegativeNumber);
    chk->add_option("--theta2", o.theta2, "Weight growth exponent")->check(CLI::NonNegativeNumber);
    chk->add_option("--beta", o.beta, "Campanato exponent");
    chk->add_option("--gamma", o.gamma, "Tail decay exponent");
    chk->add_option("--pairs", o.pairs, "Point pairs for 4.6");
    chk->add_option("--bound", o.bound, "Declared bound on fitted constants");
    chk->add_option("--epsilons", o.epsilons, "Reverse Hölder exponent candidates");

    CLI::App* gen = app.add_subcommand("generate", "Write a generated field");
    add_shared(gen, o);
    gen->add_option("--kind", o.kind, "Generator kind");
    gen->add_option("--value", o.gen.value, "constant value");
    gen->add_option("--beta", o.gen.beta, "power exponent");
    gen->add_option("--gamma", o.gen.gamma, "weight-power exponent");
    gen->add_option("--center", o.center, "Center coordinates, comma separated");
    gen->add_option("--axis", o.gen.axis, "coordinate axis");
    gen->add_option("--depth", o.gen.depth, "dyadic-martingale levels");
    gen->add_option("--step", o.gen.step, "dyadic-martingale increment bound");
    gen->add_option("--count", o.gen.count, "indicator-union ball count");
    gen->add_option("--radius", o.gen.radius, "indicator-union ball radius");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (o.threads > 0) set_thread_count(o.threads);
    const bool seed_given = sub->get_option("--seed")->count() > 0;
    Session session(o, sub, seed_given);
    Outcome res;
    try {
        const std::string name = sub->get_name();
        if (name == "rho") res = cmd_rho(session);
        else if (name == "seminorm") res = cmd_seminorm(session);
        else if (name == "weight") res = cmd_weight(session);
        else if (name == "cz") res = cmd_cz(session);
        else if (name == "jn") res = cmd_jn(session);
        else if (name == "check") res = cmd_check(session);
        else res = cmd_generate(session);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    for (const CheckReport& r : res.reports) res.passed = res.passed && r.passed();
    Json doc;
    doc["tool"] = std::string(tool_name);
    doc["version"] = std::string(tool_version);
    doc["command"] = sub->get_name();
    doc["params"] = session.params();
    doc["passed"] = res.passed;
    if (!res.extra.empty()) doc["results"] = res.extra;
    Json reports = Json::array();
    for (const CheckReport& r : res.reports) reports.push_back(to_json(r));
    doc["reports"] = reports;
    try {
        if (sub->get_name() == "generate") {
            out << doc.dump(2) << '\n';
        } else {
            write_report(o, doc, res, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    if (!res.passed) {
        for (const CheckReport& r : res.reports)
            if (!r.passed()) err << r.id << ": " << r.violations << " violation(s), fitted " << r.fitted << '\n';
        return exit_violation;
    }
    return exit_pass;
}

}  // namespace rholab
