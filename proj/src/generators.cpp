#include "rholab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rholab/rng.hpp"

namespace rholab {

namespace {

struct KindName {
    GeneratorKind kind;
    std::string_view name;
};

constexpr KindName kind_names[] = {
    {GeneratorKind::constant, "constant"},
    {GeneratorKind::power, "power"},
    {GeneratorKind::coordinate, "coordinate"},
    {GeneratorKind::log_spike, "log-spike"},
    {GeneratorKind::indicator_union, "indicator-union"},
    {GeneratorKind::dyadic_martingale, "dyadic-martingale"},
    {GeneratorKind::weight_power, "weight-power"},
    {GeneratorKind::potential_one, "potential-one"},
    {GeneratorKind::potential_abs_square, "potential-abs-square"},
};

double distance(std::span<const double> x, const Point& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - (c.empty() ? 0.0 : c[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

bool power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string_view to_string(GeneratorKind kind) {
    for (const auto& k : kind_names)
        if (k.kind == kind) return k.name;
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view text) {
    for (const auto& k : kind_names)
        if (k.name == text) return k.kind;
    throw std::invalid_argument("unknown generator: " + std::string(text));
}

void GeneratorSpec::validate() const {
    if (!std::isfinite(value)) throw std::invalid_argument("value must be finite");
    switch (kind) {
        case GeneratorKind::power:
            if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
            break;
        case GeneratorKind::weight_power:
            if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
            break;
        case GeneratorKind::dyadic_martingale:
            if (depth < 1 || depth > 30) throw std::invalid_argument("depth must lie in [1, 30]");
            if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");
            break;
        case GeneratorKind::indicator_union:
            if (count == 0) throw std::invalid_argument("count must be >= 1");
            if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be > 0");
            break;
        default:
            break;
    }
}

Generated generate(const GeneratorSpec& spec, const Box& box, const std::vector<std::int64_t>& counts) {
    spec.validate();
    box.validate();
    const std::size_t d = box.dim();
    if (counts.size() != d) throw std::invalid_argument("counts do not match the box dimension");
    if (!spec.center.empty() && spec.center.size() != d) throw std::invalid_argument("center dimension mismatch");
    const Point& c = spec.center;
    using Fn = std::function<double(std::span<const double>)>;
    auto sample = [&](FieldKind kind, const Fn& fn) { return GridField::sample(box, counts, kind, fn); };

    switch (spec.kind) {
        case GeneratorKind::constant:
            return {GridField::constant(box, counts, FieldKind::function, spec.value), 0.0};
        case GeneratorKind::power:
            return {sample(FieldKind::function, [&](auto x) { return std::pow(distance(x, c), spec.beta); }), {}};
        case GeneratorKind::coordinate:
            if (spec.axis >= d) throw std::invalid_argument("axis out of range");
            return {sample(FieldKind::function, [&](auto x) { return x[spec.axis]; }), {}};
        case GeneratorKind::log_spike: {
            double h = box.extent[0] / static_cast<double>(counts[0]);
            for (std::size_t i = 1; i < d; ++i) h = std::min(h, box.extent[i] / static_cast<double>(counts[i]));
            return {sample(FieldKind::function,
                           [&](auto x) { return std::log(std::numbers::e + 1.0 / std::max(distance(x, c), 0.5 * h)); }),
                    {}};
        }
        case GeneratorKind::indicator_union: {
            Rng rng(spec.seed);
            std::vector<Point> centers(spec.count, Point(d));
            for (Point& p : centers)
                for (std::size_t i = 0; i < d; ++i) p[i] = rng.uniform(box.origin[i], box.origin[i] + box.extent[i]);
            return {sample(FieldKind::function,
                           [&](auto x) {
                               for (const Point& p : centers)
                                   if (distance(x, p) < spec.radius) return 1.0;
                               return 0.0;
                           }),
                    {}};
        }
        case GeneratorKind::dyadic_martingale: {
            for (std::int64_t n : counts)
                if (!power_of_two(n) || n != counts[0]) throw std::invalid_argument("martingale needs equal power-of-two counts");
            if ((std::int64_t{1} << spec.depth) > counts[0]) throw std::invalid_argument("depth exceeds the grid resolution");
            GridField shape = GridField::constant(box, counts, FieldKind::function, 0.0);
            std::vector<double> values(shape.size(), 0.0);
            std::vector<std::int64_t> idx(d);
            for (std::size_t k = 0; k < values.size(); ++k) {
                shape.unflatten(k, idx);
                double v = 0.0;
                for (int level = 1; level <= spec.depth; ++level) {
                    const int shift = static_cast<int>(std::log2(static_cast<double>(counts[0]))) - level;
                    std::uint64_t cube = 0;
                    for (std::size_t a = 0; a < d; ++a)
                        cube = (cube << level) | static_cast<std::uint64_t>(idx[a] >> shift);
                    const double u = unit_double(hash_combine(hash_combine(spec.seed, static_cast<std::uint64_t>(level)), cube));
                    v += spec.step * u * u * u;
                }
                values[k] = v;
            }
            return {shape.with_values(std::move(values), FieldKind::function), spec.step * spec.depth};
        }
        case GeneratorKind::weight_power:
            return {sample(FieldKind::weight, [&](auto x) { return std::pow(1.0 + distance(x, c), spec.gamma); }), {}};
        case GeneratorKind::potential_one:
            return {GridField::constant(box, counts, FieldKind::potential, 1.0), {}};
        case GeneratorKind::potential_abs_square:
            return {sample(FieldKind::potential, [&](auto x) {
                        const double r = distance(x, c);
                        return r * r;
                    }),
                    {}};
    }
    throw std::invalid_argument("unknown generator");
}

}  // namespace rholab
