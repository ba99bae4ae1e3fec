#include "rholab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rholab {

namespace {

bool near_integer(double x, double& rounded) {
    rounded = std::round(x);
    return std::abs(x - rounded) <= 1e-9 * std::max(1.0, std::abs(x));
}

void validate_values(std::span<const double> values, FieldKind kind) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("field contains a non-finite value");
        switch (kind) {
            case FieldKind::function:
                break;
            case FieldKind::potential:
                if (v < 0.0) throw std::invalid_argument("potential values must be >= 0");
                break;
            case FieldKind::weight:
            case FieldKind::rho:
                if (v <= 0.0) throw std::invalid_argument("weight and rho values must be > 0");
                break;
        }
    }
}

}  // namespace

std::string_view to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::function: return "function";
        case FieldKind::potential: return "potential";
        case FieldKind::weight: return "weight";
        case FieldKind::rho: return "rho";
    }
    return "function";
}

FieldKind parse_field_kind(std::string_view text) {
    if (text == "function") return FieldKind::function;
    if (text == "potential") return FieldKind::potential;
    if (text == "weight") return FieldKind::weight;
    if (text == "rho") return FieldKind::rho;
    throw std::invalid_argument("unknown field kind: " + std::string(text));
}

std::string_view to_string(Extension ext) {
    switch (ext) {
        case Extension::error: return "error";
        case Extension::constant_pad: return "constant-pad";
        case Extension::clamp: return "clamp";
    }
    return "error";
}

Extension parse_extension(std::string_view text) {
    if (text == "error") return Extension::error;
    if (text == "constant-pad" || text == "pad") return Extension::constant_pad;
    if (text == "clamp") return Extension::clamp;
    throw std::invalid_argument("unknown extension mode: " + std::string(text));
}

void Box::validate() const {
    if (origin.empty()) throw std::invalid_argument("box dimension must be >= 1");
    if (origin.size() != extent.size()) throw std::invalid_argument("box origin/extent dimension mismatch");
    for (std::size_t i = 0; i < origin.size(); ++i) {
        if (!std::isfinite(origin[i]) || !std::isfinite(extent[i]) || extent[i] <= 0.0)
            throw std::invalid_argument("box extents must be finite and > 0");
    }
}

Box Box::centered(std::size_t dim, double half_width) {
    return Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, 2.0 * half_width)};
}

std::int64_t CellRange::cells() const {
    std::int64_t n = 1;
    for (auto l : len) n *= l;
    return n;
}

bool CellRange::contains(const CellRange& other) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (other.lo[i] < lo[i] || other.lo[i] + other.len[i] > lo[i] + len[i]) return false;
    }
    return true;
}

GridField::GridField(std::vector<std::int64_t> counts, std::vector<double> origin,
                     std::vector<double> spacing, std::vector<double> values, FieldKind kind)
    : counts_(std::move(counts)),
      origin_(std::move(origin)),
      spacing_(std::move(spacing)),
      values_(std::move(values)),
      kind_(kind) {
    const std::size_t d = counts_.size();
    if (d == 0) throw std::invalid_argument("field dimension must be >= 1");
    if (origin_.size() != d || spacing_.size() != d)
        throw std::invalid_argument("dimension mismatch between counts, origin and spacing");
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (counts_[i] <= 0) throw std::invalid_argument("cell counts must be positive");
        if (!std::isfinite(origin_[i])) throw std::invalid_argument("origin must be finite");
        if (!(spacing_[i] > 0.0) || !std::isfinite(spacing_[i]))
            throw std::invalid_argument("spacing must be finite and > 0");
        total *= static_cast<std::size_t>(counts_[i]);
        cell_volume_ *= spacing_[i];
    }
    if (values_.size() != total) throw std::invalid_argument("values length does not match cell counts");
    validate_values(values_, kind_);
    strides_.assign(d, 1);
    for (std::size_t i = d - 1; i > 0; --i)
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(counts_[i]);
}

GridField GridField::sample(const Box& box, const std::vector<std::int64_t>& counts, FieldKind kind,
                            const std::function<double(std::span<const double>)>& fn) {
    box.validate();
    if (counts.size() != box.dim()) throw std::invalid_argument("counts/box dimension mismatch");
    std::vector<double> spacing(box.dim());
    std::size_t total = 1;
    for (std::size_t i = 0; i < box.dim(); ++i) {
        if (counts[i] <= 0) throw std::invalid_argument("cell counts must be positive");
        spacing[i] = box.extent[i] / static_cast<double>(counts[i]);
        total *= static_cast<std::size_t>(counts[i]);
    }
    std::vector<double> values(total);
    Index idx(box.dim(), 0);
    Point x(box.dim());
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < box.dim(); ++i)
            x[i] = box.origin[i] + (static_cast<double>(idx[i]) + 0.5) * spacing[i];
        values[flat] = fn(x);
        for (std::size_t i = box.dim(); i-- > 0;) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }
    return GridField(counts, box.origin, std::move(spacing), std::move(values), kind);
}

GridField GridField::constant(const Box& box, const std::vector<std::int64_t>& counts, FieldKind kind,
                              double value) {
    return sample(box, counts, kind, [value](std::span<const double>) { return value; });
}

Box GridField::box() const {
    Box b{origin_, std::vector<double>(dim())};
    for (std::size_t i = 0; i < dim(); ++i) b.extent[i] = spacing_[i] * static_cast<double>(counts_[i]);
    return b;
}

std::size_t GridField::flat_index(std::span<const std::int64_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) flat += static_cast<std::size_t>(idx[i]) * strides_[i];
    return flat;
}

void GridField::unflatten(std::size_t flat, std::span<std::int64_t> idx) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        idx[i] = static_cast<std::int64_t>(flat / strides_[i]);
        flat %= strides_[i];
    }
}

Point GridField::cell_center(std::size_t flat) const {
    Index idx(dim());
    unflatten(flat, idx);
    Point p(dim());
    for (std::size_t i = 0; i < dim(); ++i) p[i] = center_coord(i, idx[i]);
    return p;
}

std::size_t GridField::locate(std::span<const double> point) const {
    if (point.size() != dim()) throw std::invalid_argument("point dimension mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        const double t = (point[i] - origin_[i]) / spacing_[i];
        // Snap values within rounding of a cell boundary onto it.
        double r = std::round(t);
        const double u = std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t)) ? r : std::floor(t);
        auto k = static_cast<std::int64_t>(u);
        k = std::clamp<std::int64_t>(k, 0, counts_[i] - 1);
        flat += static_cast<std::size_t>(k) * strides_[i];
    }
    return flat;
}

GridField GridField::with_values(std::vector<double> values, FieldKind kind) const {
    return GridField(counts_, origin_, spacing_, std::move(values), kind);
}

GridField GridField::map(const std::function<double(double)>& fn, FieldKind kind) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), fn);
    return with_values(std::move(out), kind);
}

bool GridField::same_geometry(const GridField& other) const {
    return counts_ == other.counts_ && origin_ == other.origin_ && spacing_ == other.spacing_;
}

bool GridField::isotropic() const {
    for (double h : spacing_)
        if (std::abs(h - spacing_[0]) > 1e-12 * spacing_[0]) return false;
    return true;
}

CellRange resolve_cube(const GridField& field, const CubeSpec& q) {
    const std::size_t d = field.dim();
    if (q.center.size() != d) throw std::invalid_argument("cube dimension mismatch");
    if (!(q.side > 0.0)) throw std::invalid_argument("cube side must be > 0");
    CellRange r{Index(d), Index(d)};
    for (std::size_t i = 0; i < d; ++i) {
        const double h = field.spacing()[i];
        double m = 0.0;
        if (!near_integer(q.side / h, m) || m < 1.0)
            throw std::invalid_argument("cube side is not a whole number of cells");
        double lo = 0.0;
        if (!near_integer((q.center[i] - 0.5 * q.side - field.origin()[i]) / h, lo))
            throw std::invalid_argument("cube is not aligned to cell boundaries");
        r.lo[i] = static_cast<std::int64_t>(lo);
        r.len[i] = static_cast<std::int64_t>(m);
        if (r.lo[i] < 0 || r.lo[i] + r.len[i] > field.counts()[i])
            throw std::out_of_range("cube lies outside the field box");
    }
    return r;
}

CubeSpec cube_of(const GridField& field, const CellRange& range) {
    CubeSpec q{Point(field.dim()), side_of(field, range)};
    for (std::size_t i = 0; i < field.dim(); ++i) {
        const double h = field.spacing()[i];
        q.center[i] = field.origin()[i] + (static_cast<double>(range.lo[i]) + 0.5 * static_cast<double>(range.len[i])) * h;
    }
    return q;
}

double side_of(const GridField& field, const CellRange& range) {
    return static_cast<double>(range.len[0]) * field.spacing()[0];
}

double unit_ball_volume(std::size_t dim) {
    const double n = static_cast<double>(dim);
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace rholab
