#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rholab/grid.hpp"

namespace rholab {

/// Contiguous run of cells along the last axis of one grid row, plus copies
/// of the row's end cells standing in for padded lattice cells.
struct RowSpan {
    std::size_t row = 0;  // flat index of the row's first cell
    std::int64_t first = 0;
    std::int64_t len = 0;
    std::int64_t pad_lo = 0;
    std::int64_t pad_hi = 0;
};

/// A set of cells (with multiplicity when padded) covered by a cube or ball.
struct Region {
    std::vector<RowSpan> spans;
    std::int64_t cells = 0;
    bool clipped = false;  // lattice cells outside the box were dropped or replicated

    bool empty() const { return cells == 0; }
};

enum class Shape { cube, ball };

/// One member of a finite cube or ball family, resolved against a grid.
struct FamilyItem {
    Shape shape = Shape::cube;
    Region region;
    Point center;
    double scale = 0.0;          // cube side or ball radius
    double analytic_volume = 0.0;
    CellRange range;             // cubes only
};

Region cube_region(const GridField& field, const CellRange& range);

namespace detail {

/// Inclusive index interval [lo, hi] of lattice cells along one
/// axis whose centers satisfy (x - c)^2 < s2.
inline bool axis_interval(double origin, double h, double c, double s2, std::int64_t& lo, std::int64_t& hi) {
    if (!(s2 > 0.0)) return false;
    const double s = std::sqrt(s2);
    auto inside = [&](std::int64_t i) {
        const double dx = origin + (static_cast<double>(i) + 0.5) * h - c;
        return dx * dx < s2;
    };
    lo = static_cast<std::int64_t>(std::ceil((c - s - origin) / h - 0.5));
    hi = static_cast<std::int64_t>(std::floor((c + s - origin) / h - 0.5));
    while (lo <= hi && !inside(lo)) ++lo;
    while (inside(lo - 1)) --lo;
    while (hi >= lo && !inside(hi)) --hi;
    while (inside(hi + 1)) ++hi;
    return lo <= hi;
}

template <class OnSpan>
void visit_ball_axis(const GridField& field, const BallSpec& b, Extension ext, std::size_t axis, double s2,
                     std::size_t row_base, bool row_virtual, OnSpan& on_span, bool& clipped) {
    const std::size_t d = field.dim();
    const double o = field.origin()[axis];
    const double h = field.spacing()[axis];
    const std::int64_t n = field.counts()[axis];
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    if (!axis_interval(o, h, b.center[axis], s2, lo, hi)) return;
    if (axis + 1 == d) {
        RowSpan span;
        span.row = row_base;
        const bool out = lo < 0 || hi >= n;
        if (out || row_virtual) {
            if (ext == Extension::error) throw std::out_of_range("ball leaves the field box");
            clipped = true;
            if (ext == Extension::clamp && row_virtual) return;
        }
        const std::int64_t in_lo = std::max<std::int64_t>(lo, 0);
        const std::int64_t in_hi = std::min<std::int64_t>(hi, n - 1);
        span.first = in_lo;
        span.len = in_hi >= in_lo ? in_hi - in_lo + 1 : 0;
        if (ext == Extension::constant_pad) {
            span.pad_lo = std::max<std::int64_t>(0, std::min<std::int64_t>(hi, -1) - lo + 1);
            span.pad_hi = std::max<std::int64_t>(0, hi - std::max<std::int64_t>(lo, n) + 1);
        }
        if (span.len + span.pad_lo + span.pad_hi > 0) on_span(span);
        return;
    }
    std::size_t stride = 1;
    for (std::size_t k = axis + 1; k < d; ++k) stride *= static_cast<std::size_t>(field.counts()[k]);
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double dx = o + (static_cast<double>(i) + 0.5) * h - b.center[axis];
        const bool virt = i < 0 || i >= n;
        if (virt) {
            if (ext == Extension::error) throw std::out_of_range("ball leaves the field box");
            clipped = true;
            if (ext == Extension::clamp) continue;
        }
        const std::int64_t real = std::clamp<std::int64_t>(i, 0, n - 1);
        visit_ball_axis(field, b, ext, axis + 1, s2 - dx * dx, row_base + static_cast<std::size_t>(real) * stride,
                        row_virtual || virt, on_span, clipped);
    }
}

}  // namespace detail

/// Calls on_span for every row run of lattice cells whose centers lie in the
/// open ball, mapped through the extension mode. Returns whether the ball
/// touched lattice cells outside the box.
template <class OnSpan>
bool visit_ball_spans(const GridField& field, const BallSpec& b, Extension ext, OnSpan&& on_span) {
    if (b.center.size() != field.dim()) throw std::invalid_argument("ball dimension mismatch");
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw std::invalid_argument("ball radius must be > 0");
    bool clipped = false;
    detail::visit_ball_axis(field, b, ext, 0, b.radius * b.radius, 0, false, on_span, clipped);
    return clipped;
}

Region ball_region(const GridField& field, const BallSpec& b, Extension ext);

/// Visits every covered cell as (flat index, multiplicity).
template <class Fn>
void for_each_cell(const GridField& field, const Region& region, Fn&& fn) {
    const std::int64_t n = field.counts().back();
    for (const RowSpan& s : region.spans) {
        if (s.pad_lo > 0) fn(s.row, s.pad_lo);
        for (std::int64_t j = 0; j < s.len; ++j) fn(s.row + static_cast<std::size_t>(s.first + j), std::int64_t{1});
        if (s.pad_hi > 0) fn(s.row + static_cast<std::size_t>(n - 1), s.pad_hi);
    }
}

/// Per-row prefix sums of (optionally transformed) values; region sums cost
/// one subtraction per row span.
class RowPrefix {
public:
    explicit RowPrefix(const GridField& field);
    RowPrefix(const GridField& field, const std::function<double(double)>& transform);

    long double sum(const RowSpan& span) const;
    long double sum(const Region& region) const;

    /// Sum over a ball without materializing its region.
    long double ball_sum(const GridField& field, const BallSpec& b, Extension ext) const;

private:
    void build(const GridField& field, const std::function<double(double)>* transform);

    std::int64_t row_len_ = 0;
    std::vector<long double> prefix_;  // rows x (row_len + 1)
    std::vector<double> values_;
};

std::vector<FamilyItem> cube_items(const GridField& field, const std::vector<CellRange>& cubes);
/// Empty balls (no covered cell) are dropped; skipped receives their count.
std::vector<FamilyItem> ball_items(const GridField& field, const std::vector<BallSpec>& balls, Extension ext,
                                   std::size_t* skipped = nullptr);

/// Covered measure: cell count (with multiplicity) times cell volume.
double covered_volume(const GridField& field, const Region& region);

/// rho(x) read from the cell of the rho field containing x.
double rho_at(const GridField& rho, std::span<const double> point);

}  // namespace rholab
