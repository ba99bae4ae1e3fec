#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rholab {

using Point = std::vector<double>;
using Index = std::vector<std::int64_t>;

/// What a sampled field stands for. Potentials and weights carry sign
/// constraints; rho fields must be strictly positive.
enum class FieldKind { function, potential, weight, rho };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

/// Axis-aligned box [origin, origin + extent) in R^d.
struct Box {
    std::vector<double> origin;
    std::vector<double> extent;

    std::size_t dim() const { return origin.size(); }
    void validate() const;

    /// Symmetric window [-half, half]^d.
    static Box centered(std::size_t dim, double half_width);
};

/// Half-open block of cells in index space: [lo_i, lo_i + len_i) on each axis.
struct CellRange {
    Index lo;
    Index len;

    std::size_t dim() const { return lo.size(); }
    std::int64_t cells() const;
    bool contains(const CellRange& other) const;
    bool operator==(const CellRange&) const = default;
};

/// Cube Q(center, side): side is the full side length.
struct CubeSpec {
    Point center;
    double side = 0.0;
};

/// Open ball B(center, radius).
struct BallSpec {
    Point center;
    double radius = 0.0;
};

/// How ball statistics treat lattice cells outside the field's box.
enum class Extension { error, constant_pad, clamp };

std::string_view to_string(Extension ext);
Extension parse_extension(std::string_view text);

/// Real-valued function sampled on a uniform grid, piecewise constant on cells.
/// Values are row-major with the last axis fastest. Immutable after construction.
class GridField {
public:
    GridField(std::vector<std::int64_t> counts, std::vector<double> origin,
              std::vector<double> spacing, std::vector<double> values,
              FieldKind kind);

    /// Samples fn at every cell center of box split into counts cells.
    static GridField sample(const Box& box, const std::vector<std::int64_t>& counts,
                            FieldKind kind,
                            const std::function<double(std::span<const double>)>& fn);

    static GridField constant(const Box& box, const std::vector<std::int64_t>& counts,
                              FieldKind kind, double value);

    std::size_t dim() const { return counts_.size(); }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    const std::vector<double>& origin() const { return origin_; }
    const std::vector<double>& spacing() const { return spacing_; }
    std::span<const double> values() const { return values_; }
    FieldKind kind() const { return kind_; }
    std::size_t size() const { return values_.size(); }
    Box box() const;
    double cell_volume() const { return cell_volume_; }

    double operator[](std::size_t flat) const { return values_[flat]; }

    std::size_t flat_index(std::span<const std::int64_t> idx) const;
    void unflatten(std::size_t flat, std::span<std::int64_t> idx) const;
    double center_coord(std::size_t axis, std::int64_t i) const {
        return origin_[axis] + (static_cast<double>(i) + 0.5) * spacing_[axis];
    }
    Point cell_center(std::size_t flat) const;

    /// Cell containing point (half-open cells), clamped to the grid. Points
    /// on a cell corner resolve to the upper neighbour on each axis.
    std::size_t locate(std::span<const double> point) const;

    /// Same geometry, new values (validated against kind).
    GridField with_values(std::vector<double> values, FieldKind kind) const;
    GridField map(const std::function<double(double)>& fn, FieldKind kind) const;

    bool same_geometry(const GridField& other) const;
    /// Spacing identical on every axis (to 1e-12 relative).
    bool isotropic() const;

private:
    std::vector<std::int64_t> counts_;
    std::vector<double> origin_;
    std::vector<double> spacing_;
    std::vector<double> values_;
    std::vector<std::size_t> strides_;
    FieldKind kind_;
    double cell_volume_ = 1.0;
};

/// Cell block covered by q. Throws std::out_of_range when q leaves the box
/// and std::invalid_argument when q is not aligned to cell boundaries.
CellRange resolve_cube(const GridField& field, const CubeSpec& q);
CubeSpec cube_of(const GridField& field, const CellRange& range);
/// Physical side of an aligned range (axis 0).
double side_of(const GridField& field, const CellRange& range);

double unit_ball_volume(std::size_t dim);

}  // namespace rholab
