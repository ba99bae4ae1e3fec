#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rholab/grid.hpp"
#include "rholab/rng.hpp"

namespace rholab::testing {

/// Cube window [-half, half]^3 split into n cells per axis.
inline GridField cube_field(std::int64_t n, double half, FieldKind kind,
                            const std::function<double(std::span<const double>)>& fn) {
    return GridField::sample(Box::centered(3, half), {n, n, n}, kind, fn);
}

/// Independent uniform values in [lo, hi) per cell.
inline GridField noise_field(std::int64_t n, double half, std::uint64_t seed, FieldKind kind, double lo, double hi) {
    Rng rng(seed);
    return cube_field(n, half, kind, [&](std::span<const double>) { return rng.uniform(lo, hi); });
}

/// Log-normal weight with a few strong bumps: positive, far from doubling-friendly.
inline GridField rough_weight(std::int64_t n, double half, std::uint64_t seed) {
    Rng rng(seed);
    return cube_field(n, half, FieldKind::weight, [&](std::span<const double>) { return std::exp(1.5 * rng.normal()); });
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Brute-force ball membership over every cell of the box (clamp semantics).
inline std::vector<std::size_t> brute_ball_cells(const GridField& f, std::span<const double> c, double r) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point x = f.cell_center(k);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
        if (s < r * r) out.push_back(k);
    }
    return out;
}

/// Flat indices of a cell block, in row-major order.
inline std::vector<std::size_t> brute_block_cells(const GridField& f, const CellRange& q) {
    std::vector<std::size_t> out;
    std::vector<std::int64_t> idx(f.dim());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.unflatten(k, idx);
        bool in = true;
        for (std::size_t i = 0; i < f.dim(); ++i) in = in && idx[i] >= q.lo[i] && idx[i] < q.lo[i] + q.len[i];
        if (in) out.push_back(k);
    }
    return out;
}

inline double brute_mean(const GridField& f, const std::vector<std::size_t>& cells) {
    long double s = 0.0L;
    for (std::size_t k : cells) s += f[k];
    return static_cast<double>(s / static_cast<long double>(cells.size()));
}

inline double brute_min(const GridField& f, const std::vector<std::size_t>& cells) {
    double m = f[cells.front()];
    for (std::size_t k : cells) m = std::min(m, f[k]);
    return m;
}

inline double brute_max(const GridField& f, const std::vector<std::size_t>& cells) {
    double m = f[cells.front()];
    for (std::size_t k : cells) m = std::max(m, f[k]);
    return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace rholab::testing
