#include "rholab/region.hpp"

namespace rholab {

Region cube_region(const GridField& field, const CellRange& range) {
    const std::size_t d = field.dim();
    if (range.dim() != d) throw std::invalid_argument("range dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) {
        if (range.len[i] <= 0 || range.lo[i] < 0 || range.lo[i] + range.len[i] > field.counts()[i])
            throw std::out_of_range("cube lies outside the field box");
    }
    Region region;
    region.cells = range.cells();
    const std::size_t outer = d - 1;
    Index idx(d, 0);
    std::vector<std::int64_t> pos(outer, 0);
    while (true) {
        for (std::size_t i = 0; i < outer; ++i) idx[i] = range.lo[i] + pos[i];
        idx[outer] = 0;
        region.spans.push_back(RowSpan{field.flat_index(idx), range.lo[outer], range.len[outer], 0, 0});
        bool done = true;
        for (std::size_t k = outer; k-- > 0;) {
            if (++pos[k] < range.len[k]) {
                done = false;
                break;
            }
            pos[k] = 0;
        }
        if (done) return region;
    }
}

Region ball_region(const GridField& field, const BallSpec& b, Extension ext) {
    Region region;
    region.clipped = visit_ball_spans(field, b, ext, [&](const RowSpan& s) {
        region.spans.push_back(s);
        region.cells += s.len + s.pad_lo + s.pad_hi;
    });
    return region;
}

RowPrefix::RowPrefix(const GridField& field) { build(field, nullptr); }

RowPrefix::RowPrefix(const GridField& field, const std::function<double(double)>& transform) {
    build(field, &transform);
}

void RowPrefix::build(const GridField& field, const std::function<double(double)>* transform) {
    row_len_ = field.counts().back();
    const std::size_t rows = field.size() / static_cast<std::size_t>(row_len_);
    prefix_.assign(rows * static_cast<std::size_t>(row_len_ + 1), 0.0L);
    values_.resize(field.size());
    for (std::size_t r = 0; r < rows; ++r) {
        long double acc = 0.0L;
        const std::size_t base = r * static_cast<std::size_t>(row_len_ + 1);
        for (std::int64_t j = 0; j < row_len_; ++j) {
            const std::size_t flat = r * static_cast<std::size_t>(row_len_) + static_cast<std::size_t>(j);
            const double v = transform ? (*transform)(field[flat]) : field[flat];
            values_[flat] = v;
            acc += v;
            prefix_[base + static_cast<std::size_t>(j) + 1] = acc;
        }
    }
}

long double RowPrefix::sum(const RowSpan& s) const {
    const std::size_t r = s.row / static_cast<std::size_t>(row_len_);
    const std::size_t base = r * static_cast<std::size_t>(row_len_ + 1);
    long double total = prefix_[base + static_cast<std::size_t>(s.first + s.len)] - prefix_[base + static_cast<std::size_t>(s.first)];
    if (s.pad_lo > 0) total += static_cast<long double>(s.pad_lo) * values_[s.row];
    if (s.pad_hi > 0) total += static_cast<long double>(s.pad_hi) * values_[s.row + static_cast<std::size_t>(row_len_ - 1)];
    return total;
}

long double RowPrefix::sum(const Region& region) const {
    long double total = 0.0L;
    for (const RowSpan& s : region.spans) total += sum(s);
    return total;
}

long double RowPrefix::ball_sum(const GridField& field, const BallSpec& b, Extension ext) const {
    long double total = 0.0L;
    visit_ball_spans(field, b, ext, [&](const RowSpan& s) { total += sum(s); });
    return total;
}

std::vector<FamilyItem> cube_items(const GridField& field, const std::vector<CellRange>& cubes) {
    std::vector<FamilyItem> items;
    items.reserve(cubes.size());
    for (const CellRange& c : cubes) {
        FamilyItem it;
        it.shape = Shape::cube;
        it.region = cube_region(field, c);
        const CubeSpec spec = cube_of(field, c);
        it.center = spec.center;
        it.scale = spec.side;
        it.analytic_volume = covered_volume(field, it.region);
        it.range = c;
        items.push_back(std::move(it));
    }
    return items;
}

std::vector<FamilyItem> ball_items(const GridField& field, const std::vector<BallSpec>& balls, Extension ext,
                                   std::size_t* skipped) {
    std::vector<FamilyItem> items;
    items.reserve(balls.size());
    std::size_t dropped = 0;
    const double unit = unit_ball_volume(field.dim());
    for (const BallSpec& b : balls) {
        FamilyItem it;
        it.shape = Shape::ball;
        it.region = ball_region(field, b, ext);
        if (it.region.empty()) {
            ++dropped;
            continue;
        }
        it.center = b.center;
        it.scale = b.radius;
        it.analytic_volume = unit * std::pow(b.radius, static_cast<double>(field.dim()));
        items.push_back(std::move(it));
    }
    if (skipped) *skipped = dropped;
    return items;
}

double covered_volume(const GridField& field, const Region& region) {
    return static_cast<double>(region.cells) * field.cell_volume();
}

double rho_at(const GridField& rho, std::span<const double> point) { return rho[rho.locate(point)]; }

}  // namespace rholab
