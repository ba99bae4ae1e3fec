#include "rholab/summed_area_table.hpp"

#include <bit>
#include <stdexcept>

namespace rholab {

SummedAreaTable::SummedAreaTable(const GridField& field) { build(field, nullptr); }

SummedAreaTable::SummedAreaTable(const GridField& field, const std::function<double(double)>& transform) {
    build(field, &transform);
}

void SummedAreaTable::build(const GridField& field, const std::function<double(double)>* transform) {
    const std::size_t d = field.dim();
    cell_volume_ = field.cell_volume();
    dims_.resize(d);
    strides_.assign(d, 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        dims_[i] = field.counts()[i] + 1;
        total *= static_cast<std::size_t>(dims_[i]);
    }
    for (std::size_t i = d - 1; i > 0; --i) strides_[i - 1] = strides_[i] * static_cast<std::size_t>(dims_[i]);
    table_.assign(total, 0.0L);

    Index idx(d, 0);
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        std::size_t t = 0;
        for (std::size_t i = 0; i < d; ++i) t += static_cast<std::size_t>(idx[i] + 1) * strides_[i];
        const double v = field[flat];
        table_[t] = transform ? (*transform)(v) : v;
        for (std::size_t i = d; i-- > 0;) {
            if (++idx[i] < field.counts()[i]) break;
            idx[i] = 0;
        }
    }
    // Cumulative sums along one axis at a time.
    for (std::size_t axis = 0; axis < d; ++axis) {
        const std::size_t stride = strides_[axis];
        const std::size_t n = static_cast<std::size_t>(dims_[axis]);
        for (std::size_t t = 0; t < total; ++t) {
            const std::size_t k = (t / stride) % n;
            if (k > 0) table_[t] += table_[t - stride];
        }
    }
}

long double SummedAreaTable::sum(const CellRange& range) const {
    const std::size_t d = dims_.size();
    if (range.dim() != d) throw std::invalid_argument("range dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) {
        if (range.lo[i] < 0 || range.len[i] < 0 || range.lo[i] + range.len[i] > dims_[i] - 1)
            throw std::out_of_range("range outside table");
    }
    long double total = 0.0L;
    const std::size_t corners = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        std::size_t t = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const std::int64_t c = (mask >> i) & 1U ? range.lo[i] + range.len[i] : range.lo[i];
            t += static_cast<std::size_t>(c) * strides_[i];
        }
        const bool negative = ((d - static_cast<std::size_t>(std::popcount(mask))) & 1U) != 0;
        total += negative ? -table_[t] : table_[t];
    }
    return total;
}

long double SummedAreaTable::mean(const CellRange& range) const {
    return sum(range) / static_cast<long double>(range.cells());
}

long double SummedAreaTable::integral(const CellRange& range) const {
    return sum(range) * static_cast<long double>(cell_volume_);
}

}  // namespace rholab
