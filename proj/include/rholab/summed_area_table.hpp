#pragma once

#include <functional>
#include <vector>

#include "rholab/grid.hpp"

namespace rholab {

/// N-dimensional inclusive prefix sums over a field (optionally of a
/// transformed value), zero-padded so that any cell block sum costs 2^d reads.
class SummedAreaTable {
public:
    explicit SummedAreaTable(const GridField& field);
    SummedAreaTable(const GridField& field, const std::function<double(double)>& transform);

    long double sum(const CellRange& range) const;
    long double mean(const CellRange& range) const;
    /// Integral of the (transformed) field over the block: sum times cell volume.
    long double integral(const CellRange& range) const;

private:
    void build(const GridField& field, const std::function<double(double)>* transform);

    std::vector<std::int64_t> dims_;  // counts + 1
    std::vector<std::size_t> strides_;
    std::vector<long double> table_;
    double cell_volume_ = 1.0;
};

}  // namespace rholab
