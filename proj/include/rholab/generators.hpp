#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rholab/grid.hpp"

namespace rholab {

enum class GeneratorKind {
    constant,
    power,          // |x - center|^beta
    coordinate,     // x_axis
    log_spike,      // log(e + 1/max(|x - center|, h/2))
    indicator_union,
    dyadic_martingale,
    weight_power,   // (1 + |x - center|)^gamma
    potential_one,
    potential_abs_square,
};

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view text);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::constant;
    double value = 0.0;   // constant
    double beta = 0.5;    // power
    double gamma = 1.0;   // weight_power
    Point center;         // empty means the origin
    std::size_t axis = 0; // coordinate
    std::uint64_t seed = 0;
    int depth = 3;        // dyadic_martingale levels
    double step = 1.0;    // dyadic_martingale increment bound
    std::size_t count = 4; // indicator_union balls
    double radius = 0.5;   // indicator_union ball radius

    void validate() const;
};

struct Generated {
    GridField field;
    /// Construction-time dyadic BLO bound (theta = 0) when the generator knows one.
    std::optional<double> bound;
};

Generated generate(const GeneratorSpec& spec, const Box& box, const std::vector<std::int64_t>& counts);

}  // namespace rholab
