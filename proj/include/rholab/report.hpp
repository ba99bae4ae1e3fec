#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rholab/grid.hpp"

namespace rholab {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, diagnostic };

std::string_view to_string(Verdict v);

/// One inequality instance: lhs <= rhs with ratio = lhs / rhs.
struct CheckRow {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Geometry of the item attaining a reported maximum.
struct Witness {
    std::string shape;  // "cube", "ball", "pair", "point" or empty
    Point center;
    double scale = 0.0;
    Point other;  // second point for pairs
    std::size_t index = 0;
};

struct RefinementStep {
    std::string label;
    double fitted = 0.0;
};

/// Uniform record of a verified inequality.
struct CheckReport {
    std::string id;
    std::vector<std::pair<std::string, double>> params;
    std::vector<CheckRow> rows;
    double fitted = 0.0;
    double bound = 1.0;
    std::optional<Witness> witness;
    std::size_t violations = 0;
    Verdict verdict = Verdict::pass;
    std::vector<RefinementStep> refinement;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;

    bool passed() const { return verdict != Verdict::fail; }
    void param(const std::string& key, double value) { params.emplace_back(key, value); }
    void metric(const std::string& key, double value) { metrics.emplace_back(key, value); }
    std::optional<double> find_metric(const std::string& key) const;

    /// Appends a row; a row is violated when lhs > rhs * (1 + rel_tol).
    void add_row(std::string label, double lhs, double rhs, double rel_tol);
    /// Sets verdict from the violation count unless already diagnostic.
    void finalize();
};

/// fitted = max ratio over rows, witness index = first argmax.
std::size_t argmax_ratio(const std::vector<CheckRow>& rows);

Json to_json(const CheckReport& r, bool include_rows = true);
Json to_json(const Witness& w);
void write_rows_csv(std::ostream& out, const CheckReport& r);

/// Deterministic relative comparison a <= b * (1 + tol), treating tiny
/// magnitudes with an absolute floor.
bool leq_rel(double a, double b, double tol);

}  // namespace rholab
