#include "rholab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

namespace rholab {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::diagnostic: return "diagnostic";
    }
    return "fail";
}

bool leq_rel(double a, double b, double tol) {
    if (std::isnan(a) || std::isnan(b)) return false;
    return a <= b + tol * std::max(std::abs(b), 1e-300);
}

std::optional<double> CheckReport::find_metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    return std::nullopt;
}

void CheckReport::add_row(std::string label, double lhs, double rhs, double rel_tol) {
    double ratio = 0.0;
    if (rhs > 0.0) {
        ratio = lhs / rhs;
    } else if (lhs > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
    }
    if (!leq_rel(lhs, rhs, rel_tol)) ++violations;
    rows.push_back(CheckRow{std::move(label), lhs, rhs, ratio});
}

void CheckReport::finalize() {
    if (verdict == Verdict::diagnostic) return;
    verdict = violations == 0 ? Verdict::pass : Verdict::fail;
}

std::size_t argmax_ratio(const std::vector<CheckRow>& rows) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].ratio > rows[best].ratio) best = i;
    return best;
}

namespace {

Json number(double v) {
    if (std::isfinite(v)) return Json(v);
    if (std::isnan(v)) return Json("nan");
    return Json(v > 0 ? "inf" : "-inf");
}

}  // namespace

Json to_json(const Witness& w) {
    Json j;
    j["shape"] = w.shape;
    j["index"] = w.index;
    Json c = Json::array();
    for (double x : w.center) c.push_back(number(x));
    j["center"] = c;
    j["scale"] = number(w.scale);
    if (!w.other.empty()) {
        Json o = Json::array();
        for (double x : w.other) o.push_back(number(x));
        j["other"] = o;
    }
    return j;
}

Json to_json(const CheckReport& r, bool include_rows) {
    Json j;
    j["id"] = r.id;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = number(v);
    j["params"] = params;
    j["verdict"] = std::string(to_string(r.verdict));
    j["fitted"] = number(r.fitted);
    j["bound"] = number(r.bound);
    j["violations"] = r.violations;
    j["items"] = r.rows.size();
    if (r.witness) j["witness"] = to_json(*r.witness);
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    j["metrics"] = metrics;
    if (!r.refinement.empty()) {
        Json trace = Json::array();
        for (const auto& s : r.refinement) trace.push_back(Json{{"label", s.label}, {"fitted", number(s.fitted)}});
        j["refinement"] = trace;
    }
    if (!r.notes.empty()) j["notes"] = r.notes;
    if (include_rows) {
        Json rows = Json::array();
        for (const auto& row : r.rows)
            rows.push_back(Json{{"label", row.label}, {"lhs", number(row.lhs)}, {"rhs", number(row.rhs)},
                                {"ratio", number(row.ratio)}});
        j["rows"] = rows;
    }
    return j;
}

void write_rows_csv(std::ostream& out, const CheckReport& r) {
    out << "label,lhs,rhs,ratio\n";
    char buf[128];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", row.lhs, row.rhs, row.ratio);
        out << row.label << ',' << buf << '\n';
    }
}

}  // namespace rholab
