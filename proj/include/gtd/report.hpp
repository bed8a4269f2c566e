#pragma once
/**
 * CSV and JSON serialization of scan reports.
 *
 * CSV: one row per grid point, columns are the coordinates in declaration
 * order, then the value columns, then `status`. LF line ends, reals printed
 * with 17 significant digits; value cells are empty for marker rows.
 *
 * JSON (schema_version 1): top-level object with `schema_version`, `system`,
 * `parameters`, `command`, `grid`, `values`, `singular_points`, `fits` and
 * `residuals`; see README for field details.
 */

#include <gtd/analysis.hpp>

#include <json.hpp>

#include <cstdio>
#include <map>
#include <ostream>
#include <string>

namespace gtd {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const ScanReport& rep) {
    for (const auto& c : rep.coordinate_names) out << c << ',';
    for (const auto& v : rep.value_names) out << v << ',';
    out << "status\n";
    for (const auto& s : rep.samples) {
        for (double c : s.coordinates) out << format_real(c) << ',';
        for (std::size_t k = 0; k < rep.value_names.size(); ++k) {
            if (s.status == PointStatus::ok) out << format_real(s.values[k]);
            out << ',';
        }
        out << to_string(s.status) << '\n';
    }
}

inline constexpr int report_schema_version = 1;

inline nlohmann::json to_json(const Axis& a) {
    nlohmann::json j{{"name", a.name}, {"pinned", a.pinned}};
    if (a.pinned) {
        j["value"] = a.start;
    } else {
        j["start"] = a.start;
        j["stop"] = a.stop;
        j["count"] = a.count;
    }
    return j;
}

inline nlohmann::json to_json(const SingularPoint& sp, const std::vector<std::string>& names) {
    nlohmann::json coords = nlohmann::json::object();
    for (std::size_t k = 0; k < names.size(); ++k) coords[names[k]] = sp.coordinates[k];
    nlohmann::json j{{"coordinates", coords},   {"axis", sp.axis},
                     {"kind", to_string(sp.kind)}, {"function_value", sp.function_value},
                     {"det_g", sp.det_g},       {"bracket_width", sp.bracket_width}};
    j["stability_residual"] = sp.stability_residual ? nlohmann::json(*sp.stability_residual) : nlohmann::json();
    return j;
}

inline nlohmann::json to_json(const FitResult& f) {
    return {{"divergent", f.divergent},     {"exponent", f.exponent}, {"intercept", f.intercept},
            {"correlation", f.correlation}, {"samples", f.samples},   {"note", f.note}};
}

inline nlohmann::json report_skeleton(const std::string& system, const std::map<std::string, double>& parameters,
                                      const std::string& command) {
    return {{"schema_version", report_schema_version},
            {"system", system},
            {"parameters", parameters},
            {"command", command},
            {"grid", nullptr},
            {"values", nlohmann::json::array()},
            {"singular_points", nlohmann::json::array()},
            {"fits", nlohmann::json::array()},
            {"residuals", nlohmann::json::object()}};
}

inline nlohmann::json to_json(const ScanReport& rep, const std::map<std::string, double>& parameters) {
    nlohmann::json j = report_skeleton(rep.field_name, parameters, "scan");
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : rep.grid.axes) axes.push_back(to_json(a));
    j["grid"] = {{"axes", axes}, {"points", rep.grid.total()}};
    j["quantity"] = to_string(rep.quantity);
    j["coordinate_names"] = rep.coordinate_names;
    j["value_names"] = rep.value_names;
    for (const auto& s : rep.samples) {
        j["values"].push_back({{"coordinates", s.coordinates},
                               {"values", s.status == PointStatus::ok ? nlohmann::json(s.values) : nlohmann::json()},
                               {"status", to_string(s.status)}});
    }
    for (const auto& sp : rep.singular_points) j["singular_points"].push_back(to_json(sp, rep.coordinate_names));
    for (const auto& f : rep.fits) j["fits"].push_back(to_json(f));
    return j;
}

}  // namespace gtd
