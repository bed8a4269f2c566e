#pragma once
// Command-line front end. Exit codes: 0 success, 1 check failed, 2 input
// error, 3 degenerate geometry, 4 I/O failure.

#include <gtd/gtd.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gtd::cli {

enum ExitCode : int { ok = 0, check_failed = 1, input_error = 2, degenerate = 3, io_error = 4 };

class IoError : public Error {
public:
    using Error::Error;
};

inline constexpr double default_legendre_tolerance = 1e-9;
inline constexpr double default_identity_tolerance = 1e-10;  // euler, gibbs-duhem
inline constexpr double default_exact_tolerance = 1e-12;     // contact, first-law

// "a=1,b=0.1" -> ordered pairs; values may be constant expressions such as 2*pi.
inline std::vector<std::pair<std::string, double>> parse_assignments(const std::vector<std::string>& items) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& item : items)
        for (const auto& part : split(item, ',')) {
            if (part.empty()) continue;
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw InvalidArgument("expected NAME=value, got '" + part + "'");
            out.emplace_back(trim(part.substr(0, eq)), evaluate_constant(parse(part.substr(eq + 1))));
        }
    return out;
}

inline std::map<std::string, double> to_map(const std::vector<std::pair<std::string, double>>& v) {
    std::map<std::string, double> m;
    for (const auto& [k, x] : v) {
        if (m.count(k)) throw InvalidArgument("'" + k + "' given twice");
        m[k] = x;
    }
    return m;
}

// "VAR=start:stop:count"
inline std::vector<Axis> parse_ranges(const std::vector<std::string>& items) {
    std::vector<Axis> out;
    for (const auto& item : items)
        for (const auto& part : split(item, ',')) {
            if (part.empty()) continue;
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw InvalidArgument("malformed range '" + part + "', expected VAR=start:stop:count");
            const auto fields = split(part.substr(eq + 1), ':');
            if (fields.size() != 3) throw InvalidArgument("malformed range '" + part + "', expected VAR=start:stop:count");
            const double start = evaluate_constant(parse(fields[0]));
            const double stop = evaluate_constant(parse(fields[1]));
            std::size_t used = 0;
            long long count = 0;
            try {
                count = std::stoll(fields[2], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != fields[2].size() || count < 1) throw InvalidArgument("malformed count in range '" + part + "'");
            if (count > 1 && !(start < stop)) throw InvalidArgument("range '" + part + "' needs start < stop");
            out.push_back(Axis::range(trim(part.substr(0, eq)), start, stop, static_cast<std::size_t>(count)));
        }
    return out;
}

inline bool file_exists(const std::string& path) {
    std::error_code ec;
    return std::filesystem::is_regular_file(path, ec);
}

// Built-in system, closed-form metric, or definition file.
inline MetricField resolve_field(const std::string& source, MetricKind kind,
                                 const std::map<std::string, double>& overrides) {
    MetricField field = [&] {
        for (const auto& b : builtin_names())
            if (b == source) return MetricField::from_system(builtin(source), kind);
        for (const auto& c : closed_form_names())
            if (c == source) return closed_form_metric(source);
        if (file_exists(source)) return field_from_text(SectionedText::load(source), kind);
        throw InvalidArgument("unknown system '" + source + "' (not a built-in, closed-form metric or file)");
    }();
    return with_parameters(field, overrides);
}

inline SystemSpec resolve_system(const std::string& source, const std::map<std::string, double>& overrides) {
    MetricField f = resolve_field(source, MetricKind::natural, overrides);
    if (!f.system()) throw InvalidArgument("'" + source + "' is a metric, a thermodynamic system is required");
    return *f.system();
}

inline EquilibriumPoint parse_point(const MetricField& field, const std::vector<std::string>& items) {
    const auto values = to_map(parse_assignments(items));
    EquilibriumPoint p;
    for (const auto& c : field.coordinates()) {
        auto it = values.find(c);
        if (it == values.end()) throw InvalidArgument("point is missing coordinate '" + c + "'");
        p.values.push_back(it->second);
    }
    for (const auto& [k, v] : values)
        if (std::find(field.coordinates().begin(), field.coordinates().end(), k) == field.coordinates().end())
            throw InvalidArgument("'" + k + "' is not a coordinate of " + field.name());
    return p;
}

inline std::string format_matrix(const Matrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.size(); ++j) s += (j ? ", " : "") + format_real(m(i, j));
        s += "]";
    }
    return s + "]";
}

inline std::string output_format(const std::string& requested, const std::string& path, const std::string& fallback) {
    if (!requested.empty()) return requested;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return "json";
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return "csv";
    return fallback;
}

inline void write_text_file(const std::string& path, const std::string& content, std::ostream& out) {
    if (path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline void cmd_systems_list(std::ostream& out) {
    out << "built-in systems:\n";
    for (const auto& name : builtin_names()) {
        const SystemSpec s = builtin(name);
        out << "  " << name << " (";
        for (std::size_t i = 0; i < s.variables.size(); ++i) out << (i ? ", " : "") << s.variables[i];
        if (!s.parameters.empty()) {
            out << "; ";
            bool first = true;
            for (const auto& [k, v] : s.parameters) out << (first ? "" : ", ") << k, first = false;
        }
        out << ")";
        for (const auto& [k, v] : s.parameters) out << "  " << k << "=" << format_real(v);
        out << "\n";
    }
    out << "closed-form metrics:\n";
    for (const auto& name : closed_form_names()) {
        const MetricField f = closed_form_metric(name);
        out << "  " << name << " (";
        for (std::size_t i = 0; i < f.coordinates().size(); ++i) out << (i ? ", " : "") << f.coordinates()[i];
        out << ")\n";
    }
}

struct EvalOptions {
    std::string system;
    std::vector<std::string> params;
    std::vector<std::string> point;
    std::string quantity = "all";
    std::string metric_kind = "natural";
    std::string output;
    std::string format;
};

inline int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const MetricField field = resolve_field(o.system, metric_kind_from_string(o.metric_kind), to_map(parse_assignments(o.params)));
    const EquilibriumPoint p = parse_point(field, o.point);
    static const std::vector<std::string> known = {"all", "potential", "intensive", "metric", "detg", "curvature"};
    if (std::find(known.begin(), known.end(), o.quantity) == known.end())
        throw InvalidArgument("unknown quantity '" + o.quantity + "'");
    auto wants = [&](const char* q) { return o.quantity == "all" || o.quantity == q; };
    field.check_domain(p);

    nlohmann::json values = nlohmann::json::object();
    std::ostringstream text;
    text << "system: " << field.name() << "\npoint:";
    for (std::size_t i = 0; i < p.size(); ++i) {
        text << (i ? ", " : " ") << field.coordinates()[i] << "=" << format_real(p[i]);
        values["point"][field.coordinates()[i]] = p[i];
    }
    text << "\n";
    int code = ok;
    if (field.system()) {
        if (wants("potential")) {
            const double phi = potential_value(*field.system(), p);
            text << "potential: " << format_real(phi) << "\n";
            values["potential"] = phi;
        }
        if (wants("intensive")) {
            const auto I = intensive_variables(*field.system(), p);
            text << "intensive:";
            for (std::size_t i = 0; i < I.size(); ++i) {
                text << (i ? ", " : " ") << "I_" << field.coordinates()[i] << "=" << format_real(I[i]);
                values["intensive"]["I_" + field.coordinates()[i]] = I[i];
            }
            text << "\n";
        }
    } else if (o.quantity == "potential" || o.quantity == "intensive") {
        throw InvalidArgument(o.quantity + " is undefined for a direct metric");
    }
    if (wants("metric") || wants("detg")) {
        const MetricValue g = metric_at(field, p);
        if (wants("metric")) {
            text << "metric (" << to_string(field.kind()) << "): " << format_matrix(g.components) << "\n";
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < g.components.size(); ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t j = 0; j < g.components.size(); ++j) row.push_back(g.components(i, j));
                rows.push_back(row);
            }
            values["metric"] = rows;
            values["metric_kind"] = to_string(field.kind());
        }
        if (wants("detg")) {
            const double det = determinant(g.components);
            text << "det_g: " << format_real(det) << "\n";
            values["det_g"] = det;
        }
    }
    if (wants("curvature")) {
        try {
            const CurvatureReport r = scalar_curvature(field, p);
            text << "curvature: " << format_real(r.scalar) << "\n";
            values["scalar_curvature"] = r.scalar;
        } catch (const DegenerateMetricError& e) {
            text << "curvature: degenerate metric (" << e.what() << ")\n";
            values["scalar_curvature"] = nullptr;
            code = degenerate;
        }
    }

    const std::string fmt = output_format(o.format, o.output, "text");
    if (fmt == "json") {
        nlohmann::json j = report_skeleton(field.name(), field.parameters(), "eval");
        j["values"] = values;
        write_text_file(o.output.empty() ? "-" : o.output, j.dump(2) + "\n", out);
    } else if (fmt == "text") {
        write_text_file(o.output.empty() ? "-" : o.output, text.str(), out);
    } else {
        throw InvalidArgument("eval supports text or json output, got '" + fmt + "'");
    }
    return code;
}

struct ScanOptions {
    std::string system;
    std::vector<std::string> params;
    std::vector<std::string> ranges;
    std::vector<std::string> pins;
    std::string quantity = "curvature";
    std::string metric_kind = "natural";
    std::string output;
    std::string format;
    std::size_t workers = 0;
    std::size_t max_points = 1'000'000;
    bool no_roots = false;
    std::vector<std::string> fit_center;
    std::vector<std::string> fit_direction;
    std::string fit_offsets;  // base:first:last
};

inline int cmd_scan(const ScanOptions& o, std::ostream& out, std::ostream& err) {
    const MetricField field = resolve_field(o.system, metric_kind_from_string(o.metric_kind), to_map(parse_assignments(o.params)));
    GridSpec grid;
    grid.max_points = o.max_points;
    grid.axes = parse_ranges(o.ranges);
    for (const auto& [name, value] : parse_assignments(o.pins)) grid.axes.push_back(Axis::pin(name, value));
    const Quantity q = quantity_from_string(o.quantity);
    const std::size_t workers = o.workers ? o.workers : default_workers();

    ScanReport rep = grid_scan(field, grid, q, workers);
    if (!o.no_roots) rep.singular_points = find_singular_locus(field, grid);
    if (!o.fit_center.empty()) {
        Approach a;
        a.center = parse_point(field, o.fit_center);
        const auto dir = to_map(parse_assignments(o.fit_direction));
        for (const auto& c : field.coordinates()) a.direction.push_back(dir.count(c) ? dir.at(c) : 0.0);
        const auto f = split(o.fit_offsets.empty() ? "1:4:16" : o.fit_offsets, ':');
        if (f.size() != 3) throw InvalidArgument("--fit-offsets expects base:first:last");
        a.offsets = geometric_offsets(evaluate_constant(parse(f[0])), std::stoi(f[1]), std::stoi(f[2]));
        rep.fits.push_back(fit_divergence_exponent(field, a));
    }

    std::ostream& summary = o.output == "-" ? err : out;
    if (!o.output.empty()) {
        const std::string fmt = output_format(o.format, o.output, "csv");
        std::ostringstream body;
        if (fmt == "csv") write_csv(body, rep);
        else if (fmt == "json") body << to_json(rep, field.parameters()).dump(2) << "\n";
        else throw InvalidArgument("scan supports csv or json output, got '" + fmt + "'");
        write_text_file(o.output, body.str(), out);
    }

    double max_abs_value = 0.0;
    for (const auto& s : rep.samples)
        for (double v : s.values) max_abs_value = std::max(max_abs_value, std::abs(v));
    summary << "scan " << rep.field_name << " quantity=" << to_string(q) << " points=" << rep.samples.size()
            << " ok=" << rep.count(PointStatus::ok) << " degenerate=" << rep.count(PointStatus::degenerate)
            << " domain_error=" << rep.count(PointStatus::domain_error) << "\n";
    summary << "max |value|: " << format_real(max_abs_value) << "\n";
    summary << "singular points: " << rep.singular_points.size() << "\n";
    for (const auto& sp : rep.singular_points) {
        summary << "  " << to_string(sp.kind) << " along " << sp.axis << ":";
        for (std::size_t k = 0; k < sp.coordinates.size(); ++k)
            summary << " " << rep.coordinate_names[k] << "=" << format_real(sp.coordinates[k]);
        summary << " det_g=" << format_real(sp.det_g);
        if (sp.stability_residual) summary << " stability_residual=" << format_real(*sp.stability_residual);
        summary << "\n";
    }
    for (const auto& f : rep.fits) {
        summary << "fit: ";
        if (f.divergent)
            summary << "exponent=" << format_real(f.exponent) << " correlation=" << format_real(f.correlation)
                    << " samples=" << f.samples << "\n";
        else
            summary << f.note << "\n";
    }
    return ok;
}

struct CheckOptions {
    std::string kind;
    std::string system;
    std::vector<std::string> params;
    std::size_t n = 2;
    std::string transform = "total";
    std::optional<std::size_t> trials;
    std::uint64_t seed = 1;
    std::optional<double> beta;
    std::string weights;
    std::optional<double> tolerance;
    std::vector<std::string> box;
    std::string output;
};

inline LegendreMap parse_transform(const std::string& t, std::size_t n) {
    if (t == "identity") return LegendreMap::identity();
    if (t == "total") return LegendreMap::total(n);
    if (t.rfind("subset=", 0) == 0) {
        LegendreMap m;
        for (const auto& part : split(t.substr(7), ',')) {
            std::size_t used = 0;
            long long i = 0;
            try {
                i = std::stoll(part, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != part.size() || i < 1 || static_cast<std::size_t>(i) > n)
                throw InvalidArgument("subset index '" + part + "' must lie in 1.." + std::to_string(n));
            m.exchanged.insert(static_cast<std::size_t>(i - 1));
        }
        return m;
    }
    throw InvalidArgument("unknown transform '" + t + "' (identity, total, subset=i,j,...)");
}

// Uniform point in the sampling box that lies in the domain.
inline EquilibriumPoint random_point(const SystemSpec& spec, const std::vector<std::pair<double, double>>& box,
                                     std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        EquilibriumPoint p;
        for (const auto& [lo, hi] : box) p.values.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
        if (in_domain(spec, p)) return p;
    }
    throw InvalidArgument("could not draw a point inside the domain of " + spec.name + " from the sampling box");
}

inline int cmd_check(const CheckOptions& o, std::ostream& out) {
    static const std::vector<std::string> kinds = {"contact", "euler", "first-law", "gibbs-duhem", "legendre"};
    if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end())
        throw InvalidArgument("unknown check '" + o.kind + "'");
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    nlohmann::json residuals = nlohmann::json::array();
    double worst = 0.0;
    double tolerance = 0.0;
    std::string system_name = "phase_space";
    std::map<std::string, double> parameters;

    auto random_phase_point = [&](std::size_t n) {
        PhasePoint p;
        p.phi = coord(rng);
        for (std::size_t a = 0; a < n; ++a) p.extensive.push_back(coord(rng));
        for (std::size_t a = 0; a < n; ++a) p.intensive.push_back(coord(rng));
        return p;
    };

    if (o.kind == "legendre" || o.kind == "contact") {
        if (o.n < 1 || o.n > (o.kind == "contact" ? 3u : max_jet_variables))
            throw InvalidArgument("--n out of range for " + o.kind);
        const std::size_t trials = o.trials.value_or(o.kind == "legendre" ? 100 : 10);
        if (o.kind == "legendre") {
            tolerance = o.tolerance.value_or(default_legendre_tolerance);
            const LegendreMap map = parse_transform(o.transform, o.n);
            for (std::size_t t = 0; t < trials; ++t) {
                const double r = legendre_invariance_residual(map, random_phase_point(o.n));
                residuals.push_back(r);
                worst = std::max(worst, r);
            }
            out << "legendre transform=" << o.transform << " n=" << o.n << " trials=" << trials << "\n";
        } else {
            tolerance = o.tolerance.value_or(default_exact_tolerance);
            double factorial = 1.0;
            for (std::size_t k = 2; k <= o.n; ++k) factorial *= static_cast<double>(k);
            for (std::size_t t = 0; t < trials; ++t) {
                const double c = contact_volume_coefficient(random_phase_point(o.n), o.n);
                residuals.push_back(c);
                worst = std::max(worst, std::abs(std::abs(c) - factorial));
            }
            out << "contact n=" << o.n << " expected |coefficient|=" << format_real(factorial) << " trials=" << trials << "\n";
        }
    } else {
        if (o.system.empty()) throw InvalidArgument("check " + o.kind + " requires --system");
        const SystemSpec spec = resolve_system(o.system, to_map(parse_assignments(o.params)));
        system_name = spec.name;
        parameters = spec.parameters;
        const std::size_t n = spec.dimension();
        const std::size_t trials = o.trials.value_or(20);
        Homogeneity h = default_homogeneity(spec);
        if (!o.weights.empty()) h.weights = parse_real_list(o.weights);
        if (o.beta) h.beta = *o.beta;
        if (h.weights.size() != n) throw InvalidArgument("--weights needs " + std::to_string(n) + " values");
        std::vector<std::pair<double, double>> box = spec.sample_box;
        if (box.empty()) box.assign(n, {0.5, 2.0});
        for (const auto& item : o.box)
            for (const auto& part : split(item, ',')) {
                const auto eq = part.find('=');
                const auto bounds = eq == std::string::npos ? std::vector<std::string>{} : split(part.substr(eq + 1), ':');
                if (bounds.size() != 2) throw InvalidArgument("malformed box '" + part + "', expected VAR=lo:hi");
                const double lo = evaluate_constant(parse(bounds[0])), hi = evaluate_constant(parse(bounds[1]));
                if (!(lo < hi)) throw InvalidArgument("box '" + part + "' needs lo < hi");
                box.at(spec.variable_index(trim(part.substr(0, eq)))) = {lo, hi};
            }
        tolerance = o.tolerance.value_or(o.kind == "first-law" ? default_exact_tolerance : default_identity_tolerance);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (std::size_t t = 0; t < trials; ++t) {
            const EquilibriumPoint p = random_point(spec, box, rng);
            std::vector<double> v(n);
            for (auto& x : v) x = unit(rng);
            double r = 0.0, scale = 0.0;
            if (o.kind == "euler") {
                r = euler_residual(spec, p, h.weights, h.beta);
                scale = euler_scale(spec, p, h.weights, h.beta);
            } else if (o.kind == "gibbs-duhem") {
                r = gibbs_duhem_residual(spec, p, v, h.weights, h.beta);
                scale = gibbs_duhem_scale(spec, p, v, h.weights, h.beta);
            } else {
                const PhasePoint lifted = lift_point(spec, p);
                r = theta_residual(spec, lifted, v);
                for (std::size_t a = 0; a < n; ++a) scale += std::abs(lifted.intensive[a] * v[a]);
            }
            const double rel = std::abs(r) / std::max(scale, 1e-300);
            residuals.push_back(rel);
            worst = std::max(worst, rel);
        }
        out << o.kind << " system=" << spec.name << " trials=" << trials;
        if (o.kind != "first-law") {
            out << " beta=" << format_real(h.beta) << " weights=";
            for (std::size_t a = 0; a < n; ++a) out << (a ? "," : "") << format_real(h.weights[a]);
        }
        out << "\n";
    }
    const bool pass = worst <= tolerance;
    out << "max residual: " << format_real(worst) << " (tolerance " << format_real(tolerance) << ") "
        << (pass ? "PASS" : "FAIL") << "\n";
    if (!o.output.empty()) {
        nlohmann::json j = report_skeleton(system_name, parameters, "check");
        j["residuals"] = {{"check", o.kind}, {"values", residuals}, {"max", worst}, {"tolerance", tolerance}, {"pass", pass}};
        write_text_file(o.output, j.dump(2) + "\n", out);
    }
    return pass ? ok : check_failed;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometrothermodynamics: Legendre-invariant metrics, curvature and singular loci"};
    app.require_subcommand(1);

    auto* systems = app.add_subcommand("systems", "List built-in systems and closed-form metrics");

    EvalOptions eo;
    auto* eval = app.add_subcommand("eval", "Evaluate potential, intensive variables, metric, det g and curvature at a point");
    eval->add_option("--system", eo.system, "Built-in name, closed-form metric name or definition file")->required();
    eval->add_option("--params", eo.params, "Parameter overrides, e.g. a=1,b=0.1");
    eval->add_option("--point", eo.point, "Point, e.g. S=1,V=2")->required();
    eval->add_option("--quantity", eo.quantity, "all|potential|intensive|metric|detg|curvature")->capture_default_str();
    eval->add_option("--metric-kind", eo.metric_kind, "natural|weinhold|ruppeiner")->capture_default_str();
    eval->add_option("--output", eo.output, "Output file ('-' for stdout)");
    eval->add_option("--format", eo.format, "text|json");

    ScanOptions so;
    auto* scan = app.add_subcommand("scan", "Scan a quantity over a grid and locate det g roots");
    scan->add_option("--system", so.system, "Built-in name, closed-form metric name or definition file")->required();
    scan->add_option("--params", so.params, "Parameter overrides, e.g. a=1,b=0.1");
    scan->add_option("--range", so.ranges, "VAR=start:stop:count (inclusive endpoints)");
    scan->add_option("--pin", so.pins, "VAR=value");
    scan->add_option("--quantity", so.quantity, "curvature|detg|potential|intensive")->capture_default_str();
    scan->add_option("--metric-kind", so.metric_kind, "natural|weinhold|ruppeiner")->capture_default_str();
    scan->add_option("--output", so.output, "Report file ('-' for stdout)");
    scan->add_option("--format", so.format, "csv|json (default from extension, else csv)");
    scan->add_option("--workers", so.workers, "Worker threads (0 = available parallelism)")->capture_default_str();
    scan->add_option("--max-points", so.max_points, "Grid size cap")->capture_default_str();
    scan->add_flag("--no-roots", so.no_roots, "Skip singular-locus detection");
    scan->add_option("--fit-center", so.fit_center, "Divergence fit center, e.g. S=pi,Q=1");
    scan->add_option("--fit-direction", so.fit_direction, "Approach direction, e.g. S=-1");
    scan->add_option("--fit-offsets", so.fit_offsets, "base:first:last, offsets base*2^-m")->default_str("1:4:16");

    CheckOptions co;
    auto* check = app.add_subcommand("check", "Verify a thermodynamic identity numerically");
    check->add_option("kind", co.kind, "legendre|euler|gibbs-duhem|contact|first-law")->required();
    check->add_option("--system", co.system, "System for euler, gibbs-duhem and first-law");
    check->add_option("--params", co.params, "Parameter overrides");
    check->add_option("--n", co.n, "Phase-space half dimension for legendre and contact")->capture_default_str();
    check->add_option("--transform", co.transform, "identity|total|subset=i,j (1-based)")->capture_default_str();
    check->add_option("--trials", co.trials, "Random trials (legendre 100, contact 10, others 20)");
    check->add_option("--seed", co.seed, "Random seed")->capture_default_str();
    check->add_option("--beta", co.beta, "Homogeneity degree (default from system, else 1)");
    check->add_option("--weights", co.weights, "Homogeneity weights, comma separated");
    check->add_option("--tolerance", co.tolerance,
                      "Pass threshold (legendre 1e-9, euler/gibbs-duhem 1e-10 relative, contact/first-law 1e-12)");
    check->add_option("--box", co.box, "Sampling box for random states, VAR=lo:hi");
    check->add_option("--output", co.output, "JSON report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*systems) {
            cmd_systems_list(out);
            return ok;
        }
        if (*eval) return cmd_eval(eo, out);
        if (*scan) return cmd_scan(so, out, err);
        if (*check) return cmd_check(co, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return io_error;
    } catch (const DegenerateMetricError& e) {
        err << "error: " << e.what() << "\n";
        return degenerate;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"gtd"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gtd::cli
