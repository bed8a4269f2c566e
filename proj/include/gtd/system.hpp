#pragma once
/**
 * Thermodynamic systems Phi = Phi(E^a): built-in fundamental equations and
 * user-defined ones, evaluated as jets around equilibrium points.
 */

#include <gtd/errors.hpp>
#include <gtd/expr.hpp>
#include <gtd/jet.hpp>
#include <gtd/sections.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gtd {

// Coordinates E^a of an equilibrium state, in system variable order.
struct EquilibriumPoint {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Weighted homogeneity Phi(lambda^w_a E^a) = lambda^beta Phi(E^a).
struct Homogeneity {
    std::vector<double> weights;
    double beta = 1.0;
};

// Strict lower bound `variable > lower` on the domain of Phi.
struct DomainBound {
    std::string variable;
    Expr lower;
};

struct SystemSpec {
    std::string name;
    std::string family;  // "vdw" for the van der Waals family, otherwise empty
    std::vector<std::string> variables;
    std::map<std::string, double> parameters;
    Expr potential;
    std::optional<Homogeneity> homogeneity;
    std::vector<DomainBound> domain;
    // Box used to draw random equilibrium points for identity checks.
    std::vector<std::pair<double, double>> sample_box;

    std::size_t dimension() const { return variables.size(); }
    Bindings bindings() const { return Bindings{variables, &parameters}; }

    std::size_t variable_index(const std::string& var) const {
        auto it = std::find(variables.begin(), variables.end(), var);
        if (it == variables.end()) throw InvalidArgument("unknown variable '" + var + "' in system " + name);
        return static_cast<std::size_t>(it - variables.begin());
    }
};

inline void validate(const SystemSpec& spec) {
    if (spec.variables.empty() || spec.variables.size() > 3)
        throw InvalidArgument("system " + spec.name + " must have between 1 and 3 variables");
    std::set<std::string> names;
    for (const auto& v : spec.variables)
        if (!names.insert(v).second) throw InvalidArgument("duplicate variable '" + v + "'");
    for (const auto& [p, value] : spec.parameters)
        if (names.count(p)) throw InvalidArgument("'" + p + "' is both a variable and a parameter");
    auto check_identifiers = [&](const Expr& e, bool allow_variables) {
        for (const auto& id : e.identifiers()) {
            const bool known = spec.parameters.count(id) || id == "pi" ||
                               (allow_variables && names.count(id));
            if (!known) throw InvalidArgument("unresolved identifier '" + id + "' in system " + spec.name);
        }
    };
    check_identifiers(spec.potential, true);
    for (const auto& bound : spec.domain) {
        if (!names.count(bound.variable))
            throw InvalidArgument("domain bound on unknown variable '" + bound.variable + "'");
        check_identifiers(bound.lower, false);
    }
    if (spec.homogeneity && spec.homogeneity->weights.size() != spec.variables.size())
        throw InvalidArgument("homogeneity weights must match the variable count");
    if (!spec.sample_box.empty() && spec.sample_box.size() != spec.variables.size())
        throw InvalidArgument("sample box must match the variable count");
}

// Copy of `spec` with parameter values replaced; every key must already be declared.
inline SystemSpec with_parameters(SystemSpec spec, const std::map<std::string, double>& overrides) {
    for (const auto& [k, v] : overrides) {
        auto it = spec.parameters.find(k);
        if (it == spec.parameters.end())
            throw InvalidArgument("system " + spec.name + " has no parameter '" + k + "'");
        it->second = v;
    }
    return spec;
}

inline void check_domain(const SystemSpec& spec, const EquilibriumPoint& point) {
    if (point.size() != spec.dimension())
        throw InvalidArgument("point has " + std::to_string(point.size()) + " coordinates, system " + spec.name +
                              " has " + std::to_string(spec.dimension()));
    for (double v : point.values)
        if (!std::isfinite(v)) throw DomainError("non-finite coordinate");
    for (const auto& bound : spec.domain) {
        const double lower = evaluate_constant(bound.lower, spec.parameters);
        const double x = point[spec.variable_index(bound.variable)];
        if (!(x > lower))
            throw DomainError(bound.variable + " = " + detail::show(x) + " violates " + bound.variable + " > " +
                              print(bound.lower) + " (= " + detail::show(lower) + ")");
    }
}

inline bool in_domain(const SystemSpec& spec, const EquilibriumPoint& point) {
    try {
        check_domain(spec, point);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

// Jet of Phi around `point`, every E^a seeded as a variable.
inline Jet evaluate(const SystemSpec& spec, const EquilibriumPoint& point, int order = default_jet_order) {
    check_domain(spec, point);
    std::vector<Jet> seeds;
    seeds.reserve(spec.dimension());
    for (std::size_t i = 0; i < spec.dimension(); ++i)
        seeds.push_back(seed_variable(i, point[i], spec.dimension(), order));
    Jet phi = evaluate(spec.potential, std::span<const Jet>(seeds), spec.bindings());
    if (!phi.is_finite()) throw DomainError("potential of " + spec.name + " is not finite at the point");
    return phi;
}

inline double potential_value(const SystemSpec& spec, const EquilibriumPoint& point) {
    check_domain(spec, point);
    return evaluate(spec.potential, std::span<const double>(point.values), spec.bindings());
}

// I^a = dPhi/dE^a (raw gradient; for vdW the second entry is -P).
inline std::vector<double> intensive_variables(const SystemSpec& spec, const EquilibriumPoint& point) {
    const Jet phi = evaluate(spec, point, 1);
    std::vector<double> out(spec.dimension());
    for (std::size_t a = 0; a < spec.dimension(); ++a) out[a] = phi.first_partial(a);
    return out;
}

// PV^3 - aV + 2ab with P = -dPhi/dV.
inline double stability_residual_vdw(const SystemSpec& spec, const EquilibriumPoint& point) {
    if (spec.family != "vdw") throw InvalidArgument("stability residual requires a van der Waals system, got " + spec.name);
    const auto intensive = intensive_variables(spec, point);
    const double a = spec.parameters.at("a");
    const double b = spec.parameters.at("b");
    const double V = point[spec.variable_index("V")];
    const double P = -intensive[spec.variable_index("V")];
    return P * V * V * V - a * V + 2.0 * a * b;
}

namespace detail {

inline const std::string& vdw_potential() {
    static const std::string s = "(exp(S/k)/(V-b))^(2/3) - a/V";
    return s;
}

inline const std::string& kerr_newman_mass() {
    static const std::string s = "sqrt(pi*J^2/S + S/(4*pi)*(1 + pi*Q^2/S)^2)";
    return s;
}

inline SystemSpec make_vdw(std::string name, double a, double b) {
    SystemSpec s;
    s.name = std::move(name);
    s.family = "vdw";
    s.variables = {"S", "V"};
    s.parameters = {{"a", a}, {"b", b}, {"k", 1.0}};
    s.potential = parse(vdw_potential());
    s.domain = {{"V", Expr::identifier("b")}};
    s.sample_box = {{0.1, 2.0}, {0.6, 3.0}};
    return s;
}

inline SystemSpec make_black_hole(std::string name, std::vector<std::string> variables,
                                  std::map<std::string, double> frozen, std::vector<double> weights) {
    static const std::map<std::string, std::pair<double, double>> boxes = {
        {"S", {0.5, 10.0}}, {"J", {0.05, 2.0}}, {"Q", {0.1, 2.0}}};
    SystemSpec s;
    s.name = std::move(name);
    s.variables = std::move(variables);
    s.parameters = std::move(frozen);
    s.potential = parse(kerr_newman_mass());
    s.homogeneity = Homogeneity{std::move(weights), 0.5};
    s.domain = {{"S", Expr::number(0.0)}};
    for (const auto& v : s.variables) s.sample_box.push_back(boxes.at(v));
    return s;
}

}  // namespace detail

// Alphabetical.
inline std::vector<std::string> builtin_names() {
    return {"ideal_gas", "kerr", "kerr_newman", "reissner_nordstrom", "vdw"};
}

inline SystemSpec builtin(const std::string& name) {
    SystemSpec s;
    if (name == "vdw") s = detail::make_vdw("vdw", 1.0, 0.1);
    else if (name == "ideal_gas") s = detail::make_vdw("ideal_gas", 0.0, 0.0);
    else if (name == "kerr_newman") s = detail::make_black_hole("kerr_newman", {"S", "J", "Q"}, {}, {1.0, 1.0, 0.5});
    else if (name == "reissner_nordstrom") s = detail::make_black_hole("reissner_nordstrom", {"S", "Q"}, {{"J", 0.0}}, {1.0, 0.5});
    else if (name == "kerr") s = detail::make_black_hole("kerr", {"S", "J"}, {{"Q", 0.0}}, {1.0, 1.0});
    else throw InvalidArgument("unknown built-in system '" + name + "'");
    validate(s);
    return s;
}

inline std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(evaluate_constant(parse(item)));
    return out;
}

// "V > b, S > 0"
inline std::vector<DomainBound> parse_domain(const std::string& text) {
    std::vector<DomainBound> out;
    for (const auto& item : split(text, ',')) {
        const auto gt = item.find('>');
        if (gt == std::string::npos) throw InvalidArgument("domain bound '" + item + "' must read 'VAR > expr'");
        out.push_back({trim(item.substr(0, gt)), parse(item.substr(gt + 1))});
    }
    return out;
}

inline std::map<std::string, double> read_parameters(const SectionedText& doc) {
    std::map<std::string, double> params;
    for (const auto& [k, v] : doc.entries("parameters")) params[k] = evaluate_constant(parse(v));
    return params;
}

// System definition from [system] and [parameters] sections.
inline SystemSpec system_from_text(const SectionedText& doc) {
    SystemSpec s;
    s.name = doc.find("system", "name") ? *doc.find("system", "name") : "custom";
    s.variables = split(doc.require("system", "variables"), ',');
    s.parameters = read_parameters(doc);
    s.potential = parse(doc.require("system", "potential"));
    if (const auto* w = doc.find("system", "weights")) {
        Homogeneity h;
        h.weights = parse_real_list(*w);
        if (const auto* beta = doc.find("system", "beta")) h.beta = evaluate_constant(parse(*beta));
        s.homogeneity = h;
    } else if (const auto* beta = doc.find("system", "beta")) {
        s.homogeneity = Homogeneity{std::vector<double>(s.variables.size(), 1.0), evaluate_constant(parse(*beta))};
    }
    if (const auto* d = doc.find("system", "domain")) s.domain = parse_domain(*d);
    if (const auto* f = doc.find("system", "family")) s.family = *f;
    validate(s);
    return s;
}

}  // namespace gtd
