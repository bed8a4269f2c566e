#pragma once
/**
 * Metrics on the space of equilibrium states and their curvature.
 *
 * The natural metric is g_ab = Phi * d^2 Phi / dE^a dE^b. Weinhold uses the
 * bare Hessian, Ruppeiner divides it by T = dPhi/dE^1. Direct metrics are
 * given as a matrix of expressions over named coordinates.
 *
 * Every metric component is produced as an order-2 jet, so first and second
 * derivatives of g (and hence Christoffel symbols and the Riemann tensor) are
 * exact up to rounding.
 */

#include <gtd/errors.hpp>
#include <gtd/expr.hpp>
#include <gtd/jet.hpp>
#include <gtd/linalg.hpp>
#include <gtd/sections.hpp>
#include <gtd/system.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gtd {

enum class MetricKind { natural, weinhold, ruppeiner, direct };

inline const char* to_string(MetricKind k) {
    switch (k) {
        case MetricKind::natural: return "natural";
        case MetricKind::weinhold: return "weinhold";
        case MetricKind::ruppeiner: return "ruppeiner";
        case MetricKind::direct: return "direct";
    }
    return "?";
}

inline MetricKind metric_kind_from_string(const std::string& s) {
    if (s == "natural") return MetricKind::natural;
    if (s == "weinhold") return MetricKind::weinhold;
    if (s == "ruppeiner") return MetricKind::ruppeiner;
    if (s == "direct") return MetricKind::direct;
    throw InvalidArgument("unknown metric kind '" + s + "'");
}

inline constexpr double degeneracy_threshold = 1e-12;

// |det g| < 1e-12 * max(1, |g|_inf^n)
inline bool is_degenerate(const Matrix& g, double det) {
    const double scale = std::max(1.0, std::pow(norm_inf(g), static_cast<double>(g.size())));
    return !(std::abs(det) >= degeneracy_threshold * scale);
}

struct DirectMetric {
    std::string name;
    std::vector<std::string> coordinates;
    std::map<std::string, double> parameters;
    std::vector<Expr> components;  // row-major n x n
    std::vector<DomainBound> domain;
};

class MetricField {
public:
    static MetricField from_system(SystemSpec spec, MetricKind kind = MetricKind::natural) {
        if (kind == MetricKind::direct) throw InvalidArgument("a system field cannot have direct kind");
        validate(spec);
        MetricField f;
        f.kind_ = kind;
        f.source_ = std::move(spec);
        return f;
    }

    static MetricField direct(DirectMetric m) {
        const std::size_t n = m.coordinates.size();
        if (n == 0 || n > 3) throw InvalidArgument("direct metric must have between 1 and 3 coordinates");
        if (m.components.size() != n * n)
            throw InvalidArgument("direct metric needs " + std::to_string(n * n) + " components, got " +
                                  std::to_string(m.components.size()));
        // Reuse the system validator for names and identifiers.
        SystemSpec probe;
        probe.name = m.name;
        probe.variables = m.coordinates;
        probe.parameters = m.parameters;
        probe.domain = m.domain;
        for (const auto& c : m.components) {
            probe.potential = c;
            validate(probe);
        }
        MetricField f;
        f.kind_ = MetricKind::direct;
        f.source_ = std::move(m);
        return f;
    }

    MetricKind kind() const { return kind_; }
    const SystemSpec* system() const { return std::get_if<SystemSpec>(&source_); }
    const DirectMetric* direct_metric() const { return std::get_if<DirectMetric>(&source_); }

    const std::string& name() const { return system() ? system()->name : direct_metric()->name; }
    const std::vector<std::string>& coordinates() const {
        return system() ? system()->variables : direct_metric()->coordinates;
    }
    const std::map<std::string, double>& parameters() const {
        return system() ? system()->parameters : direct_metric()->parameters;
    }
    std::size_t dimension() const { return coordinates().size(); }

    void check_domain(const EquilibriumPoint& p) const {
        if (system()) return gtd::check_domain(*system(), p);
        SystemSpec probe;
        probe.name = name();
        probe.variables = coordinates();
        probe.parameters = parameters();
        probe.domain = direct_metric()->domain;
        gtd::check_domain(probe, p);
    }

    // Symmetric n x n matrix of metric jets of the given order, row-major.
    std::vector<Jet> component_jets(const EquilibriumPoint& p, int order) const {
        const std::size_t n = dimension();
        check_domain(p);
        std::vector<Jet> g(n * n, Jet(n, order));
        if (const auto* spec = system()) {
            const Jet phi = evaluate(*spec, p, order + 2);
            std::optional<Jet> temperature;
            if (kind_ == MetricKind::ruppeiner) {
                temperature = phi.derivative(0).truncated(order);
                if (std::abs(temperature->value()) < 1e-12 * std::max(1.0, std::abs(phi.value())))
                    throw DomainError("Ruppeiner metric undefined at T = dPhi/d" + spec->variables[0] + " = 0");
            }
            const Jet base = phi.truncated(order);
            for (std::size_t a = 0; a < n; ++a) {
                const Jet da = phi.derivative(a);
                for (std::size_t b = a; b < n; ++b) {
                    Jet hab = da.derivative(b);
                    switch (kind_) {
                        case MetricKind::natural: hab = base * hab; break;
                        case MetricKind::weinhold: break;
                        case MetricKind::ruppeiner: hab = hab / *temperature; break;
                        case MetricKind::direct: break;
                    }
                    g[a * n + b] = hab;
                    g[b * n + a] = hab;
                }
            }
            return g;
        }
        const DirectMetric& m = *direct_metric();
        std::vector<Jet> seeds;
        for (std::size_t i = 0; i < n; ++i) seeds.push_back(seed_variable(i, p[i], n, order));
        const Bindings bind{m.coordinates, &m.parameters};
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                Jet upper = evaluate(m.components[a * n + b], std::span<const Jet>(seeds), bind);
                if (a != b) {
                    const Jet lower = evaluate(m.components[b * n + a], std::span<const Jet>(seeds), bind);
                    const double scale = std::max({1.0, std::abs(upper.value()), std::abs(lower.value())});
                    if (std::abs(upper.value() - lower.value()) > 1e-10 * scale)
                        throw InvalidArgument("direct metric " + m.name + " is not symmetric in components (" +
                                              std::to_string(a) + ", " + std::to_string(b) + ")");
                }
                if (!upper.is_finite()) throw DomainError("metric component is not finite at the point");
                g[a * n + b] = upper;
                g[b * n + a] = upper;
            }
        return g;
    }

private:
    MetricField() = default;
    MetricKind kind_ = MetricKind::natural;
    std::variant<SystemSpec, DirectMetric> source_;
};

// Copy of `field` with parameter values replaced; keys must already be declared.
inline MetricField with_parameters(const MetricField& field, const std::map<std::string, double>& overrides) {
    if (const auto* spec = field.system()) return MetricField::from_system(with_parameters(*spec, overrides), field.kind());
    DirectMetric m = *field.direct_metric();
    for (const auto& [k, v] : overrides) {
        auto it = m.parameters.find(k);
        if (it == m.parameters.end()) throw InvalidArgument("metric " + m.name + " has no parameter '" + k + "'");
        it->second = v;
    }
    return MetricField::direct(std::move(m));
}

struct MetricValue {
    EquilibriumPoint point;
    Matrix components;
    MetricKind kind = MetricKind::natural;
};

inline MetricValue metric_at(const MetricField& field, const EquilibriumPoint& point) {
    const std::size_t n = field.dimension();
    const auto jets = field.component_jets(point, 0);
    MetricValue v{point, Matrix(n), field.kind()};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) v.components(a, b) = jets[a * n + b].value();
    return v;
}

inline double metric_determinant(const MetricField& field, const EquilibriumPoint& point) {
    return determinant(metric_at(field, point).components);
}

// Gamma^a_bc stored at [(a*n + b)*n + c].
struct Christoffel {
    std::size_t n = 0;
    std::vector<double> data;

    double operator()(std::size_t a, std::size_t b, std::size_t c) const { return data[(a * n + b) * n + c]; }
};

struct CurvatureReport {
    EquilibriumPoint point;
    std::size_t n = 0;
    Christoffel christoffel;
    std::vector<double> riemann;  // R^a_bcd at ((a*n + b)*n + c)*n + d
    Matrix ricci;
    double scalar = 0.0;
    double det_g = 0.0;

    double riemann_at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return riemann[((a * n + b) * n + c) * n + d];
    }
};

namespace detail {

// Metric, its inverse and derivatives at one point.
struct MetricDerivatives {
    std::size_t n = 0;
    Matrix g, ginv;
    double det = 0.0;
    std::vector<double> dg;   // d_c g_ab at (c*n + a)*n + b
    std::vector<double> ddg;  // d_c d_d g_ab at ((c*n + d)*n + a)*n + b

    double d1(std::size_t c, std::size_t a, std::size_t b) const { return dg[(c * n + a) * n + b]; }
    double d2(std::size_t c, std::size_t d, std::size_t a, std::size_t b) const {
        return ddg[((c * n + d) * n + a) * n + b];
    }
};

inline MetricDerivatives metric_derivatives(const MetricField& field, const EquilibriumPoint& point, int order) {
    const std::size_t n = field.dimension();
    const auto jets = field.component_jets(point, order);
    MetricDerivatives md;
    md.n = n;
    md.g = Matrix(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) md.g(a, b) = jets[a * n + b].value();
    md.det = determinant(md.g);
    if (is_degenerate(md.g, md.det))
        throw DegenerateMetricError("metric is degenerate at the point (det g = " + detail::show(md.det) + ")");
    md.ginv = inverse(md.g);
    md.dg.assign(n * n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) md.dg[(c * n + a) * n + b] = jets[a * n + b].first_partial(c);
    if (order >= 2) {
        md.ddg.assign(n * n * n * n, 0.0);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        md.ddg[((c * n + d) * n + a) * n + b] = jets[a * n + b].second_partial(c, d);
    }
    return md;
}

// Christoffel symbols of the first kind: (d_b g_dc + d_c g_db - d_d g_bc) / 2.
inline double first_kind(const MetricDerivatives& md, std::size_t d, std::size_t b, std::size_t c) {
    return 0.5 * (md.d1(b, d, c) + md.d1(c, d, b) - md.d1(d, b, c));
}

inline double first_kind_derivative(const MetricDerivatives& md, std::size_t e, std::size_t d, std::size_t b,
                                    std::size_t c) {
    return 0.5 * (md.d2(e, b, d, c) + md.d2(e, c, d, b) - md.d2(e, d, b, c));
}

inline Christoffel second_kind(const MetricDerivatives& md) {
    const std::size_t n = md.n;
    Christoffel gamma{n, std::vector<double>(n * n * n, 0.0)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = b; c < n; ++c) {
                double s = 0.0;
                for (std::size_t d = 0; d < n; ++d) s += md.ginv(a, d) * first_kind(md, d, b, c);
                gamma.data[(a * n + b) * n + c] = s;
                gamma.data[(a * n + c) * n + b] = s;
            }
    return gamma;
}

}  // namespace detail

inline Christoffel christoffel(const MetricField& field, const EquilibriumPoint& point) {
    return detail::second_kind(detail::metric_derivatives(field, point, 1));
}

inline CurvatureReport scalar_curvature(const MetricField& field, const EquilibriumPoint& point) {
    const auto md = detail::metric_derivatives(field, point, 2);
    const std::size_t n = md.n;
    CurvatureReport rep;
    rep.point = point;
    rep.n = n;
    rep.det_g = md.det;
    rep.christoffel = detail::second_kind(md);
    const Christoffel& gamma = rep.christoffel;

    // d_e g^{ad} = -g^{ap} (d_e g_pq) g^{qd}
    std::vector<double> dginv(n * n * n, 0.0);  // [(e*n + a)*n + d]
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t d = 0; d < n; ++d) {
                double s = 0.0;
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q) s += md.ginv(a, p) * md.d1(e, p, q) * md.ginv(q, d);
                dginv[(e * n + a) * n + d] = -s;
            }

    // d_e Gamma^a_bc at [((e*n + a)*n + b)*n + c]
    std::vector<double> dgamma(n * n * n * n, 0.0);
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = b; c < n; ++c) {
                    double s = 0.0;
                    for (std::size_t d = 0; d < n; ++d)
                        s += dginv[(e * n + a) * n + d] * detail::first_kind(md, d, b, c) +
                             md.ginv(a, d) * detail::first_kind_derivative(md, e, d, b, c);
                    dgamma[((e * n + a) * n + b) * n + c] = s;
                    dgamma[((e * n + a) * n + c) * n + b] = s;
                }
    auto dG = [&](std::size_t e, std::size_t a, std::size_t b, std::size_t c) {
        return dgamma[((e * n + a) * n + b) * n + c];
    };

    // R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
    rep.riemann.assign(n * n * n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    double r = dG(c, a, d, b) - dG(d, a, c, b);
                    for (std::size_t e = 0; e < n; ++e) r += gamma(a, c, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, c, b);
                    rep.riemann[((a * n + b) * n + c) * n + d] = r;
                    rep.riemann[((a * n + b) * n + d) * n + c] = -r;
                }

    rep.ricci = Matrix(n);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a) s += rep.riemann_at(a, b, a, d);
            rep.ricci(b, d) = s;
        }
    double R = 0.0;
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t d = 0; d < n; ++d) R += md.ginv(b, d) * rep.ricci(b, d);
    rep.scalar = R;
    return rep;
}

// Second law: Hess(Phi) positive semidefinite at the point.
inline bool hessian_is_convex(const SystemSpec& spec, const EquilibriumPoint& point) {
    const Jet phi = evaluate(spec, point, 2);
    const std::size_t n = spec.dimension();
    Matrix h(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) h(a, b) = phi.second_partial(a, b);
    return is_positive_semidefinite(h);
}

inline MetricField direct_metric_from_strings(std::string name, std::vector<std::string> coordinates,
                                              std::map<std::string, double> parameters,
                                              const std::vector<std::string>& components,
                                              std::vector<DomainBound> domain = {}) {
    DirectMetric m{std::move(name), std::move(coordinates), std::move(parameters), {}, std::move(domain)};
    for (const auto& c : components) m.components.push_back(parse(c));
    return MetricField::direct(std::move(m));
}

inline std::vector<std::string> closed_form_names() { return {"kerr_closed", "kn_closed", "rn_closed", "vdw_closed"}; }

// Closed-form metrics as direct fields. Line-element cross terms
// c dE^a dE^b contribute c/2 to g_ab and g_ba.
inline MetricField closed_form_metric(const std::string& name) {
    const std::vector<DomainBound> positive_entropy{{"S", Expr::number(0.0)}};
    if (name == "vdw_closed") {
        const std::string phi = "((exp(S/k)/(V-b))^(2/3) - a/V)";
        const std::string pref = "2/(9*k^2)*" + phi + "*(" + phi + " + a/V)";
        const std::string ss = pref + "*2";
        const std::string sv = pref + "*(-2*k/(V-b))";
        const std::string vv = pref + "*(5*k^2/(V-b)^2) - 2*a*" + phi + "/V^3";
        return direct_metric_from_strings(name, {"S", "V"}, {{"a", 1.0}, {"b", 0.1}, {"k", 1.0}}, {ss, sv, sv, vv},
                                          {{"V", Expr::identifier("b")}});
    }
    if (name == "kn_closed") {
        const std::string m2 = "(pi*J^2/S + S/(4*pi)*(1 + pi*Q^2/S)^2)";
        const std::string ss = "(-S^4 + pi^2*(4*J^2 + Q^4)*(6*S^2 + 8*pi*S*Q^2 + 3*pi^2*(4*J^2 + Q^4)))/(64*pi^2*S^4*" + m2 + ")";
        const std::string sq = "Q/(4*S^2*" + m2 + ")*(2*pi*J^2 - (pi*Q^2 + S)*" + m2 + ")";
        const std::string sj = "-J/(4*S^2*" + m2 + ")*(2*pi*" + m2 + " + pi*Q^2 + S)";
        const std::string qq = "(4*pi^2*J^2*(3*pi*Q^2 + S) + (pi*Q^2 + S)^3)/(8*pi*S^2*" + m2 + ")";
        const std::string qj = "-pi*J*Q/(2*S^2*" + m2 + ")*(pi*Q^2 + S)";
        const std::string jj = "(pi*Q^2 + S)^2/(4*S^2*" + m2 + ")";
        return direct_metric_from_strings(name, {"S", "J", "Q"}, {}, {ss, sj, sq, sj, jj, qj, sq, qj, qq},
                                          positive_entropy);
    }
    if (name == "rn_closed") {
        const std::string pref = "(pi*Q^2 + S)/(2*S^2)";
        return direct_metric_from_strings(
            name, {"S", "Q"}, {},
            {pref + "*(3*pi*Q^2 - S)/(8*pi*S)", pref + "*(-Q/2)", pref + "*(-Q/2)", pref + "*S"}, positive_entropy);
    }
    if (name == "kerr_closed") {
        const std::string pref = "pi*S/(S^2 + 4*pi^2*J^2)";
        const std::string ss = pref + "*(3*pi^2*J^4/S^4 + 3*J^2/(2*S^2) - 1/(16*pi^2))";
        const std::string sj = pref + "*(-J/S^3*(3*S^2 + 4*pi^2*J^2)/2)";
        return direct_metric_from_strings(name, {"S", "J"}, {}, {ss, sj, sj, pref}, positive_entropy);
    }
    throw InvalidArgument("unknown closed-form metric '" + name + "'");
}

// [metric] coordinates, components (row-major; entries separated by ',' and
// optionally rows by ';'), optional domain; [parameters].
inline MetricField direct_metric_from_text(const SectionedText& doc) {
    DirectMetric m;
    if (const auto* n = doc.find("metric", "name")) m.name = *n;
    else if (const auto* n2 = doc.find("system", "name")) m.name = *n2;
    else m.name = "direct";
    m.coordinates = split(doc.require("metric", "coordinates"), ',');
    std::string components = doc.require("metric", "components");
    std::replace(components.begin(), components.end(), ';', ',');
    for (const auto& c : split(components, ',')) m.components.push_back(parse(c));
    if (const auto* d = doc.find("metric", "domain")) m.domain = parse_domain(*d);
    m.parameters = read_parameters(doc);
    return MetricField::direct(std::move(m));
}

// A file with a [metric] section defines a direct field, otherwise a system.
inline MetricField field_from_text(const SectionedText& doc, MetricKind kind = MetricKind::natural) {
    if (doc.has("metric")) return direct_metric_from_text(doc);
    return MetricField::from_system(system_from_text(doc), kind);
}

}  // namespace gtd
