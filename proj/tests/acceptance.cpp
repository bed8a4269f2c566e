// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <gtd/gtd.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace gtd;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(12);
double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
    if (!cond && o.pass) o.detail = what;
    o.pass = o.pass && cond;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

MetricField sphere(double r) {
    return direct_metric_from_strings("sphere", {"theta", "phi"}, {{"r", r}}, {"r^2", "0", "0", "r^2*sin(theta)^2"});
}

MetricField field(const std::string& name, const std::map<std::string, double>& params = {}) {
    return MetricField::from_system(with_parameters(builtin(name), params));
}

double max_abs_curvature(const ScanReport& rep, std::size_t& ok) {
    double worst = 0.0;
    ok = 0;
    for (const auto& s : rep.samples)
        if (s.status == PointStatus::ok) {
            ++ok;
            worst = std::max(worst, std::abs(s.values[0]));
        }
    return worst;
}

EquilibriumPoint random_point(const SystemSpec& s) {
    for (;;) {
        EquilibriumPoint p;
        for (const auto& [lo, hi] : s.sample_box) p.values.push_back(uniform(lo, hi));
        if (in_domain(s, p)) return p;
    }
}

PhasePoint random_phase_point(std::size_t n) {
    PhasePoint p;
    p.phi = uniform(-2, 2);
    for (std::size_t a = 0; a < n; ++a) p.extensive.push_back(uniform(-2, 2));
    for (std::size_t a = 0; a < n; ++a) p.intensive.push_back(uniform(-2, 2));
    return p;
}

Outcome sphere_oracle() {
    Outcome o;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const EquilibriumPoint p{{0.1 + (pi - 0.2) * i / 19.0, uniform(0, 2 * pi)}};
        worst = std::max(worst, std::abs(scalar_curvature(sphere(1.0), p).scalar - 2.0));
    }
    for (double r : {0.5, 1.0, 3.0})
        for (int i = 0; i < 5; ++i) {
            const EquilibriumPoint p{{uniform(0.2, pi - 0.2), uniform(0, 2 * pi)}};
            worst = std::max(worst, std::abs(scalar_curvature(sphere(r), p).scalar - 2.0 / (r * r)));
        }
    require(o, worst <= 1e-9, "max |R - 2/r^2| = " + fmt(worst));
    if (o.pass) o.detail = "max |R - 2/r^2| = " + fmt(worst);
    return o;
}

Outcome flat_grid(const std::string& system, const std::map<std::string, double>& params, double v_lo) {
    Outcome o;
    const ScanReport rep = grid_scan(field(system, params), GridSpec{{Axis::range("S", 0.1, 2, 20), Axis::range("V", v_lo, 3, 20)}},
                                     Quantity::scalar_curvature, default_workers());
    std::size_t ok = 0;
    const double worst = max_abs_curvature(rep, ok);
    require(o, ok == 400, std::to_string(400 - ok) + " grid points not evaluable");
    require(o, worst <= 1e-8, "max |R| = " + fmt(worst));
    if (o.pass) o.detail = "max |R| = " + fmt(worst) + " over 400 points";
    return o;
}

Outcome closed_forms() {
    Outcome o;
    double worst = 0.0;
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"vdw", "vdw_closed"}, {"kerr_newman", "kn_closed"}, {"reissner_nordstrom", "rn_closed"}, {"kerr", "kerr_closed"}};
    for (const auto& [system, closed] : pairs) {
        const SystemSpec s = builtin(system);
        const MetricField pipeline = MetricField::from_system(s), closed_field = closed_form_metric(closed);
        for (int t = 0; t < 50; ++t) {
            const EquilibriumPoint p = random_point(s);
            const Matrix a = metric_at(pipeline, p).components, b = metric_at(closed_field, p).components;
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < a.size(); ++j) {
                    const double rel = std::abs(a(i, j) - b(i, j)) / std::max(std::abs(b(i, j)), 1e-300);
                    worst = std::max(worst, a(i, j) == b(i, j) ? 0.0 : rel);
                }
        }
    }
    require(o, worst <= 1e-10, "max relative component error = " + fmt(worst));
    if (o.pass) o.detail = "max relative component error = " + fmt(worst) + " (4 systems x 50 points)";
    return o;
}

Outcome rn_closed_curvature() {
    Outcome o;
    const MetricField rn = field("reissner_nordstrom");
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double Q = uniform(0.5, 2), u = pi * Q * Q;
        double S = 0.0;
        do S = uniform(0.5 * u, 10 * u);
        while (std::abs(S - u) < 0.1 * u);
        const double expected = -8 * pi * pi * Q * Q * S * S * (u - 3 * S) / (std::pow(u + S, 3) * std::pow(u - S, 2));
        worst = std::max(worst, std::abs(scalar_curvature(rn, EquilibriumPoint{{S, Q}}).scalar - expected) / std::abs(expected));
    }
    const double spot = scalar_curvature(rn, EquilibriumPoint{{2 * pi, 1.0}}).scalar;
    const double spot_err = std::abs(spot - 160.0 / 27.0) / (160.0 / 27.0);
    require(o, worst <= 1e-6, "max relative error = " + fmt(worst));
    require(o, spot_err <= 1e-8, "R(2pi, 1) relative error = " + fmt(spot_err));
    if (o.pass) o.detail = "max relative error = " + fmt(worst) + ", R(2pi,1) error = " + fmt(spot_err);
    return o;
}

Outcome rn_critical() {
    Outcome o;
    std::string detail;
    for (double Q : {0.5, 1.0, 2.0}) {
        const RnCriticalPoints c = rn_critical_points(Q);
        require(o, std::abs(c.zero_curvature_scalar) <= 1e-8, "|R(S = pi Q^2/3)| = " + fmt(c.zero_curvature_scalar));
        require(o, c.curvature_changes_sign, "no sign change of R across pi Q^2/3");
        const double u = pi * Q * Q;
        const auto roots = find_singular_locus(field("reissner_nordstrom"),
                                               GridSpec{{Axis::range("S", 0.3 * u, 3 * u, 200), Axis::pin("Q", Q)}});
        std::size_t found = 0;
        for (const auto& r : roots) {
            if (r.kind != RootKind::stability) continue;
            ++found;
            require(o, std::abs(r.coordinates[0] - u) <= 1e-9 * u, "bisection root off by " + fmt((r.coordinates[0] - u) / u));
        }
        require(o, found == 1, "expected one det g root, found " + std::to_string(found));
        // det g shrinks toward the extremal entropy
        const MetricField f = field("reissner_nordstrom");
        double prev = std::abs(metric_determinant(f, EquilibriumPoint{{u * 1.1, Q}}));
        for (double off : {1e-2, 1e-4, 1e-6}) {
            const double d = std::abs(metric_determinant(f, EquilibriumPoint{{u * (1 + off), Q}}));
            require(o, d < prev, "det g does not decrease toward pi Q^2");
            prev = d;
        }
    }
    const FitResult fit = fit_divergence_exponent(field("reissner_nordstrom"),
                                                  Approach{EquilibriumPoint{{pi, 1.0}}, {1.0, 0.0}, geometric_offsets(pi, 4, 16)});
    require(o, fit.divergent && std::abs(fit.exponent - 2.0) <= 0.05, "fitted exponent " + fmt(fit.exponent));
    if (o.pass) o.detail = "zero-curvature and extremal points located, exponent = " + fmt(fit.exponent);
    return o;
}

Outcome kerr_flat() {
    Outcome o;
    const ScanReport rep = grid_scan(field("kerr"), GridSpec{{Axis::range("S", pi, 30, 30), Axis::range("J", 0.05, 2, 30)}},
                                     Quantity::scalar_curvature, default_workers());
    std::size_t ok = 0;
    const double worst = max_abs_curvature(rep, ok);
    require(o, ok > 0, "no nondegenerate points");
    require(o, worst <= 1e-8, "max |R| = " + fmt(worst));
    if (o.pass) o.detail = "max |R| = " + fmt(worst) + " over " + std::to_string(ok) + " nondegenerate points";
    return o;
}

Outcome vdw_stability() {
    Outcome o;
    double worst = 0.0;
    std::size_t total = 0;
    for (double a : {0.5, 1.0, 2.0})
        for (double b : {0.0, 0.05, 0.1}) {
            const MetricField f = field("vdw", {{"a", a}, {"b", b}});
            std::size_t found = 0;
            for (double S : {0.0, 0.5, 1.0, 2.0}) {
                const GridSpec grid{{Axis::pin("S", S), Axis::range("V", b + 0.01, 50.0, 300)}};
                for (const auto& r : find_singular_locus(f, grid)) {
                    if (r.kind != RootKind::stability) continue;
                    ++found;
                    worst = std::max(worst, std::abs(r.stability_residual.value_or(INFINITY)));
                }
            }
            require(o, found > 0, "no det g root for a=" + fmt(a) + " b=" + fmt(b));
            total += found;
        }
    require(o, worst <= 1e-6, "max |PV^3 - aV + 2ab| = " + fmt(worst));
    if (o.pass) o.detail = std::to_string(total) + " roots, max |PV^3 - aV + 2ab| = " + fmt(worst);
    return o;
}

Outcome legendre() {
    Outcome o;
    double worst = 0.0, identity = 0.0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (int t = 0; t < 100; ++t) {
            const PhasePoint p = random_phase_point(n);
            worst = std::max(worst, legendre_invariance_residual(LegendreMap::total(n), p));
            identity = std::max(identity, legendre_invariance_residual(LegendreMap::identity(), p));
        }
    require(o, worst <= 1e-9, "total map residual " + fmt(worst));
    require(o, identity == 0.0, "identity map residual " + fmt(identity));
    if (o.pass) o.detail = "total residual = " + fmt(worst) + ", identity residual = 0";
    return o;
}

Outcome identities() {
    Outcome o;
    double first_law = 0.0;
    for (const auto& name : builtin_names()) {
        const SystemSpec s = builtin(name);
        for (int t = 0; t < 20; ++t) {
            const PhasePoint lifted = lift_point(s, random_point(s));
            std::vector<double> v(s.dimension());
            double scale = 0.0;
            for (std::size_t a = 0; a < v.size(); ++a) {
                v[a] = uniform(-1, 1);
                scale += std::abs(lifted.intensive[a] * v[a]);
            }
            first_law = std::max(first_law, std::abs(theta_residual(s, lifted, v)) / std::max(scale, 1e-300));
        }
    }
    require(o, first_law <= 1e-12, "first-law residual " + fmt(first_law));

    SystemSpec product;
    product.name = "product";
    product.variables = {"E1", "E2"};
    product.potential = parse("E1*E2");
    product.homogeneity = Homogeneity{{1.0, 1.0}, 2.0};
    product.sample_box = {{-2.0, 2.0}, {-2.0, 2.0}};
    double euler = 0.0, gd = 0.0;
    for (const SystemSpec& s : {product, builtin("kerr_newman")}) {
        const Homogeneity h = default_homogeneity(s);
        for (int t = 0; t < 20; ++t) {
            const EquilibriumPoint p = random_point(s);
            std::vector<double> v(s.dimension());
            for (auto& x : v) x = uniform(-1, 1);
            euler = std::max(euler, std::abs(euler_residual(s, p, h.weights, h.beta)) /
                                        std::max(euler_scale(s, p, h.weights, h.beta), 1e-300));
            gd = std::max(gd, std::abs(gibbs_duhem_residual(s, p, v, h.weights, h.beta)) /
                                  std::max(gibbs_duhem_scale(s, p, v, h.weights, h.beta), 1e-300));
        }
    }
    require(o, euler <= 1e-10, "Euler residual " + fmt(euler));
    require(o, gd <= 1e-10, "Gibbs-Duhem residual " + fmt(gd));
    double contact = 0.0;
    const double factorial[] = {1, 1, 2, 6};
    for (std::size_t n = 1; n <= 3; ++n)
        for (int t = 0; t < 10; ++t)
            contact = std::max(contact, std::abs(std::abs(contact_volume_coefficient(random_phase_point(n), n)) - factorial[n]));
    require(o, contact <= 1e-12, "contact coefficient off by " + fmt(contact));
    if (o.pass)
        o.detail = "first law " + fmt(first_law) + ", Euler " + fmt(euler) + ", Gibbs-Duhem " + fmt(gd) + ", contact " + fmt(contact);
    return o;
}

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

Outcome jets_and_parser() {
    Outcome o;
    double leibniz = 0.0, chain = 0.0, exact = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double x0 = uniform(-1, 1), y0 = uniform(-1, 1);
        const Jet x = seed_variable(0, x0, 2, 4), y = seed_variable(1, y0, 2, 4);
        const Jet a = 1.5 + x * y - 0.3 * x * x * x + y * y * y * y;
        const Jet b = -0.7 + x * x * y + 2.0 * y - x * y * y * y;
        const Jet ab = a * b;
        for (std::size_t v = 0; v < 2; ++v) {
            const double want = a.value() * b.first_partial(v) + b.value() * a.first_partial(v);
            leibniz = std::max(leibniz, std::abs(ab.first_partial(v) - want) / std::max(1.0, std::abs(want)));
        }
        const Jet pos = a * a + 0.25;
        const Jet back = exp(ln(pos));
        for (std::size_t k = 0; k < pos.coefficients().size(); ++k)
            chain = std::max(chain, std::abs(back.coefficients()[k] - pos.coefficients()[k]) / std::max(1.0, std::abs(pos.coefficients()[k])));
    }
    for (int t = 0; t < 10; ++t) {
        const double x0 = uniform(-1.5, 1.5), y0 = uniform(0.2, 2.0);
        const Jet f = exp(seed_variable(0, x0, 2, 4)) * power(seed_variable(1, y0, 2, 4), 3.0);
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j) {
                const double want = j > 3 ? 0.0 : std::exp(x0) * factorial(3) / factorial(3 - j) * std::pow(y0, 3 - j);
                const double got = f.partial(MultiIndex{{i, j}});
                exact = std::max(exact, want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want));
            }
    }
    require(o, leibniz <= 1e-10 && chain <= 1e-10 && exact <= 1e-10,
            "jet identities: Leibniz " + fmt(leibniz) + ", chain " + fmt(chain) + ", partials " + fmt(exact));

    const std::vector<std::string> corpus = {
        "(exp(S/k)/(V-b))^(2/3) - a/V", "sqrt(pi*J^2/S + S/(4*pi)*(1 + pi*Q^2/S)^2)", "a/V", "1", "2.5e-3", ".5", "x", "-x",
        "--x", "-x^2", "2^3^2", "(2^3)^2", "a - b - c", "a - (b - c)", "a / b / c", "a / (b / c)", "a * b + c * d",
        "(a + b) * (c + d)", "-(a + b)", "exp(-x^2/2)", "ln(1 + x)", "sqrt(x*x + y*y)", "sin(x)^2 + cos(x)^2", "x^-1",
        "x^(-1/2)", "3*x^2*y - 2*x*y^2 + 7", "E1*E2", "var_1 + var_2", "1e10 * x", "exp(ln(x))", "a*-b", "((((x))))"};
    std::size_t round_trips = 0;
    for (const auto& src : corpus) {
        const Expr e = parse(src);
        if (parse(print(e)) == e) ++round_trips;
    }
    require(o, corpus.size() >= 30 && round_trips == corpus.size(),
            std::to_string(corpus.size() - round_trips) + " of " + std::to_string(corpus.size()) + " expressions failed to round-trip");
    if (o.pass)
        o.detail = "Leibniz " + fmt(leibniz) + ", chain " + fmt(chain) + ", partials " + fmt(exact) + ", " +
                   std::to_string(round_trips) + " expressions round-trip";
    return o;
}

Outcome vdw_divergence() {
    // Probes lie on the V line through each root at offsets 1e-4 * 2^-k. Roots whose whole
    // neighbourhood falls below the degeneracy threshold have no defined curvature and are counted apart.
    Outcome o;
    std::size_t checked = 0, unresolved = 0;
    double weakest = INFINITY;
    for (double a : {0.5, 1.0, 2.0})
        for (double b : {0.0, 0.05, 0.1}) {
            const MetricField f = field("vdw", {{"a", a}, {"b", b}});
            for (double S : {0.0, 1.0}) {
                const GridSpec grid{{Axis::pin("S", S), Axis::range("V", b + 0.01, 50.0, 300)}};
                for (const auto& r : find_singular_locus(f, grid)) {
                    if (r.kind != RootKind::stability) continue;
                    double best = 0.0;
                    bool evaluable = false;
                    for (double sign : {-1.0, 1.0})
                        for (double off : geometric_offsets(1e-4, 0, 13)) {
                            const ScanSample s =
                                evaluate_sample(f, Quantity::scalar_curvature, {r.coordinates[0], r.coordinates[1] + sign * off});
                            if (s.status != PointStatus::ok) continue;
                            evaluable = true;
                            best = std::max(best, std::abs(s.values[0]));
                        }
                    if (!evaluable) {
                        ++unresolved;
                        continue;
                    }
                    weakest = std::min(weakest, best);
                    ++checked;
                }
            }
        }
    require(o, checked > 0, "no stability root with a nondegenerate neighbourhood");
    require(o, weakest > 1e6, "weakest max |R| within 1e-4 of a root = " + fmt(weakest));
    if (o.pass)
        o.detail = std::to_string(checked) + " roots, min over roots of max |R| within 1e-4 = " + fmt(weakest) + "; " +
                   std::to_string(unresolved) + " roots with fully degenerate neighbourhood skipped";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"curvature engine reproduces sphere curvature 2/r^2", sphere_oracle},
        {"ideal gas curvature vanishes", [] { return flat_grid("ideal_gas", {}, 0.5); }},
        {"vdW curvature vanishes at a = 0", [] { return flat_grid("vdw", {{"a", 0.0}, {"b", 0.1}}, 0.6); }},
        {"closed-form metrics equal the Hessian pipeline", closed_forms},
        {"RN curvature matches its closed form", rn_closed_curvature},
        {"RN zero-curvature point, extremal degeneracy and exponent 2", rn_critical},
        {"Kerr curvature vanishes", kerr_flat},
        {"vdW det g roots lie on PV^3 - aV + 2ab = 0", vdw_stability},
        {"phase-space metric is invariant under total Legendre maps", legendre},
        {"first law, Euler, Gibbs-Duhem and contact identities", identities},
        {"jet identities and parser round trip", jets_and_parser},
        {"vdW curvature diverges at stability roots", vdw_divergence},
    };
    int failures = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(), seconds);
    return failures == 0 ? 0 : 1;
}
