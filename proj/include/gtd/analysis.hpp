#pragma once
/**
 * Grid scans of metric-derived quantities, detection of singular loci along
 * coordinate lines, and power-law fits of curvature divergences.
 */

#include <gtd/errors.hpp>
#include <gtd/geometry.hpp>
#include <gtd/system.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace gtd {

struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;
    bool pinned = false;

    static Axis range(std::string name, double start, double stop, std::size_t count) {
        return Axis{std::move(name), start, stop, count, false};
    }
    static Axis pin(std::string name, double value) { return Axis{std::move(name), value, value, 1, true}; }

    // Inclusive endpoints.
    double value(std::size_t i) const {
        if (pinned || count == 1) return start;
        if (i + 1 == count) return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct GridSpec {
    std::vector<Axis> axes;
    std::size_t max_points = 1'000'000;

    std::size_t total() const {
        std::size_t t = 1;
        for (const auto& a : axes) t *= a.count;
        return t;
    }

    // Coordinates of the flat index; the last axis varies fastest.
    std::vector<double> point(std::size_t flat) const {
        std::vector<double> c(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            c[k] = axes[k].value(flat % axes[k].count);
            flat /= axes[k].count;
        }
        return c;
    }
};

// Validates the grid against the field and returns it with axes in coordinate order.
inline GridSpec resolve_grid(const MetricField& field, const GridSpec& grid) {
    GridSpec out;
    out.max_points = grid.max_points;
    for (const auto& coord : field.coordinates()) {
        const Axis* found = nullptr;
        for (const auto& a : grid.axes)
            if (a.name == coord) {
                if (found) throw InvalidArgument("axis '" + coord + "' given twice");
                found = &a;
            }
        if (!found) throw InvalidArgument("grid has no range or pin for coordinate '" + coord + "'");
        if (found->count < 1) throw InvalidArgument("axis '" + coord + "' needs at least one point");
        if (!found->pinned && found->count > 1 && !(found->start < found->stop))
            throw InvalidArgument("axis '" + coord + "' needs start < stop");
        out.axes.push_back(*found);
    }
    for (const auto& a : grid.axes)
        if (std::find(field.coordinates().begin(), field.coordinates().end(), a.name) == field.coordinates().end())
            throw InvalidArgument("grid axis '" + a.name + "' is not a coordinate of " + field.name());
    if (out.total() > out.max_points)
        throw InvalidArgument("grid has " + std::to_string(out.total()) + " points, cap is " +
                              std::to_string(out.max_points));
    return out;
}

enum class Quantity { scalar_curvature, det_g, potential, intensive };

inline const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::scalar_curvature: return "curvature";
        case Quantity::det_g: return "detg";
        case Quantity::potential: return "potential";
        case Quantity::intensive: return "intensive";
    }
    return "?";
}

inline Quantity quantity_from_string(const std::string& s) {
    if (s == "curvature" || s == "scalar_curvature") return Quantity::scalar_curvature;
    if (s == "detg" || s == "det_g") return Quantity::det_g;
    if (s == "potential") return Quantity::potential;
    if (s == "intensive") return Quantity::intensive;
    throw InvalidArgument("unknown quantity '" + s + "'");
}

enum class PointStatus { ok, degenerate, domain_error };

inline const char* to_string(PointStatus s) {
    switch (s) {
        case PointStatus::ok: return "ok";
        case PointStatus::degenerate: return "degenerate";
        case PointStatus::domain_error: return "domain_error";
    }
    return "?";
}

struct ScanSample {
    std::vector<double> coordinates;
    std::vector<double> values;  // empty unless status == ok
    PointStatus status = PointStatus::ok;

    friend bool operator==(const ScanSample&, const ScanSample&) = default;
};

// stability: zero of det Hess(Phi); potential_zero: zero of Phi (a factor of
// det g for the natural metric); metric: zero of det g for other fields.
enum class RootKind { stability, potential_zero, metric };

inline const char* to_string(RootKind k) {
    switch (k) {
        case RootKind::stability: return "stability";
        case RootKind::potential_zero: return "potential_zero";
        case RootKind::metric: return "metric";
    }
    return "?";
}

struct SingularPoint {
    std::vector<double> coordinates;
    std::string axis;
    RootKind kind = RootKind::metric;
    double function_value = 0.0;  // bisected function at the root
    double det_g = 0.0;
    double bracket_width = 0.0;
    std::optional<double> stability_residual;  // PV^3 - aV + 2ab for van der Waals systems

    friend bool operator==(const SingularPoint&, const SingularPoint&) = default;
};

struct FitResult {
    bool divergent = false;
    double exponent = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;
    std::size_t samples = 0;
    std::string note;

    friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct ScanReport {
    GridSpec grid;
    std::string field_name;
    Quantity quantity = Quantity::scalar_curvature;
    std::vector<std::string> coordinate_names;
    std::vector<std::string> value_names;
    std::vector<ScanSample> samples;
    std::vector<SingularPoint> singular_points;
    std::vector<FitResult> fits;

    std::size_t count(PointStatus s) const {
        return static_cast<std::size_t>(
            std::count_if(samples.begin(), samples.end(), [s](const ScanSample& x) { return x.status == s; }));
    }
};

inline std::vector<std::string> value_names(const MetricField& field, Quantity q) {
    switch (q) {
        case Quantity::scalar_curvature: return {"R"};
        case Quantity::det_g: return {"det_g"};
        case Quantity::potential: return {"Phi"};
        case Quantity::intensive: {
            std::vector<std::string> names;
            for (const auto& c : field.coordinates()) names.push_back("I_" + c);
            return names;
        }
    }
    return {};
}

// One grid point; domain and degeneracy failures become markers.
inline ScanSample evaluate_sample(const MetricField& field, Quantity q, std::vector<double> coords) {
    ScanSample s{std::move(coords), {}, PointStatus::ok};
    const EquilibriumPoint p{s.coordinates};
    try {
        switch (q) {
            case Quantity::scalar_curvature: s.values = {scalar_curvature(field, p).scalar}; break;
            case Quantity::det_g: s.values = {metric_determinant(field, p)}; break;
            case Quantity::potential:
                if (!field.system()) throw InvalidArgument("potential is undefined for a direct metric");
                s.values = {potential_value(*field.system(), p)};
                break;
            case Quantity::intensive:
                if (!field.system()) throw InvalidArgument("intensive variables are undefined for a direct metric");
                s.values = intensive_variables(*field.system(), p);
                break;
        }
        for (double v : s.values)
            if (!std::isfinite(v)) throw DomainError("non-finite value");
    } catch (const DegenerateMetricError&) {
        s.values.clear();
        s.status = PointStatus::degenerate;
    } catch (const DomainError&) {
        s.values.clear();
        s.status = PointStatus::domain_error;
    }
    return s;
}

inline std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Evaluates fn(i) for i in [0, count) into slot i; the result does not depend on the worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Fn fn) {
    std::vector<T> out(count);
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline ScanReport grid_scan(const MetricField& field, const GridSpec& grid_in, Quantity q, std::size_t workers = 1) {
    ScanReport rep;
    rep.grid = resolve_grid(field, grid_in);
    rep.field_name = field.name();
    rep.quantity = q;
    rep.coordinate_names = field.coordinates();
    rep.value_names = value_names(field, q);
    const GridSpec& grid = rep.grid;
    rep.samples = parallel_map<ScanSample>(grid.total(), workers,
                                           [&](std::size_t i) { return evaluate_sample(field, q, grid.point(i)); });
    return rep;
}

namespace detail {

using LineFunction = std::function<std::optional<double>(const std::vector<double>&)>;

struct LocusFunction {
    RootKind kind;
    LineFunction fn;
};

inline std::vector<LocusFunction> locus_functions(const MetricField& field) {
    auto guard = [](auto&& f) {
        return [f](const std::vector<double>& x) -> std::optional<double> {
            try {
                const double v = f(EquilibriumPoint{x});
                if (!std::isfinite(v)) return std::nullopt;
                return v;
            } catch (const DomainError&) {
                return std::nullopt;
            }
        };
    };
    std::vector<LocusFunction> fns;
    if (const SystemSpec* spec = field.system()) {
        const SystemSpec s = *spec;
        fns.push_back({RootKind::stability, guard([s](const EquilibriumPoint& p) {
                           const Jet phi = evaluate(s, p, 2);
                           const std::size_t n = s.dimension();
                           Matrix h(n);
                           for (std::size_t a = 0; a < n; ++a)
                               for (std::size_t b = 0; b < n; ++b) h(a, b) = phi.second_partial(a, b);
                           return determinant(h);
                       })});
        if (field.kind() == MetricKind::natural)
            fns.push_back({RootKind::potential_zero,
                           guard([s](const EquilibriumPoint& p) { return potential_value(s, p); })});
    } else {
        const MetricField f = field;
        fns.push_back({RootKind::metric, guard([f](const EquilibriumPoint& p) { return metric_determinant(f, p); })});
    }
    return fns;
}

}  // namespace detail

inline constexpr double bisection_relative_tolerance = 1e-12;

// Bisects every sign change of det g (split into its Hessian and potential
// factors for natural fields) along each coordinate line of the grid.
inline std::vector<SingularPoint> find_singular_locus(const MetricField& field, const GridSpec& grid_in) {
    const GridSpec grid = resolve_grid(field, grid_in);
    const auto fns = detail::locus_functions(field);
    const std::size_t dims = grid.axes.size();
    std::vector<SingularPoint> roots;
    auto coords_of = [&](std::vector<std::size_t> idx) {
        std::vector<double> c(dims);
        for (std::size_t k = 0; k < dims; ++k) c[k] = grid.axes[k].value(idx[k]);
        return c;
    };
    for (std::size_t axis = 0; axis < dims; ++axis) {
        const Axis& line_axis = grid.axes[axis];
        if (line_axis.pinned || line_axis.count < 2) continue;
        // iterate over all index combinations of the other axes
        std::size_t lines = 1;
        for (std::size_t k = 0; k < dims; ++k)
            if (k != axis) lines *= grid.axes[k].count;
        for (std::size_t line = 0; line < lines; ++line) {
            std::vector<std::size_t> idx(dims, 0);
            std::size_t rest = line;
            for (std::size_t k = dims; k-- > 0;) {
                if (k == axis) continue;
                idx[k] = rest % grid.axes[k].count;
                rest /= grid.axes[k].count;
            }
            for (const auto& lf : fns) {
                std::vector<std::optional<double>> vals(line_axis.count);
                for (std::size_t i = 0; i < line_axis.count; ++i) {
                    idx[axis] = i;
                    vals[i] = lf.fn(coords_of(idx));
                }
                for (std::size_t i = 0; i + 1 < line_axis.count; ++i) {
                    if (!vals[i] || !vals[i + 1]) continue;
                    const double f0 = *vals[i], f1 = *vals[i + 1];
                    if (f0 == 0.0 && i > 0) continue;  // counted as the right end of the previous bracket
                    if (!(f0 == 0.0 || f1 == 0.0 || (f0 < 0.0) != (f1 < 0.0))) continue;
                    idx[axis] = i;
                    std::vector<double> x = coords_of(idx);
                    double lo = line_axis.value(i), hi = line_axis.value(i + 1);
                    double flo = f0;
                    double root = f0 == 0.0 ? lo : (f1 == 0.0 ? hi : 0.5 * (lo + hi));
                    double froot = f0 == 0.0 ? f0 : f1;
                    bool ok = true;
                    if (f0 != 0.0 && f1 != 0.0) {
                        for (int it = 0; it < 400; ++it) {
                            const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
                            if (hi - lo <= bisection_relative_tolerance * scale) break;
                            const double mid = 0.5 * (lo + hi);
                            if (mid <= lo || mid >= hi) break;
                            x[axis] = mid;
                            const auto fm = lf.fn(x);
                            if (!fm) {
                                ok = false;
                                break;
                            }
                            if (*fm == 0.0) {
                                lo = hi = mid;
                                break;
                            }
                            if ((*fm < 0.0) == (flo < 0.0)) {
                                lo = mid;
                                flo = *fm;
                            } else {
                                hi = mid;
                            }
                        }
                        root = 0.5 * (lo + hi);
                        x[axis] = root;
                        const auto fr = lf.fn(x);
                        if (!fr) ok = false;
                        else froot = *fr;
                        // sign changes through a pole are not roots
                        if (ok && std::abs(froot) > std::max(std::abs(f0), std::abs(f1))) ok = false;
                    }
                    if (!ok) continue;
                    x[axis] = root;
                    SingularPoint sp;
                    sp.coordinates = x;
                    sp.axis = line_axis.name;
                    sp.kind = lf.kind;
                    sp.function_value = froot;
                    sp.bracket_width = hi - lo;
                    try {
                        sp.det_g = metric_determinant(field, EquilibriumPoint{x});
                    } catch (const DomainError&) {
                        sp.det_g = 0.0;
                    }
                    if (field.system() && field.system()->family == "vdw") {
                        try {
                            sp.stability_residual = stability_residual_vdw(*field.system(), EquilibriumPoint{x});
                        } catch (const DomainError&) {
                        }
                    }
                    roots.push_back(std::move(sp));
                }
            }
        }
    }
    return roots;
}

inline constexpr double curvature_noise_floor = 1e-8;

// Least squares of log|v| against log d; exponent = -slope.
inline FitResult fit_power_law(std::span<const double> distances, std::span<const double> values,
                               double noise_floor = curvature_noise_floor) {
    if (distances.size() != values.size()) throw InvalidArgument("distances and values differ in length");
    std::vector<double> xs, ys;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0) || !std::isfinite(values[i])) continue;
        ++valid;
        if (std::abs(values[i]) <= noise_floor) continue;
        xs.push_back(std::log(distances[i]));
        ys.push_back(std::log(std::abs(values[i])));
    }
    if (valid < 4) throw InvalidArgument("power-law fit needs at least 4 valid samples, got " + std::to_string(valid));
    FitResult r;
    r.samples = xs.size();
    if (xs.size() < 4) {
        r.note = "no divergence: values below noise floor";
        return r;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    r.exponent = -slope;
    r.intercept = my - slope * mx;
    r.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    r.divergent = r.exponent > 0.0;
    if (!r.divergent) r.note = "no divergence: |value| does not grow toward the center";
    return r;
}

struct Approach {
    EquilibriumPoint center;
    std::vector<double> direction;
    std::vector<double> offsets;
};

// base * 2^-m for m = first..last
inline std::vector<double> geometric_offsets(double base, int first, int last) {
    std::vector<double> out;
    for (int m = first; m <= last; ++m) out.push_back(std::ldexp(base, -m));
    return out;
}

inline FitResult fit_divergence_exponent(const MetricField& field, const Approach& approach) {
    const std::size_t n = field.dimension();
    if (approach.center.size() != n || approach.direction.size() != n)
        throw InvalidArgument("approach center and direction must have " + std::to_string(n) + " components");
    double norm = 0.0;
    for (double d : approach.direction) norm += d * d;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw InvalidArgument("approach direction must be nonzero");
    std::vector<double> dist, vals;
    for (double off : approach.offsets) {
        std::vector<double> x = approach.center.values;
        for (std::size_t k = 0; k < n; ++k) x[k] += off * approach.direction[k];
        const ScanSample s = evaluate_sample(field, Quantity::scalar_curvature, x);
        if (s.status != PointStatus::ok) continue;
        dist.push_back(std::abs(off) * norm);
        vals.push_back(s.values[0]);
    }
    return fit_power_law(dist, vals);
}

struct RnCriticalPoints {
    double charge = 0.0;
    double extremal_entropy = 0.0;        // pi Q^2, M = Q
    double zero_curvature_entropy = 0.0;  // pi Q^2 / 3, M = 2Q / sqrt(3)
    double extremal_mass = 0.0;
    double zero_curvature_mass = 0.0;
    double extremal_det_g = 0.0;
    double zero_curvature_scalar = 0.0;
    bool curvature_changes_sign = false;
};

inline RnCriticalPoints rn_critical_points(double Q) {
    if (!(Q > 0.0)) throw InvalidArgument("charge must be positive");
    const SystemSpec rn = builtin("reissner_nordstrom");
    const MetricField field = MetricField::from_system(rn);
    RnCriticalPoints c;
    c.charge = Q;
    c.extremal_entropy = std::numbers::pi * Q * Q;
    c.zero_curvature_entropy = c.extremal_entropy / 3.0;
    c.extremal_mass = potential_value(rn, {{c.extremal_entropy, Q}});
    c.zero_curvature_mass = potential_value(rn, {{c.zero_curvature_entropy, Q}});
    c.extremal_det_g = metric_determinant(field, {{c.extremal_entropy, Q}});
    c.zero_curvature_scalar = scalar_curvature(field, {{c.zero_curvature_entropy, Q}}).scalar;
    const double below = scalar_curvature(field, {{c.zero_curvature_entropy * (1.0 - 1e-3), Q}}).scalar;
    const double above = scalar_curvature(field, {{c.zero_curvature_entropy * (1.0 + 1e-3), Q}}).scalar;
    c.curvature_changes_sign = (below < 0.0) != (above < 0.0) && below != 0.0 && above != 0.0;
    return c;
}

}  // namespace gtd
