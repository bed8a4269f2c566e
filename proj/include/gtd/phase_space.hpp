#pragma once
/**
 * The (2n+1)-dimensional thermodynamic phase space with coordinates
 * (Phi, E^1..E^n, I^1..I^n), the Gibbs 1-form Theta = dPhi - I_a dE^a, the
 * Legendre-invariant metric
 *
 *   G = Theta^2 + (E^a I_a)(dE^c dI_c),
 *
 * Legendre transformations, and residuals of the thermodynamic identities
 * on the equilibrium manifold.
 */

#include <gtd/errors.hpp>
#include <gtd/jet.hpp>
#include <gtd/linalg.hpp>
#include <gtd/system.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <vector>

namespace gtd {

struct PhasePoint {
    double phi = 0.0;
    std::vector<double> extensive;
    std::vector<double> intensive;

    std::size_t n() const { return extensive.size(); }

    // (Phi, E^1..E^n, I^1..I^n)
    std::vector<double> coordinates() const {
        std::vector<double> c{phi};
        c.insert(c.end(), extensive.begin(), extensive.end());
        c.insert(c.end(), intensive.begin(), intensive.end());
        return c;
    }

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

// Set of exchanged index pairs (0-based). Empty is the identity, all indices the total map.
struct LegendreMap {
    std::set<std::size_t> exchanged;

    static LegendreMap identity() { return {}; }
    static LegendreMap total(std::size_t n) {
        LegendreMap m;
        for (std::size_t i = 0; i < n; ++i) m.exchanged.insert(i);
        return m;
    }

    void check(std::size_t n) const {
        for (auto i : exchanged)
            if (i >= n) throw InvalidArgument("Legendre map index " + std::to_string(i) + " out of range for n = " + std::to_string(n));
    }
};

struct PhaseMetricValue {
    PhasePoint point;
    Matrix components;
};

inline PhasePoint lift_point(const SystemSpec& spec, const EquilibriumPoint& point) {
    const Jet phi = evaluate(spec, point, 1);
    PhasePoint p;
    p.phi = phi.value();
    p.extensive = point.values;
    for (std::size_t a = 0; a < spec.dimension(); ++a) p.intensive.push_back(phi.first_partial(a));
    return p;
}

// grad Phi . v - I . v at a phase point sitting over an equilibrium state.
inline double theta_residual(const SystemSpec& spec, const PhasePoint& lifted, std::span<const double> direction) {
    const std::size_t n = spec.dimension();
    if (direction.size() != n || lifted.n() != n) throw InvalidArgument("direction and point must have n components");
    const Jet phi = evaluate(spec, EquilibriumPoint{lifted.extensive}, 1);
    double r = 0.0;
    for (std::size_t a = 0; a < n; ++a) r += (phi.first_partial(a) - lifted.intensive[a]) * direction[a];
    return r;
}

inline double theta_residual(const SystemSpec& spec, const EquilibriumPoint& point, std::span<const double> direction) {
    return theta_residual(spec, lift_point(spec, point), direction);
}

inline PhaseMetricValue phase_metric_at(const PhasePoint& p) {
    const std::size_t n = p.n();
    if (p.intensive.size() != n) throw InvalidArgument("phase point needs as many intensive as extensive values");
    const std::size_t dim = 2 * n + 1;
    std::vector<double> theta(dim, 0.0);
    theta[0] = 1.0;
    for (std::size_t a = 0; a < n; ++a) theta[1 + a] = -p.intensive[a];
    Matrix G(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) G(i, j) = theta[i] * theta[j];
    double ei = 0.0;
    for (std::size_t a = 0; a < n; ++a) ei += p.extensive[a] * p.intensive[a];
    for (std::size_t c = 0; c < n; ++c) {
        G(1 + c, 1 + n + c) += 0.5 * ei;
        G(1 + n + c, 1 + c) += 0.5 * ei;
    }
    return {p, G};
}

// Phi = ~Phi - sum_k ~E^k ~I^k, E^i = -~I^i, I^i = ~E^i over exchanged i.
inline PhasePoint legendre_apply(const LegendreMap& map, const PhasePoint& p) {
    map.check(p.n());
    PhasePoint out = p;
    for (auto i : map.exchanged) {
        out.phi -= p.extensive[i] * p.intensive[i];
        out.extensive[i] = -p.intensive[i];
        out.intensive[i] = p.extensive[i];
    }
    return out;
}

// d(output coordinates) / d(input coordinates).
inline Matrix legendre_jacobian(const LegendreMap& map, const PhasePoint& p) {
    const std::size_t n = p.n();
    map.check(n);
    Matrix J = Matrix::identity(2 * n + 1);
    for (auto i : map.exchanged) {
        const std::size_t e = 1 + i, f = 1 + n + i;
        J(0, e) = -p.intensive[i];
        J(0, f) = -p.extensive[i];
        J(e, e) = 0.0;
        J(e, f) = -1.0;
        J(f, f) = 0.0;
        J(f, e) = 1.0;
    }
    return J;
}

// max |J^T G(map(p)) J - G(p)|
inline double legendre_invariance_residual(const LegendreMap& map, const PhasePoint& p) {
    const Matrix J = legendre_jacobian(map, p);
    const Matrix pulled = J.transposed() * phase_metric_at(legendre_apply(map, p)).components * J;
    return max_abs(pulled - phase_metric_at(p).components);
}

inline Homogeneity default_homogeneity(const SystemSpec& spec) {
    if (spec.homogeneity) return *spec.homogeneity;
    return Homogeneity{std::vector<double>(spec.dimension(), 1.0), 1.0};
}

// sum_a w_a E^a I_a - beta Phi
inline double euler_residual(const SystemSpec& spec, const EquilibriumPoint& point, std::span<const double> weights,
                             double beta) {
    if (weights.size() != spec.dimension()) throw InvalidArgument("weights must have n components");
    const PhasePoint p = lift_point(spec, point);
    double s = -beta * p.phi;
    for (std::size_t a = 0; a < p.n(); ++a) s += weights[a] * p.extensive[a] * p.intensive[a];
    return s;
}

// |beta Phi| + sum_a |w_a E^a I_a|, the natural magnitude of the Euler residual.
inline double euler_scale(const SystemSpec& spec, const EquilibriumPoint& point, std::span<const double> weights,
                          double beta) {
    const PhasePoint p = lift_point(spec, point);
    double s = std::abs(beta * p.phi);
    for (std::size_t a = 0; a < p.n(); ++a) s += std::abs(weights[a] * p.extensive[a] * p.intensive[a]);
    return s;
}

// Directional derivative of the weighted Euler residual along v on the
// equilibrium manifold: sum_a (w_a - beta) I_a v^a + sum_a w_a E^a (Hess Phi v)_a.
// With unit weights this is (1 - beta) I_a dE^a + E^a dI_a.
inline double gibbs_duhem_residual(const SystemSpec& spec, const EquilibriumPoint& point,
                                   std::span<const double> direction, std::span<const double> weights, double beta) {
    const std::size_t n = spec.dimension();
    if (direction.size() != n || weights.size() != n)
        throw InvalidArgument("direction and weights must have n components");
    const Jet phi = evaluate(spec, point, 2);
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        double dI = 0.0;
        for (std::size_t b = 0; b < n; ++b) dI += phi.second_partial(a, b) * direction[b];
        s += (weights[a] - beta) * phi.first_partial(a) * direction[a] + weights[a] * point[a] * dI;
    }
    return s;
}

// Sum of the magnitudes of the terms entering gibbs_duhem_residual.
inline double gibbs_duhem_scale(const SystemSpec& spec, const EquilibriumPoint& point,
                                std::span<const double> direction, std::span<const double> weights, double beta) {
    const std::size_t n = spec.dimension();
    const Jet phi = evaluate(spec, point, 2);
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        s += std::abs((weights[a] - beta) * phi.first_partial(a) * direction[a]);
        for (std::size_t b = 0; b < n; ++b) s += std::abs(weights[a] * point[a] * phi.second_partial(a, b) * direction[b]);
    }
    return s;
}

namespace detail {

// Alternating multilinear forms on R^dim as coefficient maps over sorted index sets.
using Form = std::map<std::uint32_t, double>;

inline int permutation_sign_of_merge(std::uint32_t lhs, std::uint32_t rhs) {
    // Number of transpositions to sort the concatenation lhs|rhs.
    int swaps = 0;
    for (std::uint32_t bits = rhs; bits; bits &= bits - 1) {
        const std::uint32_t low = bits & (~bits + 1);
        // count elements of lhs greater than this rhs element
        swaps += std::popcount(lhs & ~(low | (low - 1)));
    }
    return (swaps % 2) ? -1 : 1;
}

inline Form wedge(const Form& a, const Form& b) {
    Form out;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            if (ia & ib) continue;
            out[ia | ib] += permutation_sign_of_merge(ia, ib) * ca * cb;
        }
    return out;
}

}  // namespace detail

// Coefficient of Theta ^ (dTheta)^n on dPhi ^ dE^1..dE^n ^ dI^1..dI^n.
inline double contact_volume_coefficient(const PhasePoint& p, std::size_t n) {
    if (n < 1 || n > 3) throw InvalidArgument("contact volume supports 1 <= n <= 3");
    if (p.n() != n || p.intensive.size() != n) throw InvalidArgument("phase point dimension does not match n");
    auto bit = [](std::size_t coord) { return std::uint32_t{1} << coord; };
    detail::Form theta;
    theta[bit(0)] = 1.0;
    for (std::size_t a = 0; a < n; ++a) theta[bit(1 + a)] = -p.intensive[a];
    // dTheta = -sum_a dI^a ^ dE^a = sum_a dE^a ^ dI^a
    detail::Form dtheta;
    for (std::size_t a = 0; a < n; ++a) {
        const std::uint32_t e = bit(1 + a), i = bit(1 + n + a);
        dtheta[e | i] += detail::permutation_sign_of_merge(e, i) * 1.0;
    }
    detail::Form acc = theta;
    for (std::size_t k = 0; k < n; ++k) acc = detail::wedge(acc, dtheta);
    const std::uint32_t top = (std::uint32_t{1} << (2 * n + 1)) - 1;
    auto it = acc.find(top);
    return it == acc.end() ? 0.0 : it->second;
}

}  // namespace gtd
