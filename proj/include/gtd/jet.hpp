#pragma once
/**
 * Truncated multivariate Taylor expansions ("jets").
 *
 * A Jet stores the Taylor coefficients f_alpha = d^alpha f(x0) / alpha! of a
 * scalar field for every multi-index alpha of degree <= order. Arithmetic and
 * elementary functions propagate the coefficients exactly up to truncation, so
 * any partial derivative up to the truncation order can be read back without
 * finite-difference error.
 *
 * Coefficients are stored densely in graded order: all degree-0 entries, then
 * degree 1, and so on. Within a degree the enumeration does not depend on the
 * truncation order, so truncating a jet is a prefix copy.
 */

#include <gtd/errors.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gtd {

inline constexpr int default_jet_order = 4;
inline constexpr std::size_t max_jet_variables = 8;

struct MultiIndex {
    std::vector<int> exponents;

    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

    // alpha! = prod_i alpha_i!
    double factorial() const {
        double f = 1.0;
        for (int e : exponents)
            for (int k = 2; k <= e; ++k) f *= k;
        return f;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

inline MultiIndex unit_index(std::size_t var, std::size_t nvars) {
    MultiIndex m{std::vector<int>(nvars, 0)};
    m.exponents.at(var) = 1;
    return m;
}

inline MultiIndex pair_index(std::size_t a, std::size_t b, std::size_t nvars) {
    MultiIndex m{std::vector<int>(nvars, 0)};
    m.exponents.at(a) += 1;
    m.exponents.at(b) += 1;
    return m;
}

namespace detail {

// Index tables shared by every jet with the same (nvars, order).
class JetShape {
public:
    struct Product {
        std::uint32_t lhs, rhs, out;
    };
    struct DerivativeTerm {
        std::uint32_t src, dst;
        double factor;
    };

    static std::shared_ptr<const JetShape> get(std::size_t nvars, int order) {
        if (nvars < 1 || nvars > max_jet_variables)
            throw InvalidArgument("jet variable count must be in [1, " +
                                  std::to_string(max_jet_variables) + "], got " +
                                  std::to_string(nvars));
        if (order < 0) throw InvalidArgument("jet order must be non-negative");
        static std::mutex mutex;
        static std::map<std::pair<std::size_t, int>, std::shared_ptr<const JetShape>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{nvars, order}];
        if (!slot) slot = std::shared_ptr<const JetShape>(new JetShape(nvars, order));
        return slot;
    }

    std::size_t nvars() const { return nvars_; }
    int order() const { return order_; }
    std::size_t size() const { return indices_.size(); }
    // Number of coefficients of degree <= d.
    std::size_t size_upto(int d) const { return offsets_.at(static_cast<std::size_t>(d) + 1); }

    const MultiIndex& index(std::size_t k) const { return indices_[k]; }
    double factorial(std::size_t k) const { return factorials_[k]; }
    int degree(std::size_t k) const { return degrees_[k]; }
    const std::vector<Product>& products() const { return products_; }
    const std::vector<DerivativeTerm>& derivative_terms(std::size_t var) const {
        return derivatives_.at(var);
    }

    // Position of a multi-index, or size() when absent.
    std::size_t find(const MultiIndex& m) const {
        auto it = lookup_.find(m.exponents);
        return it == lookup_.end() ? size() : it->second;
    }

private:
    JetShape(std::size_t nvars, int order) : nvars_(nvars), order_(order) {
        offsets_.push_back(0);
        for (int d = 0; d <= order; ++d) {
            std::vector<int> current(nvars, 0);
            enumerate(d, 0, current);
            offsets_.push_back(indices_.size());
        }
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            lookup_.emplace(indices_[k].exponents, k);
            factorials_.push_back(indices_[k].factorial());
            degrees_.push_back(indices_[k].degree());
        }
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            for (std::size_t j = 0; j < size_upto(order - degrees_[i]); ++j) {
                MultiIndex sum = indices_[i];
                for (std::size_t v = 0; v < nvars; ++v) sum.exponents[v] += indices_[j].exponents[v];
                products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                     static_cast<std::uint32_t>(find(sum))});
            }
        }
        derivatives_.resize(nvars);
        for (std::size_t v = 0; v < nvars; ++v) {
            for (std::size_t k = 0; k < indices_.size(); ++k) {
                const int e = indices_[k].exponents[v];
                if (e == 0) continue;
                MultiIndex lower = indices_[k];
                lower.exponents[v] -= 1;
                derivatives_[v].push_back({static_cast<std::uint32_t>(k),
                                           static_cast<std::uint32_t>(find(lower)),
                                           static_cast<double>(e)});
            }
        }
    }

    // Compositions of `remaining` over variables [var, nvars), first variable largest first.
    void enumerate(int remaining, std::size_t var, std::vector<int>& current) {
        if (var + 1 == nvars_) {
            current[var] = remaining;
            indices_.push_back(MultiIndex{current});
            current[var] = 0;
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            current[var] = e;
            enumerate(remaining - e, var + 1, current);
        }
        current[var] = 0;
    }

    std::size_t nvars_;
    int order_;
    std::vector<MultiIndex> indices_;
    std::vector<std::size_t> offsets_;
    std::vector<double> factorials_;
    std::vector<int> degrees_;
    std::map<std::vector<int>, std::size_t> lookup_;
    std::vector<Product> products_;
    std::vector<std::vector<DerivativeTerm>> derivatives_;
};

}  // namespace detail

class Jet {
public:
    // Constant jet.
    Jet(std::size_t nvars, int order, double constant = 0.0)
        : shape_(detail::JetShape::get(nvars, order)), coeffs_(shape_->size(), 0.0) {
        coeffs_[0] = constant;
    }

    std::size_t nvars() const { return shape_->nvars(); }
    int order() const { return shape_->order(); }
    double value() const { return coeffs_[0]; }

    std::span<const double> coefficients() const { return coeffs_; }
    const MultiIndex& index(std::size_t k) const { return shape_->index(k); }

    double coefficient(const MultiIndex& alpha) const { return coeffs_[position(alpha)]; }

    // Exact partial derivative d^alpha f at the base point.
    double partial(const MultiIndex& alpha) const {
        const std::size_t k = position(alpha);
        return coeffs_[k] * shape_->factorial(k);
    }

    double first_partial(std::size_t a) const { return partial(unit_index(a, nvars())); }
    double second_partial(std::size_t a, std::size_t b) const {
        return partial(pair_index(a, b, nvars()));
    }

    bool is_constant() const {
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0.0) return false;
        return true;
    }

    bool is_finite() const {
        for (double c : coeffs_)
            if (!std::isfinite(c)) return false;
        return true;
    }

    // Jet of d f / d x_var, one order lower.
    Jet derivative(std::size_t var) const {
        if (var >= nvars()) throw InvalidArgument("derivative variable out of range");
        if (order() < 1) throw InvalidArgument("cannot differentiate an order-0 jet");
        Jet out(nvars(), order() - 1);
        for (const auto& t : shape_->derivative_terms(var)) out.coeffs_[t.dst] += t.factor * coeffs_[t.src];
        return out;
    }

    Jet truncated(int new_order) const {
        if (new_order < 0 || new_order > order())
            throw InvalidArgument("truncation order must lie in [0, " + std::to_string(order()) + "]");
        Jet out(nvars(), new_order);
        std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
        return out;
    }

    Jet operator-() const {
        Jet out = *this;
        for (double& c : out.coeffs_) c = -c;
        return out;
    }

    Jet& operator+=(const Jet& rhs) {
        check_shape(rhs);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
        return *this;
    }
    Jet& operator-=(const Jet& rhs) {
        check_shape(rhs);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
        return *this;
    }
    Jet& operator*=(const Jet& rhs) { return *this = *this * rhs; }
    Jet& operator/=(const Jet& rhs) { return *this = *this / rhs; }

    Jet& operator+=(double c) {
        coeffs_[0] += c;
        return *this;
    }
    Jet& operator-=(double c) {
        coeffs_[0] -= c;
        return *this;
    }
    Jet& operator*=(double c) {
        for (double& x : coeffs_) x *= c;
        return *this;
    }
    Jet& operator/=(double c) {
        if (c == 0.0) throw DomainError("division of a jet by zero");
        for (double& x : coeffs_) x /= c;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a /= b; }

    // Truncated convolution.
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_shape(b);
        Jet out(a.nvars(), a.order());
        for (const auto& p : a.shape_->products()) out.coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
        return out;
    }

    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double a, const Jet& b);

    friend Jet compose(const Jet& a, std::span<const double> taylor);

private:
    std::size_t position(const MultiIndex& alpha) const {
        if (alpha.exponents.size() != nvars())
            throw InvalidArgument("multi-index has " + std::to_string(alpha.exponents.size()) +
                                  " entries, jet has " + std::to_string(nvars()) + " variables");
        for (int e : alpha.exponents)
            if (e < 0) throw InvalidArgument("multi-index exponents must be non-negative");
        if (alpha.degree() > order())
            throw InvalidArgument("multi-index degree " + std::to_string(alpha.degree()) +
                                  " exceeds truncation order " + std::to_string(order()));
        return shape_->find(alpha);
    }

    void check_shape(const Jet& rhs) const {
        if (shape_ != rhs.shape_)
            throw InvalidArgument("jet shape mismatch: (" + std::to_string(nvars()) + ", " +
                                  std::to_string(order()) + ") vs (" + std::to_string(rhs.nvars()) +
                                  ", " + std::to_string(rhs.order()) + ")");
    }

    std::shared_ptr<const detail::JetShape> shape_;
    std::vector<double> coeffs_;

    friend Jet seed_variable(std::size_t, double, std::size_t, int);
};

// Coordinate jet x_index expanded around `value`.
inline Jet seed_variable(std::size_t index, double value, std::size_t nvars,
                         int order = default_jet_order) {
    if (index >= nvars)
        throw InvalidArgument("variable index " + std::to_string(index) + " out of range for " +
                              std::to_string(nvars) + " variables");
    Jet j(nvars, order, value);
    if (order >= 1) j.coeffs_[j.shape_->find(unit_index(index, nvars))] = 1.0;
    return j;
}

// f(a) given taylor[m] = f^(m)(a0) / m!, m = 0..order.
inline Jet compose(const Jet& a, std::span<const double> taylor) {
    const int order = a.order();
    Jet h = a;
    h.coeffs_[0] = 0.0;
    Jet out(a.nvars(), order, taylor[static_cast<std::size_t>(order)]);
    for (int m = order - 1; m >= 0; --m) {
        out = out * h;
        out.coeffs_[0] += taylor[static_cast<std::size_t>(m)];
    }
    return out;
}

namespace detail {

inline std::vector<double> power_taylor(double base, double r, int order) {
    std::vector<double> t(static_cast<std::size_t>(order) + 1, 0.0);
    double falling = 1.0;  // r (r-1) ... (r-m+1) / m!
    for (int m = 0; m <= order; ++m) {
        if (m > 0) falling *= (r - (m - 1)) / m;
        if (falling == 0.0) break;
        t[static_cast<std::size_t>(m)] = falling * std::pow(base, r - m);
    }
    return t;
}

}  // namespace detail

inline Jet power(const Jet& a, double r) {
    const double base = a.value();
    const bool integral = r == std::floor(r);
    if (!integral && base <= 0.0)
        throw DomainError("fractional power " + detail::show(r) + " of non-positive base " +
                          detail::show(base));
    if (integral && r < 0.0 && base == 0.0)
        throw DomainError("negative integer power of a jet with zero constant term");
    return compose(a, detail::power_taylor(base, r, a.order()));
}

inline Jet operator/(double a, const Jet& b) {
    if (b.value() == 0.0) throw DomainError("division by a jet with zero constant term");
    const int order = b.order();
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    double inv = 1.0 / b.value();
    double term = inv;
    for (int m = 0; m <= order; ++m) {
        t[static_cast<std::size_t>(m)] = term;
        term *= -inv;
    }
    return a * compose(b, t);
}

inline Jet operator/(const Jet& a, const Jet& b) {
    a.check_shape(b);
    return a * (1.0 / b);
}

inline Jet exp(const Jet& a) {
    const int order = a.order();
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    double e = std::exp(a.value());
    double inv_fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) inv_fact /= m;
        t[static_cast<std::size_t>(m)] = e * inv_fact;
    }
    return compose(a, t);
}

inline Jet ln(const Jet& a) {
    const double x = a.value();
    if (x <= 0.0) throw DomainError("logarithm of non-positive value " + detail::show(x));
    const int order = a.order();
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    t[0] = std::log(x);
    // d^m ln / dx^m / m! = (-1)^(m+1) / (m x^m)
    double p = 1.0;
    for (int m = 1; m <= order; ++m) {
        p /= x;
        t[static_cast<std::size_t>(m)] = ((m % 2 == 1) ? 1.0 : -1.0) * p / m;
    }
    return compose(a, t);
}

inline Jet sqrt(const Jet& a) { return power(a, 0.5); }

inline Jet sin(const Jet& a) {
    const int order = a.order();
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cycle[4] = {s, c, -s, -c};
    double inv_fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) inv_fact /= m;
        t[static_cast<std::size_t>(m)] = cycle[m % 4] * inv_fact;
    }
    return compose(a, t);
}

inline Jet cos(const Jet& a) {
    const int order = a.order();
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cycle[4] = {c, -s, -c, s};
    double inv_fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) inv_fact /= m;
        t[static_cast<std::size_t>(m)] = cycle[m % 4] * inv_fact;
    }
    return compose(a, t);
}

// Free-function spelling of Jet::partial.
inline double extract_partial(const Jet& a, const MultiIndex& alpha) { return a.partial(alpha); }

}  // namespace gtd
