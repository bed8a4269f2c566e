#pragma once
/**
 * Expression language for fundamental equations and metric components.
 *
 *   expr   := term (('+' | '-') term)*
 *   term   := factor (('*' | '/') factor)*
 *   factor := '-' factor | base ('^' factor)?
 *   base   := number | ident | func '(' expr ')' | '(' expr ')'
 *   func   := 'exp' | 'ln' | 'sqrt' | 'sin' | 'cos'
 *
 * '^' binds tighter than unary minus and is right-associative, so -S^4 is
 * -(S^4) and 2^-1 is 2^(-1). The identifier `pi` resolves to the constant
 * unless a variable or parameter of that name is bound.
 */

#include <gtd/errors.hpp>
#include <gtd/jet.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gtd {

enum class ExprKind { number, identifier, add, sub, mul, div, pow, neg, call };
enum class Function { exp, ln, sqrt, sin, cos };

inline const char* function_name(Function f) {
    switch (f) {
        case Function::exp: return "exp";
        case Function::ln: return "ln";
        case Function::sqrt: return "sqrt";
        case Function::sin: return "sin";
        case Function::cos: return "cos";
    }
    return "?";
}

inline std::optional<Function> function_from_name(std::string_view name) {
    if (name == "exp") return Function::exp;
    if (name == "ln") return Function::ln;
    if (name == "sqrt") return Function::sqrt;
    if (name == "sin") return Function::sin;
    if (name == "cos") return Function::cos;
    return std::nullopt;
}

// Immutable expression tree with shared structure.
class Expr {
public:
    struct Node {
        ExprKind kind;
        double number = 0.0;
        std::string name;
        Function function = Function::exp;
        std::vector<Expr> children;
    };

    Expr() : Expr(number(0.0)) {}

    static Expr number(double v) { return Expr(Node{ExprKind::number, v, {}, Function::exp, {}}); }
    static Expr identifier(std::string name) {
        return Expr(Node{ExprKind::identifier, 0.0, std::move(name), Function::exp, {}});
    }
    static Expr binary(ExprKind kind, Expr lhs, Expr rhs) {
        return Expr(Node{kind, 0.0, {}, Function::exp, {std::move(lhs), std::move(rhs)}});
    }
    static Expr negate(Expr operand) {
        return Expr(Node{ExprKind::neg, 0.0, {}, Function::exp, {std::move(operand)}});
    }
    static Expr call(Function f, Expr arg) {
        return Expr(Node{ExprKind::call, 0.0, {}, f, {std::move(arg)}});
    }

    ExprKind kind() const { return node_->kind; }
    double value() const { return node_->number; }
    const std::string& name() const { return node_->name; }
    Function function() const { return node_->function; }
    const Expr& child(std::size_t i) const { return node_->children.at(i); }
    std::size_t arity() const { return node_->children.size(); }

    // Structural equality; literals compare by value.
    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind() || a.arity() != b.arity()) return false;
        switch (a.kind()) {
            case ExprKind::number: return a.value() == b.value();
            case ExprKind::identifier: return a.name() == b.name();
            case ExprKind::call:
                if (a.function() != b.function()) return false;
                break;
            default: break;
        }
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!(a.child(i) == b.child(i))) return false;
        return true;
    }

    void collect_identifiers(std::set<std::string>& out) const {
        if (kind() == ExprKind::identifier) out.insert(name());
        for (const auto& c : node_->children) c.collect_identifiers(out);
    }

    std::set<std::string> identifiers() const {
        std::set<std::string> out;
        collect_identifiers(out);
        return out;
    }

private:
    explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        skip_space();
        if (at_end()) throw ParseError("empty expression", pos_);
        Expr e = parse_expr();
        skip_space();
        if (!at_end()) throw ParseError(unexpected(), pos_);
        return e;
    }

private:
    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            skip_space();
            if (match('+')) lhs = Expr::binary(ExprKind::add, lhs, parse_term());
            else if (match('-')) lhs = Expr::binary(ExprKind::sub, lhs, parse_term());
            else return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            skip_space();
            if (match('*')) lhs = Expr::binary(ExprKind::mul, lhs, parse_factor());
            else if (match('/')) lhs = Expr::binary(ExprKind::div, lhs, parse_factor());
            else return lhs;
        }
    }

    Expr parse_factor() {
        skip_space();
        if (match('-')) return Expr::negate(parse_factor());
        Expr base = parse_base();
        skip_space();
        if (match('^')) return Expr::binary(ExprKind::pow, base, parse_factor());
        return base;
    }

    Expr parse_base() {
        skip_space();
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name(src_.substr(start, pos_ - start));
            skip_space();
            if (!at_end() && src_[pos_] == '(') {
                auto f = function_from_name(name);
                if (!f) throw ParseError("unknown function '" + name + "'", start);
                ++pos_;
                Expr arg = parse_expr();
                expect(')');
                return Expr::call(*f, arg);
            }
            return Expr::identifier(std::move(name));
        }
        throw ParseError(unexpected(), pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t n = digits();
        if (!at_end() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number", start);
        if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw ParseError("malformed exponent", mark);
        }
        const std::string text(src_.substr(start, pos_ - start));
        return Expr::number(std::strtod(text.c_str(), nullptr));
    }

    std::string unexpected() const {
        if (at_end()) return "unexpected end of input";
        return std::string("unexpected '") + src_[pos_] + "'";
    }

    void expect(char c) {
        skip_space();
        if (!match(c)) throw ParseError(std::string("expected '") + c + "', " + unexpected(), pos_);
    }

    bool match(char c) {
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool at_end() const { return pos_ >= src_.size(); }

    std::string_view src_;
    std::size_t pos_ = 0;
};

inline void print_to(const Expr& e, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_to(e.child(0), out);
        out += op;
        print_to(e.child(1), out);
        out += ')';
    };
    switch (e.kind()) {
        case ExprKind::number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", e.value());
            out += buf;
            break;
        }
        case ExprKind::identifier: out += e.name(); break;
        case ExprKind::add: binary(" + "); break;
        case ExprKind::sub: binary(" - "); break;
        case ExprKind::mul: binary(" * "); break;
        case ExprKind::div: binary(" / "); break;
        case ExprKind::pow: binary("^"); break;
        case ExprKind::neg:
            out += "(-";
            print_to(e.child(0), out);
            out += ')';
            break;
        case ExprKind::call:
            out += function_name(e.function());
            out += '(';
            print_to(e.child(0), out);
            out += ')';
            break;
    }
}

}  // namespace detail

inline Expr parse(std::string_view source) { return detail::Parser(source).parse_all(); }

// Canonical, fully parenthesized form; parse(print(e)) == e.
inline std::string print(const Expr& e) {
    std::string out;
    detail::print_to(e, out);
    return out;
}

// Name resolution for evaluation: variables bind to positions, parameters to reals.
struct Bindings {
    std::span<const std::string> variables;
    const std::map<std::string, double>* parameters = nullptr;
};

namespace detail {

inline double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

inline double apply(Function f, double x) {
    switch (f) {
        case Function::exp: return checked(std::exp(x), "exp");
        case Function::ln:
            if (x <= 0.0) throw DomainError("logarithm of non-positive value " + detail::show(x));
            return std::log(x);
        case Function::sqrt:
            if (x < 0.0) throw DomainError("square root of negative value " + detail::show(x));
            return std::sqrt(x);
        case Function::sin: return std::sin(x);
        case Function::cos: return std::cos(x);
    }
    return 0.0;
}

inline Jet apply(Function f, const Jet& x) {
    switch (f) {
        case Function::exp: return exp(x);
        case Function::ln: return ln(x);
        case Function::sqrt: return sqrt(x);
        case Function::sin: return sin(x);
        case Function::cos: return cos(x);
    }
    return x;
}

inline double constant_like(double, double c) { return c; }
inline Jet constant_like(const Jet& like, double c) { return Jet(like.nvars(), like.order(), c); }

inline bool is_constant_value(double) { return true; }
inline bool is_constant_value(const Jet& j) { return j.is_constant(); }
inline double constant_part(double v) { return v; }
inline double constant_part(const Jet& j) { return j.value(); }

inline double raise(double base, double r) {
    if (base < 0.0 && r != std::floor(r))
        throw DomainError("fractional power " + detail::show(r) + " of negative base " +
                          detail::show(base));
    if (base == 0.0 && r < 0.0) throw DomainError("negative power of zero");
    return checked(std::pow(base, r), "power");
}
inline Jet raise(const Jet& base, double r) { return power(base, r); }

inline double raise_general(double base, double r) { return raise(base, r); }
inline Jet raise_general(const Jet& base, const Jet& r) { return exp(r * ln(base)); }

inline double divide(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return checked(a / b, "division");
}
inline Jet divide(const Jet& a, const Jet& b) { return a / b; }

template <typename T>
T evaluate(const Expr& e, std::span<const T> values, const Bindings& b, const T& prototype) {
    switch (e.kind()) {
        case ExprKind::number: return constant_like(prototype, e.value());
        case ExprKind::identifier: {
            for (std::size_t i = 0; i < b.variables.size(); ++i)
                if (b.variables[i] == e.name()) return values[i];
            if (b.parameters) {
                auto it = b.parameters->find(e.name());
                if (it != b.parameters->end()) return constant_like(prototype, it->second);
            }
            if (e.name() == "pi") return constant_like(prototype, std::numbers::pi);
            throw InvalidArgument("unresolved identifier '" + e.name() + "'");
        }
        case ExprKind::add:
            return evaluate(e.child(0), values, b, prototype) + evaluate(e.child(1), values, b, prototype);
        case ExprKind::sub:
            return evaluate(e.child(0), values, b, prototype) - evaluate(e.child(1), values, b, prototype);
        case ExprKind::mul:
            return evaluate(e.child(0), values, b, prototype) * evaluate(e.child(1), values, b, prototype);
        case ExprKind::div:
            return divide(evaluate(e.child(0), values, b, prototype), evaluate(e.child(1), values, b, prototype));
        case ExprKind::pow: {
            T base = evaluate(e.child(0), values, b, prototype);
            T r = evaluate(e.child(1), values, b, prototype);
            if (is_constant_value(r)) return raise(base, constant_part(r));
            return raise_general(base, r);
        }
        case ExprKind::neg: return -evaluate(e.child(0), values, b, prototype);
        case ExprKind::call: return apply(e.function(), evaluate(e.child(0), values, b, prototype));
    }
    throw InvalidArgument("corrupt expression node");
}

}  // namespace detail

// Plain real evaluation; values aligned with b.variables.
inline double evaluate(const Expr& e, std::span<const double> values, const Bindings& b) {
    return detail::evaluate<double>(e, values, b, 0.0);
}

// Jet evaluation; values aligned with b.variables and sharing one shape.
inline Jet evaluate(const Expr& e, std::span<const Jet> values, const Bindings& b) {
    if (values.empty()) throw InvalidArgument("jet evaluation needs at least one variable");
    return detail::evaluate<Jet>(e, values, b, values.front());
}

// Evaluates an expression containing only literals, `pi` and the given parameters.
inline double evaluate_constant(const Expr& e, const std::map<std::string, double>& parameters = {}) {
    Bindings b{{}, &parameters};
    return evaluate(e, std::span<const double>{}, b);
}

}  // namespace gtd
