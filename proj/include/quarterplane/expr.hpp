#pragma once

// Minimal arithmetic expression grammar (+, -, *, /, ^, exp, sin, cos, log,
// sqrt, constants pi and e) with forward-mode derivatives through third order,
// so corner compatibility conditions are evaluated with exact derivatives
// rather than numerical differencing of user strings.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "quarterplane/common.hpp"

namespace qp::expr {

/// Truncated Taylor jet: value and first three derivatives at a point.
/// Stored as Taylor coefficients a_k = f^(k)/k!.
struct Jet {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;

    static Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }
    static Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }

    double value() const { return a0; }
    double d1() const { return a1; }
    double d2() const { return 2.0 * a2; }
    double d3() const { return 6.0 * a3; }
};

inline Jet operator+(const Jet& x, const Jet& y) {
    return {x.a0 + y.a0, x.a1 + y.a1, x.a2 + y.a2, x.a3 + y.a3};
}
inline Jet operator-(const Jet& x, const Jet& y) {
    return {x.a0 - y.a0, x.a1 - y.a1, x.a2 - y.a2, x.a3 - y.a3};
}
inline Jet operator-(const Jet& x) { return {-x.a0, -x.a1, -x.a2, -x.a3}; }
inline Jet operator*(const Jet& x, const Jet& y) {
    return {x.a0 * y.a0,
            x.a0 * y.a1 + x.a1 * y.a0,
            x.a0 * y.a2 + x.a1 * y.a1 + x.a2 * y.a0,
            x.a0 * y.a3 + x.a1 * y.a2 + x.a2 * y.a1 + x.a3 * y.a0};
}

/// Composition f(g) from the Taylor coefficients f0..f3 of f at g.a0.
inline Jet compose(double f0, double f1, double f2, double f3, const Jet& g) {
    // u = g - g.a0 is nilpotent to fourth order
    const double u1 = g.a1, u2 = g.a2, u3 = g.a3;
    // powers of u: u^2 = (u1 s + u2 s^2 + u3 s^3)^2, u^3 likewise
    const double u2_2 = u1 * u1;         // s^2 coeff of u^2
    const double u2_3 = 2.0 * u1 * u2;   // s^3 coeff of u^2
    const double u3_3 = u1 * u1 * u1;    // s^3 coeff of u^3
    return {f0, f1 * u1, f1 * u2 + f2 * u2_2, f1 * u3 + f2 * u2_3 + f3 * u3_3};
}

inline Jet inv(const Jet& y) {
    if (y.a0 == 0.0) throw std::domain_error("expression: division by zero");
    const double v = 1.0 / y.a0;
    return compose(v, -v * v, v * v * v, -v * v * v * v, y);
}
inline Jet operator/(const Jet& x, const Jet& y) { return x * inv(y); }

inline Jet exp(const Jet& x) {
    const double e = std::exp(x.a0);
    return compose(e, e, e / 2.0, e / 6.0, x);
}
inline Jet log(const Jet& x) {
    if (!(x.a0 > 0.0)) throw std::domain_error("expression: log of non-positive value");
    const double v = x.a0;
    return compose(std::log(v), 1.0 / v, -0.5 / (v * v), 1.0 / (3.0 * v * v * v), x);
}
inline Jet sin(const Jet& x) {
    const double s = std::sin(x.a0), c = std::cos(x.a0);
    return compose(s, c, -s / 2.0, -c / 6.0, x);
}
inline Jet cos(const Jet& x) {
    const double s = std::sin(x.a0), c = std::cos(x.a0);
    return compose(c, -s, -c / 2.0, s / 6.0, x);
}
inline Jet sqrt(const Jet& x) {
    if (!(x.a0 > 0.0))
        throw std::domain_error("expression: sqrt of non-positive value");
    const double r = std::sqrt(x.a0);
    return compose(r, 0.5 / r, -0.125 / (r * x.a0), 0.0625 / (r * x.a0 * x.a0), x);
}
inline Jet pow(const Jet& x, const Jet& y) {
    // integer exponent fast path permits negative bases
    if (y.a1 == 0.0 && y.a2 == 0.0 && y.a3 == 0.0) {
        const double n = y.a0;
        if (n == std::floor(n) && std::abs(n) <= 64.0) {
            Jet r = Jet::constant(1.0);
            Jet base = x;
            int k = static_cast<int>(std::abs(n));
            for (int i = 0; i < k; ++i) r = r * base;
            return n >= 0.0 ? r : inv(r);
        }
    }
    return exp(y * log(x));
}

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

/// Compiled expression tree; evaluate with a variable environment.
class Expression {
public:
    using Env = std::map<std::string, Jet, std::less<>>;

    static Expression parse(const std::string& text) {
        Parser p{text, 0};
        Expression e;
        e.root_ = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size()) throw ParseError("unexpected trailing input", p.pos);
        e.text_ = text;
        return e;
    }

    Jet eval(const Env& env) const { return root_->eval(env); }

    /// Evaluate with a single scalar variable.
    double operator()(const std::string& var, double value) const {
        Env env;
        env[var] = Jet::variable(value);
        return eval(env).value();
    }

    const std::string& text() const { return text_; }

private:
    struct Node {
        virtual ~Node() = default;
        virtual Jet eval(const Env&) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Const : Node {
        double v;
        explicit Const(double v_) : v(v_) {}
        Jet eval(const Env&) const override { return Jet::constant(v); }
    };
    struct Var : Node {
        std::string name;
        std::size_t pos;
        Jet eval(const Env& env) const override {
            auto it = env.find(name);
            if (it == env.end())
                throw ParseError("unknown variable '" + name + "'", pos);
            return it->second;
        }
    };
    struct Unary : Node {
        char op;
        NodePtr arg;
        Jet eval(const Env& e) const override { return -arg->eval(e); }
    };
    struct Binary : Node {
        char op;
        NodePtr lhs, rhs;
        Jet eval(const Env& e) const override {
            const Jet a = lhs->eval(e), b = rhs->eval(e);
            switch (op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: return pow(a, b);
            }
        }
    };
    struct Call : Node {
        std::string fn;
        std::size_t pos;
        NodePtr arg;
        Jet eval(const Env& e) const override {
            const Jet a = arg->eval(e);
            if (fn == "exp") return exp(a);
            if (fn == "sin") return sin(a);
            if (fn == "cos") return cos(a);
            if (fn == "log") return log(a);
            if (fn == "sqrt") return sqrt(a);
            throw ParseError("unknown function '" + fn + "'", pos);
        }
    };

    struct Parser {
        const std::string& s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
                ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            for (;;) {
                skip_ws();
                if (eat('+')) {
                    auto b = std::make_shared<Binary>();
                    b->op = '+';
                    b->lhs = lhs;
                    b->rhs = parse_term();
                    lhs = b;
                } else if (eat('-')) {
                    auto b = std::make_shared<Binary>();
                    b->op = '-';
                    b->lhs = lhs;
                    b->rhs = parse_term();
                    lhs = b;
                } else {
                    return lhs;
                }
            }
        }
        NodePtr parse_term() {
            NodePtr lhs = parse_unary();
            for (;;) {
                skip_ws();
                if (eat('*')) {
                    auto b = std::make_shared<Binary>();
                    b->op = '*';
                    b->lhs = lhs;
                    b->rhs = parse_unary();
                    lhs = b;
                } else if (eat('/')) {
                    auto b = std::make_shared<Binary>();
                    b->op = '/';
                    b->lhs = lhs;
                    b->rhs = parse_unary();
                    lhs = b;
                } else {
                    return lhs;
                }
            }
        }
        NodePtr parse_unary() {
            skip_ws();
            if (eat('-')) {
                auto u = std::make_shared<Unary>();
                u->op = '-';
                u->arg = parse_unary();
                return u;
            }
            return parse_power();
        }
        NodePtr parse_power() {
            NodePtr base = parse_primary();
            skip_ws();
            if (eat('^')) {
                auto b = std::make_shared<Binary>();
                b->op = '^';
                b->lhs = base;
                b->rhs = parse_unary();  // right-associative
                return b;
            }
            return base;
        }
        NodePtr parse_primary() {
            skip_ws();
            if (pos >= s.size()) throw ParseError("unexpected end of expression", pos);
            if (eat('(')) {
                NodePtr e = parse_expr();
                if (!eat(')')) throw ParseError("expected ')'", pos);
                return e;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const char* begin = s.c_str() + pos;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end == begin) throw ParseError("bad number", pos);
                pos += static_cast<std::size_t>(end - begin);
                return std::make_shared<Const>(v);
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                    ++pos;
                std::string name = s.substr(start, pos - start);
                skip_ws();
                if (pos < s.size() && s[pos] == '(') {
                    ++pos;
                    auto call = std::make_shared<Call>();
                    call->fn = name;
                    call->pos = start;
                    call->arg = parse_expr();
                    if (!eat(')')) throw ParseError("expected ')'", pos);
                    return call;
                }
                if (name == "pi") return std::make_shared<Const>(qp::pi);
                if (name == "e") return std::make_shared<Const>(std::exp(1.0));
                auto var = std::make_shared<Var>();
                var->name = std::move(name);
                var->pos = start;
                return var;
            }
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
    };

    NodePtr root_;
    std::string text_;
};

}  // namespace qp::expr
