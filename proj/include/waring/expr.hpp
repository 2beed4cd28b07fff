#pragma once

// Closed expression trees for entire functions of several complex variables.
//
// The node set is deliberately small: variables, complex constants, sums,
// products, negation, non-negative integer powers, and the entire analytic
// functions exp/sin/cos/sinh/cosh. There is no division and no fractional
// power, so every representable expression is entire by construction.
// Differentiation is never done by rewriting: evaluating on jets (cxjet.hpp)
// produces exact gradients.

#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cxjet.hpp"

namespace waring {

enum class ExprKind { Var, Const, Add, Mul, Neg, PowInt, Exp, Sin, Cos, Sinh, Cosh };

class Expr {
public:
    struct Node {
        ExprKind kind;
        Cx cval{};                       // Const
        std::size_t var_index = 0;       // Var
        int pow_k = 0;                   // PowInt
        std::shared_ptr<const Node> a, b;
    };

    Expr() : node_(constant_node(Cx(0))) {}

    static Expr var(std::size_t j) {
        auto n = std::make_shared<Node>();
        n->kind = ExprKind::Var;
        n->var_index = j;
        return Expr(std::move(n));
    }
    static Expr constant(Cx c) { return Expr(constant_node(c)); }

    friend Expr operator+(const Expr& x, const Expr& y) { return Expr::binary(ExprKind::Add, x, y); }
    friend Expr operator*(const Expr& x, const Expr& y) { return Expr::binary(ExprKind::Mul, x, y); }
    friend Expr operator-(const Expr& x) { return Expr::unary(ExprKind::Neg, x); }
    friend Expr operator-(const Expr& x, const Expr& y) { return x + (-y); }
    friend Expr operator*(Cx c, const Expr& y) { return Expr::constant(c) * y; }

    static Expr pow_int(const Expr& x, int k) {
        if (k < 0) throw std::invalid_argument("Expr::pow_int: negative exponent");
        Expr e = unary(ExprKind::PowInt, x);
        const_cast<Node*>(e.node_.get())->pow_k = k;
        return e;
    }
    static Expr apply(ExprKind fn, const Expr& x) {
        switch (fn) {
            case ExprKind::Exp: case ExprKind::Sin: case ExprKind::Cos:
            case ExprKind::Sinh: case ExprKind::Cosh:
                return unary(fn, x);
            default:
                throw std::logic_error("Expr::apply: not an analytic function tag");
        }
    }
    static Expr exp(const Expr& x) { return unary(ExprKind::Exp, x); }
    static Expr sin(const Expr& x) { return unary(ExprKind::Sin, x); }
    static Expr cos(const Expr& x) { return unary(ExprKind::Cos, x); }
    static Expr sinh(const Expr& x) { return unary(ExprKind::Sinh, x); }
    static Expr cosh(const Expr& x) { return unary(ExprKind::Cosh, x); }

    const Node& node() const { return *node_; }
    std::shared_ptr<const Node> ptr() const { return node_; }
    static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }

    /// Smallest n such that every Var index is < n.
    std::size_t min_dimension() const {
        std::size_t d = 0;
        walk_min_dim(node_.get(), d);
        return d;
    }

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<const Node> constant_node(Cx c) {
        auto n = std::make_shared<Node>();
        n->kind = ExprKind::Const;
        n->cval = c;
        return n;
    }
    static Expr unary(ExprKind k, const Expr& x) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = x.node_;
        return Expr(std::move(n));
    }
    static Expr binary(ExprKind k, const Expr& x, const Expr& y) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = x.node_;
        n->b = y.node_;
        return Expr(std::move(n));
    }
    static void walk_min_dim(const Node* n, std::size_t& d) {
        if (!n) return;
        if (n->kind == ExprKind::Var && n->var_index + 1 > d) d = n->var_index + 1;
        walk_min_dim(n->a.get(), d);
        walk_min_dim(n->b.get(), d);
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

// Generic evaluation over any scalar-like T (Cx or Jet). MakeConst lifts a
// complex constant into T, so the value path is identical for both.
template <class T, class MakeConst>
T eval_node(const Expr::Node* n, std::span<const T> vars, const MakeConst& mk) {
    switch (n->kind) {
        case ExprKind::Var:
            if (n->var_index >= vars.size())
                throw std::out_of_range("eval: variable z" + std::to_string(n->var_index + 1) +
                                        " out of range for dimension " + std::to_string(vars.size()));
            return vars[n->var_index];
        case ExprKind::Const: return mk(n->cval);
        case ExprKind::Add: return eval_node(n->a.get(), vars, mk) + eval_node(n->b.get(), vars, mk);
        case ExprKind::Mul: return eval_node(n->a.get(), vars, mk) * eval_node(n->b.get(), vars, mk);
        case ExprKind::Neg: return -eval_node(n->a.get(), vars, mk);
        case ExprKind::PowInt: {
            T base = eval_node(n->a.get(), vars, mk);
            T acc = mk(Cx(1));
            for (unsigned e = static_cast<unsigned>(n->pow_k); e != 0; e >>= 1) {
                if (e & 1u) acc = acc * base;
                if (e > 1u) base = base * base;
            }
            return acc;
        }
        case ExprKind::Exp: { using std::exp; return exp(eval_node(n->a.get(), vars, mk)); }
        case ExprKind::Sin: { using std::sin; return sin(eval_node(n->a.get(), vars, mk)); }
        case ExprKind::Cos: { using std::cos; return cos(eval_node(n->a.get(), vars, mk)); }
        case ExprKind::Sinh: { using std::sinh; return sinh(eval_node(n->a.get(), vars, mk)); }
        case ExprKind::Cosh: { using std::cosh; return cosh(eval_node(n->a.get(), vars, mk)); }
    }
    throw std::logic_error("eval: bad node kind");
}

} // namespace detail

inline Cx eval_value(const Expr& e, std::span<const Cx> z) {
    return detail::eval_node<Cx>(&e.node(), z, [](Cx c) { return c; });
}

inline Cx eval_value(const Expr& e, std::initializer_list<Cx> z) {
    return eval_value(e, std::span<const Cx>(z.begin(), z.size()));
}

/// Value and exact analytic gradient at z, in one pass.
inline Jet eval_jet(const Expr& e, std::span<const Cx> z) {
    const std::size_t n = z.size();
    std::vector<Jet> vars;
    vars.reserve(n);
    for (std::size_t j = 0; j < n; ++j) vars.push_back(jet_var(j, z[j], n));
    return detail::eval_node<Jet>(&e.node(), std::span<const Jet>(vars),
                                  [n](Cx c) { return Jet::constant(c, n); });
}

inline Jet eval_jet(const Expr& e, std::initializer_list<Cx> z) {
    return eval_jet(e, std::span<const Cx>(z.begin(), z.size()));
}

/// Composition: every Var j of e is replaced by bindings[j]. Evaluation
/// commutes with substitution.
inline Expr substitute(const Expr& e, std::span<const Expr> bindings) {
    const Expr::Node& n = e.node();
    switch (n.kind) {
        case ExprKind::Var:
            if (n.var_index >= bindings.size())
                throw std::out_of_range("substitute: variable z" + std::to_string(n.var_index + 1) +
                                        " has no binding (got " + std::to_string(bindings.size()) + ")");
            return bindings[n.var_index];
        case ExprKind::Const: return Expr::constant(n.cval);
        default: break;
    }
    Expr a = substitute(Expr::wrap(n.a), bindings);
    switch (n.kind) {
        case ExprKind::Add: return a + substitute(Expr::wrap(n.b), bindings);
        case ExprKind::Mul: return a * substitute(Expr(e).wrap(n.b), bindings);
        case ExprKind::Neg: return -a;
        case ExprKind::PowInt: return Expr::pow_int(a, n.pow_k);
        case ExprKind::Exp: return Expr::exp(a);
        case ExprKind::Sin: return Expr::sin(a);
        case ExprKind::Cos: return Expr::cos(a);
        case ExprKind::Sinh: return Expr::sinh(a);
        case ExprKind::Cosh: return Expr::cosh(a);
        default: throw std::logic_error("substitute: bad node kind");
    }
}

inline Expr substitute(const Expr& e, std::initializer_list<Expr> bindings) {
    return substitute(e, std::span<const Expr>(bindings.begin(), bindings.size()));
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_const(Cx c) {
    // Forms the grammar can read back: a, bi, (a+bi), (a-bi).
    if (c.imag() == 0.0) return fmt_double(c.real());
    if (c.real() == 0.0) return fmt_double(c.imag()) + "i";
    const double im = c.imag();
    if (im < 0.0) return "(" + fmt_double(c.real()) + "-" + fmt_double(-im) + "i)";
    return "(" + fmt_double(c.real()) + "+" + fmt_double(im) + "i)";
}

// Precedence levels, loosest first: sum(0), product(1), unary(2), power(3), atom(4).
inline int precedence(const Expr::Node& n) {
    switch (n.kind) {
        case ExprKind::Add: return 0;
        case ExprKind::Mul: return 1;
        case ExprKind::Neg: return 2;
        case ExprKind::PowInt: return 3;
        default: return 4;
    }
}

inline void print_node(const Expr::Node& n, int parent_prec, std::string& out) {
    const int prec = precedence(n);
    const bool paren = prec < parent_prec;
    if (paren) out += "(";
    switch (n.kind) {
        case ExprKind::Var: out += "z" + std::to_string(n.var_index + 1); break;
        case ExprKind::Const: {
            std::string s = fmt_const(n.cval);
            // A negative real constant needs protection under a tighter context.
            if (s.front() == '-' && parent_prec > 0) out += "(" + s + ")";
            else out += s;
            break;
        }
        // Right children print one level tighter so a right-nested tree keeps
        // its shape (and therefore its exact rounding) through a round trip.
        case ExprKind::Add:
            print_node(*n.a, 0, out); out += " + "; print_node(*n.b, 1, out); break;
        case ExprKind::Mul:
            print_node(*n.a, 1, out); out += "*"; print_node(*n.b, 2, out); break;
        case ExprKind::Neg:
            out += "-"; print_node(*n.a, 2, out); break;
        case ExprKind::PowInt:
            print_node(*n.a, 4, out); out += "^" + std::to_string(n.pow_k); break;
        case ExprKind::Exp: out += "exp("; print_node(*n.a, 0, out); out += ")"; break;
        case ExprKind::Sin: out += "sin("; print_node(*n.a, 0, out); out += ")"; break;
        case ExprKind::Cos: out += "cos("; print_node(*n.a, 0, out); out += ")"; break;
        case ExprKind::Sinh: out += "sinh("; print_node(*n.a, 0, out); out += ")"; break;
        case ExprKind::Cosh: out += "cosh("; print_node(*n.a, 0, out); out += ")"; break;
    }
    if (paren) out += ")";
}

} // namespace detail

/// Renders e in the textual grammar; parse_expr(to_string(e)) evaluates
/// identically to e.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_node(e.node(), 0, out);
    return out;
}

} // namespace waring
