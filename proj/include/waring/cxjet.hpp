#pragma once

// Complex scalars and first-order forward-mode jets over C^n.
//
// A jet carries a function value together with its gradient with respect
// to the n ambient complex coordinates. Arithmetic on jets implements the
// product and chain rules exactly, so evaluating an expression on jets
// yields the analytic gradient to roundoff. This is the differentiation
// backbone for every residual check in the toolkit.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace waring {

/// Ambient scalar: double-precision complex. Finiteness of values entering
/// from the outside world (parser, spec files, CLI) is checked at those
/// boundaries, not per arithmetic op.
using Cx = std::complex<double>;

inline bool is_finite(Cx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Value plus gradient over n complex variables.
struct Jet {
    Cx value{};
    std::vector<Cx> grad;

    Jet() = default;
    Jet(Cx v, std::vector<Cx> g) : value(v), grad(std::move(g)) {}

    std::size_t dim() const { return grad.size(); }

    static Jet constant(Cx v, std::size_t n) { return Jet(v, std::vector<Cx>(n, Cx(0))); }
};

namespace detail {
inline void require_same_dim(const Jet& a, const Jet& b, const char* op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": jet dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}
} // namespace detail

/// The j-th coordinate function as a jet: value given, gradient = e_j.
inline Jet jet_var(std::size_t j, Cx value, std::size_t n) {
    if (j >= n)
        throw std::out_of_range("jet_var: index " + std::to_string(j) +
                                " out of range for dimension " + std::to_string(n));
    Jet r = Jet::constant(value, n);
    r.grad[j] = Cx(1);
    return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
    detail::require_same_dim(a, b, "jet add");
    Jet r = a;
    r.value += b.value;
    for (std::size_t j = 0; j < r.grad.size(); ++j) r.grad[j] += b.grad[j];
    return r;
}

inline Jet operator-(const Jet& a) {
    Jet r = a;
    r.value = -r.value;
    for (auto& g : r.grad) g = -g;
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    detail::require_same_dim(a, b, "jet sub");
    Jet r = a;
    r.value -= b.value;
    for (std::size_t j = 0; j < r.grad.size(); ++j) r.grad[j] -= b.grad[j];
    return r;
}

/// Product rule: (ab)' = a'b + ab'.
inline Jet jet_mul(const Jet& a, const Jet& b) {
    detail::require_same_dim(a, b, "jet mul");
    Jet r = Jet::constant(a.value * b.value, a.dim());
    for (std::size_t j = 0; j < r.grad.size(); ++j)
        r.grad[j] = a.value * b.grad[j] + b.value * a.grad[j];
    return r;
}

inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }

inline Jet operator*(Cx c, const Jet& a) {
    Jet r = a;
    r.value *= c;
    for (auto& g : r.grad) g *= c;
    return r;
}

/// k-th power by repeated squaring; k = 0 is the constant-1 jet.
inline Jet jet_pow_int(const Jet& a, int k) {
    if (k < 0) throw std::invalid_argument("jet_pow_int: negative exponent");
    Jet acc = Jet::constant(Cx(1), a.dim());
    Jet base = a;
    for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
        if (e & 1u) acc = jet_mul(acc, base);
        if (e > 1u) base = jet_mul(base, base);
    }
    return acc;
}

namespace detail {
/// value = phi(a.value), gradient = phi'(a.value) * a.grad.
inline Jet chain(const Jet& a, Cx value, Cx deriv) {
    Jet r = Jet::constant(value, a.dim());
    for (std::size_t j = 0; j < r.grad.size(); ++j) r.grad[j] = deriv * a.grad[j];
    return r;
}
} // namespace detail

inline Jet exp(const Jet& a) {
    Cx e = std::exp(a.value);
    return detail::chain(a, e, e);
}
inline Jet sin(const Jet& a) { return detail::chain(a, std::sin(a.value), std::cos(a.value)); }
inline Jet cos(const Jet& a) { return detail::chain(a, std::cos(a.value), -std::sin(a.value)); }
inline Jet sinh(const Jet& a) { return detail::chain(a, std::sinh(a.value), std::cosh(a.value)); }
inline Jet cosh(const Jet& a) { return detail::chain(a, std::cosh(a.value), std::sinh(a.value)); }

/// Principal branch; the argument must be nonzero.
inline Jet log(const Jet& a) {
    if (a.value == Cx(0)) throw std::domain_error("jet log: log of zero");
    return detail::chain(a, std::log(a.value), Cx(1) / a.value);
}

enum class AnalyticFn { Exp, Sin, Cos, Sinh, Cosh, Log };

inline Jet jet_analytic(AnalyticFn fn, const Jet& a) {
    switch (fn) {
        case AnalyticFn::Exp: return exp(a);
        case AnalyticFn::Sin: return sin(a);
        case AnalyticFn::Cos: return cos(a);
        case AnalyticFn::Sinh: return sinh(a);
        case AnalyticFn::Cosh: return cosh(a);
        case AnalyticFn::Log: return log(a);
    }
    throw std::logic_error("jet_analytic: bad function tag");
}

} // namespace waring
