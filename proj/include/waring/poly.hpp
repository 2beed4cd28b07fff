#pragma once

// Left-side forms H, right-side polynomials P, and a global root finder.
//
// H is either diagonal, sum_j x_j^{l_j} with per-coordinate exponents (the
// exponents need not be equal), or a sparse homogeneous monomial list of one
// total degree. P is kept factored: leading coefficient and (root, mult)
// pairs, so right sides like c0*(w-a1)^h evaluate without expansion.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "cxjet.hpp"

namespace waring {

struct Monomial {
    Cx coeff;
    std::vector<int> powers; // one exponent per coordinate
};

class WaringForm {
public:
    /// Diagonal form sum_j x_j^{l_j}; exponents l_j >= 1.
    static WaringForm diagonal(std::vector<int> exponents) {
        if (exponents.empty()) throw std::invalid_argument("WaringForm: empty exponent list");
        for (int e : exponents)
            if (e < 1) throw std::invalid_argument("WaringForm: diagonal exponent must be >= 1");
        WaringForm f;
        f.n_ = exponents.size();
        f.diagonal_ = std::move(exponents);
        return f;
    }

    /// Sparse homogeneous form; all monomials must share one total degree >= 1.
    static WaringForm monomials(std::size_t n, std::vector<Monomial> terms) {
        if (terms.empty()) throw std::invalid_argument("WaringForm: empty monomial list");
        int degree = -1;
        for (const auto& m : terms) {
            if (m.powers.size() != n)
                throw std::invalid_argument("WaringForm: monomial arity mismatch");
            int total = 0;
            for (int p : m.powers) {
                if (p < 0) throw std::invalid_argument("WaringForm: negative exponent");
                total += p;
            }
            if (degree < 0) degree = total;
            else if (total != degree)
                throw std::invalid_argument("WaringForm: monomials are not homogeneous (degrees " +
                                            std::to_string(degree) + " and " + std::to_string(total) + ")");
        }
        if (degree < 1) throw std::invalid_argument("WaringForm: degree must be >= 1");
        WaringForm f;
        f.n_ = n;
        f.terms_ = std::move(terms);
        return f;
    }

    std::size_t dimension() const { return n_; }
    bool is_diagonal() const { return !diagonal_.empty(); }
    const std::vector<int>& diagonal_exponents() const { return diagonal_; }
    const std::vector<Monomial>& monomial_terms() const { return terms_; }

    /// Max per-coordinate exponent (diagonal) or the homogeneous degree.
    int degree() const {
        if (is_diagonal()) return *std::max_element(diagonal_.begin(), diagonal_.end());
        int d = 0;
        for (int p : terms_.front().powers) d += p;
        return d;
    }

private:
    WaringForm() = default;
    std::size_t n_ = 0;
    std::vector<int> diagonal_; // non-empty <=> diagonal representation
    std::vector<Monomial> terms_;
};

namespace detail {
template <class T>
T pow_int_generic(T base, int k, const T& one) {
    T acc = one;
    for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
        if (e & 1u) acc = acc * base;
        if (e > 1u) base = base * base;
    }
    return acc;
}

inline Cx cx_pow_int(Cx base, int k) { return pow_int_generic<Cx>(base, k, Cx(1)); }
} // namespace detail

/// H evaluated at x in jet (or plain complex) arithmetic.
template <class T>
T eval_form_t(const WaringForm& H, std::span<const T> x, const T& zero, const T& one) {
    if (x.size() != H.dimension())
        throw std::invalid_argument("eval_form: expected " + std::to_string(H.dimension()) +
                                    " arguments, got " + std::to_string(x.size()));
    T acc = zero;
    if (H.is_diagonal()) {
        const auto& ex = H.diagonal_exponents();
        for (std::size_t j = 0; j < x.size(); ++j)
            acc = acc + detail::pow_int_generic(x[j], ex[j], one);
        return acc;
    }
    for (const auto& m : H.monomial_terms()) {
        T term = one;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (m.powers[j] != 0) term = term * detail::pow_int_generic(x[j], m.powers[j], one);
        acc = acc + m.coeff * term;
    }
    return acc;
}

inline Jet eval_form(const WaringForm& H, std::span<const Jet> x) {
    if (x.empty()) throw std::invalid_argument("eval_form: no arguments");
    const std::size_t n = x.front().dim();
    return eval_form_t<Jet>(H, x, Jet::constant(Cx(0), n), Jet::constant(Cx(1), n));
}

inline Cx eval_form(const WaringForm& H, std::span<const Cx> x) {
    return eval_form_t<Cx>(H, x, Cx(0), Cx(1));
}

/// Right side P(w) = leading * prod (w - root)^mult. Degree 0 (no roots) is
/// the constant polynomial P = leading.
struct UniPoly {
    Cx leading{1.0};
    std::vector<std::pair<Cx, int>> roots; // (root, multiplicity >= 1)

    UniPoly() = default;
    UniPoly(Cx lead, std::vector<std::pair<Cx, int>> r) : leading(lead), roots(std::move(r)) {
        if (leading == Cx(0)) throw std::invalid_argument("UniPoly: zero leading coefficient");
        for (const auto& [root, mult] : roots) {
            (void)root;
            if (mult < 1) throw std::invalid_argument("UniPoly: multiplicity must be >= 1");
        }
    }

    /// P(w) = w^hbar.
    static UniPoly power(int hbar) {
        if (hbar < 0) throw std::invalid_argument("UniPoly::power: negative degree");
        if (hbar == 0) return UniPoly(Cx(1), {});
        return UniPoly(Cx(1), {{Cx(0), hbar}});
    }
    /// P = c0.
    static UniPoly constant(Cx c0) { return UniPoly(c0, {}); }

    int degree() const {
        int d = 0;
        for (const auto& [root, mult] : roots) { (void)root; d += mult; }
        return d;
    }
    bool all_roots_simple() const {
        return std::all_of(roots.begin(), roots.end(), [](const auto& rm) { return rm.second == 1; });
    }
};

template <class T>
T eval_upoly_t(const UniPoly& P, const T& w, const T& one) {
    T acc = P.leading * one;
    for (const auto& [root, mult] : P.roots)
        acc = acc * detail::pow_int_generic(w - root * one, mult, one);
    return acc;
}

inline Jet eval_upoly(const UniPoly& P, const Jet& w) {
    return eval_upoly_t<Jet>(P, w, Jet::constant(Cx(1), w.dim()));
}

inline Cx eval_upoly(const UniPoly& P, Cx w) { return eval_upoly_t<Cx>(P, w, Cx(1)); }

/// All complex roots of sum_k coeffs[k] * x^k by Aberth-Ehrlich simultaneous
/// iteration. Starting points sit on the circle of radius 1 + max|c_k/c_deg|;
/// sweeps run until the largest update drops below 1e-13 (or 200 sweeps, in
/// which case the call fails loudly). One Newton polish step per root, then
/// roots are sorted by (re, im).
inline std::vector<Cx> find_roots(std::span<const Cx> coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("find_roots: degree must be >= 1");
    const std::size_t deg = coeffs.size() - 1;
    const Cx lead = coeffs[deg];
    if (lead == Cx(0)) throw std::invalid_argument("find_roots: zero leading coefficient");

    auto horner = [&](Cx x) {
        Cx p = coeffs[deg], dp = Cx(0);
        for (std::size_t k = deg; k-- > 0;) {
            dp = dp * x + p;
            p = p * x + coeffs[k];
        }
        return std::pair{p, dp};
    };

    double radius = 0.0;
    for (std::size_t k = 0; k < deg; ++k) radius = std::max(radius, std::abs(coeffs[k] / lead));
    radius += 1.0;

    std::vector<Cx> z(deg);
    const double golden_angle = 2.0 * 3.14159265358979323846 / static_cast<double>(deg);
    for (std::size_t j = 0; j < deg; ++j) {
        double theta = golden_angle * static_cast<double>(j) + 0.4; // offset breaks symmetry
        z[j] = radius * Cx(std::cos(theta), std::sin(theta));
    }

    const int max_sweeps = 200;
    const double tol = 1e-13;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double max_update = 0.0;
        for (std::size_t j = 0; j < deg; ++j) {
            auto [p, dp] = horner(z[j]);
            if (p == Cx(0)) continue;
            if (dp == Cx(0)) { // landed on a critical point; nudge off it
                z[j] += Cx(1e-8, 1e-8);
                max_update = std::max(max_update, 1e-8);
                continue;
            }
            Cx w = p / dp;
            Cx repel{};
            for (std::size_t k = 0; k < deg; ++k)
                if (k != j) repel += Cx(1) / (z[j] - z[k]);
            Cx denom = Cx(1) - w * repel;
            Cx delta = (denom == Cx(0)) ? w : w / denom;
            z[j] -= delta;
            max_update = std::max(max_update, std::abs(delta));
        }
        converged = max_update < tol;
    }
    if (!converged)
        throw std::runtime_error("find_roots: Aberth iteration did not converge within 200 sweeps");

    for (auto& r : z) { // one Newton polish step
        auto [p, dp] = horner(r);
        if (dp != Cx(0)) r -= p / dp;
    }
    std::sort(z.begin(), z.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

inline std::vector<Cx> find_roots(std::initializer_list<Cx> coeffs) {
    return find_roots(std::span<const Cx>(coeffs.begin(), coeffs.size()));
}

} // namespace waring
