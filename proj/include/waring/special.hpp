#pragma once

// Weierstrass p-function by Laurent series around the origin, and residual
// verifiers for the one-variable left-factor ODEs
//   f' = A0 (f - a1)                                  (exponential factor)
//   f' = A0 (f - a1)(f - a2)                          (Moebius-exponential)
//   (f')^2 = A0 (f - a1)(f - a2)                      (sine factor)
//   (w-b1)^{m1} (w-b2)^{m2} (f')^2 = A0 prod (f - a_j)  (elliptic, 3 or 4 factors)
// The elliptic cases take a caller-supplied f (affine transform of p, or any
// entire expression); their residuals are measured, never assumed.

#include <limits>
#include <optional>
#include <variant>

#include "parse.hpp"
#include "poly.hpp"
#include "sampling.hpp"

namespace waring {

// ---------------------------------------------------------------------------
// Weierstrass p
// ---------------------------------------------------------------------------

struct WeierstrassParams {
    Cx g2, g3;

    /// Roots e1,e2,e3 of 4t^3 - g2 t - g3, sorted by (re, im).
    std::vector<Cx> half_period_values() const {
        return find_roots({-g3, -g2, Cx(0), Cx(4)});
    }
    Cx discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

/// Laurent coefficients c_k of p(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}:
/// c_2 = g2/20, c_3 = g3/28, and
/// c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m} for k >= 4.
inline std::vector<Cx> wp_series_coefficients(const WeierstrassParams& p, int terms) {
    if (terms < 1) throw std::invalid_argument("wp: need at least one series term");
    std::vector<Cx> c(static_cast<std::size_t>(terms) + 2, Cx(0)); // c[k], k = 0..terms+1
    if (terms >= 1) c[2] = p.g2 / 20.0;
    if (terms >= 2) c[3] = p.g3 / 28.0;
    for (int k = 4; k <= terms + 1; ++k) {
        Cx s{};
        for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
        c[k] = 3.0 / static_cast<double>((2 * k + 1) * (k - 3)) * s;
    }
    return c;
}

/// p(z) and p'(z) from `terms` Laurent coefficients. Valid near the origin
/// only: z = 0 is the pole and |z| >= 1 is rejected (the documented series
/// radius for |g2|,|g3| <= 4 is conservative).
inline std::pair<Cx, Cx> wp(Cx z, const WeierstrassParams& p, int terms) {
    if (z == Cx(0)) throw std::domain_error("wp: z = 0 is the pole");
    if (std::abs(z) >= 1.0)
        throw std::domain_error("wp: |z| >= 1 is outside the series validity radius");
    auto c = wp_series_coefficients(p, terms);
    const Cx z2 = z * z;
    Cx value = Cx(1) / z2;
    Cx deriv = -2.0 / (z2 * z);
    Cx zpow = z2; // z^{2k-2} at k = 2
    for (int k = 2; k < static_cast<int>(c.size()); ++k) {
        value += c[static_cast<std::size_t>(k)] * zpow;
        deriv += static_cast<double>(2 * k - 2) * c[static_cast<std::size_t>(k)] * zpow / z;
        zpow *= z2;
    }
    return {value, deriv};
}

// ---------------------------------------------------------------------------
// Left-factor cases
// ---------------------------------------------------------------------------

/// f = p + q * wp(.; g2, g3) evaluated with `terms` series coefficients.
struct WpAffine {
    Cx offset{0.0}, scale{1.0};
    WeierstrassParams params;
    int terms = 30;
};

/// Caller-supplied meromorphic-free f as a one-variable expression.
struct ExprFactor {
    Expr f;
};

using FactorFunction = std::variant<WpAffine, ExprFactor>;

struct ExpFactor {              // f = A1 e^{A0 w} + alpha1
    Cx A0, A1, alpha1;
};
struct MoebiusExpFactor {       // f = (alpha2 A1 e^{s w} - alpha1)/(A1 e^{s w} - 1), s = A0(alpha1-alpha2)
    Cx A0, A1, alpha1, alpha2;
};
struct SinFactor {              // f = (alpha1-alpha2)/2 sin(sqrt(-A0) w + A1) + (alpha1+alpha2)/2
    Cx A0, A1, alpha1, alpha2;
};
struct EllipticFactor {         // (w-b1)^{m1} (w-b2)^{m2} (f')^2 = A0 prod_{j} (f - alpha_j)
    int m1 = 0, m2 = 0;
    Cx b1, b2;
    Cx A0;
    std::vector<Cx> alphas;     // 3 or 4 pairwise distinct values
    FactorFunction f = WpAffine{};
};

using LeftFactorCase = std::variant<ExpFactor, MoebiusExpFactor, SinFactor, EllipticFactor>;

namespace detail {

inline void require_distinct(std::span<const Cx> vals, const char* who) {
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            if (vals[i] == vals[j])
                throw std::invalid_argument(std::string(who) + ": values must be pairwise distinct");
}

/// (f, f') of the chosen factor function at w.
inline std::pair<Cx, Cx> eval_factor(const FactorFunction& f, Cx w) {
    if (const auto* a = std::get_if<WpAffine>(&f)) {
        auto [p, dp] = wp(w, a->params, a->terms);
        return {a->offset + a->scale * p, a->scale * dp};
    }
    const auto& e = std::get<ExprFactor>(f);
    Jet j = eval_jet(e.f, std::span<const Cx>(&w, 1));
    return {j.value, j.grad[0]};
}

/// Distance from w to the nearest zero of A1 e^{s w} - 1.
inline double moebius_pole_distance(Cx w, Cx A1, Cx s) {
    // zeros at w0(k) = (-log A1 + 2 pi i k)/s
    const Cx two_pi_i(0.0, 2.0 * 3.14159265358979323846);
    Cx k_real = (w * s + std::log(A1)) / two_pi_i;
    double dist = std::numeric_limits<double>::infinity();
    for (double dk = -1.0; dk <= 1.0; dk += 1.0) {
        double k = std::round(k_real.real()) + dk;
        Cx w0 = (-std::log(A1) + two_pi_i * k) / s;
        dist = std::min(dist, std::abs(w - w0));
    }
    return dist;
}

} // namespace detail

struct OdeResidualReport {
    double max_abs_residual = 0.0;
    Cx worst_point{};
    int samples_used = 0;
};

/// Measures the defining ODE residual of the case over `samples` points,
/// using one-variable jets for f' where f is built from the case parameters.
/// Always returns the measured residual; it never asserts.
inline OdeResidualReport verify_left_factor(const LeftFactorCase& c, int samples = 50,
                                            std::uint64_t seed = kDefaultSeed) {
    if (samples < 1) throw std::invalid_argument("verify_left_factor: samples must be >= 1");
    PointSampler sampler(seed);
    OdeResidualReport report;

    auto record = [&](Cx w, Cx residual) {
        double r = std::abs(residual);
        if (r > report.max_abs_residual) {
            report.max_abs_residual = r;
            report.worst_point = w;
        }
        ++report.samples_used;
    };

    if (const auto* e = std::get_if<ExpFactor>(&c)) {
        if (e->A0 == Cx(0) || e->A1 == Cx(0))
            throw std::invalid_argument("exp factor: A0*A1 must be nonzero");
        Expr w = Expr::var(0);
        Expr f = Expr::constant(e->A1) * Expr::exp(Expr::constant(e->A0) * w) +
                 Expr::constant(e->alpha1);
        for (int i = 0; i < samples; ++i) {
            Cx x = sampler.disc(2.0);
            Jet j = eval_jet(f, std::span<const Cx>(&x, 1));
            record(x, j.grad[0] - e->A0 * (j.value - e->alpha1));
        }
        return report;
    }

    if (const auto* mo = std::get_if<MoebiusExpFactor>(&c)) {
        if (mo->A0 == Cx(0) || mo->A1 == Cx(0))
            throw std::invalid_argument("moebius factor: A0*A1 must be nonzero");
        detail::require_distinct(std::vector<Cx>{mo->alpha1, mo->alpha2}, "moebius factor");
        const Cx s = mo->A0 * (mo->alpha1 - mo->alpha2);
        for (int i = 0; i < samples;) {
            Cx x = sampler.disc(2.0);
            if (detail::moebius_pole_distance(x, mo->A1, s) < 1e-3) continue; // pole avoidance
            // f = N/D with N = alpha2 A1 e^{sw} - alpha1, D = A1 e^{sw} - 1;
            // quotient rule applied to the one-variable jets of N and D.
            Jet w = jet_var(0, x, 1);
            Jet ew = exp(s * w);
            Jet N = mo->alpha2 * (mo->A1 * ew) - Jet::constant(mo->alpha1, 1);
            Jet D = mo->A1 * ew - Jet::constant(Cx(1), 1);
            Cx fval = N.value / D.value;
            Cx fder = (N.grad[0] * D.value - N.value * D.grad[0]) / (D.value * D.value);
            record(x, fder - mo->A0 * (fval - mo->alpha1) * (fval - mo->alpha2));
            ++i;
        }
        return report;
    }

    if (const auto* si = std::get_if<SinFactor>(&c)) {
        if (si->A0 == Cx(0))
            throw std::invalid_argument("sin factor: A0 must be nonzero");
        detail::require_distinct(std::vector<Cx>{si->alpha1, si->alpha2}, "sin factor");
        const Cx root = std::sqrt(-si->A0); // either branch: only root^2 enters the ODE
        Expr w = Expr::var(0);
        Expr f = Expr::constant((si->alpha1 - si->alpha2) / 2.0) *
                     Expr::sin(Expr::constant(root) * w + Expr::constant(si->A1)) +
                 Expr::constant((si->alpha1 + si->alpha2) / 2.0);
        for (int i = 0; i < samples; ++i) {
            Cx x = sampler.disc(2.0);
            Jet j = eval_jet(f, std::span<const Cx>(&x, 1));
            record(x, j.grad[0] * j.grad[0] -
                          si->A0 * (j.value - si->alpha1) * (j.value - si->alpha2));
        }
        return report;
    }

    const auto& el = std::get<EllipticFactor>(c);
    if (el.alphas.size() != 3 && el.alphas.size() != 4)
        throw std::invalid_argument("elliptic factor: needs 3 or 4 alpha values");
    detail::require_distinct(el.alphas, "elliptic factor");
    if (el.A0 == Cx(0)) throw std::invalid_argument("elliptic factor: A0 must be nonzero");
    if (el.m1 < 0 || el.m2 < 0 || el.m1 + el.m2 > 2)
        throw std::invalid_argument("elliptic factor: need m1,m2 >= 0 with m1+m2 <= 2");
    if (const auto* a = std::get_if<WpAffine>(&el.f)) {
        if (a->params.discriminant() == Cx(0))
            throw std::invalid_argument("elliptic factor: degenerate lattice (discriminant 0)");
    }
    for (int i = 0; i < samples; ++i) {
        // wp series validity: sample the annulus 0.1 <= |w| <= 0.5.
        Cx x = sampler.annulus(0.1, 0.5);
        auto [fval, fder] = detail::eval_factor(el.f, x);
        Cx lhs = fder * fder;
        if (el.m1 > 0) lhs *= detail::cx_pow_int(x - el.b1, el.m1);
        if (el.m2 > 0) lhs *= detail::cx_pow_int(x - el.b2, el.m2);
        Cx rhs = el.A0;
        for (Cx alpha : el.alphas) rhs *= fval - alpha;
        record(x, lhs - rhs);
    }
    return report;
}

} // namespace waring
