#pragma once

// Characteristic ODE system of H(Du) = P(u) and a fixed-step RK4 integrator
// over a straight segment in the complex parameter plane. Along any
// trajectory the residual H(Du) - P(u) is a first integral, which makes the
// integrator an independent oracle against the closed-form families:
//   dz/dtau  = grad H(Du)
//   dDu/dtau = P'(u) Du
//   du/dtau  = Du . grad H(Du)

#include <optional>

#include "constraint.hpp"

namespace waring {

struct CharState {
    Cx tau{};
    std::vector<Cx> z;
    std::vector<Cx> du;
    Cx u{};
};

struct CharSystem {
    WaringForm H = WaringForm::diagonal({2});
    UniPoly P;
    std::size_t n = 0;

    CharSystem(WaringForm h, UniPoly p) : H(std::move(h)), P(std::move(p)), n(H.dimension()) {}
};

struct CharDerivative {
    std::vector<Cx> dz;
    std::vector<Cx> ddu;
    Cx du{};
};

/// Trajectory escaped toward a movable singularity. Carries where the
/// integration stood and, when the instance admits one, the closed-form
/// singularity estimate tau* = 1/(l(l-1) u0^{l-1}).
struct BlowupError : std::runtime_error {
    Cx tau_reached;
    std::optional<Cx> tau_singularity;
    BlowupError(std::string msg, Cx tau, std::optional<Cx> tau_sing)
        : std::runtime_error(std::move(msg)), tau_reached(tau), tau_singularity(tau_sing) {}
};

inline CharDerivative char_rhs(const CharSystem& sys, const CharState& s) {
    if (s.z.size() != sys.n || s.du.size() != sys.n)
        throw std::invalid_argument("char_rhs: state dimension mismatch");
    // grad H at Du via one jet evaluation of H.
    std::vector<Jet> x;
    x.reserve(sys.n);
    for (std::size_t j = 0; j < sys.n; ++j) x.push_back(jet_var(j, s.du[j], sys.n));
    Jet h = eval_form(sys.H, std::span<const Jet>(x));
    // P'(u) via a one-variable jet.
    Jet p = eval_upoly(sys.P, jet_var(0, s.u, 1));
    Cx dP = p.grad[0];

    CharDerivative d;
    d.dz = h.grad;
    d.ddu.resize(sys.n);
    for (std::size_t j = 0; j < sys.n; ++j) d.ddu[j] = dP * s.du[j];
    d.du = Cx(0);
    for (std::size_t j = 0; j < sys.n; ++j) d.du += s.du[j] * h.grad[j];
    return d;
}

using Trajectory = std::vector<CharState>;

namespace detail {

inline CharState state_axpy(const CharState& base, Cx scale, const CharDerivative& d) {
    CharState r = base;
    for (std::size_t j = 0; j < r.z.size(); ++j) {
        r.z[j] += scale * d.dz[j];
        r.du[j] += scale * d.ddu[j];
    }
    r.u += scale * d.du;
    r.tau += scale;
    return r;
}

inline double state_magnitude(const CharState& s) {
    double m = std::abs(s.u);
    for (const auto& g : s.du) m = std::max(m, std::abs(g));
    return m;
}

/// tau* of the uniform diagonal case with hbar = ell >= 2 (movable
/// singularity of the u-equation); nullopt when the formula does not apply.
inline std::optional<Cx> singularity_estimate(const CharSystem& sys, const CharState& s0) {
    if (!sys.H.is_diagonal()) return std::nullopt;
    const auto& ex = sys.H.diagonal_exponents();
    int ell = ex.front();
    for (int e : ex)
        if (e != ell) return std::nullopt;
    if (ell < 2) return std::nullopt;
    if (sys.P.roots.size() != 1 || sys.P.roots.front().first != Cx(0) ||
        sys.P.roots.front().second != ell || sys.P.leading != Cx(1))
        return std::nullopt;
    Cx u0pow{1.0};
    for (int i = 0; i < ell - 1; ++i) u0pow *= s0.u;
    Cx denom = static_cast<double>(ell) * static_cast<double>(ell - 1) * u0pow;
    if (denom == Cx(0)) return std::nullopt;
    return Cx(1) / denom;
}

} // namespace detail

inline constexpr double kBlowupGuard = 1e12;

/// Classical RK4 with fixed step tau_end/steps along the straight segment
/// 0 -> tau_end; returns every intermediate state including the initial one.
inline Trajectory integrate(const CharSystem& sys, const CharState& s0, Cx tau_end, int steps) {
    if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
    const Cx h = tau_end / static_cast<double>(steps);
    auto tau_sing = detail::singularity_estimate(sys, s0);

    Trajectory traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    traj.push_back(s0);
    CharState s = s0;
    for (int i = 0; i < steps; ++i) {
        CharDerivative k1 = char_rhs(sys, s);
        CharDerivative k2 = char_rhs(sys, detail::state_axpy(s, h / 2.0, k1));
        CharDerivative k3 = char_rhs(sys, detail::state_axpy(s, h / 2.0, k2));
        CharDerivative k4 = char_rhs(sys, detail::state_axpy(s, h, k3));
        CharState next = s;
        next.tau = s.tau + h;
        for (std::size_t j = 0; j < sys.n; ++j) {
            next.z[j] += h / 6.0 * (k1.dz[j] + 2.0 * k2.dz[j] + 2.0 * k3.dz[j] + k4.dz[j]);
            next.du[j] += h / 6.0 * (k1.ddu[j] + 2.0 * k2.ddu[j] + 2.0 * k3.ddu[j] + k4.ddu[j]);
        }
        next.u += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        if (detail::state_magnitude(next) > kBlowupGuard || !is_finite(next.u)) {
            std::string msg = "integrate: trajectory blow-up near tau = " +
                              std::to_string(next.tau.real()) + "+" +
                              std::to_string(next.tau.imag()) + "i";
            if (tau_sing)
                msg += " (movable singularity estimate tau* = " +
                       std::to_string(tau_sing->real()) + "+" +
                       std::to_string(tau_sing->imag()) + "i)";
            throw BlowupError(msg, next.tau, tau_sing);
        }
        s = std::move(next);
        traj.push_back(s);
    }
    return traj;
}

/// Initial characteristic data of a candidate solution at z0.
inline CharState initial_state(const Expr& u, std::span<const Cx> z0) {
    Jet j = eval_jet(u, z0);
    CharState s;
    s.tau = Cx(0);
    s.z.assign(z0.begin(), z0.end());
    s.du = j.grad;
    s.u = j.value;
    return s;
}

struct CrossCheckResult {
    double max_deviation = 0.0;        // max |u_integrated - u_family(z(tau))|
    double max_residual_drift = 0.0;   // max |H(Du) - P(u)| along the trajectory
    Trajectory trajectory;
};

/// Integrates the characteristics from the family's own initial data and
/// tracks the closed form along the numerically transported base points.
inline CrossCheckResult cross_check(const CharSystem& sys, const Expr& u_family,
                                    std::span<const Cx> z0, Cx tau_end, int steps) {
    CrossCheckResult r;
    r.trajectory = integrate(sys, initial_state(u_family, z0), tau_end, steps);
    for (const auto& s : r.trajectory) {
        Cx u_closed = eval_value(u_family, s.z);
        r.max_deviation = std::max(r.max_deviation, std::abs(s.u - u_closed));
        Cx res = eval_form(sys.H, std::span<const Cx>(s.du)) - eval_upoly(sys.P, s.u);
        r.max_residual_drift = std::max(r.max_residual_drift, std::abs(res));
    }
    return r;
}

} // namespace waring
