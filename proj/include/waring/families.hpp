#pragma once

// Constructors for the closed-form entire solution families of
//   (rho_1 u_{z1} + ... + rho_n u_{zn})^l = p(u)        (directional form)
//   u_{z1}^{l_1} + ... + u_{zn}^{l_n}   = u^h           (diagonal form)
// together with the null-function generators that feed them. Each
// constructor emits the candidate solution u, the PDE instance (H, P) it
// should solve, and the machine-checkable constraint list; nothing is
// assumed solved — the verifier measures every constraint.

#include <cstdint>
#include <optional>
#include <variant>

#include "constraint.hpp"

namespace waring {

// ---------------------------------------------------------------------------
// Null functions Phi
// ---------------------------------------------------------------------------

/// Recipe for an entire Phi. The difference variants annihilate the weighted
/// direction rho exactly (rho . grad Phi == 0 by telescoping); null_direction
/// builds Phi = core(d . z), whose usefulness depends on the per-power
/// conditions on d reported by the family constructors; raw passes the core
/// through as an arbitrary expression over the ambient coordinates.
struct PhiSpec {
    enum class Variant { Zero, CyclicDiff, BaseDiff, PairedDiff, WeightedDiff, NullDirection, Raw };
    Variant variant = Variant::Zero;
    std::vector<Cx> weights;          // rho for the diff variants, d for null_direction
    Expr core = Expr::constant(Cx(0)); // over the variant's derived coordinates
};

/// Number of derived coordinates the variant's core expression ranges over.
inline std::size_t phi_core_arity(PhiSpec::Variant v, std::size_t n) {
    using V = PhiSpec::Variant;
    switch (v) {
        case V::Zero: return 0;
        case V::CyclicDiff: return n;
        case V::BaseDiff: return n >= 1 ? n - 1 : 0;
        case V::PairedDiff: return n / 2;
        case V::WeightedDiff: return 1;
        case V::NullDirection: return 1;
        case V::Raw: return n;
    }
    return 0;
}

namespace detail {

inline Expr linear_combo(std::span<const Cx> w) {
    if (w.empty()) return Expr::constant(Cx(0));
    Expr acc = Expr::constant(w[0]) * Expr::var(0);
    for (std::size_t j = 1; j < w.size(); ++j)
        acc = acc + Expr::constant(w[j]) * Expr::var(j);
    return acc;
}

inline void require_nonzero_weights(std::span<const Cx> w, const char* who) {
    for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j] == Cx(0))
            throw std::invalid_argument(std::string(who) + ": weight " + std::to_string(j + 1) +
                                        " is zero");
}

} // namespace detail

/// Instantiates Phi as an Expr of dimension n.
inline Expr make_phi(const PhiSpec& spec, std::size_t n) {
    using V = PhiSpec::Variant;
    if (spec.variant == V::Zero) return Expr::constant(Cx(0));
    if (spec.variant == V::Raw) {
        if (spec.core.min_dimension() > n)
            throw std::invalid_argument("make_phi: raw core uses " +
                                        std::to_string(spec.core.min_dimension()) +
                                        " variables in dimension " + std::to_string(n));
        return spec.core;
    }

    const auto& w = spec.weights;
    if (w.size() != n)
        throw std::invalid_argument("make_phi: weight count " + std::to_string(w.size()) +
                                    " does not match dimension " + std::to_string(n));

    std::vector<Expr> coords;
    switch (spec.variant) {
        case V::CyclicDiff: {
            detail::require_nonzero_weights(w, "make_phi(cyclic_diff)");
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t k = (j + 1) % n;
                coords.push_back(Expr::constant(Cx(1) / w[k]) * Expr::var(k) -
                                 Expr::constant(Cx(1) / w[j]) * Expr::var(j));
            }
            break;
        }
        case V::BaseDiff: {
            if (n < 2) throw std::invalid_argument("make_phi(base_diff): needs n >= 2");
            detail::require_nonzero_weights(w, "make_phi(base_diff)");
            for (std::size_t j = 1; j < n; ++j)
                coords.push_back(Expr::constant(Cx(1) / w[j]) * Expr::var(j) -
                                 Expr::constant(Cx(1) / w[0]) * Expr::var(0));
            break;
        }
        case V::PairedDiff: {
            if (n % 2 != 0) throw std::invalid_argument("make_phi(paired_diff): needs even n");
            detail::require_nonzero_weights(w, "make_phi(paired_diff)");
            for (std::size_t k = 0; k < n / 2; ++k)
                coords.push_back(Expr::constant(Cx(1) / w[2 * k + 1]) * Expr::var(2 * k + 1) -
                                 Expr::constant(Cx(1) / w[2 * k]) * Expr::var(2 * k));
            break;
        }
        case V::WeightedDiff: {
            detail::require_nonzero_weights(w, "make_phi(weighted_diff)");
            Expr acc = Expr::constant(Cx(static_cast<double>(n - 1)) / w[0]) * Expr::var(0);
            for (std::size_t j = 1; j < n; ++j)
                acc = acc - Expr::constant(Cx(1) / w[j]) * Expr::var(j);
            coords.push_back(acc);
            break;
        }
        case V::NullDirection:
            coords.push_back(detail::linear_combo(w));
            break;
        case V::Zero:
        case V::Raw:
            break; // handled above
    }

    if (spec.core.min_dimension() > coords.size())
        throw std::invalid_argument("make_phi: core uses " +
                                    std::to_string(spec.core.min_dimension()) +
                                    " variables but the variant provides " +
                                    std::to_string(coords.size()));
    return substitute(spec.core, coords);
}

// ---------------------------------------------------------------------------
// Family specifications
// ---------------------------------------------------------------------------

/// u = r (sigma . z) + Phi,   (rho . grad u)^l = c0,   r^l = c0.
struct DirectionalLinear {
    std::vector<Cx> rho, sigma;
    Cx c0, c0_root;
    int ell = 1;
    PhiSpec phi;
};

/// u = ((l-h)/l r (sigma . z) + Phi)^{l/(l-h)} + a1,  p(w) = c0 (w-a1)^h.
struct DirectionalPower {
    std::vector<Cx> rho, sigma;
    Cx c0, c0_root;
    int ell = 2, hbar = 1;
    Cx a1;
    PhiSpec phi;
};

/// u = Phi e^{r (sigma . z)} + a1,  p(w) = c0 (w-a1)^l  (h = l).
struct DirectionalExp {
    std::vector<Cx> rho, sigma;
    Cx c0, c0_root;
    int ell = 1;
    Cx a1;
    PhiSpec phi;
};

/// u = (a1-a2)/2 cosh(r (sigma . z) + Phi) + (a1+a2)/2, l even,
/// p(w) = c0 (w-a1)^{l/2} (w-a2)^{l/2}.
struct DirectionalCosh {
    std::vector<Cx> rho, sigma;
    Cx c0, c0_root;
    int ell = 2;
    Cx a1, a2;
    PhiSpec phi;
};

/// u = sigma . z + Phi,  sum_j u_{zj}^{l_j} = 1,  sum_j sigma_j^{l_j} = 1.
struct DiagonalLinear {
    std::vector<int> exponents;
    std::vector<Cx> sigma;
    PhiSpec phi;
};

/// u = sum_j (z_j/2 + c_j)^2,  sum u_{zj}^2 = u.
struct Paraboloid {
    std::vector<Cx> c;
};

/// u = ((l-h)/l (sigma . z) + Phi)^{l/(l-h)},  sum u_{zj}^l = u^h.
struct DiagonalPower {
    int ell = 2, hbar = 1;
    std::vector<Cx> sigma;
    PhiSpec phi;
};

/// u = Psi e^{sigma . z},  sum u_{zj}^l = u^l.
struct DiagonalExp {
    int ell = 2;
    std::vector<Cx> sigma;
    PhiSpec psi;
};

/// A verbatim instance: candidate u against an explicit (H, P).
struct DirectInstance {
    Expr u;
    WaringForm H = WaringForm::diagonal({2});
    UniPoly P;
    bool unconfirmed = false;
};

using FamilySpec = std::variant<DirectionalLinear, DirectionalPower, DirectionalExp,
                                DirectionalCosh, DiagonalLinear, Paraboloid, DiagonalPower,
                                DiagonalExp, DirectInstance>;

struct ConstructedFamily {
    std::string description;
    std::size_t n = 0;
    Expr u;
    WaringForm H = WaringForm::diagonal({2});
    UniPoly P;
    std::vector<Constraint> constraints;
    bool unconfirmed = false;
};

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kPreconditionTol = 1e-12;

inline Cx dot(std::span<const Cx> a, std::span<const Cx> b) {
    Cx s{};
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

inline void require_precondition(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("family precondition violated: " + what);
}

inline void require_small(Cx value, const std::string& what) {
    if (std::abs(value) > kPreconditionTol)
        throw std::invalid_argument("family precondition violated: " + what + " (residual " +
                                    std::to_string(std::abs(value)) + ")");
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// (sum_j rho_j x_j)^l expanded into its sparse homogeneous monomial list,
/// with multinomial coefficients l!/(k_1!...k_n!) prod rho_j^{k_j}.
inline WaringForm expand_power_of_linear(std::span<const Cx> rho, int ell) {
    const std::size_t n = rho.size();
    std::vector<Monomial> terms;
    std::vector<int> powers(n, 0);
    auto emit = [&]() {
        double multinom = 1.0;
        int used = 0;
        for (std::size_t j = 0; j < n; ++j) {
            multinom *= static_cast<double>(binomial(used + powers[j], powers[j]));
            used += powers[j];
        }
        Cx coeff = multinom;
        for (std::size_t j = 0; j < n; ++j) coeff *= cx_pow_int(rho[j], powers[j]);
        if (coeff != Cx(0)) terms.push_back({coeff, powers});
    };
    auto walk = [&](auto&& self, std::size_t j, int remaining) -> void {
        if (j + 1 == n) {
            powers[j] = remaining;
            emit();
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            powers[j] = k;
            self(self, j + 1, remaining - k);
        }
    };
    walk(walk, 0, ell);
    if (terms.empty())
        throw std::invalid_argument("expand_power_of_linear: all weights are zero");
    return WaringForm::monomials(n, terms);
}

/// rho . grad Phi, with floor 1 + ||grad Phi||.
inline Constraint annihilation_constraint(Expr phi, std::vector<Cx> rho, std::string name) {
    Constraint c;
    c.name = std::move(name);
    c.kind = Constraint::Kind::Sampled;
    c.eval = [phi = std::move(phi), rho = std::move(rho)](std::span<const Cx> z) {
        Jet jp = eval_jet(phi, z);
        Cx dir{};
        double norm2 = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            dir += rho[j] * jp.grad[j];
            norm2 += std::norm(jp.grad[j]);
        }
        return ConstraintSample{dir, 1.0 + std::sqrt(norm2)};
    };
    return c;
}

/// Per-power scalar conditions sum_j C(l_j,i) c_j^{l_j-i} d_j^i for i=1..max l.
inline std::vector<Cx> power_conditions(std::span<const Cx> c, std::span<const int> exponents,
                                        std::span<const Cx> d) {
    int lmax = 0;
    for (int l : exponents) lmax = std::max(lmax, l);
    std::vector<Cx> g(static_cast<std::size_t>(lmax));
    for (int iota = 1; iota <= lmax; ++iota) {
        Cx s{};
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (exponents[j] < iota) continue;
            s += static_cast<double>(binomial(exponents[j], iota)) *
                 cx_pow_int(c[j], exponents[j] - iota) * cx_pow_int(d[j], iota);
        }
        g[static_cast<std::size_t>(iota - 1)] = s;
    }
    return g;
}

/// Unweighted power sums sum_j c_j^{l_j-i} d_j^i; when all exponents agree
/// these are proportional to the weighted conditions.
inline std::vector<Cx> power_sums(std::span<const Cx> c, std::span<const int> exponents,
                                  std::span<const Cx> d) {
    int lmax = 0;
    for (int l : exponents) lmax = std::max(lmax, l);
    std::vector<Cx> g(static_cast<std::size_t>(lmax));
    for (int iota = 1; iota <= lmax; ++iota) {
        Cx s{};
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (exponents[j] < iota) continue;
            s += cx_pow_int(c[j], exponents[j] - iota) * cx_pow_int(d[j], iota);
        }
        g[static_cast<std::size_t>(iota - 1)] = s;
    }
    return g;
}

/// Appends the null-direction scalar conditions; returns true when all of
/// them vanish at tolerance (the family-confirmation evidence).
inline bool append_direction_conditions(std::vector<Constraint>& out, std::span<const Cx> base,
                                        std::span<const int> exponents, std::span<const Cx> d,
                                        double tol) {
    auto weighted = power_conditions(base, exponents, d);
    auto raw = power_sums(base, exponents, d);
    bool all_ok = true;
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        out.push_back(scalar_constraint("power_condition_iota" + std::to_string(i + 1), weighted[i]));
        out.push_back(scalar_constraint("power_sum_iota" + std::to_string(i + 1), raw[i]));
        if (std::abs(weighted[i]) > tol) all_ok = false;
    }
    return all_ok;
}

/// sum_j sum_{i>=1} C(l_j,i) sigma_j^{l_j-i} (m Phi_{zj})^i at a point: the
/// expansion of sum (sigma_j + m Phi_{zj})^{l_j} - sum sigma_j^{l_j}.
inline Constraint phi_expanded_condition(Expr phi, std::vector<Cx> sigma, std::vector<int> exponents,
                                         Cx scale, std::string name) {
    Constraint c;
    c.name = std::move(name);
    c.kind = Constraint::Kind::Sampled;
    c.eval = [phi = std::move(phi), sigma = std::move(sigma), exponents = std::move(exponents),
              scale](std::span<const Cx> z) {
        Jet jp = eval_jet(phi, z);
        Cx s{};
        double floor = 1.0;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            Cx t = scale * jp.grad[j];
            for (int iota = 1; iota <= exponents[j]; ++iota)
                s += static_cast<double>(binomial(exponents[j], iota)) *
                     cx_pow_int(sigma[j], exponents[j] - iota) * cx_pow_int(t, iota);
            floor += std::pow(std::abs(sigma[j]) + std::abs(t), exponents[j]);
        }
        return ConstraintSample{s, floor};
    };
    return c;
}

/// The same condition without binomial factors, sum_j sum_i
/// sigma_j^{l_j-i} Phi_{zj}^i; both readings are reported so neither is
/// silently preferred.
inline Constraint phi_literal_condition(Expr phi, std::vector<Cx> sigma, std::vector<int> exponents,
                                        std::string name) {
    Constraint c;
    c.name = std::move(name);
    c.kind = Constraint::Kind::Sampled;
    c.eval = [phi = std::move(phi), sigma = std::move(sigma),
              exponents = std::move(exponents)](std::span<const Cx> z) {
        Jet jp = eval_jet(phi, z);
        Cx s{};
        double floor = 1.0;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            for (int iota = 1; iota <= exponents[j]; ++iota)
                s += cx_pow_int(sigma[j], exponents[j] - iota) * cx_pow_int(jp.grad[j], iota);
            floor += std::pow(std::abs(sigma[j]) + std::abs(jp.grad[j]), exponents[j]);
        }
        return ConstraintSample{s, floor};
    };
    return c;
}

inline PhiSpec phi_with_default_weights(const PhiSpec& phi, std::span<const Cx> rho) {
    PhiSpec out = phi;
    if (out.variant != PhiSpec::Variant::Zero && out.variant != PhiSpec::Variant::NullDirection &&
        out.weights.empty())
        out.weights.assign(rho.begin(), rho.end());
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// construct(): family -> (u, H, P, constraints)
// ---------------------------------------------------------------------------

namespace detail {

struct DirectionalCommon {
    std::size_t n;
    Expr sigma_dot_z;
    Expr phi;
    PhiSpec phi_spec;
};

inline DirectionalCommon directional_prologue(std::span<const Cx> rho, std::span<const Cx> sigma,
                                              Cx c0, Cx c0_root, int ell, const PhiSpec& phi) {
    if (rho.empty() || rho.size() != sigma.size())
        throw std::invalid_argument("family: rho and sigma must be non-empty and equal length");
    require_precondition(ell >= 1, "ell >= 1");
    require_small(dot(rho, sigma) - Cx(1), "rho . sigma = 1");
    require_small(cx_pow_int(c0_root, ell) - c0, "c0_root^ell = c0");
    DirectionalCommon out;
    out.n = rho.size();
    out.sigma_dot_z = linear_combo(sigma);
    out.phi_spec = phi_with_default_weights(phi, rho);
    out.phi = make_phi(out.phi_spec, out.n);
    return out;
}

inline void append_directional_constraints(std::vector<Constraint>& cs, std::span<const Cx> rho,
                                           std::span<const Cx> sigma, Cx c0, Cx c0_root, int ell,
                                           const Expr& phi) {
    cs.push_back(scalar_constraint("rho_dot_sigma", dot(rho, sigma) - Cx(1)));
    cs.push_back(scalar_constraint("root_witness", cx_pow_int(c0_root, ell) - c0));
    cs.push_back(annihilation_constraint(phi, std::vector<Cx>(rho.begin(), rho.end()),
                                         "phi_annihilation"));
}

} // namespace detail

inline ConstructedFamily construct(const FamilySpec& spec) {
    using namespace detail;
    ConstructedFamily out;

    if (const auto* f = std::get_if<DirectionalLinear>(&spec)) {
        auto pre = directional_prologue(f->rho, f->sigma, f->c0, f->c0_root, f->ell, f->phi);
        out.n = pre.n;
        out.u = Expr::constant(f->c0_root) * pre.sigma_dot_z + pre.phi;
        out.H = expand_power_of_linear(f->rho, f->ell);
        out.P = UniPoly::constant(f->c0);
        out.description = "directional linear family (ell=" + std::to_string(f->ell) +
                          ", n=" + std::to_string(pre.n) + ")";
        append_directional_constraints(out.constraints, f->rho, f->sigma, f->c0, f->c0_root,
                                       f->ell, pre.phi);
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DirectionalPower>(&spec)) {
        require_precondition(f->hbar >= 0 && f->hbar < f->ell, "0 <= hbar < ell");
        require_precondition(f->ell % (f->ell - f->hbar) == 0, "ell/(ell-hbar) is an integer");
        const int m = f->ell / (f->ell - f->hbar);
        auto pre = directional_prologue(f->rho, f->sigma, f->c0, f->c0_root, f->ell, f->phi);
        out.n = pre.n;
        Cx slope = Cx(static_cast<double>(f->ell - f->hbar) / f->ell) * f->c0_root;
        Expr psi = Expr::constant(slope) * pre.sigma_dot_z + pre.phi;
        out.u = Expr::pow_int(psi, m) + Expr::constant(f->a1);
        out.H = expand_power_of_linear(f->rho, f->ell);
        out.P = f->hbar == 0 ? UniPoly::constant(f->c0)
                             : UniPoly(f->c0, {{f->a1, f->hbar}});
        out.description = "directional power family (ell=" + std::to_string(f->ell) +
                          ", hbar=" + std::to_string(f->hbar) + ", n=" + std::to_string(pre.n) + ")";
        append_directional_constraints(out.constraints, f->rho, f->sigma, f->c0, f->c0_root,
                                       f->ell, pre.phi);
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DirectionalExp>(&spec)) {
        auto pre = directional_prologue(f->rho, f->sigma, f->c0, f->c0_root, f->ell, f->phi);
        out.n = pre.n;
        out.u = pre.phi * Expr::exp(Expr::constant(f->c0_root) * pre.sigma_dot_z) +
                Expr::constant(f->a1);
        out.H = expand_power_of_linear(f->rho, f->ell);
        out.P = UniPoly(f->c0, {{f->a1, f->ell}});
        out.description = "directional exponential family (ell=" + std::to_string(f->ell) +
                          ", n=" + std::to_string(pre.n) + ")";
        append_directional_constraints(out.constraints, f->rho, f->sigma, f->c0, f->c0_root,
                                       f->ell, pre.phi);
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DirectionalCosh>(&spec)) {
        require_precondition(f->ell % 2 == 0, "ell even");
        require_precondition(f->a1 != f->a2, "a1 != a2");
        auto pre = directional_prologue(f->rho, f->sigma, f->c0, f->c0_root, f->ell, f->phi);
        out.n = pre.n;
        Cx half_diff = (f->a1 - f->a2) / 2.0;
        Cx half_sum = (f->a1 + f->a2) / 2.0;
        Expr arg = Expr::constant(f->c0_root) * pre.sigma_dot_z + pre.phi;
        out.u = Expr::constant(half_diff) * Expr::cosh(arg) + Expr::constant(half_sum);
        out.H = expand_power_of_linear(f->rho, f->ell);
        out.P = UniPoly(f->c0, {{f->a1, f->ell / 2}, {f->a2, f->ell / 2}});
        out.description = "directional cosh family (ell=" + std::to_string(f->ell) +
                          ", n=" + std::to_string(pre.n) + ")";
        append_directional_constraints(out.constraints, f->rho, f->sigma, f->c0, f->c0_root,
                                       f->ell, pre.phi);
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DiagonalLinear>(&spec)) {
        const std::size_t n = f->exponents.size();
        if (n == 0 || f->sigma.size() != n)
            throw std::invalid_argument("family: exponents and sigma must be non-empty, equal length");
        Cx unit{};
        for (std::size_t j = 0; j < n; ++j)
            unit += cx_pow_int(f->sigma[j], f->exponents[j]);
        require_small(unit - Cx(1), "sum sigma_j^{l_j} = 1");
        Expr phi = make_phi(f->phi, n);
        out.n = n;
        out.u = linear_combo(f->sigma) + phi;
        out.H = WaringForm::diagonal(f->exponents);
        out.P = UniPoly::constant(Cx(1));
        out.description = "diagonal linear family (n=" + std::to_string(n) + ")";
        out.constraints.push_back(scalar_constraint("sigma_power_sum", unit - Cx(1)));
        if (f->phi.variant == PhiSpec::Variant::NullDirection) {
            bool ok = append_direction_conditions(out.constraints, f->sigma, f->exponents,
                                                  f->phi.weights, 1e-9);
            if (!ok) out.unconfirmed = true;
        }
        out.constraints.push_back(phi_expanded_condition(phi, f->sigma, f->exponents, Cx(1),
                                                         "phi_expanded_condition"));
        out.constraints.push_back(phi_literal_condition(phi, f->sigma, f->exponents,
                                                        "phi_literal_condition"));
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<Paraboloid>(&spec)) {
        const std::size_t n = f->c.size();
        if (n == 0) throw std::invalid_argument("family: paraboloid needs at least one coordinate");
        out.n = n;
        Expr u = Expr::constant(Cx(0));
        for (std::size_t j = 0; j < n; ++j)
            u = u + Expr::pow_int(Expr::constant(Cx(0.5)) * Expr::var(j) +
                                  Expr::constant(f->c[j]), 2);
        out.u = u;
        out.H = WaringForm::diagonal(std::vector<int>(n, 2));
        out.P = UniPoly::power(1);
        out.description = "paraboloid family (n=" + std::to_string(n) + ")";
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DiagonalPower>(&spec)) {
        const std::size_t n = f->sigma.size();
        if (n == 0) throw std::invalid_argument("family: sigma must be non-empty");
        require_precondition(f->hbar >= 1 && f->hbar < f->ell, "1 <= hbar < ell");
        require_precondition(f->ell % (f->ell - f->hbar) == 0, "ell/(ell-hbar) is an integer");
        const int m = f->ell / (f->ell - f->hbar);
        Cx unit{};
        for (std::size_t j = 0; j < n; ++j) unit += cx_pow_int(f->sigma[j], f->ell);
        require_small(unit - Cx(1), "sum sigma_j^ell = 1");
        Expr phi = make_phi(f->phi, n);
        out.n = n;
        Expr psi = Expr::constant(Cx(static_cast<double>(f->ell - f->hbar) / f->ell)) *
                       linear_combo(f->sigma) + phi;
        out.u = Expr::pow_int(psi, m);
        out.H = WaringForm::diagonal(std::vector<int>(n, f->ell));
        out.P = UniPoly::power(f->hbar);
        out.description = "diagonal power family (ell=" + std::to_string(f->ell) +
                          ", hbar=" + std::to_string(f->hbar) + ", n=" + std::to_string(n) + ")";
        out.constraints.push_back(scalar_constraint("sigma_power_sum", unit - Cx(1)));
        std::vector<int> exps(n, f->ell);
        if (f->phi.variant == PhiSpec::Variant::NullDirection) {
            bool ok = append_direction_conditions(out.constraints, f->sigma, exps,
                                                  f->phi.weights, 1e-9);
            if (!ok) out.unconfirmed = true;
        }
        out.constraints.push_back(phi_expanded_condition(phi, f->sigma, exps,
                                                         Cx(static_cast<double>(m)),
                                                         "phi_expanded_condition"));
        out.constraints.push_back(phi_literal_condition(phi, f->sigma, exps,
                                                        "phi_literal_condition"));
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DiagonalExp>(&spec)) {
        const std::size_t n = f->sigma.size();
        if (n == 0) throw std::invalid_argument("family: sigma must be non-empty");
        require_precondition(f->ell >= 1, "ell >= 1");
        Cx unit{};
        for (std::size_t j = 0; j < n; ++j) unit += cx_pow_int(f->sigma[j], f->ell);
        require_small(unit - Cx(1), "sum sigma_j^ell = 1");
        Expr psi = make_phi(f->psi, n);
        out.n = n;
        out.u = psi * Expr::exp(linear_combo(f->sigma));
        out.H = WaringForm::diagonal(std::vector<int>(n, f->ell));
        out.P = UniPoly::power(f->ell);
        out.description = "diagonal exponential family (ell=" + std::to_string(f->ell) +
                          ", n=" + std::to_string(n) + ")";
        out.constraints.push_back(scalar_constraint("sigma_power_sum", unit - Cx(1)));
        std::vector<int> exps(n, f->ell);
        if (f->psi.variant == PhiSpec::Variant::NullDirection) {
            bool ok = append_direction_conditions(out.constraints, f->sigma, exps,
                                                  f->psi.weights, 1e-9);
            if (!ok) out.unconfirmed = true;
        }
        // Envelope condition: sum_j sum_{i>=1} C(l,i) (sigma_j Psi)^{l-i} Psi_{zj}^i.
        {
            Constraint c;
            c.name = "envelope_expanded_condition";
            c.kind = Constraint::Kind::Sampled;
            std::vector<Cx> sigma = f->sigma;
            int ell = f->ell;
            c.eval = [psi, sigma, ell](std::span<const Cx> z) {
                Jet jp = eval_jet(psi, z);
                Cx s{};
                double floor = 1.0;
                for (std::size_t j = 0; j < sigma.size(); ++j) {
                    Cx base = sigma[j] * jp.value;
                    for (int iota = 1; iota <= ell; ++iota)
                        s += static_cast<double>(binomial(ell, iota)) *
                             cx_pow_int(base, ell - iota) * cx_pow_int(jp.grad[j], iota);
                    floor += std::pow(std::abs(base) + std::abs(jp.grad[j]), ell);
                }
                return ConstraintSample{s, floor};
            };
            out.constraints.push_back(std::move(c));
        }
        {
            Constraint c;
            c.name = "envelope_literal_condition";
            c.kind = Constraint::Kind::Sampled;
            std::vector<Cx> sigma = f->sigma;
            int ell = f->ell;
            c.eval = [psi, sigma, ell](std::span<const Cx> z) {
                Jet jp = eval_jet(psi, z);
                Cx s{};
                double floor = 1.0;
                for (std::size_t j = 0; j < sigma.size(); ++j) {
                    Cx base = sigma[j] * jp.value;
                    for (int iota = 1; iota <= ell; ++iota)
                        s += cx_pow_int(base, ell - iota) * cx_pow_int(jp.grad[j], iota);
                    floor += std::pow(std::abs(base) + std::abs(jp.grad[j]), ell);
                }
                return ConstraintSample{s, floor};
            };
            out.constraints.push_back(std::move(c));
        }
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    if (const auto* f = std::get_if<DirectInstance>(&spec)) {
        out.n = f->H.dimension();
        if (f->u.min_dimension() > out.n)
            throw std::invalid_argument("family: direct u uses more variables than the form's dimension");
        out.u = f->u;
        out.H = f->H;
        out.P = f->P;
        out.unconfirmed = f->unconfirmed;
        out.description = "direct instance (n=" + std::to_string(out.n) + ")";
        out.constraints.push_back(pde_residual_constraint(out.u, out.H, out.P));
        return out;
    }

    throw std::logic_error("construct: unhandled family variant");
}

// ---------------------------------------------------------------------------
// Null-direction solving
// ---------------------------------------------------------------------------

struct DirectionCandidate {
    std::vector<Cx> d;
    std::vector<Cx> residuals; // weighted per-power conditions, iota = 1..max l
};

namespace detail {

inline std::vector<Cx> quadratic_roots(Cx a, Cx b, Cx c) {
    if (a == Cx(0)) {
        if (b == Cx(0)) {
            if (c == Cx(0)) return {Cx(0)}; // wholly degenerate: pick the origin
            throw std::runtime_error("solve_null_direction: no finite solution (inconsistent system)");
        }
        return {-c / b};
    }
    Cx disc = std::sqrt(b * b - 4.0 * a * c);
    return {(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)};
}

} // namespace detail

/// Solves the per-power null-direction conditions for d given the base
/// coefficients c. `fixed` pins components (use std::nullopt for free ones).
/// With exactly two free components and a uniform exponent of 2 or 3 the
/// closed-form elimination is used; otherwise Gauss-Newton on the stacked
/// system. Every candidate is returned with the residual of every power
/// condition — the caller decides acceptability.
inline std::vector<DirectionCandidate> solve_null_direction(
    std::span<const Cx> c, std::span<const int> exponents,
    const std::vector<std::optional<Cx>>& fixed) {
    using namespace detail;
    const std::size_t n = c.size();
    if (exponents.size() != n || fixed.size() != n)
        throw std::invalid_argument("solve_null_direction: c, exponents, fixed must have equal length");

    std::vector<std::size_t> free_idx;
    for (std::size_t j = 0; j < n; ++j)
        if (!fixed[j]) free_idx.push_back(j);
    if (free_idx.empty())
        throw std::invalid_argument("solve_null_direction: no free components");

    auto assemble = [&](const std::vector<Cx>& free_vals) {
        std::vector<Cx> d(n);
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j) d[j] = fixed[j] ? *fixed[j] : free_vals[k++];
        return d;
    };
    auto finish = [&](std::vector<std::vector<Cx>> frees) {
        std::vector<DirectionCandidate> out;
        for (auto& fv : frees) {
            DirectionCandidate cand;
            cand.d = assemble(fv);
            cand.residuals = power_conditions(c, exponents, cand.d);
            out.push_back(std::move(cand));
        }
        std::sort(out.begin(), out.end(), [](const DirectionCandidate& a, const DirectionCandidate& b) {
            for (std::size_t j = 0; j < a.d.size(); ++j) {
                if (a.d[j].real() != b.d[j].real()) return a.d[j].real() < b.d[j].real();
                if (a.d[j].imag() != b.d[j].imag()) return a.d[j].imag() < b.d[j].imag();
            }
            return false;
        });
        return out;
    };

    const bool uniform = std::all_of(exponents.begin(), exponents.end(),
                                     [&](int l) { return l == exponents[0]; });

    if (free_idx.size() == 2 && uniform && (exponents[0] == 2 || exponents[0] == 3)) {
        std::size_t p = free_idx[0], q = free_idx[1];
        const int ell = exponents[0];
        // Linear condition sum_j c_j^{ell-1} d_j = 0 eliminates d_p.
        Cx cp = cx_pow_int(c[p], ell - 1), cq = cx_pow_int(c[q], ell - 1);
        if (cp == Cx(0)) { std::swap(p, q); std::swap(cp, cq); }
        if (cp == Cx(0))
            throw std::runtime_error("solve_null_direction: linear condition does not involve the "
                                     "free components; no closed form");
        Cx L{}, Q2{}, Q3{};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == p || j == q) continue;
            L += cx_pow_int(c[j], ell - 1) * (*fixed[j]);
            Q2 += c[j] * (*fixed[j]) * (*fixed[j]);
            Q3 += cx_pow_int(*fixed[j], 3);
        }
        const Cx A = -L / cp, B = -cq / cp; // d_p = A + B d_q

        std::vector<std::vector<Cx>> frees;
        auto push_root = [&](Cx dq) {
            std::vector<Cx> fv(2);
            Cx dp = A + B * dq;
            fv[free_idx[0] == p ? 0 : 1] = dp;
            fv[free_idx[0] == p ? 1 : 0] = dq;
            frees.push_back(std::move(fv));
        };
        if (ell == 2) {
            // Isotropy: d_p^2 + d_q^2 + sum_fixed d_j^2 = 0.
            Cx Qsq{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != p && j != q) Qsq += (*fixed[j]) * (*fixed[j]);
            for (Cx r : quadratic_roots(B * B + Cx(1), 2.0 * A * B, A * A + Qsq)) push_root(r);
        } else {
            // iota = 2: sum_j c_j d_j^2 = 0, quadratic in d_q.
            for (Cx r : quadratic_roots(c[p] * B * B + c[q], 2.0 * c[p] * A * B,
                                        c[p] * A * A + Q2))
                push_root(r);
            // iota = 3: sum_j d_j^3 = 0, cubic in d_q.
            std::vector<Cx> coeffs = {cx_pow_int(A, 3) + Q3, 3.0 * A * A * B, 3.0 * A * B * B,
                                      cx_pow_int(B, 3) + Cx(1)};
            while (coeffs.size() > 1 && coeffs.back() == Cx(0)) coeffs.pop_back();
            if (coeffs.size() > 1)
                for (Cx r : find_roots(std::span<const Cx>(coeffs))) push_root(r);
        }
        return finish(std::move(frees));
    }

    // General path: Gauss-Newton on the stacked weighted conditions.
    int lmax = 0;
    for (int l : exponents) lmax = std::max(lmax, l);
    const std::size_t m = static_cast<std::size_t>(lmax), k = free_idx.size();
    std::vector<Cx> fv(k);
    for (std::size_t j = 0; j < k; ++j)
        fv[j] = Cx(0.5 + 0.25 * static_cast<double>(j), 0.5 - 0.25 * static_cast<double>(j));
    for (int iter = 0; iter < 100; ++iter) {
        auto d = assemble(fv);
        auto g = power_conditions(c, exponents, d);
        // Jacobian dg_i/dd_{free j}.
        std::vector<std::vector<Cx>> J(m, std::vector<Cx>(k));
        for (std::size_t i = 0; i < m; ++i) {
            int iota = static_cast<int>(i) + 1;
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t col = free_idx[j];
                if (exponents[col] < iota) continue;
                J[i][j] = static_cast<double>(binomial(exponents[col], iota)) *
                          static_cast<double>(iota) * cx_pow_int(c[col], exponents[col] - iota) *
                          cx_pow_int(d[col], iota - 1);
            }
        }
        // Normal equations (J^H J) s = J^H g, then fv -= s.
        std::vector<std::vector<Cx>> Nmat(k, std::vector<Cx>(k + 1));
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                Cx s{};
                for (std::size_t i = 0; i < m; ++i) s += std::conj(J[i][a]) * J[i][b];
                Nmat[a][b] = s;
            }
            Cx s{};
            for (std::size_t i = 0; i < m; ++i) s += std::conj(J[i][a]) * g[i];
            Nmat[a][k] = s;
        }
        // Gaussian elimination with partial pivoting.
        for (std::size_t col = 0; col < k; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < k; ++r)
                if (std::abs(Nmat[r][col]) > std::abs(Nmat[piv][col])) piv = r;
            std::swap(Nmat[col], Nmat[piv]);
            if (Nmat[col][col] == Cx(0)) continue;
            for (std::size_t r = 0; r < k; ++r) {
                if (r == col) continue;
                Cx factor = Nmat[r][col] / Nmat[col][col];
                for (std::size_t cc = col; cc <= k; ++cc) Nmat[r][cc] -= factor * Nmat[col][cc];
            }
        }
        double step = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (Nmat[j][j] == Cx(0)) continue;
            Cx s = Nmat[j][k] / Nmat[j][j];
            if (!is_finite(s))
                throw std::runtime_error("solve_null_direction: Newton iteration diverged");
            fv[j] -= s;
            step = std::max(step, std::abs(s));
        }
        if (step < 1e-13) break;
    }
    return finish({fv});
}

} // namespace waring
