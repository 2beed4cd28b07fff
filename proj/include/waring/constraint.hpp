#pragma once

// The residual primitives every check reduces to, and the constraint record
// family constructors hand to the verifier.

#include <functional>
#include <string>

#include "expr.hpp"
#include "poly.hpp"

namespace waring {

/// H(grad u at z) - P(u(z)) via one jet evaluation.
inline Cx residual_at(const Expr& u, const WaringForm& H, const UniPoly& P, std::span<const Cx> z) {
    if (z.size() != H.dimension())
        throw std::invalid_argument("residual_at: point dimension " + std::to_string(z.size()) +
                                    " does not match form dimension " + std::to_string(H.dimension()));
    Jet ju = eval_jet(u, z);
    Cx h = eval_form(H, std::span<const Cx>(ju.grad));
    Cx p = eval_upoly(P, ju.value);
    return h - p;
}

/// One evaluation of a constraint at a point: the residual plus the local
/// magnitude floor used for scale-aware verdicts (1 when no scaling applies).
struct ConstraintSample {
    Cx residual{};
    double floor = 1.0;
};

struct Constraint {
    enum class Kind { Scalar, Sampled };
    std::string name;
    Kind kind = Kind::Sampled;
    std::function<ConstraintSample(std::span<const Cx>)> eval;
};

/// PDE-residual constraint with the spec's relative floor 1 + |H| + |P|.
inline Constraint pde_residual_constraint(Expr u, WaringForm H, UniPoly P,
                                          std::string name = "pde_residual") {
    Constraint c;
    c.name = std::move(name);
    c.kind = Constraint::Kind::Sampled;
    c.eval = [u = std::move(u), H = std::move(H), P = std::move(P)](std::span<const Cx> z) {
        Jet ju = eval_jet(u, z);
        Cx h = eval_form(H, std::span<const Cx>(ju.grad));
        Cx p = eval_upoly(P, ju.value);
        return ConstraintSample{h - p, 1.0 + std::abs(h) + std::abs(p)};
    };
    return c;
}

inline Constraint scalar_constraint(std::string name, Cx residual) {
    Constraint c;
    c.name = std::move(name);
    c.kind = Constraint::Kind::Scalar;
    c.eval = [residual](std::span<const Cx>) { return ConstraintSample{residual, 1.0}; };
    return c;
}

/// Max over coordinates of |jet gradient - central difference|, with complex
/// step h along each coordinate. Independent of the jet path: uses only
/// value evaluations.
inline double grad_check(const Expr& u, std::span<const Cx> z, double h) {
    if (h <= 0.0) throw std::invalid_argument("grad_check: step must be positive");
    Jet ju = eval_jet(u, z);
    std::vector<Cx> zp(z.begin(), z.end());
    double worst = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        zp[j] = z[j] + Cx(h, 0.0);
        Cx up = eval_value(u, zp);
        zp[j] = z[j] - Cx(h, 0.0);
        Cx um = eval_value(u, zp);
        zp[j] = z[j];
        Cx fd = (up - um) / Cx(2.0 * h, 0.0);
        worst = std::max(worst, std::abs(ju.grad[j] - fd));
    }
    return worst;
}

} // namespace waring
