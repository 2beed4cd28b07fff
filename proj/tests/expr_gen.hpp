#pragma once

// Random expression-tree generator with magnitude control. exp/cosh of large
// complex arguments overflow fast, so generated trees can be rejected when
// they evaluate too large at the probe points.

#include "waring/expr.hpp"
#include "waring/sampling.hpp"

namespace waring::testutil {

struct ExprGen {
    PointSampler sampler;
    explicit ExprGen(std::uint64_t seed) : sampler(seed) {}

    Cx small_const() { return sampler.disc(0.8); }

    Expr gen(int depth, std::size_t n) {
        if (depth <= 0) {
            if (n > 0 && sampler.unit() < 0.6)
                return Expr::var(static_cast<std::size_t>(sampler.unit() * static_cast<double>(n)) % n);
            return Expr::constant(small_const());
        }
        double pick = sampler.unit();
        if (pick < 0.25) return gen(depth - 1, n) + gen(depth - 1, n);
        if (pick < 0.45) return gen(depth - 1, n) * gen(depth - 1, n);
        if (pick < 0.55) return -gen(depth - 1, n);
        if (pick < 0.65)
            return Expr::pow_int(gen(depth - 1, n), static_cast<int>(sampler.unit() * 4.0));
        // analytic nodes get a damped argument to keep magnitudes sane
        Expr arg = Expr::constant(Cx(0.4)) * gen(depth - 1, n);
        double f = sampler.unit();
        if (f < 0.25) return Expr::exp(arg);
        if (f < 0.50) return Expr::sin(arg);
        if (f < 0.70) return Expr::cos(arg);
        if (f < 0.85) return Expr::sinh(arg);
        return Expr::cosh(arg);
    }

    /// A tree whose value and gradient stay below `cap` at z and at the 2n
    /// finite-difference probe points (step h); regenerates until found.
    Expr gen_tame(int depth, std::size_t n, std::span<const Cx> z, double h, double cap) {
        for (;;) {
            Expr e = gen(depth, n);
            Jet j = eval_jet(e, z);
            double mag = std::abs(j.value);
            for (const auto& g : j.grad) mag = std::max(mag, std::abs(g));
            if (mag > cap || !is_finite(j.value)) continue;
            bool ok = true;
            std::vector<Cx> zp(z.begin(), z.end());
            for (std::size_t k = 0; k < n && ok; ++k) {
                for (double s : {+1.0, -1.0}) {
                    zp[k] = z[k] + Cx(s * h, 0.0);
                    Cx v = eval_value(e, zp);
                    if (!is_finite(v) || std::abs(v) > cap) { ok = false; break; }
                }
                zp[k] = z[k];
            }
            if (ok) return e;
        }
    }
};

} // namespace waring::testutil
