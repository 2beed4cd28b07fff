#include <gtest/gtest.h>

#include "waring/cxjet.hpp"
#include "waring/sampling.hpp"
#include "test_util.hpp"

using namespace waring;
using testutil::expect_cx_near;

namespace {
const Cx kI(0.0, 1.0);
}

TEST(JetVar, CoordinateFunctions) {
    Jet a = jet_var(0, Cx(2), 2);
    EXPECT_EQ(a.value, Cx(2));
    EXPECT_EQ(a.grad, (std::vector<Cx>{Cx(1), Cx(0)}));

    Jet b = jet_var(1, kI, 3);
    EXPECT_EQ(b.value, kI);
    EXPECT_EQ(b.grad, (std::vector<Cx>{Cx(0), Cx(1), Cx(0)}));
}

TEST(JetVar, IndexOutOfRange) {
    EXPECT_THROW(jet_var(3, Cx(1), 2), std::out_of_range);
}

TEST(JetMul, ProductRule) {
    Jet a(Cx(2), {Cx(1), Cx(0)});
    Jet b(Cx(3), {Cx(0), Cx(1)});
    Jet p = jet_mul(a, b);
    EXPECT_EQ(p.value, Cx(6));
    EXPECT_EQ(p.grad, (std::vector<Cx>{Cx(3), Cx(2)}));
}

TEST(JetMul, Constants) {
    Cx c(1.25, -0.5);
    Jet a = Jet::constant(c, 2);
    Jet p = jet_mul(a, a);
    EXPECT_EQ(p.value, c * c);
    EXPECT_EQ(p.grad, (std::vector<Cx>{Cx(0), Cx(0)}));
}

TEST(JetMul, ImaginarySquare) {
    Jet a(kI, {Cx(1), Cx(0)});
    Jet p = jet_mul(a, a);
    expect_cx_near(p.value, Cx(-1), 0.0);
    expect_cx_near(p.grad[0], 2.0 * kI, 0.0);
    expect_cx_near(p.grad[1], Cx(0), 0.0);
}

TEST(JetMul, DimensionMismatch) {
    Jet a(Cx(1), {Cx(1)});
    Jet b(Cx(1), {Cx(1), Cx(0)});
    EXPECT_THROW(jet_mul(a, b), std::invalid_argument);
}

TEST(JetPow, ChainRule) {
    Jet a(Cx(2), {Cx(1), Cx(0)});
    Jet p = jet_pow_int(a, 3);
    EXPECT_EQ(p.value, Cx(8));
    EXPECT_EQ(p.grad[0], Cx(12));
    EXPECT_EQ(p.grad[1], Cx(0));
}

TEST(JetPow, ZeroExponentIsOne) {
    Jet a(Cx(3.7, -1.2), {Cx(0.4, 0.1), Cx(2)});
    Jet p = jet_pow_int(a, 0);
    EXPECT_EQ(p.value, Cx(1));
    EXPECT_EQ(p.grad, (std::vector<Cx>{Cx(0), Cx(0)}));
}

// i^4 = 1 and d/dz (z^4) at i is 4 i^3 = -4i.
TEST(JetPow, FourthPowerAtI) {
    Jet a(kI, {Cx(1)});
    Jet p = jet_pow_int(a, 4);
    expect_cx_near(p.value, Cx(1), 1e-15);
    expect_cx_near(p.grad[0], -4.0 * kI, 1e-15);
}

TEST(JetPow, NegativeExponentRejected) {
    Jet a(Cx(1), {Cx(1)});
    EXPECT_THROW(jet_pow_int(a, -1), std::invalid_argument);
}

TEST(JetAnalytic, ExpAtZero) {
    Jet p = exp(jet_var(0, Cx(0), 2));
    expect_cx_near(p.value, Cx(1), 0.0);
    expect_cx_near(p.grad[0], Cx(1), 0.0);
    expect_cx_near(p.grad[1], Cx(0), 0.0);
}

TEST(JetAnalytic, CoshAtZero) {
    Jet p = cosh(jet_var(1, Cx(0), 2));
    expect_cx_near(p.value, Cx(1), 0.0);
    expect_cx_near(p.grad[1], Cx(0), 0.0);
}

TEST(JetAnalytic, SinAtHalfPi) {
    Jet p = sin(jet_var(0, Cx(3.14159265358979323846 / 2.0), 1));
    expect_cx_near(p.value, Cx(1), 1e-12);
    EXPECT_LE(std::abs(p.grad[0]), 1e-12);
}

TEST(JetAnalytic, LogOfZeroRejected) {
    EXPECT_THROW(log(jet_var(0, Cx(0), 1)), std::domain_error);
}

TEST(JetAnalytic, LogPrincipalBranch) {
    Jet p = log(jet_var(0, Cx(1), 1));
    expect_cx_near(p.value, Cx(0), 0.0);
    expect_cx_near(p.grad[0], Cx(1), 0.0);
}

TEST(JetAnalytic, DispatcherMatchesDirectCalls) {
    Jet a(Cx(0.3, 0.2), {Cx(1.0, -0.5)});
    EXPECT_EQ(jet_analytic(AnalyticFn::Sin, a).value, sin(a).value);
    EXPECT_EQ(jet_analytic(AnalyticFn::Cosh, a).grad[0], cosh(a).grad[0]);
}

// Gradients of every analytic function agree with central finite differences
// of the value map along each coordinate.
TEST(JetProperty, AnalyticGradientsMatchFiniteDifferences) {
    PointSampler sampler(kDefaultSeed);
    const double h = 1e-6;
    const AnalyticFn fns[] = {AnalyticFn::Exp, AnalyticFn::Sin, AnalyticFn::Cos,
                              AnalyticFn::Sinh, AnalyticFn::Cosh, AnalyticFn::Log};
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2;
        auto z = sampler.polydisc(n, 1.0);
        Cx c = sampler.disc(0.5) + Cx(1.5); // keeps log away from the origin
        std::vector<Cx> w = {sampler.disc(1.0), sampler.disc(1.0)};
        auto value_at = [&](std::span<const Cx> pt, AnalyticFn fn) {
            Jet a = Jet::constant(c, n);
            for (std::size_t j = 0; j < n; ++j)
                a = a + w[j] * jet_var(j, pt[j], n);
            return jet_analytic(fn, a);
        };
        for (AnalyticFn fn : fns) {
            Jet jf = value_at(z, fn);
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<Cx> zp(z);
                zp[j] = z[j] + Cx(h, 0);
                Cx up = value_at(zp, fn).value;
                zp[j] = z[j] - Cx(h, 0);
                Cx um = value_at(zp, fn).value;
                Cx fd = (up - um) / Cx(2 * h, 0);
                double rel = std::abs(jf.grad[j] - fd) / (1.0 + std::abs(jf.grad[j]));
                EXPECT_LE(rel, 1e-6);
            }
        }
    }
}

TEST(JetProperty, MulCommutativeAndAssociative) {
    PointSampler sampler(7);
    auto random_jet = [&](std::size_t n) {
        Jet j(sampler.disc(2.0), {});
        j.grad.resize(n);
        for (auto& g : j.grad) g = sampler.disc(2.0);
        return j;
    };
    for (int trial = 0; trial < 200; ++trial) {
        Jet a = random_jet(3), b = random_jet(3), c = random_jet(3);
        Jet ab = jet_mul(a, b), ba = jet_mul(b, a);
        EXPECT_EQ(ab.value, ba.value);
        EXPECT_EQ(ab.grad, ba.grad);

        Jet abc1 = jet_mul(jet_mul(a, b), c);
        Jet abc2 = jet_mul(a, jet_mul(b, c));
        const double eps = std::numeric_limits<double>::epsilon();
        double scale = std::abs(a.value) * std::abs(b.value) * std::abs(c.value) + 1.0;
        double tol = 4.0 * eps * 8.0 * scale;
        expect_cx_near(abc1.value, abc2.value, tol);
        for (std::size_t j = 0; j < 3; ++j) expect_cx_near(abc1.grad[j], abc2.grad[j], tol);
    }
}

TEST(JetProperty, PowEqualsRepeatedMul) {
    PointSampler sampler(11);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 100; ++trial) {
        Jet a(sampler.disc(1.5), {sampler.disc(1.5), sampler.disc(1.5)});
        Jet acc = Jet::constant(Cx(1), 2);
        for (int k = 1; k <= 8; ++k) {
            acc = jet_mul(acc, a);
            Jet p = jet_pow_int(a, k);
            double scale = std::pow(std::abs(a.value) + 1.0, k);
            double tol = 8.0 * eps * scale * static_cast<double>(k + 1);
            expect_cx_near(p.value, acc.value, tol);
            for (std::size_t j = 0; j < 2; ++j) expect_cx_near(p.grad[j], acc.grad[j], tol * 8.0);
        }
    }
}
