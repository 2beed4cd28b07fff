#include <gtest/gtest.h>

#include "waring/specfile.hpp"
#include "waring/parse.hpp"
#include "test_util.hpp"

using namespace waring;
using testutil::expect_cx_near;

namespace {

Expr linear_u(std::span<const Cx> sigma) {
    Expr u = Expr::constant(Cx(0));
    for (std::size_t j = 0; j < sigma.size(); ++j)
        u = u + Expr::constant(sigma[j]) * Expr::var(j);
    return u;
}

} // namespace

TEST(ResidualAt, UnitSphereDirection) {
    std::vector<Cx> sigma = {Cx(2.0 / 7), Cx(3.0 / 7), Cx(6.0 / 7)};
    Expr u = linear_u(sigma);
    auto H = WaringForm::diagonal({2, 2, 2});
    auto P = UniPoly::constant(Cx(1));
    std::vector<Cx> z = {Cx(1), Cx(0, 1), Cx(-2)};
    EXPECT_LE(std::abs(residual_at(u, H, P, z)), 1e-12);
}

TEST(ResidualAt, ParaboloidPoint) {
    FamilySpec spec = Paraboloid{{Cx(0), Cx(0)}};
    ConstructedFamily fam = construct(spec);
    std::vector<Cx> z = {Cx(1, 1), Cx(2)};
    EXPECT_LE(std::abs(residual_at(fam.u, fam.H, fam.P, z)), 1e-12);
}

TEST(ResidualAt, MixedExponentConstants) {
    // The seven-variable mixed form with the null function switched off:
    // 4 (3/2)^2 = 9 from the squares, (-1)^3 + (-4/3)^3 + (-5/3)^3 = -8 from
    // the cubes, so H(grad u) = 1 exactly.
    EXPECT_EQ(4.0 * 1.5 * 1.5, 9.0);
    EXPECT_NEAR(std::pow(-1.0, 3) + std::pow(-4.0 / 3, 3) + std::pow(-5.0 / 3, 3), -8.0, 1e-14);
    std::vector<Cx> sigma = {Cx(1.5), Cx(-1), Cx(1.5), Cx(-4.0 / 3),
                             Cx(1.5), Cx(-5.0 / 3), Cx(1.5)};
    Expr u = linear_u(sigma);
    auto H = WaringForm::diagonal({2, 3, 2, 3, 2, 3, 2});
    auto P = UniPoly::constant(Cx(1));
    PointSampler sampler(3);
    for (int i = 0; i < 20; ++i) {
        auto z = sampler.polydisc(7, 2.0);
        EXPECT_LE(std::abs(residual_at(u, H, P, z)), 1e-12);
    }
}

TEST(ResidualAt, DimensionMismatchRejected) {
    Expr u = Expr::var(0);
    auto H = WaringForm::diagonal({2, 2});
    std::vector<Cx> z = {Cx(1)};
    EXPECT_THROW(residual_at(u, H, UniPoly::constant(Cx(1)), z), std::invalid_argument);
}

TEST(GradCheck, BilinearAndExp) {
    Expr u = Expr::var(0) * Expr::var(1);
    std::vector<Cx> z = {Cx(1), Cx(2)};
    EXPECT_LE(grad_check(u, z, 1e-6), 1e-9);

    Expr e = Expr::exp(Expr::var(0));
    std::vector<Cx> z0 = {Cx(0)};
    EXPECT_LE(grad_check(e, z0, 1e-6), 1e-9);

    EXPECT_THROW(grad_check(e, z0, 0.0), std::invalid_argument);
}

TEST(GradCheck, RandomTreesProperty) {
    testutil::ExprGen gen(606);
    PointSampler sampler(607);
    for (int done = 0; done < 20;) {
        auto z = sampler.polydisc(3, 1.0);
        Expr e = gen.gen_tame(6, 3, z, 1e-6, 100.0);
        Jet j = eval_jet(e, z);
        double gmax = 0.0;
        for (auto g : j.grad) gmax = std::max(gmax, std::abs(g));
        EXPECT_LE(grad_check(e, z, 1e-6), 1e-6 * (1.0 + gmax));
        ++done;
    }
}

TEST(VerifyFamily, ReportsAreDeterministic) {
    DiagonalLinear f;
    f.exponents = {2, 2};
    f.sigma = {Cx(0.6), Cx(0.8)};
    auto r1 = verify_family(FamilySpec(f), 100, 12345, 1e-9);
    auto r2 = verify_family(FamilySpec(f), 100, 12345, 1e-9);
    EXPECT_EQ(report_to_json(r1).dump(), report_to_json(r2).dump());
}

TEST(VerifyFamily, MaxIsMonotoneInSamples) {
    // A wrong direct instance: residual is genuinely nonzero.
    DirectInstance di;
    di.u = parse_expr("z1^2 + 0.3*z2", 2);
    di.H = WaringForm::diagonal({2, 2});
    di.P = UniPoly::constant(Cx(1));
    auto r50 = verify_family(FamilySpec(di), 50);
    auto r200 = verify_family(FamilySpec(di), 200);
    EXPECT_EQ(r50.overall, Verdict::Fail);
    EXPECT_EQ(r200.overall, Verdict::Fail);
    EXPECT_LE(r50.entries[0].max_abs_residual, r200.entries[0].max_abs_residual);
}

TEST(VerifyFamily, WorstPointRecordedForSampledConstraints) {
    DirectInstance di;
    di.u = parse_expr("z1^2", 1);
    di.H = WaringForm::diagonal({2});
    di.P = UniPoly::constant(Cx(1));
    auto r = verify_family(FamilySpec(di), 50);
    ASSERT_EQ(r.entries.size(), 1u);
    EXPECT_EQ(r.entries[0].worst_point.size(), 1u);
    EXPECT_LE(std::abs(r.entries[0].worst_point[0]), 2.0 + 1e-12);
}

TEST(VerifyFamily, ExponentialEnvelopeUsesScaledVerdict) {
    // Exponential envelope (l = 2): the absolute residual blows up with the
    // envelope, the scaled one stays at roundoff.
    DiagonalExp f;
    f.ell = 2;
    f.sigma = {Cx(2.0 / 7), Cx(3.0 / 7), Cx(6.0 / 7)};
    f.psi.variant = PhiSpec::Variant::NullDirection;
    f.psi.weights = {Cx(12.0 / 13, -21.0 / 13), Cx(18.0 / 13, 14.0 / 13), Cx(-1)};
    f.psi.core = parse_expr("sin(z1)", 1);
    auto rep = verify_family(FamilySpec(f), 200);
    EXPECT_EQ(rep.overall, Verdict::Pass);
    for (const auto& e : rep.entries) {
        if (e.name != "pde_residual") continue;
        EXPECT_LE(e.max_scaled_residual, 1e-9);
        EXPECT_GE(e.max_abs_residual, e.max_scaled_residual);
    }
}

TEST(VerifyFamily, UnconfirmedFamilyNeverReportsFail) {
    auto roots = find_roots({Cx(-152), Cx(80), Cx(-100), Cx(91)});
    Cx b;
    for (Cx r : roots)
        if (std::abs(r.imag()) < 1e-10) b = Cx(r.real());
    Cx a = (Cx(25) - 16.0 * b) / 9.0;
    DiagonalLinear f;
    f.exponents = {3, 3, 3};
    f.sigma = {Cx(0.5), Cx(2.0 / 3), Cx(5.0 / 6)};
    f.phi.variant = PhiSpec::Variant::NullDirection;
    f.phi.weights = {a, b, Cx(-1)};
    f.phi.core = parse_expr("sin(z1)", 1);
    auto rep = verify_family(FamilySpec(f), 150);
    EXPECT_EQ(rep.overall, Verdict::Unconfirmed);
    for (const auto& e : rep.entries) EXPECT_NE(e.verdict, Verdict::Fail);
    // The measured residual is genuinely nonzero and reported.
    bool saw_nonzero = false;
    for (const auto& e : rep.entries)
        if (e.verdict == Verdict::Unconfirmed && e.max_abs_residual > 1e-3) saw_nonzero = true;
    EXPECT_TRUE(saw_nonzero);
}

TEST(VerifyFamily, MalformedSpecSurfacesAsError) {
    DiagonalLinear f;
    f.exponents = {2, 2};
    f.sigma = {Cx(1), Cx(1)}; // sum sigma^2 = 2
    EXPECT_THROW(verify_family(FamilySpec(f), 50), std::invalid_argument);
}
