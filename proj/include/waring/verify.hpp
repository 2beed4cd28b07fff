#pragma once

// The residual engine: samples points, evaluates every constraint a family
// carries, and aggregates one report entry per constraint. Reports are
// deterministic functions of (spec, seed, samples, tolerance); aggregation
// is by maximum, so evaluation order cannot change a verdict.

#include "families.hpp"
#include "sampling.hpp"

namespace waring {

enum class Verdict { Pass, Fail, Unconfirmed };

inline const char* to_cstring(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Unconfirmed: return "unconfirmed";
    }
    return "?";
}

struct VerificationReport {
    struct Entry {
        std::string name;
        Constraint::Kind kind = Constraint::Kind::Sampled;
        double max_abs_residual = 0.0;    // raw |residual|
        double max_scaled_residual = 0.0; // |residual| / (local floor); floor >= 1
        std::vector<Cx> worst_point;      // empty for scalar constraints
        Verdict verdict = Verdict::Pass;
    };

    std::string instance;
    std::vector<Entry> entries;
    std::uint64_t seed = kDefaultSeed;
    int samples = 0;
    double tolerance = 0.0;
    Verdict overall = Verdict::Pass;
};

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr int kDefaultSamples = 200;
inline constexpr double kPolydiscRadius = 2.0;

/// Evaluates an already-constructed family. All sampled constraints see the
/// same point list. The verdict gates on the scaled residual (floor is 1
/// unless the constraint defines a magnitude floor, so for O(1) instances
/// scaled == absolute); over-tolerance entries of a family flagged
/// `unconfirmed` report that verdict instead of fail.
inline VerificationReport verify_constructed(const ConstructedFamily& fam,
                                             int samples = kDefaultSamples,
                                             std::uint64_t seed = kDefaultSeed,
                                             double tol = kDefaultTolerance) {
    if (samples < 1) throw std::invalid_argument("verify: samples must be >= 1");
    PointSampler sampler(seed);
    std::vector<std::vector<Cx>> points(static_cast<std::size_t>(samples));
    for (auto& p : points) p = sampler.polydisc(fam.n, kPolydiscRadius);

    VerificationReport report;
    report.instance = fam.description;
    report.seed = seed;
    report.samples = samples;
    report.tolerance = tol;

    for (const auto& c : fam.constraints) {
        VerificationReport::Entry e;
        e.name = c.name;
        e.kind = c.kind;
        if (c.kind == Constraint::Kind::Scalar) {
            ConstraintSample s = c.eval({});
            e.max_abs_residual = std::abs(s.residual);
            e.max_scaled_residual = std::abs(s.residual) / s.floor;
        } else {
            for (const auto& z : points) {
                ConstraintSample s = c.eval(z);
                double raw = std::abs(s.residual);
                double scaled = raw / s.floor;
                e.max_abs_residual = std::max(e.max_abs_residual, raw);
                if (scaled > e.max_scaled_residual) {
                    e.max_scaled_residual = scaled;
                    e.worst_point = z;
                }
            }
        }
        if (e.max_scaled_residual <= tol) e.verdict = Verdict::Pass;
        else e.verdict = fam.unconfirmed ? Verdict::Unconfirmed : Verdict::Fail;
        report.entries.push_back(std::move(e));
    }

    report.overall = Verdict::Pass;
    for (const auto& e : report.entries) {
        if (e.verdict == Verdict::Fail) { report.overall = Verdict::Fail; break; }
        if (e.verdict == Verdict::Unconfirmed) report.overall = Verdict::Unconfirmed;
    }
    return report;
}

inline VerificationReport verify_family(const FamilySpec& spec, int samples = kDefaultSamples,
                                        std::uint64_t seed = kDefaultSeed,
                                        double tol = kDefaultTolerance) {
    return verify_constructed(construct(spec), samples, seed, tol);
}

} // namespace waring
