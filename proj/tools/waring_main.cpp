// Command-line front door: spec-file ingestion, subcommand dispatch, JSON
// report emission. Exit codes: 0 pass, 1 fail, 2 unconfirmed, 3 usage or
// spec error. Reports go to stdout, diagnostics to stderr.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "waring/characteristics.hpp"
#include "waring/specfile.hpp"

namespace {

using namespace waring;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUnconfirmed = 2;
constexpr int kExitUsage = 3;

int exit_code_for(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitPass;
        case Verdict::Fail: return kExitFail;
        case Verdict::Unconfirmed: return kExitUnconfirmed;
    }
    return kExitUsage;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError(path + ": " + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

/// One complex value in the expression grammar ("1.5", "2i", "(1+2i)", "-3").
Cx parse_cx_arg(const std::string& text, const std::string& what) {
    try {
        Expr e = parse_expr(text, 0);
        return eval_value(e, std::span<const Cx>{});
    } catch (const std::exception& e) {
        throw SpecError(what + ": " + e.what());
    }
}

/// Comma-separated complex values; commas inside parentheses do not split.
std::vector<Cx> parse_cx_list_arg(const std::string& text, const std::string& what) {
    std::vector<Cx> out;
    std::string cur;
    int depth = 0;
    auto flush = [&]() {
        if (cur.empty()) throw SpecError(what + ": empty list entry");
        out.push_back(parse_cx_arg(cur, what));
        cur.clear();
    };
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) { flush(); continue; }
        cur += c;
    }
    flush();
    return out;
}

std::vector<int> parse_int_list_arg(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw SpecError(what + ": bad integer \"" + tok + "\"");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct CommonFlags {
    int samples = kDefaultSamples;
    std::uint64_t seed = kDefaultSeed;
    double tol = kDefaultTolerance;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--samples", f.samples, "sample points per sampled constraint");
    cmd->add_option("--seed", f.seed, "sampling seed");
    cmd->add_option("--tol", f.tol, "residual tolerance");
}

int cmd_verify(const std::string& spec_path, const CommonFlags& flags, bool dump_spec) {
    SpecFile sf = parse_spec_file(load_json_file(spec_path));
    if (dump_spec) {
        emit(spec_file_to_json(sf));
        return kExitPass;
    }
    ConstructedFamily fam = assemble(sf);
    VerificationReport report = verify_constructed(fam, flags.samples, flags.seed, flags.tol);
    emit(report_to_json(report));
    return exit_code_for(report.overall);
}

int cmd_trace(const std::string& spec_path, const std::string& tau_end_text, int steps,
              const std::string& z0_text) {
    SpecFile sf = parse_spec_file(load_json_file(spec_path));
    ConstructedFamily fam = assemble(sf);

    Cx tau_end;
    {
        auto parts = parse_cx_list_arg(tau_end_text, "--tau-end");
        if (parts.size() != 2 || parts[0].imag() != 0.0 || parts[1].imag() != 0.0)
            throw SpecError("--tau-end: expected RE,IM");
        tau_end = Cx(parts[0].real(), parts[1].real());
    }
    std::vector<Cx> z0(fam.n, Cx(0));
    if (!z0_text.empty()) {
        z0 = parse_cx_list_arg(z0_text, "--z0");
        if (z0.size() != fam.n)
            throw SpecError("--z0: expected " + std::to_string(fam.n) + " entries");
    }

    CharSystem sys(fam.H, fam.P);
    json out;
    out["instance"] = fam.description;
    out["tau_path"] = "straight segment 0 -> tau_end";
    out["tau_end"] = detail::cx_to_json(tau_end);
    out["steps"] = steps;
    try {
        Trajectory traj = integrate(sys, initial_state(fam.u, z0), tau_end, steps);
        json states = json::array();
        for (const auto& s : traj) {
            json sj;
            sj["tau"] = detail::cx_to_json(s.tau);
            sj["z"] = detail::cx_list_to_json(s.z);
            sj["Du"] = detail::cx_list_to_json(s.du);
            sj["u"] = detail::cx_to_json(s.u);
            Cx res = eval_form(sys.H, std::span<const Cx>(s.du)) - eval_upoly(sys.P, s.u);
            sj["residual"] = std::abs(res);
            states.push_back(std::move(sj));
        }
        out["states"] = std::move(states);
        emit(out);
        return kExitPass;
    } catch (const BlowupError& e) {
        out["error"] = e.what();
        out["tau_reached"] = detail::cx_to_json(e.tau_reached);
        if (e.tau_singularity) out["tau_singularity"] = detail::cx_to_json(*e.tau_singularity);
        emit(out);
        return kExitFail;
    }
}

int cmd_roots(const std::string& coeffs_text) {
    auto coeffs = parse_cx_list_arg(coeffs_text, "--coeffs");
    std::vector<Cx> roots;
    try {
        roots = find_roots(std::span<const Cx>(coeffs));
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what()); // bad input (e.g. zero leading coefficient)
    }
    json out = json::array();
    for (Cx r : roots) out.push_back(detail::cx_to_json(r));
    emit(out);
    return kExitPass;
}

int cmd_solve_direction(const std::string& c_text, const std::string& ell_text,
                        const std::vector<std::string>& fixes) {
    auto c = parse_cx_list_arg(c_text, "--c");
    auto ells = parse_int_list_arg(ell_text, "--ell");
    if (ells.size() == 1) ells.assign(c.size(), ells[0]); // uniform shorthand
    if (ells.size() != c.size()) throw SpecError("--ell: expected 1 or " + std::to_string(c.size()) + " entries");

    std::vector<std::optional<Cx>> fixed(c.size());
    for (const auto& fx : fixes) {
        auto eq = fx.find('=');
        if (eq == std::string::npos) throw SpecError("--fix: expected INDEX=VALUE");
        int idx = 0;
        try {
            idx = std::stoi(fx.substr(0, eq));
        } catch (const std::exception&) {
            throw SpecError("--fix: bad index in \"" + fx + "\"");
        }
        if (idx < 1 || static_cast<std::size_t>(idx) > c.size())
            throw SpecError("--fix: index out of range in \"" + fx + "\"");
        if (fixed[static_cast<std::size_t>(idx - 1)])
            throw SpecError("--fix: duplicate index in \"" + fx + "\"");
        fixed[static_cast<std::size_t>(idx - 1)] = parse_cx_arg(fx.substr(eq + 1), "--fix");
    }

    json out;
    try {
        auto candidates = solve_null_direction(c, ells, fixed);
        json cj = json::array();
        for (const auto& cand : candidates) {
            json one;
            one["d"] = detail::cx_list_to_json(cand.d);
            json res = json::array();
            for (std::size_t i = 0; i < cand.residuals.size(); ++i)
                res.push_back(json{{"iota", static_cast<int>(i + 1)},
                                   {"residual", detail::cx_to_json(cand.residuals[i])},
                                   {"abs", std::abs(cand.residuals[i])}});
            one["power_conditions"] = std::move(res);
            cj.push_back(std::move(one));
        }
        out["candidates"] = std::move(cj);
        emit(out);
        return kExitPass;
    } catch (const std::runtime_error& e) {
        out["error"] = e.what();
        emit(out);
        return kExitFail;
    }
}

int cmd_verify_ode(const std::string& case_path, const CommonFlags& flags) {
    LeftFactorCase lfc = parse_ode_case(load_json_file(case_path));
    OdeResidualReport rep;
    try {
        rep = verify_left_factor(lfc, flags.samples, flags.seed);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
    json out;
    out["max_abs_residual"] = rep.max_abs_residual;
    out["worst_point"] = detail::cx_to_json(rep.worst_point);
    out["samples"] = rep.samples_used;
    out["seed"] = flags.seed;
    out["tolerance"] = flags.tol;
    bool pass = rep.max_abs_residual <= flags.tol;
    out["verdict"] = pass ? "pass" : "fail";
    emit(out);
    return pass ? kExitPass : kExitFail;
}

int cmd_phi(const std::string& variant, const std::string& core_text, const std::string& rho_text,
            const std::string& d_text, int n_flag, const CommonFlags& flags) {
    PhiSpec phi;
    using V = PhiSpec::Variant;
    if (variant == "zero") phi.variant = V::Zero;
    else if (variant == "cyclic_diff") phi.variant = V::CyclicDiff;
    else if (variant == "base_diff") phi.variant = V::BaseDiff;
    else if (variant == "paired_diff") phi.variant = V::PairedDiff;
    else if (variant == "weighted_diff") phi.variant = V::WeightedDiff;
    else if (variant == "null_direction") phi.variant = V::NullDirection;
    else if (variant == "raw") phi.variant = V::Raw;
    else throw SpecError("--variant: unknown variant \"" + variant + "\"");

    std::vector<Cx> rho;
    if (!rho_text.empty()) rho = parse_cx_list_arg(rho_text, "--rho");
    if (!d_text.empty()) {
        if (phi.variant != V::NullDirection)
            throw SpecError("--d: only meaningful for --variant null_direction");
        phi.weights = parse_cx_list_arg(d_text, "--d");
    } else if (phi.variant != V::Zero && phi.variant != V::Raw) {
        if (phi.variant == V::NullDirection) throw SpecError("--d: required for null_direction");
        if (rho.empty()) throw SpecError("--rho: required for difference variants");
        phi.weights = rho;
    }

    std::size_t n = phi.weights.empty() ? static_cast<std::size_t>(std::max(n_flag, 1))
                                        : phi.weights.size();
    if (n_flag > 0) n = static_cast<std::size_t>(n_flag);
    try {
        phi.core = parse_expr(core_text, phi_core_arity(phi.variant, n));
    } catch (const ParseError& e) {
        throw SpecError(std::string("--core: ") + e.what());
    }

    Expr phi_expr = make_phi(phi, n);
    json out;
    out["n"] = static_cast<int>(n);
    out["phi"] = to_string(phi_expr);

    // Annihilation rho . grad Phi == 0 is the defining property of the
    // difference variants; for null_direction and raw it is checked only
    // when a rho is supplied to check against.
    std::vector<Cx> check_rho =
        (phi.variant == V::NullDirection || phi.variant == V::Raw) ? rho : phi.weights;
    if (!check_rho.empty()) {
        if (check_rho.size() != n) throw SpecError("--rho: expected " + std::to_string(n) + " entries");
        Constraint c = detail::annihilation_constraint(phi_expr, check_rho, "phi_annihilation");
        PointSampler sampler(flags.seed);
        double worst = 0.0;
        for (int i = 0; i < flags.samples; ++i) {
            auto z = sampler.polydisc(n, kPolydiscRadius);
            ConstraintSample s = c.eval(z);
            worst = std::max(worst, std::abs(s.residual) / s.floor);
        }
        out["max_scaled_annihilation"] = worst;
        bool pass = worst <= flags.tol;
        out["verdict"] = pass ? "pass" : "fail";
        emit(out);
        return pass ? kExitPass : kExitFail;
    }
    emit(out);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-numeric toolkit for first-order PDEs of power-sum form"};
    app.require_subcommand(1);

    std::string spec_path, tau_end_text, z0_text, coeffs_text, c_text, ell_text;
    std::string case_path, variant, core_text, rho_text, d_text;
    std::vector<std::string> fixes;
    int steps = 100, n_flag = 0;
    bool dump_spec = false;
    CommonFlags verify_flags, ode_flags, phi_flags;

    auto* verify = app.add_subcommand("verify", "verify a spec file's family");
    verify->add_option("--spec", spec_path, "spec file (JSON)")->required();
    add_common_flags(verify, verify_flags);
    verify->add_flag("--dump-spec", dump_spec, "echo the normalized spec instead of verifying");

    auto* trace = app.add_subcommand("trace", "integrate the characteristic system");
    trace->add_option("--spec", spec_path, "spec file (JSON)")->required();
    trace->add_option("--tau-end", tau_end_text, "integration endpoint RE,IM")->required();
    trace->add_option("--steps", steps, "RK4 step count")->required();
    trace->add_option("--z0", z0_text, "launch point (complex list; default origin)");

    auto* roots = app.add_subcommand("roots", "complex roots of a polynomial");
    roots->add_option("--coeffs", coeffs_text, "coefficients c0,c1,... (ascending degree)")
        ->required();

    auto* soldir = app.add_subcommand("solve-direction", "solve the null-direction conditions");
    soldir->add_option("--c", c_text, "base coefficients (complex list)")->required();
    soldir->add_option("--ell", ell_text, "exponent list (or one uniform exponent)")->required();
    soldir->add_option("--fix", fixes, "pin a component, e.g. --fix 3=-1");

    auto* vode = app.add_subcommand("verify-ode", "measure a left-factor ODE residual");
    vode->add_option("--case", case_path, "ODE case file (JSON)")->required();
    add_common_flags(vode, ode_flags);
    ode_flags.samples = 50;

    auto* phi = app.add_subcommand("phi", "emit a null function and check annihilation");
    phi->add_option("--variant", variant, "zero|cyclic_diff|base_diff|paired_diff|weighted_diff|null_direction")
        ->required();
    phi->add_option("--core", core_text, "core expression over the derived coordinates")->required();
    phi->add_option("--rho", rho_text, "direction weights (complex list)");
    phi->add_option("--d", d_text, "null direction (complex list)");
    phi->add_option("--n", n_flag, "ambient dimension (defaults to the weight count)");
    add_common_flags(phi, phi_flags);
    phi_flags.samples = 50;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cerr << app.help();
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(spec_path, verify_flags, dump_spec);
        if (trace->parsed()) return cmd_trace(spec_path, tau_end_text, steps, z0_text);
        if (roots->parsed()) return cmd_roots(coeffs_text);
        if (soldir->parsed()) return cmd_solve_direction(c_text, ell_text, fixes);
        if (vode->parsed()) return cmd_verify_ode(case_path, ode_flags);
        if (phi->parsed())
            return cmd_phi(variant, core_text, rho_text, d_text, n_flag, phi_flags);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::cerr << app.help();
    return kExitUsage;
}
