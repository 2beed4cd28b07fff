#pragma once

// JSON ingestion and emission: spec files describing a PDE instance plus a
// candidate family, ODE-case files, and verification reports. Input is
// schema-checked before any computation; unknown keys are rejected with the
// offending path. Complex numbers are two-element [re, im] arrays.

#include <json.hpp>

#include "special.hpp"
#include "verify.hpp"

namespace waring {

using json = nlohmann::ordered_json;

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& path) {
    if (!j.is_object()) throw SpecError(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw SpecError(path + ": unknown key \"" + key + "\"");
    }
}

inline const json& need(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(path + ": missing key \"" + key + "\"");
    return *it;
}

inline Cx parse_cx(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SpecError(path + ": expected a complex number as [re, im]");
    Cx v(j[0].get<double>(), j[1].get<double>());
    if (!is_finite(v)) throw SpecError(path + ": complex number must be finite");
    return v;
}

inline std::vector<Cx> parse_cx_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw SpecError(path + ": expected an array of [re, im] pairs");
    std::vector<Cx> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_cx(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline int parse_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SpecError(path + ": expected an integer");
    return j.get<int>();
}

inline std::vector<int> parse_int_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw SpecError(path + ": expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_int(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Expr parse_expr_field(const json& j, std::size_t dim, const std::string& path) {
    if (!j.is_string()) throw SpecError(path + ": expected an expression string");
    try {
        return parse_expr(j.get<std::string>(), dim);
    } catch (const ParseError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

inline json cx_to_json(Cx v) { return json::array({v.real(), v.imag()}); }

inline json cx_list_to_json(std::span<const Cx> v) {
    json out = json::array();
    for (Cx c : v) out.push_back(cx_to_json(c));
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// PhiSpec
// ---------------------------------------------------------------------------

inline PhiSpec parse_phi_spec(const json& j, std::size_t n, const std::string& path) {
    using V = PhiSpec::Variant;
    detail::check_keys(j, {"variant", "rho", "d", "core"}, path);
    const json& vj = detail::need(j, "variant", path);
    if (!vj.is_string()) throw SpecError(path + ".variant: expected a string");
    std::string v = vj.get<std::string>();

    PhiSpec phi;
    if (v == "zero") phi.variant = V::Zero;
    else if (v == "cyclic_diff") phi.variant = V::CyclicDiff;
    else if (v == "base_diff") phi.variant = V::BaseDiff;
    else if (v == "paired_diff") phi.variant = V::PairedDiff;
    else if (v == "weighted_diff") phi.variant = V::WeightedDiff;
    else if (v == "null_direction") phi.variant = V::NullDirection;
    else if (v == "raw") phi.variant = V::Raw;
    else throw SpecError(path + ".variant: unknown variant \"" + v + "\"");

    if (phi.variant == V::Zero) return phi;

    if (phi.variant == V::NullDirection) {
        phi.weights = detail::parse_cx_list(detail::need(j, "d", path), path + ".d");
        if (j.contains("rho")) throw SpecError(path + ": null_direction takes \"d\", not \"rho\"");
    } else if (phi.variant == V::Raw) {
        if (j.contains("rho") || j.contains("d"))
            throw SpecError(path + ": raw takes no weights");
    } else if (j.contains("d")) {
        throw SpecError(path + ": difference variants take \"rho\", not \"d\"");
    } else if (j.contains("rho")) {
        phi.weights = detail::parse_cx_list(j["rho"], path + ".rho");
    } // else: weights inherited from the enclosing family's rho

    phi.core = detail::parse_expr_field(detail::need(j, "core", path),
                                        phi_core_arity(phi.variant, n), path + ".core");
    return phi;
}

inline json phi_spec_to_json(const PhiSpec& phi) {
    using V = PhiSpec::Variant;
    json j;
    switch (phi.variant) {
        case V::Zero: j["variant"] = "zero"; return j;
        case V::CyclicDiff: j["variant"] = "cyclic_diff"; break;
        case V::BaseDiff: j["variant"] = "base_diff"; break;
        case V::PairedDiff: j["variant"] = "paired_diff"; break;
        case V::WeightedDiff: j["variant"] = "weighted_diff"; break;
        case V::NullDirection: j["variant"] = "null_direction"; break;
        case V::Raw: j["variant"] = "raw"; break;
    }
    if (!phi.weights.empty())
        j[phi.variant == V::NullDirection ? "d" : "rho"] = detail::cx_list_to_json(phi.weights);
    j["core"] = to_string(phi.core);
    return j;
}

// ---------------------------------------------------------------------------
// H and P
// ---------------------------------------------------------------------------

inline WaringForm parse_form(const json& j, std::size_t n, const std::string& path) {
    detail::check_keys(j, {"diagonal", "monomials"}, path);
    if (j.contains("diagonal") == j.contains("monomials"))
        throw SpecError(path + ": expected exactly one of \"diagonal\" or \"monomials\"");
    if (j.contains("diagonal")) {
        auto exps = detail::parse_int_list(j["diagonal"], path + ".diagonal");
        if (exps.size() != n)
            throw SpecError(path + ".diagonal: expected " + std::to_string(n) + " exponents");
        return WaringForm::diagonal(std::move(exps));
    }
    const json& mj = j["monomials"];
    if (!mj.is_array() || mj.empty()) throw SpecError(path + ".monomials: expected a non-empty array");
    std::vector<Monomial> terms;
    for (std::size_t i = 0; i < mj.size(); ++i) {
        std::string mp = path + ".monomials[" + std::to_string(i) + "]";
        detail::check_keys(mj[i], {"coeff", "powers"}, mp);
        Monomial m;
        m.coeff = detail::parse_cx(detail::need(mj[i], "coeff", mp), mp + ".coeff");
        m.powers = detail::parse_int_list(detail::need(mj[i], "powers", mp), mp + ".powers");
        terms.push_back(std::move(m));
    }
    try {
        return WaringForm::monomials(n, std::move(terms));
    } catch (const std::invalid_argument& e) {
        throw SpecError(path + ": " + e.what());
    }
}

inline json form_to_json(const WaringForm& H) {
    json j;
    if (H.is_diagonal()) {
        j["diagonal"] = H.diagonal_exponents();
        return j;
    }
    json terms = json::array();
    for (const auto& m : H.monomial_terms())
        terms.push_back(json{{"coeff", detail::cx_to_json(m.coeff)}, {"powers", m.powers}});
    j["monomials"] = std::move(terms);
    return j;
}

inline UniPoly parse_rhs(const json& j, const std::string& path) {
    detail::check_keys(j, {"power", "leading", "roots"}, path);
    if (j.contains("power")) {
        if (j.contains("leading") || j.contains("roots"))
            throw SpecError(path + ": \"power\" excludes \"leading\"/\"roots\"");
        int h = detail::parse_int(j["power"], path + ".power");
        if (h < 0) throw SpecError(path + ".power: must be >= 0");
        return UniPoly::power(h);
    }
    Cx leading = detail::parse_cx(detail::need(j, "leading", path), path + ".leading");
    std::vector<std::pair<Cx, int>> roots;
    if (j.contains("roots")) {
        const json& rj = j["roots"];
        if (!rj.is_array()) throw SpecError(path + ".roots: expected an array");
        for (std::size_t i = 0; i < rj.size(); ++i) {
            std::string rp = path + ".roots[" + std::to_string(i) + "]";
            detail::check_keys(rj[i], {"value", "mult"}, rp);
            Cx value = detail::parse_cx(detail::need(rj[i], "value", rp), rp + ".value");
            int mult = detail::parse_int(detail::need(rj[i], "mult", rp), rp + ".mult");
            if (mult < 1) throw SpecError(rp + ".mult: must be >= 1");
            roots.emplace_back(value, mult);
        }
    }
    try {
        return UniPoly(leading, std::move(roots));
    } catch (const std::invalid_argument& e) {
        throw SpecError(path + ": " + e.what());
    }
}

inline json rhs_to_json(const UniPoly& P) {
    // Prefer the compact power form when it applies.
    if (P.leading == Cx(1) &&
        (P.roots.empty() ||
         (P.roots.size() == 1 && P.roots.front().first == Cx(0)))) {
        return json{{"power", P.degree()}};
    }
    json j;
    j["leading"] = detail::cx_to_json(P.leading);
    json roots = json::array();
    for (const auto& [value, mult] : P.roots)
        roots.push_back(json{{"value", detail::cx_to_json(value)}, {"mult", mult}});
    j["roots"] = std::move(roots);
    return j;
}

// ---------------------------------------------------------------------------
// FamilySpec
// ---------------------------------------------------------------------------

namespace detail {

inline PhiSpec family_phi(const json& j, std::size_t n, const std::string& path) {
    if (!j.contains("phi")) return PhiSpec{};
    return parse_phi_spec(j["phi"], n, path + ".phi");
}

} // namespace detail

inline FamilySpec parse_family(const json& j, std::size_t n, const std::string& path) {
    using namespace detail;
    check_keys(j, {"type", "rho", "sigma", "c0", "c0_root", "ell", "hbar", "a1", "a2",
                   "exponents", "c", "phi", "psi"}, path);
    const json& tj = need(j, "type", path);
    if (!tj.is_string()) throw SpecError(path + ".type: expected a string");
    const std::string type = tj.get<std::string>();

    auto cx_field = [&](const char* key) { return parse_cx(need(j, key, path), path + "." + key); };
    auto list_field = [&](const char* key) {
        auto v = parse_cx_list(need(j, key, path), path + "." + key);
        if (v.size() != n)
            throw SpecError(path + "." + key + ": expected " + std::to_string(n) + " entries");
        return v;
    };

    if (type == "directional_linear") {
        DirectionalLinear f;
        f.rho = list_field("rho");
        f.sigma = list_field("sigma");
        f.c0 = cx_field("c0");
        f.c0_root = cx_field("c0_root");
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "directional_power") {
        DirectionalPower f;
        f.rho = list_field("rho");
        f.sigma = list_field("sigma");
        f.c0 = cx_field("c0");
        f.c0_root = cx_field("c0_root");
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.hbar = parse_int(need(j, "hbar", path), path + ".hbar");
        f.a1 = cx_field("a1");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "directional_exp") {
        DirectionalExp f;
        f.rho = list_field("rho");
        f.sigma = list_field("sigma");
        f.c0 = cx_field("c0");
        f.c0_root = cx_field("c0_root");
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.a1 = cx_field("a1");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "directional_cosh") {
        DirectionalCosh f;
        f.rho = list_field("rho");
        f.sigma = list_field("sigma");
        f.c0 = cx_field("c0");
        f.c0_root = cx_field("c0_root");
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.a1 = cx_field("a1");
        f.a2 = cx_field("a2");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "diagonal_linear") {
        DiagonalLinear f;
        f.exponents = parse_int_list(need(j, "exponents", path), path + ".exponents");
        if (f.exponents.size() != n)
            throw SpecError(path + ".exponents: expected " + std::to_string(n) + " entries");
        f.sigma = list_field("sigma");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "paraboloid") {
        Paraboloid f;
        f.c = list_field("c");
        return f;
    }
    if (type == "diagonal_power") {
        DiagonalPower f;
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.hbar = parse_int(need(j, "hbar", path), path + ".hbar");
        f.sigma = list_field("sigma");
        f.phi = family_phi(j, n, path);
        return f;
    }
    if (type == "diagonal_exp") {
        DiagonalExp f;
        f.ell = parse_int(need(j, "ell", path), path + ".ell");
        f.sigma = list_field("sigma");
        if (!j.contains("psi")) throw SpecError(path + ": diagonal_exp needs \"psi\"");
        f.psi = parse_phi_spec(j["psi"], n, path + ".psi");
        return f;
    }
    throw SpecError(path + ".type: unknown family type \"" + type + "\"");
}

inline json family_to_json(const FamilySpec& spec) {
    using namespace detail;
    json j;
    if (const auto* f = std::get_if<DirectionalLinear>(&spec)) {
        j["type"] = "directional_linear";
        j["rho"] = cx_list_to_json(f->rho);
        j["sigma"] = cx_list_to_json(f->sigma);
        j["c0"] = cx_to_json(f->c0);
        j["c0_root"] = cx_to_json(f->c0_root);
        j["ell"] = f->ell;
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<DirectionalPower>(&spec)) {
        j["type"] = "directional_power";
        j["rho"] = cx_list_to_json(f->rho);
        j["sigma"] = cx_list_to_json(f->sigma);
        j["c0"] = cx_to_json(f->c0);
        j["c0_root"] = cx_to_json(f->c0_root);
        j["ell"] = f->ell;
        j["hbar"] = f->hbar;
        j["a1"] = cx_to_json(f->a1);
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<DirectionalExp>(&spec)) {
        j["type"] = "directional_exp";
        j["rho"] = cx_list_to_json(f->rho);
        j["sigma"] = cx_list_to_json(f->sigma);
        j["c0"] = cx_to_json(f->c0);
        j["c0_root"] = cx_to_json(f->c0_root);
        j["ell"] = f->ell;
        j["a1"] = cx_to_json(f->a1);
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<DirectionalCosh>(&spec)) {
        j["type"] = "directional_cosh";
        j["rho"] = cx_list_to_json(f->rho);
        j["sigma"] = cx_list_to_json(f->sigma);
        j["c0"] = cx_to_json(f->c0);
        j["c0_root"] = cx_to_json(f->c0_root);
        j["ell"] = f->ell;
        j["a1"] = cx_to_json(f->a1);
        j["a2"] = cx_to_json(f->a2);
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<DiagonalLinear>(&spec)) {
        j["type"] = "diagonal_linear";
        j["exponents"] = f->exponents;
        j["sigma"] = cx_list_to_json(f->sigma);
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<Paraboloid>(&spec)) {
        j["type"] = "paraboloid";
        j["c"] = cx_list_to_json(f->c);
    } else if (const auto* f = std::get_if<DiagonalPower>(&spec)) {
        j["type"] = "diagonal_power";
        j["ell"] = f->ell;
        j["hbar"] = f->hbar;
        j["sigma"] = cx_list_to_json(f->sigma);
        j["phi"] = phi_spec_to_json(f->phi);
    } else if (const auto* f = std::get_if<DiagonalExp>(&spec)) {
        j["type"] = "diagonal_exp";
        j["ell"] = f->ell;
        j["sigma"] = cx_list_to_json(f->sigma);
        j["psi"] = phi_spec_to_json(f->psi);
    } else {
        throw std::logic_error("family_to_json: direct instances serialize at the spec-file level");
    }
    return j;
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

struct SpecFile {
    std::size_t dimension = 0;
    FamilySpec family = Paraboloid{};
    std::optional<WaringForm> form; // required for direct instances
    std::optional<UniPoly> rhs;
    std::optional<PhiSpec> extra_phi; // standalone annihilation check
};

namespace detail {

inline bool approx_eq(Cx a, Cx b) { return std::abs(a - b) <= 1e-12; }

inline void check_instance_consistency(const SpecFile& sf, const ConstructedFamily& fam) {
    if (sf.form) {
        const WaringForm& a = *sf.form;
        const WaringForm& b = fam.H;
        bool ok = a.dimension() == b.dimension() && a.is_diagonal() == b.is_diagonal();
        if (ok && a.is_diagonal()) ok = a.diagonal_exponents() == b.diagonal_exponents();
        if (ok && !a.is_diagonal()) {
            const auto& ta = a.monomial_terms();
            const auto& tb = b.monomial_terms();
            ok = ta.size() == tb.size();
            for (std::size_t i = 0; ok && i < ta.size(); ++i)
                ok = ta[i].powers == tb[i].powers && approx_eq(ta[i].coeff, tb[i].coeff);
        }
        if (!ok) throw SpecError("form: does not match the instance the family constructs");
    }
    if (sf.rhs) {
        const UniPoly& a = *sf.rhs;
        const UniPoly& b = fam.P;
        bool ok = approx_eq(a.leading, b.leading) && a.roots.size() == b.roots.size();
        for (std::size_t i = 0; ok && i < a.roots.size(); ++i)
            ok = approx_eq(a.roots[i].first, b.roots[i].first) &&
                 a.roots[i].second == b.roots[i].second;
        if (!ok) throw SpecError("rhs: does not match the instance the family constructs");
    }
}

} // namespace detail

inline SpecFile parse_spec_file(const json& j) {
    using namespace detail;
    check_keys(j, {"dimension", "form", "rhs", "family", "phi"}, "spec");
    SpecFile sf;
    int dim = parse_int(need(j, "dimension", "spec"), "spec.dimension");
    if (dim < 1) throw SpecError("spec.dimension: must be >= 1");
    sf.dimension = static_cast<std::size_t>(dim);

    if (j.contains("form")) sf.form = parse_form(j["form"], sf.dimension, "spec.form");
    if (j.contains("rhs")) sf.rhs = parse_rhs(j["rhs"], "spec.rhs");
    if (j.contains("phi")) sf.extra_phi = parse_phi_spec(j["phi"], sf.dimension, "spec.phi");

    const json& fj = need(j, "family", "spec");
    if (fj.contains("direct")) {
        check_keys(fj, {"direct"}, "spec.family");
        const json& dj = fj["direct"];
        check_keys(dj, {"u", "unconfirmed"}, "spec.family.direct");
        DirectInstance di;
        di.u = parse_expr_field(need(dj, "u", "spec.family.direct"), sf.dimension,
                                "spec.family.direct.u");
        if (dj.contains("unconfirmed")) {
            if (!dj["unconfirmed"].is_boolean())
                throw SpecError("spec.family.direct.unconfirmed: expected a boolean");
            di.unconfirmed = dj["unconfirmed"].get<bool>();
        }
        if (!sf.form) throw SpecError("spec: a direct instance requires \"form\"");
        if (!sf.rhs) throw SpecError("spec: a direct instance requires \"rhs\"");
        di.H = *sf.form;
        di.P = *sf.rhs;
        sf.family = std::move(di);
        return sf;
    }
    sf.family = parse_family(fj, sf.dimension, "spec.family");
    return sf;
}

/// Builds the family and appends the optional standalone phi check; verifies
/// declared form/rhs (when present) against the constructed instance.
inline ConstructedFamily assemble(const SpecFile& sf) {
    ConstructedFamily fam;
    try {
        fam = construct(sf.family);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
    if (!std::holds_alternative<DirectInstance>(sf.family))
        detail::check_instance_consistency(sf, fam);
    if (sf.extra_phi) {
        PhiSpec phi = *sf.extra_phi;
        if (phi.weights.empty())
            throw SpecError("spec.phi: a standalone phi check needs explicit weights");
        Expr phi_expr = make_phi(phi, sf.dimension);
        fam.constraints.push_back(detail::annihilation_constraint(
            phi_expr, phi.weights, "spec_phi_annihilation"));
    }
    return fam;
}

inline json spec_file_to_json(const SpecFile& sf) {
    json j;
    j["dimension"] = static_cast<int>(sf.dimension);
    if (const auto* di = std::get_if<DirectInstance>(&sf.family)) {
        j["form"] = form_to_json(di->H);
        j["rhs"] = rhs_to_json(di->P);
        json dj;
        dj["u"] = to_string(di->u);
        if (di->unconfirmed) dj["unconfirmed"] = true;
        j["family"] = json{{"direct", std::move(dj)}};
    } else {
        if (sf.form) j["form"] = form_to_json(*sf.form);
        if (sf.rhs) j["rhs"] = rhs_to_json(*sf.rhs);
        j["family"] = family_to_json(sf.family);
    }
    if (sf.extra_phi) j["phi"] = phi_spec_to_json(*sf.extra_phi);
    return j;
}

// ---------------------------------------------------------------------------
// ODE case files
// ---------------------------------------------------------------------------

inline LeftFactorCase parse_ode_case(const json& j, const std::string& path = "case") {
    using namespace detail;
    check_keys(j, {"case", "A0", "A1", "alpha1", "alpha2", "alphas", "m1", "m2", "b1", "b2", "f"},
               path);
    const json& cj = need(j, "case", path);
    if (!cj.is_string()) throw SpecError(path + ".case: expected a string");
    const std::string kind = cj.get<std::string>();
    auto cx_field = [&](const char* key) { return parse_cx(need(j, key, path), path + "." + key); };

    if (kind == "exp") return ExpFactor{cx_field("A0"), cx_field("A1"), cx_field("alpha1")};
    if (kind == "moebius_exp")
        return MoebiusExpFactor{cx_field("A0"), cx_field("A1"), cx_field("alpha1"),
                                cx_field("alpha2")};
    if (kind == "sin")
        return SinFactor{cx_field("A0"), cx_field("A1"), cx_field("alpha1"), cx_field("alpha2")};
    if (kind == "elliptic") {
        EllipticFactor el;
        el.A0 = cx_field("A0");
        el.alphas = parse_cx_list(need(j, "alphas", path), path + ".alphas");
        if (j.contains("m1")) el.m1 = parse_int(j["m1"], path + ".m1");
        if (j.contains("m2")) el.m2 = parse_int(j["m2"], path + ".m2");
        if (j.contains("b1")) el.b1 = parse_cx(j["b1"], path + ".b1");
        if (j.contains("b2")) el.b2 = parse_cx(j["b2"], path + ".b2");
        const json& fj = need(j, "f", path);
        check_keys(fj, {"wp_affine", "expr"}, path + ".f");
        if (fj.contains("wp_affine")) {
            const json& wj = fj["wp_affine"];
            check_keys(wj, {"g2", "g3", "offset", "scale", "terms"}, path + ".f.wp_affine");
            WpAffine wa;
            wa.params.g2 = parse_cx(need(wj, "g2", path), path + ".f.wp_affine.g2");
            wa.params.g3 = parse_cx(need(wj, "g3", path), path + ".f.wp_affine.g3");
            if (wj.contains("offset")) wa.offset = parse_cx(wj["offset"], path + ".f.wp_affine.offset");
            if (wj.contains("scale")) wa.scale = parse_cx(wj["scale"], path + ".f.wp_affine.scale");
            if (wj.contains("terms")) wa.terms = parse_int(wj["terms"], path + ".f.wp_affine.terms");
            el.f = wa;
        } else if (fj.contains("expr")) {
            el.f = ExprFactor{parse_expr_field(fj["expr"], 1, path + ".f.expr")};
        } else {
            throw SpecError(path + ".f: expected \"wp_affine\" or \"expr\"");
        }
        return el;
    }
    throw SpecError(path + ".case: unknown case \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json report_to_json(const VerificationReport& r) {
    json j;
    j["instance"] = r.instance;
    json entries = json::array();
    for (const auto& e : r.entries) {
        json ej;
        ej["name"] = e.name;
        ej["kind"] = e.kind == Constraint::Kind::Scalar ? "scalar" : "sampled";
        ej["max_abs_residual"] = e.max_abs_residual;
        ej["max_scaled_residual"] = e.max_scaled_residual;
        ej["worst_point"] = detail::cx_list_to_json(e.worst_point);
        ej["verdict"] = to_cstring(e.verdict);
        entries.push_back(std::move(ej));
    }
    j["constraints"] = std::move(entries);
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["tolerance"] = r.tolerance;
    j["verdict"] = to_cstring(r.overall);
    return j;
}

} // namespace waring
