// g2pair: pairing-based endomorphism-ring and isogeny-kernel computations on
// genus-2 Jacobians. Reports are JSON documents on stdout.
//
// Exit codes: 0 maximal or success, 1 not maximal, 2 inapplicable or
// aborted, 3 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <g2pair/curve_spec.hpp>

using namespace g2pair;

namespace {

enum Exit { kOk = 0, kNotMaximal = 1, kInapplicable = 2, kInputError = 3 };

struct Global {
    bool timings = false;
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
};

struct Outcome {
    Json report;
    int code = kOk;
};

CurveSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SpecError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curve_spec(ss.str());
}

Json header(const std::string& command, const CurveSpec& s, std::uint64_t seed)
{
    return {{"command", command},
            {"p", to_string(s.p)},
            {"ell", to_string(s.ell)},
            {"seed", seed},
            {"model", {{"h", to_json(s.model.h)}, {"f", to_json(s.model.f)}, {"transform", s.model.steps}}}};
}

AnalysisOptions analysis_options(const CurveSpec& s, const Global& g, PhaseTimer* timer)
{
    AnalysisOptions o;
    o.threads = g.threads;
    o.seed = g.seed.value_or(s.seed);
    o.degree = s.r;
    o.timer = timer;
    return o;
}

void attach_timings(Json& report, const Global& g, const PhaseTimer& t)
{
    if (!g.timings)
        return;
    report["timings"] = to_json(t.timings);
    report["timings_note"] = "wall-clock seconds per phase; informational only";
}

int verdict_code(MaximalityResult r)
{
    switch (r) {
    case MaximalityResult::Maximal: return kOk;
    case MaximalityResult::NotMaximal: return kNotMaximal;
    default: return kInapplicable;
    }
}

template <class M>
Outcome check_max_endo(const CurveSpec& s, const Global& g)
{
    PhaseTimer timer;
    const auto opt = analysis_options(s, g, &timer);
    Outcome out{header("check-max-endo", s, opt.seed)};
    const auto v = is_locally_maximal<M>(s.params(), s.zeta(), s.cm_field, s.ell, opt);
    out.report.update(to_json(v));
    out.code = verdict_code(v.result);
    attach_timings(out.report, g, timer);
    return out;
}

template <class M>
Outcome horizontal(const CurveSpec& s, const Global& g, bool lift)
{
    PhaseTimer timer;
    HorizontalOptions opt;
    opt.analysis = analysis_options(s, g, &timer);
    opt.lift = lift;
    Outcome out{header("horizontal-kernels", s, opt.analysis.seed)};
    const auto h = horizontal_kernels<M>(s.params(), s.zeta(), s.cm_field, s.ell, opt);
    out.report["field"] = to_json(h.base.curve.field());
    out.report["verdict"] = to_string(h.base.verdict.result);
    out.report.update(to_json(h));
    out.code = h.aborted ? kInapplicable : kOk;
    attach_timings(out.report, g, timer);
    return out;
}

template <class M>
unsigned long resolve_degree(const CurveSpec& s, Rng& rng)
{
    if (s.r)
        return *s.r;
    return torsion_field_degree<M>(s.params(), s.zeta(), s.ell, std::nullopt, rng).r;
}

template <class M>
Outcome torsion(const CurveSpec& s, const Global& g, std::optional<unsigned long> level, bool symplectic)
{
    const std::uint64_t seed = g.seed.value_or(s.seed);
    Outcome out{header("torsion-basis", s, seed)};
    PhaseTimer timer;
    Rng rng(seed);
    const unsigned long r = timer.run("torsion-field-degree", [&] { return resolve_degree<M>(s, rng); });
    const Curve<M> C = curve_over<M>(s.params(), r);
    const ZetaData zr = s.zeta().power(r);
    auto basis = timer.run("torsion-basis", [&] {
        return level ? torsion_basis(C, zr, s.ell, *level, rng, r) : rational_torsion(C, zr, s.ell, rng, r).basis;
    });
    if (symplectic)
        basis = timer.run("symplectic-basis", [&] { return symplectic_basis(C, basis, rng); });
    out.report["field"] = to_json(C.field());
    out.report["basis"] = to_json(basis);
    attach_timings(out.report, g, timer);
    return out;
}

struct PairingArgs {
    std::string kind = "tate";
    unsigned long n = 1;
    std::string d1 = "basis:1";
    std::string d2 = "basis:3";
};

template <class M>
Outcome pairing(const CurveSpec& s, const Global& g, const PairingArgs& a)
{
    const std::uint64_t seed = g.seed.value_or(s.seed);
    Outcome out{header("pairing", s, seed)};
    Rng rng(seed);
    const unsigned long r = resolve_degree<M>(s, rng);
    const Curve<M> C = curve_over<M>(s.params(), r);
    const Integer m = ipow(s.ell, a.n);
    std::optional<TorsionBasis<M>> basis;
    auto parse = [&](const std::string& text, const char* which) -> Divisor<M> {
        if (text == "identity")
            return C.identity();
        if (text.rfind("basis:", 0) == 0) {
            const int i = std::stoi(text.substr(6));
            if (i < 1 || i > 4)
                throw SpecError(which, "basis index must be 1..4");
            if (!basis)
                basis = symplectic_basis(C, torsion_basis(C, s.zeta().power(r), s.ell, a.n, rng, r), rng);
            return basis->points[i - 1];
        }
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::parse_error&) {
            throw SpecError(which, "expected identity, basis:i or a divisor as JSON");
        }
        try {
            return divisor_from_json(C, j);
        } catch (const SerializeError& e) {
            throw SpecError(which, e.what());
        }
    };
    const Divisor<M> D1 = parse(a.d1, "--d1"), D2 = parse(a.d2, "--d2");
    FieldElem<M> value;
    if (a.kind == "tate")
        value = tate_reduced(C, D1, D2, m, rng);
    else if (a.kind == "weil")
        value = weil(C, D1, D2, m, rng);
    else
        throw SpecError("--kind", "must be tate or weil");
    out.report["field"] = to_json(C.field());
    out.report["kind"] = a.kind;
    out.report["m"] = to_string(m);
    out.report["d1"] = to_json(D1);
    out.report["d2"] = to_json(D2);
    out.report["value"] = to_json(value);
    if (mpz_divisible_p(Integer(C.field().order() - 1).get_mpz_t(), m.get_mpz_t())) {
        const auto zeta = pairing_root(C, s.ell, a.n);
        out.report["zeta"] = to_json(zeta);
        out.report["log"] = to_string(dlog_prime_power(zeta, value, s.ell, static_cast<int>(a.n)));
    }
    return out;
}

Outcome decompose(const CurveSpec& s, const Global& g)
{
    Outcome out{header("decompose", s, g.seed.value_or(s.seed))};
    const CMField K(s.cm_field);
    Json cands = Json::array();
    const bool ell_ok = s.ell > 2 && is_probable_prime(s.ell);
    for (const auto& c : decompose_frobenius(s.zeta(), K)) {
        Json e = to_json(c);
        e["norm_equation"] = check_norm_equation(c, s.cm_field);
        const RealQuad nm = K.relative_norm(K.element(c));
        e["relative_norm_is_p"] = nm.u == Rational(s.p) && nm.v == 0;
        if (ell_ok) {
            e["v_OK"] = valuation_json(v_ell_order(c, s.ell));
            e["condition1"] = condition1_holds(c, s.ell);
        }
        if (s.r) {
            const auto cr = frobenius_power(c, K, *s.r);
            e["frobenius_r"] = to_json(cr);
            if (ell_ok) {
                e["v_OK_r"] = valuation_json(v_ell_order(cr, s.ell));
                e["condition1_r"] = condition1_holds(cr, s.ell);
            }
        }
        cands.push_back(e);
    }
    out.report["order_basis"] = {"1", "delta", "gamma", "eta"};
    out.report["decompositions"] = cands;
    if (ell_ok)
        out.report["splitting_type"] = to_string(splitting_type(s.cm_field, s.ell));
    return out;
}

// Small primes keep residues in machine words.
template <class F>
Outcome dispatch(const CurveSpec& s, F&& body)
{
    if (s.p < (Integer(1) << 62))
        return body.template operator()<SmallModulus>();
    return body.template operator()<BigModulus>();
}

Json error_report(const std::string& kind, const std::string& where, const std::string& message)
{
    Json e = {{"kind", kind}, {"message", message}};
    if (!where.empty())
        e["where"] = where;
    return {{"error", e}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pairing-based computations on genus-2 Jacobians"};
    app.require_subcommand(1);
    Global g;
    app.add_flag("--timings", g.timings, "Report wall time per phase (informational)");
    app.add_option("--threads", g.threads, "Worker threads for pairing tables and plane filtering (0 = all cores)");
    app.add_option("--seed", g.seed, "Override the seed given in the spec file");

    std::string spec_path;
    auto add_cmd = [&](const char* name, const char* help) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("spec", spec_path, "Curve specification file")->required();
        return c;
    };
    auto* max_cmd = add_cmd("check-max-endo", "Decide local maximality of End(J) at ell");
    bool no_lift = false;
    auto* hor_cmd = add_cmd("horizontal-kernels", "Kernels of horizontal (ell, ell)-isogenies");
    hor_cmd->add_flag("--no-lift", no_lift, "Filter at the base field even when k_ell < 2");
    PairingArgs pa;
    auto* pair_cmd = add_cmd("pairing", "Evaluate a reduced Tate or Weil pairing");
    pair_cmd->add_option("--kind", pa.kind, "tate or weil")->check(CLI::IsMember({"tate", "weil"}));
    pair_cmd->add_option("--n", pa.n, "Level exponent: m = ell^n")->check(CLI::PositiveNumber);
    pair_cmd->add_option("--d1", pa.d1, "identity, basis:i, or a divisor as JSON");
    pair_cmd->add_option("--d2", pa.d2, "identity, basis:i, or a divisor as JSON");
    std::optional<unsigned long> level;
    bool symplectic = false;
    auto* tor_cmd = add_cmd("torsion-basis", "Basis of the rational ell-power torsion");
    tor_cmd->add_option("--n", level, "Level exponent (default: largest rational level)");
    tor_cmd->add_flag("--symplectic", symplectic, "Make the basis symplectic");
    auto* dec_cmd = add_cmd("decompose", "Coordinates of Frobenius in the CM order basis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    Outcome out;
    try {
        const CurveSpec s = load_spec(spec_path);
        if (max_cmd->parsed())
            out = dispatch(s, [&]<class M>() { return check_max_endo<M>(s, g); });
        else if (hor_cmd->parsed())
            out = dispatch(s, [&]<class M>() { return horizontal<M>(s, g, !no_lift); });
        else if (pair_cmd->parsed())
            out = dispatch(s, [&]<class M>() { return pairing<M>(s, g, pa); });
        else if (tor_cmd->parsed())
            out = dispatch(s, [&]<class M>() { return torsion<M>(s, g, level, symplectic); });
        else if (dec_cmd->parsed())
            out = decompose(s, g);
    } catch (const SpecError& e) {
        out = {error_report("input", e.where(), e.what()), kInputError};
    } catch (const InapplicableError& e) {
        out = {error_report("inapplicable", "", e.what()), kInapplicable};
        out.report["result"] = "inapplicable";
    } catch (const CMFieldError& e) {
        out = {error_report("input", "cm_field", e.what()), kInputError};
    } catch (const TorsionError& e) {
        out = {error_report("input", "zeta", e.what()), kInputError};
    } catch (const std::exception& e) {
        out = {error_report("failure", "", e.what()), kInapplicable};
    }
    std::cout << out.report.dump(2) << '\n';
    if (out.report.contains("error"))
        std::cerr << "g2pair: " << out.report["error"]["message"].get<std::string>() << '\n';
    return out.code;
}
