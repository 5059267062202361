#pragma once

// k_ell from the pairing table, the local-maximality verdict, and the
// elementary endomorphism-action test used to certify valuations directly.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmfield.hpp"
#include "pairing_matrix.hpp"
#include "torsion.hpp"

namespace g2pair {

/// Raised when ell falls outside the hypotheses of the maximality criterion.
class InapplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MaximalityResult {
    Maximal,
    NotMaximal,
    AbortKZero,
    InapplicableVGe2n,
    InapplicableCondition1,
};

inline std::string to_string(MaximalityResult r)
{
    switch (r) {
    case MaximalityResult::Maximal: return "maximal";
    case MaximalityResult::NotMaximal: return "not-maximal";
    case MaximalityResult::AbortKZero: return "abort-k-zero";
    case MaximalityResult::InapplicableVGe2n: return "inapplicable-v-ge-2n";
    case MaximalityResult::InapplicableCondition1: return "inapplicable-condition1";
    }
    return "abort-k-zero";
}

/// Largest ell-adic order of the table entries, max(n - v_ell(log)) over
/// nonzero logs; nullopt when every entry is trivial (the abort case).
inline std::optional<unsigned long> compute_k_ell(const LogMatrix& logs, const Integer& ell, unsigned long n)
{
    const Integer m = ipow(ell, n);
    std::optional<unsigned long> k;
    for (const auto& row : logs)
        for (const auto& x : row) {
            const Integer r = mod(x, m);
            if (r == 0)
                continue;
            const unsigned long order = n - static_cast<unsigned long>(valuation(r, ell));
            if (!k || order > *k)
                k = order;
        }
    return k;
}

template <class M>
std::optional<unsigned long> compute_k_ell(const PairingMatrix<M>& pm)
{
    return compute_k_ell(pm.logs, pm.ell, pm.n);
}

/// (A + B pi + C pi^2 + D pi^3)(Q) for the p-power Frobenius pi.
template <class M>
Divisor<M> apply_frobenius_poly(const Curve<M>& C, const std::array<Integer, 4>& coeffs, const Divisor<M>& Q)
{
    Divisor<M> acc = C.identity();
    Divisor<M> pq = Q;
    for (int i = 0; i < 4; ++i) {
        if (coeffs[i] != 0)
            acc = C.add(acc, C.mul(pq, coeffs[i]));
        if (i < 3)
            pq = C.frobenius(pq);
    }
    return acc;
}

/// True iff A + B pi + C pi^2 + D pi^3 kills every generator.
template <class M>
bool endo_action_test(const Curve<M>& C, const std::array<Integer, 4>& coeffs, const std::vector<Divisor<M>>& gens)
{
    for (const auto& Q : gens)
        if (!apply_frobenius_poly(C, coeffs, Q).is_identity())
            return false;
    return true;
}

/// x^r mod the characteristic polynomial of pi, as (c0, c1, c2, c3).
inline std::array<Integer, 4> frobenius_power_reduced(const ZetaData& zeta, unsigned long r)
{
    const auto P = zeta.char_poly(); // monic, constant first
    std::vector<Integer> acc{1};
    std::vector<Integer> x{0, 1};
    auto mulmod = [&](const std::vector<Integer>& a, const std::vector<Integer>& b) {
        std::vector<Integer> out(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                out[i + j] += a[i] * b[j];
        for (std::size_t k = out.size(); k-- > 4;) {
            const Integer c = out[k];
            if (c == 0)
                continue;
            for (int i = 0; i < 5; ++i)
                out[k - 4 + i] -= c * P[i];
        }
        out.resize(std::min<std::size_t>(out.size(), 4));
        return out;
    };
    unsigned long e = r;
    while (e) {
        if (e & 1)
            acc = mulmod(acc, x);
        x = mulmod(x, x);
        e >>= 1;
    }
    std::array<Integer, 4> out{};
    for (std::size_t i = 0; i < acc.size() && i < 4; ++i)
        out[i] = acc[i];
    return out;
}

/// A scalar a mod ell^m with pi^r = a on the given generators of J[ell^m],
/// if one exists. Candidates are restricted to a = 1 mod ell^known.
template <class M>
std::optional<Integer> frobenius_scalar(const Curve<M>& C, const ZetaData& zeta_base, unsigned long r,
                                        const std::vector<Divisor<M>>& gens, const Integer& ell, unsigned long m,
                                        unsigned long known = 0)
{
    const auto c = frobenius_power_reduced(zeta_base, r);
    const Integer level = ipow(ell, m), step = ipow(ell, known);
    for (Integer a = 1 % level; a < level; a += step) {
        if (endo_action_test(C, {c[0] - a, c[1], c[2], c[3]}, gens))
            return a;
        if (step >= level)
            break;
    }
    return std::nullopt;
}

struct PhaseTiming {
    std::string phase;
    double seconds = 0;
};

class PhaseTimer {
public:
    template <class F>
    auto run(const std::string& name, F&& body)
    {
        const auto t0 = std::chrono::steady_clock::now();
        struct Record {
            PhaseTimer* self;
            std::string name;
            std::chrono::steady_clock::time_point t0;
            ~Record()
            {
                self->timings.push_back(
                    {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
            }
        } rec{this, name, t0};
        return body();
    }

    std::vector<PhaseTiming> timings;
};

struct MaximalityVerdict {
    MaximalityResult result = MaximalityResult::AbortKZero;
    std::optional<unsigned long> k_ell; ///< nullopt means abort
    unsigned long n = 0;
    unsigned long r = 0;
    RationalValuation v_OK;
    bool condition1 = false;
    FrobeniusDecomp decomposition;  ///< pi over the base field
    FrobeniusDecomp frobenius_r;    ///< pi^r, the Frobenius over F_{p^r}
    std::vector<std::string> diagnostics;
};

/// Everything computed on the way to a verdict, kept for reuse by the
/// horizontal-kernel search.
template <class M>
struct LocalAnalysis {
    CurveParams params;
    ZetaData zeta;
    Integer ell;
    Curve<M> curve;
    ZetaData zeta_r;
    TorsionBasis<M> basis;
    PairingMatrix<M> matrix;
    MaximalityVerdict verdict;
};

struct AnalysisOptions {
    unsigned threads = 0;
    std::uint64_t seed = 1;
    std::optional<unsigned long> degree; ///< skip the torsion-field search
    PhaseTimer* timer = nullptr;
};

/// Checks ell against the hypotheses shared by the criterion: odd prime,
/// different from p, coprime to a, b and d.
inline void check_hypotheses(const CurveParams& params, const CMFieldDesc& K, const Integer& ell)
{
    if (ell <= 2 || !is_probable_prime(ell))
        throw InapplicableError("ell must be an odd prime");
    if (ell == params.p)
        throw InapplicableError("ell must differ from the characteristic");
    for (const Integer* x : {&K.a, &K.b, &K.d})
        if (mpz_divisible_p(x->get_mpz_t(), ell.get_mpz_t()))
            throw InapplicableError("ell divides lcm(a, b, d)");
}

/// Verdict from the three ingredients, following the maximality criterion.
inline MaximalityResult decide(const std::optional<unsigned long>& k, unsigned long n, const RationalValuation& v,
                               bool condition1, std::vector<std::string>& diagnostics)
{
    if (!k)
        return MaximalityResult::AbortKZero;
    if (!v || *v >= static_cast<long>(2 * n))
        return MaximalityResult::InapplicableVGe2n;
    const bool equal = static_cast<long>(*k) == 2 * static_cast<long>(n) - *v;
    if (!condition1) {
        diagnostics.push_back(std::string("the coordinate condition fails; k_ell ") + (equal ? "=" : "!=") + " 2n - v_OK");
        return MaximalityResult::InapplicableCondition1;
    }
    return equal ? MaximalityResult::Maximal : MaximalityResult::NotMaximal;
}

template <class M>
LocalAnalysis<M> analyse_locally(const CurveParams& params, const ZetaData& zeta, const CMFieldDesc& Kdesc,
                                 const Integer& ell, const AnalysisOptions& opt = {})
{
    check_hypotheses(params, Kdesc, ell);
    PhaseTimer local;
    PhaseTimer& timer = opt.timer ? *opt.timer : local;
    Rng rng(opt.seed);
    const CMField K(Kdesc);

    MaximalityVerdict verdict;
    // a failed decomposition only matters once the pairing table is nontrivial
    std::vector<FrobeniusDecomp> candidates;
    std::optional<CMFieldError> decompose_error;
    timer.run("decompose", [&] {
        try {
            candidates = decompose_frobenius(zeta, K);
        } catch (const CMFieldError& e) {
            decompose_error = e;
        }
        return 0;
    });

    verdict.r = timer.run("torsion-field-degree", [&] {
        if (opt.degree)
            return *opt.degree;
        Rng sub = rng.split(1);
        return torsion_field_degree<M>(params, zeta, ell, splitting_type(Kdesc, ell), sub).r;
    });
    const unsigned long r = verdict.r;

    Curve<M> C = curve_over<M>(params, r);
    const ZetaData zr = zeta.power(r);
    Rng rt_rng = rng.split(2);
    auto rt = timer.run("torsion-basis", [&] { return rational_torsion(C, zr, ell, rt_rng, r); });
    verdict.n = rt.n;
    Rng sb_rng = rng.split(3);
    auto basis = timer.run("symplectic-basis", [&] { return symplectic_basis(C, rt.basis, sb_rng); });
    Rng pm_rng = rng.split(4);
    auto pm = timer.run("pairing-matrix", [&] { return pairing_matrix(C, basis, pm_rng, opt.threads); });
    verdict.k_ell = compute_k_ell(pm);
    if (decompose_error) {
        if (verdict.k_ell)
            throw *decompose_error;
        verdict.result = MaximalityResult::AbortKZero;
        verdict.diagnostics.push_back(std::string("no Frobenius decomposition: ") + decompose_error->what());
        return {params, zeta, ell, std::move(C), zr, std::move(basis), std::move(pm), std::move(verdict)};
    }
    verdict.decomposition = candidates.front();

    // pi^r and its valuation; disagreeing candidates are flagged
    verdict.frobenius_r = frobenius_power(verdict.decomposition, K, r);
    verdict.v_OK = v_ell_order(verdict.frobenius_r, ell);
    verdict.condition1 = condition1_holds(verdict.frobenius_r, ell);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const auto other = frobenius_power(candidates[i], K, r);
        if (v_ell_order(other, ell) != verdict.v_OK || condition1_holds(other, ell) != verdict.condition1)
            verdict.diagnostics.push_back("ambiguous Frobenius decomposition: candidates disagree at ell");
    }
    verdict.result = decide(verdict.k_ell, verdict.n, verdict.v_OK, verdict.condition1, verdict.diagnostics);
    return {params, zeta, ell, std::move(C), zr, std::move(basis), std::move(pm), std::move(verdict)};
}

template <class M>
MaximalityVerdict is_locally_maximal(const CurveParams& params, const ZetaData& zeta, const CMFieldDesc& K,
                                     const Integer& ell, const AnalysisOptions& opt = {})
{
    return analyse_locally<M>(params, zeta, K, ell, opt).verdict;
}

} // namespace g2pair
