#pragma once

// ell-power torsion: field of definition of J[ell], bases of J[ell^n] and
// their symplectic normalisation with respect to the Weil pairing.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperelliptic.hpp"
#include "pairing.hpp"
#include "splitting.hpp"

namespace g2pair {

class TorsionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A curve y^2 + h y = f over F_p in the monic quintic model.
struct CurveParams {
    Integer p;
    std::vector<Integer> h;
    std::vector<Integer> f;
};

/// The curve of `params` base-changed to F_{p^r}.
template <class M>
Curve<M> curve_over(const CurveParams& params, unsigned long r)
{
    return Curve<M>::from_integers(make_extension<M>(params.p, static_cast<int>(r)), params.h, params.f);
}

/// Basis (Q1, Q2, Q-1, Q-2) of J[ell^n] over F_{p^r}.
template <class M>
struct TorsionBasis {
    Integer ell;
    unsigned long n = 0;
    unsigned long r = 0;
    bool symplectic = false;
    std::array<Divisor<M>, 4> points;

    Integer level() const { return ipow(ell, n); }
};

/// Index order of basis entries, used in reports and matrices.
inline constexpr std::array<int, 4> kBasisLabels = {1, 2, -1, -2};

/// 4x4 table over Z/ell^n.
using LogMatrix = std::array<std::array<Integer, 4>, 4>;

/// The fixed primitive ell^n-th root of unity all logs refer to.
template <class M>
FieldElem<M> pairing_root(const Curve<M>& C, const Integer& ell, unsigned long n)
{
    return primitive_root_of_unity(C.field(), ell, static_cast<int>(n));
}

/// Smallest t with ell^t D = 0, or nullopt if t would exceed `limit`.
template <class M>
std::optional<unsigned long> ell_order_exponent(const Curve<M>& C, Divisor<M> D, const Integer& ell,
                                                unsigned long limit)
{
    for (unsigned long t = 0; t <= limit; ++t) {
        if (D.is_identity())
            return t;
        D = C.mul(D, ell);
    }
    return std::nullopt;
}

/// log_zeta W_{ell^n}(P, Q).
template <class M>
Integer weil_log(const Curve<M>& C, const Divisor<M>& P, const Divisor<M>& Q, const Integer& ell, unsigned long n,
                 const FieldElem<M>& zeta, Rng& rng, const std::vector<Divisor<M>>* helpers = nullptr)
{
    const Integer m = ipow(ell, n);
    return dlog_prime_power(zeta, weil(C, P, Q, m, rng, helpers), ell, static_cast<int>(n));
}

/// Gram matrix of the ell^n-Weil pairing on four points (alternating).
template <class M>
LogMatrix weil_gram(const Curve<M>& C, const std::array<Divisor<M>, 4>& pts, const Integer& ell, unsigned long n,
                    const FieldElem<M>& zeta, Rng& rng)
{
    const Integer m = ipow(ell, n);
    // detour points for tiny fields where every Miller support collides
    std::vector<Divisor<M>> helpers(pts.begin(), pts.end());
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            helpers.push_back(C.add(pts[i], pts[j]));
    LogMatrix g{};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            g[i][j] = weil_log(C, pts[i], pts[j], ell, n, zeta, rng, &helpers);
            g[j][i] = mod(-g[i][j], m);
        }
    return g;
}

/// Pfaffian of a 4x4 alternating matrix; its square is the determinant.
inline Integer pfaffian(const LogMatrix& g)
{
    return g[0][1] * g[2][3] - g[0][2] * g[1][3] + g[0][3] * g[1][2];
}

namespace detail {

/// Draws points of exact order ell^n from the ell-Sylow subgroup of J(F).
template <class M>
class SylowSampler {
public:
    SylowSampler(const Curve<M>& C, const Integer& group_order, const Integer& ell)
        : C_(C), ell_(ell)
    {
        s_ = static_cast<unsigned long>(valuation(group_order, ell));
        cofactor_ = group_order / ipow(ell, s_);
    }

    unsigned long sylow_exponent() const { return s_; }

    std::optional<Divisor<M>> draw(unsigned long n, Rng& rng) const
    {
        Divisor<M> X = C_.mul(C_.random_divisor(rng), cofactor_);
        auto t = ell_order_exponent(C_, X, ell_, s_);
        if (!t)
            throw TorsionError("group order is inconsistent with the curve (zeta data mismatch?)");
        if (*t < n)
            return std::nullopt;
        return C_.mul(X, ipow(ell_, *t - n));
    }

private:
    const Curve<M>& C_;
    Integer ell_;
    Integer cofactor_;
    unsigned long s_ = 0;
};

} // namespace detail

/// Sampling budget for torsion_basis (40 per basis vector).
inline constexpr int kTorsionSampleBudget = 160;

/// Random basis of J[ell^n], which must be rational over the curve's field.
/// `zeta_here` is the zeta data of J over that same field.
template <class M>
TorsionBasis<M> torsion_basis(const Curve<M>& C, const ZetaData& zeta_here, const Integer& ell, unsigned long n,
                              Rng& rng, unsigned long r = 0)
{
    if (n == 0)
        throw TorsionError("torsion level must be positive");
    const Integer m = ipow(ell, n);
    const Integer Q = C.field().order();
    if (zeta_here.q != Q)
        throw TorsionError("zeta data does not match the field size");
    if (!mpz_divisible_p(Integer(Q - 1).get_mpz_t(), m.get_mpz_t()))
        throw TorsionError("J[" + to_string(m) + "] cannot be rational: " + to_string(m) + " does not divide q - 1");
    const Integer N = zeta_here.group_order();
    if (valuation(N, ell) < static_cast<int>(4 * n))
        throw TorsionError("J[" + to_string(m) + "] is not rational: #J lacks the factor " + to_string(m) + "^4");

    const FieldElem<M> zeta = pairing_root(C, ell, n);
    detail::SylowSampler<M> sampler(C, N, ell);
    std::vector<Divisor<M>> pool;
    std::vector<std::vector<Integer>> logs; // logs[i][j] for j < i
    constexpr std::size_t kPoolCap = 10;

    for (int draw = 0; draw < kTorsionSampleBudget; ++draw) {
        auto X = sampler.draw(n, rng);
        if (!X)
            continue;
        if (pool.size() == kPoolCap) {
            pool.erase(pool.begin());
            logs.erase(logs.begin());
            for (auto& row : logs)
                row.erase(row.begin());
        }
        std::vector<Integer> row;
        for (const auto& P : pool)
            row.push_back(weil_log(C, *X, P, ell, n, zeta, rng, &pool)); // log W(X, P)
        pool.push_back(*X);
        logs.push_back(row);
        const std::size_t k = pool.size() - 1;
        if (k < 3)
            continue;
        auto W = [&](std::size_t i, std::size_t j) -> Integer {
            if (i == j)
                return 0;
            return i > j ? logs[i][j] : Integer(-logs[j][i]);
        };
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                for (std::size_t c = b + 1; c < k; ++c) {
                    const std::array<std::size_t, 4> idx{a, b, c, k};
                    LogMatrix g{};
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            g[i][j] = W(idx[i], idx[j]);
                    if (mod(pfaffian(g), ell) != 0) {
                        TorsionBasis<M> out;
                        out.ell = ell;
                        out.n = n;
                        out.r = r;
                        for (int i = 0; i < 4; ++i)
                            out.points[i] = pool[idx[i]];
                        return out;
                    }
                }
    }
    throw TorsionError("rank 4 not reached within " + std::to_string(kTorsionSampleBudget) + " samples; J[" +
                       to_string(m) + "] is probably not rational");
}

/// Change of basis (rows = new vectors over the old ones) making the
/// alternating form g standard: w(e1, f1) = w(e2, f2) = 1, all other pairs 0.
/// Output order is (e1, e2, f1, f2).
inline LogMatrix symplectic_transform(const LogMatrix& g, const Integer& ell, const Integer& m)
{
    using Vec = std::array<Integer, 4>;
    auto form = [&](const Vec& x, const Vec& y) {
        Integer s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                s += x[i] * g[i][j] * y[j];
        return mod(s, m);
    };
    auto unit = [&](int i) {
        Vec v{0, 0, 0, 0};
        v[i] = 1;
        return v;
    };
    auto combine = [&](const Vec& x, const Integer& a, const Vec& y) {
        Vec out;
        for (int i = 0; i < 4; ++i)
            out[i] = mod(x[i] + a * y[i], m);
        return out;
    };
    auto scale = [&](const Vec& x, const Integer& a) {
        Vec out;
        for (int i = 0; i < 4; ++i)
            out[i] = mod(x[i] * a, m);
        return out;
    };

    std::vector<Vec> rest{unit(0), unit(1), unit(2), unit(3)};
    Vec e[2], f[2];
    for (int round = 0; round < 2; ++round) {
        bool found = false;
        for (std::size_t i = 0; i < rest.size() && !found; ++i)
            for (std::size_t j = 0; j < rest.size() && !found; ++j) {
                if (i == j)
                    continue;
                auto inv = invmod(form(rest[i], rest[j]), m);
                if (!inv)
                    continue;
                e[round] = rest[i];
                f[round] = scale(rest[j], *inv);
                std::vector<Vec> next;
                for (std::size_t k = 0; k < rest.size(); ++k) {
                    if (k == i || k == j)
                        continue;
                    // x - w(x, f) e + w(x, e) f is orthogonal to e and f
                    const Vec& x = rest[k];
                    Vec y = combine(x, -form(x, f[round]), e[round]);
                    y = combine(y, form(x, e[round]), f[round]);
                    next.push_back(y);
                }
                rest = std::move(next);
                found = true;
            }
        if (!found)
            throw TorsionError("Weil pairing matrix is degenerate modulo ell; not a basis");
    }
    (void)ell;
    return {e[0], e[1], f[0], f[1]};
}

/// Linear combination sum c_i P_i.
template <class M>
Divisor<M> combine_points(const Curve<M>& C, const std::array<Divisor<M>, 4>& pts, const std::array<Integer, 4>& c)
{
    Divisor<M> acc = C.identity();
    for (int i = 0; i < 4; ++i)
        if (c[i] != 0)
            acc = C.add(acc, C.mul(pts[i], c[i]));
    return acc;
}

/// Symplectic basis spanning the same group as `basis`.
template <class M>
TorsionBasis<M> symplectic_basis(const Curve<M>& C, const TorsionBasis<M>& basis, Rng& rng)
{
    const Integer m = basis.level();
    const auto zeta = pairing_root(C, basis.ell, basis.n);
    const LogMatrix g = weil_gram(C, basis.points, basis.ell, basis.n, zeta, rng);
    const LogMatrix A = symplectic_transform(g, basis.ell, m);
    TorsionBasis<M> out = basis;
    for (int i = 0; i < 4; ++i)
        out.points[i] = combine_points(C, basis.points, A[i]);
    out.symplectic = true;
    return out;
}

/// True when P(x) = (x - 1)^4 mod ell, coefficientwise.
inline bool char_poly_unipotent_mod(const ZetaData& z, const Integer& ell)
{
    const auto c = z.char_poly();
    const long binom[5] = {1, -4, 6, -4, 1};
    for (int i = 0; i < 5; ++i)
        if (mod(c[i] - binom[i], ell) != 0)
            return false;
    return true;
}

/// Necessary condition for J[ell] to be rational over F_{q^r}.
inline bool torsion_filter(const ZetaData& zeta, const Integer& ell, unsigned long r)
{
    const ZetaData z = zeta.power(r);
    if (valuation(z.group_order(), ell) < 4)
        return false;
    return char_poly_unipotent_mod(z, ell);
}

struct TorsionFieldDegree {
    unsigned long r = 0;
    bool fallback = false;
    std::vector<unsigned long> candidates;
};

/// Least r with J[ell] rational over F_{p^r}. Candidates are divisors of the
/// degree bounds for the splitting shape; when none survives, r = 1, 2, ...
/// is searched directly.
template <class M>
TorsionFieldDegree torsion_field_degree(const CurveParams& params, const ZetaData& zeta, const Integer& ell,
                                        std::optional<SplittingType> hint, Rng& rng)
{
    if (ell <= 2 || !is_probable_prime(ell))
        throw TorsionError("ell must be an odd prime");
    if (mpz_divisible_p(params.p.get_mpz_t(), ell.get_mpz_t()))
        throw TorsionError("ell must differ from the characteristic");
    if (zeta.q != params.p)
        throw TorsionError("zeta data must be over the prime field");

    TorsionFieldDegree out;
    std::set<unsigned long> cand;
    for (const auto& B : torsion_degree_bounds(hint.value_or(SplittingType::Undetermined), ell))
        for (auto d : divisors(to_ulong_checked(B, "degree bound")))
            cand.insert(static_cast<unsigned long>(d));
    out.candidates.assign(cand.begin(), cand.end());

    auto confirmed = [&](unsigned long r) {
        if (!torsion_filter(zeta, ell, r))
            return false;
        const Curve<M> C = curve_over<M>(params, r);
        try {
            torsion_basis(C, zeta.power(r), ell, 1, rng, r);
            return true;
        } catch (const TorsionError&) {
            return false;
        }
    };

    for (unsigned long r : out.candidates)
        if (confirmed(r)) {
            out.r = r;
            return out;
        }
    out.fallback = true;
    // the Frobenius has order dividing |GL_4(F_ell)| on J[ell]; ell^4 bounds the search
    const unsigned long limit = to_ulong_checked(ipow(ell, 4), "search limit");
    for (unsigned long r = 1; r <= limit; ++r)
        if (!cand.count(r) && confirmed(r)) {
            out.r = r;
            return out;
        }
    throw TorsionError("no extension degree up to ell^4 makes J[ell] rational");
}

/// Result of max_rational_level, with a basis at that level.
template <class M>
struct RationalTorsion {
    unsigned long n = 0;
    TorsionBasis<M> basis;
};

/// Largest n with J[ell^n] rational over the curve's field, and a basis of it.
template <class M>
RationalTorsion<M> rational_torsion(const Curve<M>& C, const ZetaData& zeta_here, const Integer& ell, Rng& rng,
                                    unsigned long r = 0)
{
    const Integer N = zeta_here.group_order();
    // pi - 1 = ell^n alpha forces ell^{n(4-i)} | [t^i] P(1 + t)
    const auto c = zeta_here.char_poly();
    std::array<Integer, 5> shifted{};
    for (int i = 0; i < 5; ++i) {
        Integer acc = 0;
        for (int k = i; k < 5; ++k) {
            Integer binom = 1;
            for (int j = 0; j < i; ++j)
                binom = binom * (k - j) / (j + 1);
            acc += c[k] * binom;
        }
        shifted[i] = acc;
    }
    long bound = valuation(N, ell) / 4;
    bound = std::min<long>(bound, valuation(C.field().order() - 1, ell));
    for (int i = 1; i < 4; ++i)
        if (shifted[i] != 0)
            bound = std::min<long>(bound, valuation(shifted[i], ell) / (4 - i));
    if (bound < 1 || !char_poly_unipotent_mod(zeta_here, ell))
        throw TorsionError("J[ell] is not rational over this field");
    for (long n = bound; n >= 1; --n) {
        try {
            auto b = torsion_basis(C, zeta_here, ell, static_cast<unsigned long>(n), rng, r);
            return {static_cast<unsigned long>(n), b};
        } catch (const TorsionError&) {
            if (n == 1)
                throw;
        }
    }
    throw TorsionError("J[ell] is not rational over this field");
}

template <class M>
unsigned long max_rational_level(const Curve<M>& C, const ZetaData& zeta_here, const Integer& ell, Rng& rng)
{
    return rational_torsion(C, zeta_here, ell, rng).n;
}

} // namespace g2pair
