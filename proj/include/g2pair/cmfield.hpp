#pragma once

// Exact arithmetic in a quartic CM field K = Q(eta), eta^2 = -(a + b delta0),
// Frobenius coordinates over {1, delta, gamma = delta eta, eta}, ell-adic
// valuations and the splitting shape of ell in K.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "hyperelliptic.hpp"
#include "poly.hpp"
#include "splitting.hpp"

namespace g2pair {

class CMFieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CMFieldDesc {
    Integer a;
    Integer b;
    Integer d;

    bool d_one_mod_four() const { return mod(d, 4) == 1; }
};

/// v_ell of a rational; nullopt stands for +infinity (the value 0).
using RationalValuation = std::optional<long>;

inline RationalValuation rational_valuation(const Rational& x, const Integer& ell)
{
    if (x == 0)
        return std::nullopt;
    return static_cast<long>(valuation(x.get_num(), ell)) - static_cast<long>(valuation(x.get_den(), ell));
}

/// min with +infinity as the neutral element.
inline RationalValuation min_valuation(RationalValuation x, RationalValuation y)
{
    if (!x)
        return y;
    if (!y)
        return x;
    return std::min(*x, *y);
}

/// Strict x < y with +infinity < +infinity false.
inline bool valuation_less(RationalValuation x, RationalValuation y)
{
    if (!x)
        return false;
    if (!y)
        return true;
    return *x < *y;
}

inline std::string to_string(RationalValuation v) { return v ? std::to_string(*v) : std::string("inf"); }

/// Element u + v sqrt(d) of K0, rational coordinates.
struct RealQuad {
    Rational u;
    Rational v;
};

/// Element A + B eta of K with A, B in K0.
struct CMElem {
    RealQuad A;
    RealQuad B;
};

/// pi = a1 + a2 delta + a3 gamma + a4 eta.
struct FrobeniusDecomp {
    Rational a1, a2, a3, a4;

    bool operator==(const FrobeniusDecomp&) const = default;
};

class CMField {
public:
    /// Validates the description: d > 1 squarefree, a^2 - b^2 d squarefree,
    /// a + b delta0 totally positive.
    explicit CMField(CMFieldDesc desc) : desc_(std::move(desc))
    {
        const Integer& d = desc_.d;
        if (d <= 1 || !is_squarefree(d))
            throw CMFieldError("d must be a squarefree integer greater than 1");
        if (desc_.b == 0)
            throw CMFieldError("b must be nonzero (otherwise K is biquadratic)");
        const Integer disc = desc_.a * desc_.a - desc_.b * desc_.b * d;
        if (disc == 0 || !is_squarefree(abs(disc)))
            throw CMFieldError("a^2 - b^2 d must be squarefree");
        // a + b delta0 totally positive: trace > 0 and norm > 0
        const RealQuad w = eta_sq_neg();
        const Rational norm = w.u * w.u - w.v * w.v * Rational(d);
        if (!(w.u > 0) || !(norm > 0))
            throw CMFieldError("a + b delta0 must be totally positive");
    }

    const CMFieldDesc& desc() const { return desc_; }

    /// Symbolic description of the O_1 basis.
    std::array<std::string, 4> order_basis() const
    {
        const std::string delta = desc_.d_one_mod_four() ? "(-1+sqrt(d))/2" : "sqrt(d)";
        return {"1", "delta = " + delta, "gamma = delta*eta", "eta"};
    }

    /// -eta^2 = a + b delta0 in sqrt(d) coordinates.
    RealQuad eta_sq_neg() const
    {
        if (desc_.d_one_mod_four())
            return {Rational(desc_.a) - Rational(desc_.b) / 2, Rational(desc_.b) / 2};
        return {Rational(desc_.a), Rational(desc_.b)};
    }

    // --- K0 arithmetic ---
    RealQuad add(const RealQuad& x, const RealQuad& y) const { return {x.u + y.u, x.v + y.v}; }
    RealQuad sub(const RealQuad& x, const RealQuad& y) const { return {x.u - y.u, x.v - y.v}; }
    RealQuad mul(const RealQuad& x, const RealQuad& y) const
    {
        return {x.u * y.u + Rational(desc_.d) * x.v * y.v, x.u * y.v + x.v * y.u};
    }
    RealQuad inv(const RealQuad& x) const
    {
        const Rational n = x.u * x.u - Rational(desc_.d) * x.v * x.v;
        if (n == 0)
            throw CMFieldError("division by zero in K0");
        return {x.u / n, -x.v / n};
    }

    /// Square root in K0, if any.
    std::optional<RealQuad> sqrt(const RealQuad& t) const
    {
        if (t.u == 0 && t.v == 0)
            return RealQuad{0, 0};
        const Rational n = t.u * t.u - Rational(desc_.d) * t.v * t.v;
        auto rn = rational_sqrt(n);
        if (!rn)
            return std::nullopt;
        for (int sign : {1, -1}) {
            const Rational x2 = (t.u + sign * *rn) / 2;
            auto x = rational_sqrt(x2);
            if (x && *x != 0) {
                RealQuad r{*x, t.v / (2 * *x)};
                const RealQuad chk = mul(r, r);
                if (chk.u == t.u && chk.v == t.v)
                    return r;
            }
            if (x && *x == 0 && t.u != 0) {
                // x = 0: t = d y^2
                auto y = rational_sqrt(t.u / Rational(desc_.d));
                if (y && t.v == 0)
                    return RealQuad{0, *y};
            }
        }
        return std::nullopt;
    }

    // --- K arithmetic ---
    CMElem mul(const CMElem& x, const CMElem& y) const
    {
        const RealQuad eta2 = {-eta_sq_neg().u, -eta_sq_neg().v};
        return {add(mul(x.A, y.A), mul(mul(x.B, y.B), eta2)), add(mul(x.A, y.B), mul(x.B, y.A))};
    }
    CMElem pow(CMElem x, unsigned long e) const
    {
        CMElem r{{1, 0}, {0, 0}};
        while (e) {
            if (e & 1)
                r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
    CMElem conj(const CMElem& x) const { return {x.A, {-x.B.u, -x.B.v}}; }

    /// Relative norm N_{K/K0}(x) = A^2 - B^2 eta^2.
    RealQuad relative_norm(const CMElem& x) const { return add(mul(x.A, x.A), mul(mul(x.B, x.B), eta_sq_neg())); }

    // --- coordinates ---
    /// u + v sqrt(d) as (c0, c1) over {1, delta}.
    std::array<Rational, 2> to_delta(const RealQuad& x) const
    {
        if (desc_.d_one_mod_four())
            return {x.u + x.v, 2 * x.v};
        return {x.u, x.v};
    }
    RealQuad from_delta(const Rational& c0, const Rational& c1) const
    {
        if (desc_.d_one_mod_four())
            return {c0 - c1 / 2, c1 / 2};
        return {c0, c1};
    }

    FrobeniusDecomp coordinates(const CMElem& x) const
    {
        const auto A = to_delta(x.A), B = to_delta(x.B);
        return {A[0], A[1], B[1], B[0]};
    }
    CMElem element(const FrobeniusDecomp& c) const { return {from_delta(c.a1, c.a2), from_delta(c.a4, c.a3)}; }

private:
    static std::optional<Rational> rational_sqrt(const Rational& x)
    {
        if (x < 0)
            return std::nullopt;
        Integer n = x.get_num(), d = x.get_den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
            return std::nullopt;
        Integer rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        return Rational(rn) / Rational(rd);
    }

    CMFieldDesc desc_;
};

/// The delta-coefficient of N_{K/K0}(pi), derived exactly; zero for every
/// element whose relative norm is rational.
inline Rational norm_equation_residual(const FrobeniusDecomp& c, const CMFieldDesc& K)
{
    const Rational a(K.a), b(K.b), d(K.d);
    if (mod(K.d, 4) == 1) {
        const Rational w = (d - 1) / 4;
        return 2 * c.a1 * c.a2 - c.a2 * c.a2 + b * (c.a4 * c.a4 + w * c.a3 * c.a3) +
               (a - b) * (2 * c.a3 * c.a4 - c.a3 * c.a3);
    }
    return 2 * c.a1 * c.a2 + b * c.a4 * c.a4 + b * d * c.a3 * c.a3 + 2 * a * c.a3 * c.a4;
}

/// True iff the relative norm of pi lies in Q.
inline bool check_norm_equation(const FrobeniusDecomp& c, const CMFieldDesc& K)
{
    return norm_equation_residual(c, K) == 0;
}

/// The norm relation in its published form, where the eta-coefficient is
/// called a3 and the gamma-coefficient a4. Kept only for cross-checking.
inline Rational published_norm_equation(const FrobeniusDecomp& c, const CMFieldDesc& K)
{
    const Rational a(K.a), b(K.b), d(K.d);
    const Rational& A1 = c.a1;
    const Rational& A2 = c.a2;
    const Rational& A3 = c.a4; // eta
    const Rational& A4 = c.a3; // gamma
    if (mod(K.d, 4) == 1)
        return -A2 * A2 / 2 + A1 * A2 - a * A4 * A4 / 2 + A3 * A4 * (a - b) + A3 * A3 * b / 2 +
               A4 * A4 * (1 + d) * b / 8 - A4 * A4 * (2 * a - b) / 4;
    return 2 * A1 * A2 + A3 * A3 * b + A4 * A4 * b * d + 2 * a * A3 * A4;
}

/// Candidates for pi with the given zeta data, one per choice of the real
/// root beta = pi + conj(pi); the sign of eta is normalised so the first
/// nonzero of (a4, a3) is positive.
inline std::vector<FrobeniusDecomp> decompose_frobenius(const ZetaData& zeta, const CMField& K)
{
    const Integer& d = K.desc().d;
    // beta^2 - s1 beta + (s2 - 2q) = 0
    const Integer disc = zeta.s1 * zeta.s1 - 4 * (zeta.s2 - 2 * zeta.q);
    if (disc <= 0)
        throw CMFieldError("trace polynomial has no real roots; zeta data is not of CM type");
    if (!mpz_divisible_p(disc.get_mpz_t(), d.get_mpz_t()))
        throw CMFieldError("real subfield of the Frobenius field differs from Q(sqrt(d))");
    const Integer r = disc / d;
    if (!mpz_perfect_square_p(r.get_mpz_t()))
        throw CMFieldError("real subfield of the Frobenius field differs from Q(sqrt(d))");
    Integer f;
    mpz_sqrt(f.get_mpz_t(), r.get_mpz_t());

    std::vector<FrobeniusDecomp> out;
    for (int sign : {1, -1}) {
        const RealQuad beta{Rational(zeta.s1) / 2, Rational(Integer(sign * f)) / 2};
        const RealQuad half_beta{beta.u / 2, beta.v / 2};
        // iota^2 = beta^2/4 - q and iota = B eta, eta^2 = -(a + b delta0)
        const RealQuad iota2 = K.sub(K.mul(half_beta, half_beta), RealQuad{Rational(zeta.q), 0});
        const RealQuad neg_eta2 = K.eta_sq_neg();
        const RealQuad B2 = K.mul(iota2, K.inv(RealQuad{-neg_eta2.u, -neg_eta2.v}));
        auto B = K.sqrt(B2);
        if (!B)
            continue;
        CMElem pi{half_beta, *B};
        FrobeniusDecomp c = K.coordinates(pi);
        if (c.a4 < 0 || (c.a4 == 0 && c.a3 < 0))
            c = K.coordinates(K.conj(pi));
        // pi^2 - beta pi + q = 0
        const CMElem pi2 = K.mul(pi, pi);
        const CMElem lhs{K.add(K.sub(pi2.A, K.mul(beta, pi.A)), RealQuad{Rational(zeta.q), 0}),
                         K.sub(pi2.B, K.mul(beta, pi.B))};
        if (lhs.A.u != 0 || lhs.A.v != 0 || lhs.B.u != 0 || lhs.B.v != 0)
            throw CMFieldError("internal: Frobenius candidate fails its quadratic relation");
        out.push_back(c);
    }
    if (out.empty())
        throw CMFieldError("no square root in K0: K is not the CM field of this Frobenius");
    return out;
}

/// Coordinates of pi^r from those of pi.
inline FrobeniusDecomp frobenius_power(const FrobeniusDecomp& c, const CMField& K, unsigned long r)
{
    return K.coordinates(K.pow(K.element(c), r));
}

/// v_{ell,O}(pi) = v_ell(gcd(a2, a3, a4)).
inline RationalValuation v_ell_order(const FrobeniusDecomp& c, const Integer& ell)
{
    return min_valuation(rational_valuation(c.a2, ell),
                         min_valuation(rational_valuation(c.a3, ell), rational_valuation(c.a4, ell)));
}

/// max(v((a3 - a4)/ell), v((a3 - ell a4)/ell^2)) < min(v(a3), v(a4)).
inline bool condition1_holds(const FrobeniusDecomp& c, const Integer& ell)
{
    const Rational L(ell);
    const RationalValuation x = rational_valuation((c.a3 - c.a4) / L, ell);
    const RationalValuation y = rational_valuation((c.a3 - L * c.a4) / (L * L), ell);
    RationalValuation left;
    if (!x || !y)
        left = std::nullopt; // an infinite term makes the maximum infinite
    else
        left = std::max(*x, *y);
    return valuation_less(left, min_valuation(rational_valuation(c.a3, ell), rational_valuation(c.a4, ell)));
}

/// Coordinates over another basis {1, b2, b3, b4}, rows of T giving b_i over
/// {1, delta, gamma, eta}; T[0] must be (1, 0, 0, 0).
inline FrobeniusDecomp change_basis(const FrobeniusDecomp& c, const std::array<std::array<Integer, 4>, 4>& T)
{
    if (T[0][0] != 1 || T[0][1] != 0 || T[0][2] != 0 || T[0][3] != 0)
        throw CMFieldError("the first basis vector must be 1");
    // solve T^t x = c by Gaussian elimination over Q
    std::array<std::array<Rational, 5>, 4> m;
    const std::array<Rational, 4> rhs{c.a1, c.a2, c.a3, c.a4};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            m[i][j] = Rational(T[j][i]);
        m[i][4] = rhs[i];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int i = col; i < 4; ++i)
            if (m[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            throw CMFieldError("basis change matrix is singular");
        std::swap(m[col], m[piv]);
        for (int i = 0; i < 4; ++i) {
            if (i == col || m[i][col] == 0)
                continue;
            const Rational f = m[i][col] / m[col][col];
            for (int j = col; j < 5; ++j)
                m[i][j] -= f * m[col][j];
        }
    }
    std::array<Rational, 4> x;
    for (int i = 0; i < 4; ++i)
        x[i] = m[i][4] / m[i][i];
    return {x[0], x[1], x[2], x[3]};
}

/// Minimal polynomial of eta over Q, constant term first.
inline std::vector<Integer> eta_minimal_polynomial(const CMFieldDesc& K)
{
    const Integer &a = K.a, &b = K.b, &d = K.d;
    if (mod(d, 4) == 1)
        return {a * a - a * b - b * b * ((d - 1) / 4), 0, 2 * a - b, 0, 1};
    return {a * a - b * b * d, 0, 2 * a, 0, 1};
}

namespace detail {

using SmallPoly = Poly<SmallModulus>;

/// Factorisation of a monic polynomial over F_ell by trial division with
/// monic polynomials of degree <= 2 (ell small); leftover of degree 3 or 4
/// is irreducible.
inline std::vector<std::pair<SmallPoly, int>> factor_small(SmallPoly f, const ExtField<SmallModulus>* F,
                                                           std::uint64_t ell)
{
    std::vector<std::pair<SmallPoly, int>> out;
    auto strip = [&](const SmallPoly& g) {
        int e = 0;
        for (;;) {
            auto [q, r] = divmod(f, g);
            if (!r.is_zero())
                break;
            f = q;
            ++e;
        }
        if (e)
            out.push_back({g, e});
    };
    for (std::uint64_t c = 0; c < ell && f.degree() > 0; ++c)
        strip(SmallPoly::linear(F, F->from_integer(Integer(static_cast<unsigned long>(c)))));
    for (std::uint64_t c0 = 0; c0 < ell && f.degree() >= 4; ++c0)
        for (std::uint64_t c1 = 0; c1 < ell && f.degree() >= 4; ++c1) {
            SmallPoly g(F, {F->from_integer(Integer(static_cast<unsigned long>(c0))), F->from_integer(Integer(static_cast<unsigned long>(c1))), F->one()});
            strip(g);
        }
    if (f.degree() > 0)
        out.push_back({f, 1});
    return out;
}

} // namespace detail

/// Factorisation shape of ell in K, read off the minimal polynomial of eta
/// modulo ell when Dedekind's criterion applies.
inline SplittingType splitting_type(const CMFieldDesc& K, const Integer& ell)
{
    if (ell <= 2 || !is_probable_prime(ell))
        throw CMFieldError("ell must be an odd prime");
    if (ell > 5000)
        return SplittingType::Undetermined;
    const std::uint64_t l = ell.get_ui();
    auto F = make_extension<SmallModulus>(ell, 1);
    const auto coeffs = eta_minimal_polynomial(K);
    std::vector<FieldElem<SmallModulus>> c;
    for (const auto& x : coeffs)
        c.push_back(F->from_integer(x));
    const detail::SmallPoly f(F.get(), c);
    const auto factors = detail::factor_small(f, F.get(), l);

    bool repeated = false;
    for (const auto& fe : factors)
        repeated |= fe.second > 1;
    if (repeated) {
        // Dedekind: with f = prod g_i^{e_i} + ell h over Z, ell does not divide
        // the index iff no repeated g_i divides h mod ell
        std::vector<Integer> prod{1};
        for (const auto& [g, e] : factors)
            for (int k = 0; k < e; ++k) {
                std::vector<Integer> next(prod.size() + g.degree(), 0);
                const auto gi = g.coeffs();
                for (std::size_t i = 0; i < prod.size(); ++i)
                    for (std::size_t j = 0; j < gi.size(); ++j)
                        next[i + j] += prod[i] * gi[j].to_prime_field_integer();
                prod = next;
            }
        std::vector<FieldElem<SmallModulus>> hc;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const Integer diff = coeffs[i] - (i < prod.size() ? prod[i] : Integer(0));
            hc.push_back(F->from_integer(diff / ell));
        }
        const detail::SmallPoly h(F.get(), hc);
        for (const auto& [g, e] : factors)
            if (e > 1 && (h % g).is_zero())
                return SplittingType::Undetermined;
        int primes = 0, max_e = 0;
        bool all_degree_one = true;
        for (const auto& [g, e] : factors) {
            primes += e;
            max_e = std::max(max_e, e);
            all_degree_one &= g.degree() == 1;
        }
        if (max_e == 3 || (max_e == 4 && ell <= 3))
            return SplittingType::RamifiedDegreeThree;
        if (primes == 4 && all_degree_one)
            return SplittingType::RamifiedFourIdeals;
        return SplittingType::RamifiedTwoOrThree;
    }
    if (factors.size() == 4)
        return SplittingType::SplitCompletely;
    if (factors.size() == 1)
        return SplittingType::Inert;
    return SplittingType::TwoOrThreeIdeals;
}

} // namespace g2pair
