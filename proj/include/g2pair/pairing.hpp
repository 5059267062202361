#pragma once

// Miller functions, reduced Tate pairing and Weil pairing on genus-2
// Jacobians. Functions are normalised at infinity, so a reduced divisor
// (u, v) is evaluated through its effective part only.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperelliptic.hpp"

namespace g2pair {

class PairingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of re-randomisations attempted when an evaluation divisor meets
/// the support of a Miller function.
inline constexpr int kPairingRetries = 8;

/// Numerator and denominator of a function value, kept apart so that a
/// collision (zero in either) is detected instead of silently cancelling.
template <class M>
struct Fraction {
    FieldElem<M> num;
    FieldElem<M> den;

    bool collided() const { return num.is_zero() || den.is_zero(); }
    FieldElem<M> value() const { return num / den; }
};

/// Value of the Cantor trace function at the effective divisor of E.
template <class M>
void accumulate_trace(const CantorTrace<M>& tr, const Divisor<M>& E, Fraction<M>& acc)
{
    if (E.is_identity())
        return;
    acc.num *= norm_at_roots(E.u, tr.d);
    for (const auto& st : tr.steps) {
        acc.num *= norm_at_roots(E.u, E.v - st.v);
        FieldElem<M> c = st.c;
        if (!c.is_one())
            c = c.pow(E.u.degree());
        acc.den *= c * norm_at_roots(E.u, st.u_next);
    }
}

/// Miller function of (D2, m) evaluated at E, with the class T = m D2 it
/// leaves behind: div f = m (D2) - (T) in reduced-divisor terms.
template <class M>
struct MillerResult {
    Fraction<M> f;
    Divisor<M> T;
};

/// Double-and-add Miller loop; nullopt on a support collision.
template <class M>
std::optional<MillerResult<M>> miller_loop(const Curve<M>& C, const Divisor<M>& D2, const Integer& m,
                                           const Divisor<M>& E)
{
    if (m <= 0)
        throw PairingError("Miller loop needs m > 0");
    const auto& F = C.field();
    MillerResult<M> out{{F.one(), F.one()}, D2};
    Fraction<M>& f = out.f;
    CantorTrace<M> tr;
    const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    for (std::size_t i = bits - 1; i-- > 0;) {
        f.num *= f.num;
        f.den *= f.den;
        out.T = C.add(out.T, out.T, &tr);
        accumulate_trace(tr, E, f);
        if (mpz_tstbit(m.get_mpz_t(), i)) {
            out.T = C.add(out.T, D2, &tr);
            accumulate_trace(tr, E, f);
        }
        if (f.collided())
            return std::nullopt;
    }
    if (f.collided())
        return std::nullopt;
    return out;
}

/// f_{m,D2}(E) where div f_{m,D2} = m D2 (so m D2 must vanish in J).
/// Returns nullopt on a support collision.
template <class M>
std::optional<Fraction<M>> miller_fraction(const Curve<M>& C, const Divisor<M>& D2, const Integer& m,
                                           const Divisor<M>& E)
{
    auto r = miller_loop(C, D2, m, E);
    if (r && !r->T.is_identity())
        throw PairingError("divisor order does not divide " + to_string(m));
    if (!r) {
        if (!C.mul(D2, m).is_identity())
            throw PairingError("divisor order does not divide " + to_string(m));
        return std::nullopt;
    }
    return r->f;
}

/// f_{m,D2}(E); throws PairingError on a support collision.
template <class M>
FieldElem<M> miller_function_eval(const Curve<M>& C, const Divisor<M>& D2, const Integer& m, const Divisor<M>& E)
{
    auto f = miller_fraction(C, D2, m, E);
    if (!f)
        throw PairingError("evaluation divisor meets the Miller function support");
    return f->value();
}

/// Reduced Tate pairing T_m(D1, D2) = f_{m,D2}(D1)^{(Q-1)/m}, Q the size of
/// the curve's field. D2 must be m-torsion and m | Q - 1.
template <class M>
FieldElem<M> tate_reduced(const Curve<M>& C, const Divisor<M>& D1, const Divisor<M>& D2, const Integer& m, Rng& rng)
{
    const auto& F = C.field();
    const Integer qm1 = F.order() - 1;
    if (!mpz_divisible_p(qm1.get_mpz_t(), m.get_mpz_t()))
        throw PairingError("m does not divide q - 1");
    const Integer e = qm1 / m;
    if (D1.is_identity() || D2.is_identity()) {
        if (!C.mul(D2, m).is_identity())
            throw PairingError("divisor order does not divide " + to_string(m));
        return F.one();
    }
    if (auto f = miller_fraction(C, D2, m, D1))
        return f->value().pow(e);
    for (int attempt = 0; attempt < kPairingRetries; ++attempt) {
        const Divisor<M> R = C.random_divisor(rng);
        const Divisor<M> S = C.add(D1, R);
        auto a = miller_fraction(C, D2, m, S);
        if (!a)
            continue;
        auto b = miller_fraction(C, D2, m, R);
        if (!b)
            continue;
        return (a->num * b->den / (a->den * b->num)).pow(e);
    }
    throw PairingError("Tate pairing: support collision persisted after re-randomisation");
}

namespace detail {

/// The element of {w, -w} lying in mu_m (m odd).
template <class M>
FieldElem<M> project_mu(const FieldElem<M>& w, const Integer& m)
{
    if (w.pow(m).is_one())
        return w;
    const FieldElem<M> n = -w;
    if (n.pow(m).is_one())
        return n;
    throw PairingError("Weil pairing value is not an m-th root of unity up to sign");
}

template <class M>
std::optional<FieldElem<M>> weil_direct(const Curve<M>& C, const Divisor<M>& P, const Divisor<M>& Q, const Integer& m)
{
    auto a = miller_fraction(C, P, m, Q);
    if (!a)
        return std::nullopt;
    auto b = miller_fraction(C, Q, m, P);
    if (!b)
        return std::nullopt;
    return project_mu(a->num * b->den / (a->den * b->num), m);
}

} // namespace detail

namespace detail {

/// Direct evaluation, then re-randomisation within the span of P and Q.
template <class M>
std::optional<FieldElem<M>> weil_span(const Curve<M>& C, const Divisor<M>& P, const Divisor<M>& Q, const Integer& m,
                                      Rng& rng)
{
    if (P.is_identity() || Q.is_identity() || P == Q)
        return C.field().one();
    if (auto w = weil_direct(C, P, Q, m))
        return w;
    // W(aP + bQ, cP + dQ) = W(P, Q)^{ad - bc}
    for (int attempt = 0; attempt < kPairingRetries; ++attempt) {
        const Integer a = rng.below(m), b = rng.below(m), c = rng.below(m), d = rng.below(m);
        const Integer det = mod(a * d - b * c, m);
        auto inv = invmod(det, m);
        if (!inv)
            continue;
        const Divisor<M> P2 = C.add(C.mul(P, a), C.mul(Q, b));
        const Divisor<M> Q2 = C.add(C.mul(P, c), C.mul(Q, d));
        if (P2.is_identity() || Q2.is_identity() || P2 == Q2)
            continue;
        if (auto w = weil_direct(C, P2, Q2, m))
            return w->pow(*inv);
    }
    return std::nullopt;
}

} // namespace detail

/// Weil pairing W_m(P, Q) = +-f_{m,P}(Q) / f_{m,Q}(P), the sign fixed by
/// requiring the value to lie in mu_m (m odd). W(P, P) = 1.
///
/// Over very small fields every divisor in the span of P and Q may meet a
/// Miller support; `helpers` (m-torsion points) then allow the detour
/// W(P, Q) = W(P, Q + X) / W(P, X).
template <class M>
FieldElem<M> weil(const Curve<M>& C, const Divisor<M>& P, const Divisor<M>& Q, const Integer& m, Rng& rng,
                  const std::vector<Divisor<M>>* helpers = nullptr)
{
    if (mpz_even_p(m.get_mpz_t()))
        throw PairingError("Weil pairing is implemented for odd m");
    const auto& F = C.field();
    if (!C.mul(P, m).is_identity() || !C.mul(Q, m).is_identity())
        throw PairingError("Weil pairing arguments must be m-torsion");
    if (auto w = detail::weil_span(C, P, Q, m, rng))
        return *w;
    if (helpers)
        for (const auto& X : *helpers) {
            if (X.is_identity() || !C.mul(X, m).is_identity())
                continue;
            auto a = detail::weil_span(C, P, C.add(Q, X), m, rng);
            if (!a)
                continue;
            auto b = detail::weil_span(C, P, X, m, rng);
            if (b)
                return *a / *b;
        }
    // collisions persist when Q lies in <P>; then the pairing is trivial
    if (m.fits_ulong_p() && m < 1000000) {
        Divisor<M> acc = C.identity();
        for (unsigned long k = 0; k < m.get_ui(); ++k) {
            if (acc == Q)
                return F.one();
            acc = C.add(acc, P);
        }
    }
    throw PairingError("Weil pairing: support collision persisted after re-randomisation");
}

} // namespace g2pair
