#pragma once

// Genus-2 curves y^2 + h(x) y = f(x) with f monic of degree 5, and their
// Jacobians in Mumford representation.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace g2pair {

class CurveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduced divisor class (u, v); identity is (1, 0).
template <class M>
struct Divisor {
    Poly<M> u;
    Poly<M> v;

    bool is_identity() const { return u.degree() == 0; }
    friend bool operator==(const Divisor& a, const Divisor& b) { return a.u == b.u && a.v == b.v; }
    friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }
    /// Lexicographic order on coefficient vectors, for use as a map key.
    friend bool operator<(const Divisor& a, const Divisor& b) { return a.key() < b.key(); }

    std::vector<std::vector<typename M::value_type>> key() const
    {
        std::vector<std::vector<typename M::value_type>> k;
        k.reserve(u.coeffs().size() + v.coeffs().size() + 1);
        for (const auto& c : u.coeffs())
            k.push_back(c.coeffs());
        k.emplace_back(); // separator
        for (const auto& c : v.coeffs())
            k.push_back(c.coeffs());
        return k;
    }
};

/// Functions produced by one Cantor addition:
///   g = d(x) * prod_k (y - v_k(x)) / (c_k u_k(x)),
/// with div(g) = D1 + D2 - (D1 + D2)_reduced. Every factor is normalised at
/// infinity (u_k monic, c_k chosen so the leading term is 1).
template <class M>
struct CantorTrace {
    struct Step {
        Poly<M> v;
        Poly<M> u_next;
        FieldElem<M> c;
    };
    Poly<M> d;
    std::vector<Step> steps;
};

/// Zeta data of a genus-2 Jacobian over F_q:
///   P(x) = x^4 - s1 x^3 + s2 x^2 - q s1 x + q^2.
struct ZetaData {
    Integer q;
    Integer s1;
    Integer s2;

    /// Coefficients of P, constant term first.
    std::vector<Integer> char_poly() const { return {q * q, -q * s1, s2, -s1, 1}; }

    void validate() const
    {
        if (q < 2)
            throw CurveError("zeta: q must be at least 2");
        // |s1| <= 4 sqrt(q), |s2| <= 6q
        if (s1 * s1 > 16 * q)
            throw CurveError("zeta: s1 violates the Weil bound");
        if (abs(s2) > 6 * q)
            throw CurveError("zeta: s2 violates the Weil bound");
        if (evaluate(1) <= 0)
            throw CurveError("zeta: P(1) must be positive");
    }

    Integer evaluate(const Integer& x) const
    {
        const auto c = char_poly();
        Integer acc = 0;
        for (std::size_t i = c.size(); i-- > 0;)
            acc = acc * x + c[i];
        return acc;
    }

    /// Zeta data of J over F_{q^r} (characteristic polynomial of pi^r).
    ZetaData power(unsigned long r) const
    {
        if (r == 0)
            throw CurveError("zeta power: r must be positive");
        // power sums of the roots via Newton's identities
        // elementary symmetric e1..e4 of roots: P = x^4 - e1 x^3 + e2 x^2 - e3 x + e4
        const Integer e[5] = {1, s1, s2, q * s1, q * q};
        const std::size_t need = 4 * r + 1;
        std::vector<Integer> p(need + 1, 0);
        for (std::size_t k = 1; k <= need; ++k) {
            Integer acc = 0;
            for (std::size_t i = 1; i <= std::min<std::size_t>(k - 1, 4); ++i) {
                const Integer term = e[i] * p[k - i];
                acc += (i % 2 == 1) ? term : Integer(-term);
            }
            if (k <= 4)
                acc += ((k % 2 == 1) ? 1 : -1) * Integer(static_cast<unsigned long>(k)) * e[k];
            p[k] = acc;
        }
        // power sums of roots^r, then elementary symmetric functions
        Integer t[5];
        for (std::size_t j = 1; j <= 4; ++j)
            t[j] = p[j * r];
        Integer E[5];
        E[0] = 1;
        for (std::size_t k = 1; k <= 4; ++k) {
            Integer acc = 0;
            for (std::size_t i = 1; i <= k; ++i) {
                const Integer term = E[k - i] * t[i];
                acc += (i % 2 == 1) ? term : Integer(-term);
            }
            E[k] = acc / Integer(static_cast<unsigned long>(k));
        }
        ZetaData out{ipow(q, r), E[1], E[2]};
        return out;
    }

    /// #J(F_{q^r}) = P_r(1).
    Integer group_order(unsigned long r = 1) const { return r == 1 ? evaluate(1) : power(r).evaluate(1); }

    /// Number of points of the curve over F_{q^r}.
    Integer curve_points(unsigned long r = 1) const { return ipow(q, r) + 1 - power(r).s1; }
};

inline Integer order_from_zeta(const ZetaData& zeta, unsigned long r) { return zeta.group_order(r); }

namespace detail {

/// Arithmetic in F[x]/(u) for irreducible quadratic u; used for square roots
/// when sampling divisors.
template <class M>
struct QuadElem {
    const Poly<M>* u = nullptr;
    FieldElem<M> c0, c1;

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    friend bool operator==(const QuadElem& a, const QuadElem& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
    friend QuadElem operator*(const QuadElem& a, const QuadElem& b)
    {
        // x^2 = -u1 x - u0
        const auto hi = a.c1 * b.c1;
        return {a.u, a.c0 * b.c0 - hi * a.u->coeff(0), a.c0 * b.c1 + a.c1 * b.c0 - hi * a.u->coeff(1)};
    }
    QuadElem pow(const Integer& e) const
    {
        QuadElem r{u, c0.field().one(), c0.field().zero()};
        const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = r * r;
            if (mpz_tstbit(e.get_mpz_t(), i))
                r = r * *this;
        }
        return r;
    }
};

} // namespace detail

template <class M>
class Curve {
public:
    using Elem = FieldElem<M>;
    using Field = ExtField<M>;
    using Div = Divisor<M>;
    using PolyT = Poly<M>;

    /// h and f given as polynomials over `field`; f monic of degree 5, deg h <= 2.
    /// frob_step is the exponent i with the curve defined over F_{p^i}
    /// (the Frobenius of the ground field is x -> x^{p^i}).
    Curve(std::shared_ptr<const Field> field, PolyT h, PolyT f, long frob_step = 1)
        : field_(std::move(field)), h_(std::move(h)), f_(std::move(f)), frob_step_(frob_step)
    {
        validate();
    }

    /// Curve over the given field from integer coefficient lists (constant first).
    static Curve from_integers(std::shared_ptr<const Field> field, const std::vector<Integer>& h,
                               const std::vector<Integer>& f, long frob_step = 1)
    {
        const Field* F = field.get();
        return Curve(field, lift(F, h), lift(F, f), frob_step);
    }

    static PolyT lift(const Field* F, const std::vector<Integer>& c)
    {
        std::vector<Elem> e;
        e.reserve(c.size());
        for (const auto& x : c)
            e.push_back(F->from_integer(x));
        return PolyT(F, std::move(e));
    }

    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_handle() const { return field_; }
    const PolyT& h() const { return h_; }
    const PolyT& f() const { return f_; }
    long frob_step() const { return frob_step_; }

    /// 4f + h^2, so that (2y + h)^2 = 4f + h^2.
    PolyT discriminant_poly() const
    {
        const Elem four = field_->from_integer(4);
        return f_.scaled(four) + h_ * h_;
    }

    Div identity() const { return {PolyT::constant(field_->one()), PolyT(field_.get())}; }

    bool is_valid(const Div& D) const
    {
        if (!D.u.is_monic() || D.v.degree() >= D.u.degree() || D.u.degree() > 2)
            return false;
        return ((D.v * D.v + h_ * D.v - f_) % D.u).is_zero();
    }

    Div neg(const Div& D) const
    {
        if (D.is_identity())
            return D;
        return {D.u, (-D.v - h_) % D.u};
    }

    /// Divisor of a single affine point (x0, y0) on the curve.
    Div point(const Elem& x0, const Elem& y0) const
    {
        if (!(y0 * y0 + h_(x0) * y0 == f_(x0)))
            throw CurveError("point is not on the curve");
        return {PolyT::linear(field_.get(), -x0), PolyT::constant(y0)};
    }

    /// Cantor composition and reduction. When trace is non-null it receives
    /// the normalised functions witnessing the reduction.
    Div add(const Div& D1, const Div& D2, CantorTrace<M>* trace = nullptr) const
    {
        const Field* F = field_.get();
        PolyT d, s1, s2, s3;
        auto [d0, e1, e2] = xgcd(D1.u, D2.u);
        if (d0.is_one()) {
            d = d0;
            s1 = e1;
            s2 = e2;
            s3 = PolyT(F);
        } else {
            auto [dd, c1, c2] = xgcd(d0, D1.v + D2.v + h_);
            d = dd;
            s1 = c1 * e1;
            s2 = c1 * e2;
            s3 = c2;
        }
        PolyT u = (D1.u * D2.u).exact_div(d * d);
        PolyT v;
        if (u.degree() > 0) {
            PolyT num = s1 * D1.u * D2.v + s2 * D2.u * D1.v;
            if (!s3.is_zero())
                num += s3 * (D1.v * D2.v + f_);
            v = num.exact_div(d) % u;
        } else {
            v = PolyT(F);
        }
        if (trace) {
            trace->d = d;
            trace->steps.clear();
        }
        while (u.degree() > 2) {
            PolyT un = (f_ - v * h_ - v * v).exact_div(u);
            un = un.monic();
            if (trace) {
                Elem c = v.degree() >= 3 ? -v.leading() : F->one();
                trace->steps.push_back({v, un, c});
            }
            v = (-h_ - v) % un;
            u = std::move(un);
        }
        if (u.degree() == 0)
            return identity();
        return {u, v};
    }

    Div dbl(const Div& D, CantorTrace<M>* trace = nullptr) const { return add(D, D, trace); }

    Div sub(const Div& a, const Div& b) const { return add(a, neg(b)); }

    /// k * D for any integer k.
    Div mul(const Div& D, const Integer& k) const
    {
        if (k < 0)
            return mul(neg(D), -k);
        Div r = identity();
        const std::size_t bits = k == 0 ? 0 : mpz_sizeinbase(k.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = dbl(r);
            if (mpz_tstbit(k.get_mpz_t(), i))
                r = add(r, D);
        }
        return r;
    }

    /// Ground-field Frobenius applied to the coefficients of u and v.
    Div frobenius(const Div& D, long times = 1) const
    {
        return {D.u.frobenius(frob_step_ * times), D.v.frobenius(frob_step_ * times)};
    }

    /// A random divisor class. Mostly degree-2 classes with u uniform among
    /// monic quadratics admitting a lift; occasionally a single point.
    Div random_divisor(Rng& rng) const
    {
        const Field* F = field_.get();
        const PolyT disc = discriminant_poly();
        const Elem two_inv = F->from_integer(2).inverse();
        for (;;) {
            if (rng.below(F->order() + 1) == 0) {
                const Elem x0 = F->random(rng);
                auto s = disc(x0).sqrt();
                if (!s)
                    continue;
                Elem sy = rng.below(std::uint64_t(2)) ? *s : -*s;
                return point(x0, (sy - h_(x0)) * two_inv);
            }
            const PolyT u(F, {F->random(rng), F->random(rng), F->one()});
            const Elem a = u.coeff(1), b = u.coeff(0);
            const Elem delta = a * a - F->from_integer(4) * b;
            if (delta.is_zero())
                continue;
            if (delta.is_square()) {
                const Elem r = *delta.sqrt();
                const Elem x1 = (-a + r) * two_inv, x2 = (-a - r) * two_inv;
                auto s1 = disc(x1).sqrt();
                auto s2 = disc(x2).sqrt();
                if (!s1 || !s2)
                    continue;
                const Elem y1 = ((rng.below(std::uint64_t(2)) ? *s1 : -*s1) - h_(x1)) * two_inv;
                const Elem y2 = ((rng.below(std::uint64_t(2)) ? *s2 : -*s2) - h_(x2)) * two_inv;
                // interpolate v through (x1, y1), (x2, y2)
                const Elem slope = (y1 - y2) / (x1 - x2);
                const PolyT v(F, {y1 - slope * x1, slope});
                return {u, v};
            }
            // u irreducible: square root of disc mod u in F_{q^2}
            detail::QuadElem<M> w{&u, disc.coeff(0), F->zero()};
            {
                const PolyT rr = disc % u;
                w.c0 = rr.coeff(0);
                w.c1 = rr.coeff(1);
            }
            const Integer ord = F->order() * F->order() - 1;
            if (!w.pow(ord / 2).c0.is_one() || !w.pow(ord / 2).c1.is_zero())
                continue;
            auto s = quad_sqrt(w, ord, rng);
            const PolyT sp(F, {s.c0, s.c1});
            PolyT v = ((rng.below(std::uint64_t(2)) ? sp : -sp) - h_).scaled(two_inv) % u;
            return {u, v};
        }
    }

    /// Nonsingularity test; throws CurveError.
    void validate() const
    {
        if (h_.degree() > 2)
            throw CurveError("deg h must be at most 2");
        if (f_.degree() != 5)
            throw CurveError("f must have degree 5 (use normalize_model for other inputs)");
        if (!f_.is_monic())
            throw CurveError("f must be monic");
        const PolyT disc = discriminant_poly();
        if (gcd(disc, disc.derivative()).degree() > 0)
            throw CurveError("curve is singular");
    }

private:
    detail::QuadElem<M> quad_sqrt(const detail::QuadElem<M>& a, const Integer& ord, Rng& rng) const
    {
        const Field* F = field_.get();
        detail::QuadElem<M> one{a.u, F->one(), F->zero()};
        detail::QuadElem<M> nr = one;
        for (;;) {
            nr = {a.u, F->random(rng), F->random(rng)};
            if (nr.is_zero())
                continue;
            auto t = nr.pow(ord / 2);
            if (!(t == one))
                break;
        }
        auto s = tonelli_shanks(a, one, ord, nr);
        if (!s)
            throw CurveError("internal: square root in quadratic algebra failed");
        return *s;
    }

    std::shared_ptr<const Field> field_;
    PolyT h_;
    PolyT f_;
    long frob_step_ = 1;
};

/// Result of bringing a user model y^2 + h y = f over F_p into the monic
/// degree-5 form required by the arithmetic, via an F_p-isomorphism.
struct ModelTransform {
    std::vector<Integer> h;
    std::vector<Integer> f;
    std::vector<std::string> steps;
};

/// Accepts deg f in {5, 6} (any leading coefficient) and deg h <= 2 (or
/// deg h = 3 for the sextic case before completing the square). Sextic
/// models need an F_p-rational Weierstrass point.
ModelTransform normalize_model(const Integer& p, std::vector<Integer> h, std::vector<Integer> f);

namespace detail {

inline void trim_integers(std::vector<Integer>& v, const Integer& p)
{
    for (auto& x : v)
        x = mod(x, p);
    while (!v.empty() && v.back() == 0)
        v.pop_back();
}

} // namespace detail

inline ModelTransform normalize_model(const Integer& p, std::vector<Integer> h, std::vector<Integer> f)
{
    ModelTransform out;
    detail::trim_integers(h, p);
    detail::trim_integers(f, p);
    auto deg = [](const std::vector<Integer>& v) { return static_cast<int>(v.size()) - 1; };
    if (deg(h) > 3)
        throw CurveError("deg h too large");
    if (deg(f) < 5 && !(deg(h) == 3))
        throw CurveError("f must have degree 5 or 6");

    const bool monic_quintic = deg(f) == 5 && f[5] == 1 && deg(h) <= 2;
    if (!monic_quintic && deg(h) >= 0) {
        // (x, y) -> (x, 2y + h): Y^2 = 4f + h^2
        std::vector<Integer> F(std::max(f.size(), 2 * h.size()), 0);
        for (std::size_t i = 0; i < f.size(); ++i)
            F[i] += 4 * f[i];
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = 0; j < h.size(); ++j)
                F[i + j] += h[i] * h[j];
        detail::trim_integers(F, p);
        f = F;
        h.clear();
        out.steps.push_back("y -> 2y + h(x)");
    }
    if (deg(f) == 6) {
        // move a rational root a of f to infinity: x = a + 1/X, y = Y/X^3
        std::optional<Integer> root;
        if (p.fits_ulong_p() && p < 1000000) {
            for (unsigned long a = 0; a < p.get_ui() && !root; ++a) {
                Integer acc = 0;
                for (std::size_t i = f.size(); i-- > 0;)
                    acc = mod(acc * a + f[i], p);
                if (acc == 0)
                    root = Integer(a);
            }
        } else {
            auto field = make_extension<BigModulus>(p, 1);
            Rng rng(0x5eed);
            std::vector<FieldElem<BigModulus>> fe;
            for (const auto& c : f)
                fe.push_back(field->from_integer(c));
            auto rts = roots(Poly<BigModulus>(field.get(), fe), rng);
            if (!rts.empty()) {
                Integer best = rts[0].to_prime_field_integer();
                for (const auto& r : rts)
                    best = std::min(best, Integer(r.to_prime_field_integer()));
                root = best;
            }
        }
        if (!root)
            throw CurveError("sextic model has no rational Weierstrass point");
        // G(X) = X^6 f(a + 1/X) = sum_i f_i (aX + 1)^i X^{6-i}
        std::vector<Integer> G(7, 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            // (aX + 1)^i = sum_k C(i,k) a^k X^k
            Integer binom = 1;
            for (std::size_t k = 0; k <= i; ++k) {
                G[k + 6 - i] += f[i] * binom * ipow(*root, static_cast<unsigned long>(k));
                binom = binom * Integer(static_cast<unsigned long>(i - k)) / Integer(static_cast<unsigned long>(k + 1));
            }
        }
        detail::trim_integers(G, p);
        f = G;
        out.steps.push_back("x -> " + to_string(*root) + " + 1/x, y -> y/x^3");
    }
    if (deg(f) != 5)
        throw CurveError("model reduction did not produce a quintic");
    const Integer c = f[5];
    if (c != 1) {
        // x = X/c, y = Y/c^2
        // coefficient of X^i becomes f_i c^{4-i}
        std::vector<Integer> g(6);
        for (std::size_t i = 0; i < 5; ++i)
            g[i] = mod(f[i] * ipow(c, static_cast<unsigned long>(4 - i)), p);
        g[5] = 1;
        std::vector<Integer> hh(h.size());
        for (std::size_t i = 0; i < h.size(); ++i)
            hh[i] = mod(h[i] * ipow(c, static_cast<unsigned long>(2 - i)), p);
        f = g;
        h = hh;
        out.steps.push_back("x -> x/" + to_string(c) + ", y -> y/" + to_string(c) + "^2");
    }
    detail::trim_integers(h, p);
    out.h = h;
    out.f = f;
    return out;
}

} // namespace g2pair
