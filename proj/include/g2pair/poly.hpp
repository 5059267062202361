#pragma once

// Univariate polynomials over a field context F_{p^r}.

#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "field.hpp"

namespace g2pair {

template <class M>
class Poly {
public:
    using Elem = FieldElem<M>;
    using Field = ExtField<M>;

    Poly() = default;
    explicit Poly(const Field* field) : field_(field) {}
    Poly(const Field* field, std::vector<Elem> coeffs) : field_(field), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const Elem& c) { return Poly(c.field_ptr(), {c}); }
    static Poly monomial(const Field* field, const Elem& c, std::size_t k)
    {
        std::vector<Elem> v(k + 1, field->zero());
        v[k] = c;
        return Poly(field, std::move(v));
    }
    /// x + c
    static Poly linear(const Field* field, const Elem& c) { return Poly(field, {c, field->one()}); }

    const Field* field_ptr() const { return field_; }
    const Field& field() const
    {
        if (field_ == nullptr)
            throw FieldError("polynomial without field context");
        return *field_;
    }

    /// Degree, with deg 0 = -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    const std::vector<Elem>& coeffs() const { return c_; }
    Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field().zero(); }
    Elem leading() const { return c_.empty() ? field().zero() : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    friend bool operator==(const Poly& a, const Poly& b)
    {
        if (a.c_.size() != b.c_.size())
            return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i] != b.c_[i])
                return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly& operator+=(const Poly& o)
    {
        adopt(o);
        if (c_.size() < o.c_.size())
            c_.resize(o.c_.size(), field().zero());
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        adopt(o);
        if (c_.size() < o.c_.size())
            c_.resize(o.c_.size(), field().zero());
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    Poly operator-() const
    {
        Poly r = *this;
        for (auto& x : r.c_)
            x = -x;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        const Field* f = a.field_ ? a.field_ : b.field_;
        if (a.is_zero() || b.is_zero())
            return Poly(f);
        std::vector<Elem> out(a.c_.size() + b.c_.size() - 1, f->zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(f, std::move(out));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const Elem& s) const
    {
        Poly r = *this;
        for (auto& x : r.c_)
            x *= s;
        r.trim();
        return r;
    }

    Poly monic() const
    {
        if (is_zero())
            return *this;
        return scaled(leading().inverse());
    }

    /// Quotient and remainder; b nonzero.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b)
    {
        if (b.is_zero())
            throw FieldError("polynomial division by zero");
        const Field* f = b.field_;
        if (a.degree() < b.degree())
            return {Poly(f), a};
        std::vector<Elem> r = a.c_;
        const std::size_t db = b.c_.size() - 1;
        std::vector<Elem> q(r.size() - db, f->zero());
        const Elem inv = b.c_.back().is_one() ? f->one() : b.c_.back().inverse();
        for (std::size_t k = r.size(); k-- > db;) {
            if (r[k].is_zero())
                continue;
            const Elem c = r[k] * inv;
            q[k - db] = c;
            for (std::size_t j = 0; j <= db; ++j)
                r[k - db + j] -= c * b.c_[j];
        }
        r.resize(db, f->zero());
        return {Poly(f, std::move(q)), Poly(f, std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    /// Exact division; throws if the remainder is nonzero.
    Poly exact_div(const Poly& b) const
    {
        auto [q, r] = divmod(*this, b);
        if (!r.is_zero())
            throw FieldError("inexact polynomial division");
        return q;
    }

    Elem operator()(const Elem& x) const
    {
        Elem acc = field().zero();
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const
    {
        if (c_.size() <= 1)
            return Poly(field_);
        std::vector<Elem> out;
        out.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            out.push_back(c_[i] * field().from_integer(Integer(static_cast<unsigned long>(i))));
        return Poly(field_, std::move(out));
    }

    /// Applies x -> x^{p^i} to every coefficient.
    Poly frobenius(long i = 1) const
    {
        Poly r = *this;
        for (auto& x : r.c_)
            x = x.frobenius(i);
        return r;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }
    void adopt(const Poly& o)
    {
        if (field_ == nullptr)
            field_ = o.field_;
    }

    const Field* field_ = nullptr;
    std::vector<Elem> c_;
};

/// Monic gcd.
template <class M>
Poly<M> gcd(Poly<M> a, Poly<M> b)
{
    while (!b.is_zero()) {
        Poly<M> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// (g, s, t) with g = s a + t b and g monic (or zero when both inputs are zero).
template <class M>
std::tuple<Poly<M>, Poly<M>, Poly<M>> xgcd(const Poly<M>& a, const Poly<M>& b)
{
    const auto* f = a.field_ptr() ? a.field_ptr() : b.field_ptr();
    Poly<M> r0 = a, r1 = b;
    Poly<M> s0 = Poly<M>::constant(f->one()), s1(f);
    Poly<M> t0(f), t1 = Poly<M>::constant(f->one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        Poly<M> s = s0 - q * s1;
        Poly<M> t = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        t0 = std::move(t1);
        t1 = std::move(t);
    }
    if (r0.is_zero())
        return {r0, s0, t0};
    const auto inv = r0.leading().inverse();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

/// base^e mod modulus.
template <class M>
Poly<M> powmod(const Poly<M>& base, const Integer& e, const Poly<M>& modulus)
{
    Poly<M> r = Poly<M>::constant(modulus.field().one()) % modulus;
    Poly<M> b = base % modulus;
    const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = (r * r) % modulus;
        if (mpz_tstbit(e.get_mpz_t(), i))
            r = (r * b) % modulus;
    }
    return r;
}

/// prod over roots alpha of u of w(alpha), for u monic. Returns the
/// resultant Res(u, w) without ever leaving the coefficient field.
template <class M>
FieldElem<M> norm_at_roots(const Poly<M>& u, const Poly<M>& w)
{
    const auto& F = u.field();
    switch (u.degree()) {
    case 0:
        return F.one();
    case 1: {
        // u = x + b, root -b
        return w(-u.coeff(0));
    }
    case 2: {
        const Poly<M> r = w.degree() >= 2 ? w % u : w;
        const auto c0 = r.coeff(0), c1 = r.coeff(1);
        const auto a = u.coeff(1), b = u.coeff(0);
        return c0 * c0 - a * c0 * c1 + b * c1 * c1;
    }
    default:
        throw FieldError("norm_at_roots supports deg u <= 2");
    }
}

/// All roots in the coefficient field of a nonzero polynomial (with
/// multiplicity ignored), by equal-degree splitting.
template <class M>
std::vector<FieldElem<M>> roots(const Poly<M>& g, Rng& rng)
{
    const auto* F = g.field_ptr();
    std::vector<FieldElem<M>> out;
    if (g.degree() <= 0)
        return out;
    const Poly<M> x = Poly<M>::monomial(F, F->one(), 1);
    // product of distinct linear factors
    Poly<M> lin = gcd(g, powmod(x, F->order(), g) - x);
    std::vector<Poly<M>> stack{lin};
    const Integer half = (F->order() - 1) / 2;
    while (!stack.empty()) {
        Poly<M> h = std::move(stack.back());
        stack.pop_back();
        if (h.degree() <= 0)
            continue;
        if (h.degree() == 1) {
            out.push_back(-h.monic().coeff(0));
            continue;
        }
        for (;;) {
            const Poly<M> probe = Poly<M>::linear(F, F->random(rng));
            Poly<M> s = gcd(h, powmod(probe, half, h) - Poly<M>::constant(F->one()));
            if (s.degree() > 0 && s.degree() < h.degree()) {
                stack.push_back(h / s);
                stack.push_back(s);
                break;
            }
        }
    }
    return out;
}

} // namespace g2pair
