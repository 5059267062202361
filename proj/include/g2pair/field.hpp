#pragma once

// Prime fields and flat extensions F_p[t]/(m(t)).
//
// Residues are handled by a backend policy. SmallModulus keeps residues in
// 64-bit words (p < 2^62) and defers reductions during dot products;
// BigModulus uses GMP integers for arbitrary p. Everything above the field
// layer is templated on the backend.

#include <algorithm>
#include <cassert>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "integer.hpp"

namespace g2pair {

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SmallModulus {
public:
    using value_type = std::uint64_t;

    explicit SmallModulus(const Integer& p) : p_big_(p)
    {
        if (p <= 2 || !p.fits_ulong_p() || p >= (Integer(1) << 62))
            throw FieldError("SmallModulus requires an odd prime below 2^62");
        if (!is_probable_prime(p))
            throw FieldError("modulus " + to_string(p) + " is not prime");
        p_ = p.get_ui();
        fold_ = p_ < (std::uint64_t(1) << 32) ? INT_MAX : 8;
    }

    static bool fits(const Integer& p) { return p > 2 && p < (Integer(1) << 62); }

    const Integer& characteristic() const { return p_big_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(value_type a) const { return a == 0; }

    value_type add(value_type a, value_type b) const
    {
        value_type s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p_ - b); }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type mul(value_type a, value_type b) const
    {
        return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    value_type inv(value_type a) const
    {
        if (a == 0)
            throw FieldError("inverse of zero");
        __int128 t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            __int128 q = r / nr;
            std::swap(t, nt);
            nt -= q * t;
            std::swap(r, nr);
            nr -= q * r;
        }
        if (t < 0)
            t += p_;
        return static_cast<value_type>(t);
    }

    value_type from_integer(const Integer& x) const { return mod(x, p_big_).get_ui(); }
    value_type from_u64(std::uint64_t x) const { return x % p_; }
    Integer to_integer(value_type a) const { return Integer(static_cast<unsigned long>(a)); }

    /// out[k] = sum_{i+j=k} a[i] b[j]; out has a.size()+b.size()-1 slots.
    void convolve(std::span<const value_type> a, std::span<const value_type> b, std::span<value_type> out) const
    {
        const std::size_t na = a.size(), nb = b.size();
        for (std::size_t k = 0; k + 1 < na + nb; ++k) {
            const std::size_t lo = k >= nb - 1 ? k - (nb - 1) : 0;
            const std::size_t hi = std::min(k, na - 1);
            unsigned __int128 acc = 0;
            int count = 0;
            for (std::size_t i = lo; i <= hi; ++i) {
                acc += static_cast<unsigned __int128>(a[i]) * b[k - i];
                if (++count == fold_) {
                    acc %= p_;
                    count = 0;
                }
            }
            out[k] = static_cast<value_type>(acc % p_);
        }
    }

    /// sum_i a[i] * rows[i][col] + init, reduced.
    value_type dot_column(std::span<const value_type> a, const std::vector<std::vector<value_type>>& rows,
                          std::size_t col, value_type init) const
    {
        unsigned __int128 acc = init;
        int count = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            acc += static_cast<unsigned __int128>(a[i]) * rows[i][col];
            if (++count == fold_) {
                acc %= p_;
                count = 0;
            }
        }
        return static_cast<value_type>(acc % p_);
    }

private:
    Integer p_big_;
    std::uint64_t p_ = 0;
    int fold_ = 8;
};

class BigModulus {
public:
    using value_type = Integer;

    explicit BigModulus(const Integer& p) : p_(p)
    {
        if (p <= 2)
            throw FieldError("modulus must be an odd prime");
        if (!is_probable_prime(p))
            throw FieldError("modulus " + to_string(p) + " is not prime");
    }

    const Integer& characteristic() const { return p_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& a) const { return a == 0; }

    value_type add(const value_type& a, const value_type& b) const
    {
        value_type s = a + b;
        if (s >= p_)
            s -= p_;
        return s;
    }
    value_type sub(const value_type& a, const value_type& b) const
    {
        value_type s = a - b;
        if (s < 0)
            s += p_;
        return s;
    }
    value_type neg(const value_type& a) const { return a == 0 ? value_type(0) : value_type(p_ - a); }
    value_type mul(const value_type& a, const value_type& b) const { return mod(a * b, p_); }
    value_type inv(const value_type& a) const
    {
        auto r = invmod(a, p_);
        if (!r)
            throw FieldError("inverse of zero");
        return *r;
    }

    value_type from_integer(const Integer& x) const { return mod(x, p_); }
    value_type from_u64(std::uint64_t x) const { return mod(Integer(static_cast<unsigned long>(x)), p_); }
    Integer to_integer(const value_type& a) const { return a; }

    void convolve(std::span<const value_type> a, std::span<const value_type> b, std::span<value_type> out) const
    {
        const std::size_t na = a.size(), nb = b.size();
        Integer acc;
        for (std::size_t k = 0; k + 1 < na + nb; ++k) {
            const std::size_t lo = k >= nb - 1 ? k - (nb - 1) : 0;
            const std::size_t hi = std::min(k, na - 1);
            acc = 0;
            for (std::size_t i = lo; i <= hi; ++i)
                mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[k - i].get_mpz_t());
            out[k] = mod(acc, p_);
        }
    }

    value_type dot_column(std::span<const value_type> a, const std::vector<std::vector<value_type>>& rows,
                          std::size_t col, const value_type& init) const
    {
        Integer acc = init;
        for (std::size_t i = 0; i < a.size(); ++i)
            mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), rows[i][col].get_mpz_t());
        return mod(acc, p_);
    }

private:
    Integer p_;
};

namespace detail {

// Dense polynomials over F_p as little-endian residue vectors. Only used for
// modulus selection, irreducibility and inversion inside F_{p^r}.
template <class M>
struct FpPoly {
    using V = typename M::value_type;
    using Vec = std::vector<V>;

    static void trim(const M& m, Vec& a)
    {
        while (!a.empty() && m.is_zero(a.back()))
            a.pop_back();
    }

    static Vec mul(const M& m, const Vec& a, const Vec& b)
    {
        if (a.empty() || b.empty())
            return {};
        Vec out(a.size() + b.size() - 1);
        m.convolve(a, b, out);
        trim(m, out);
        return out;
    }

    static Vec sub(const M& m, Vec a, const Vec& b)
    {
        if (a.size() < b.size())
            a.resize(b.size(), m.zero());
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i] = m.sub(a[i], b[i]);
        trim(m, a);
        return a;
    }

    /// Returns (quotient, remainder); divisor must be nonzero.
    static std::pair<Vec, Vec> divmod(const M& m, Vec a, const Vec& b)
    {
        if (b.empty())
            throw FieldError("polynomial division by zero");
        trim(m, a);
        if (a.size() < b.size())
            return {Vec{}, a};
        const V lead_inv = m.inv(b.back());
        Vec q(a.size() - b.size() + 1, m.zero());
        for (std::size_t k = a.size(); k-- >= b.size();) {
            const V c = m.mul(a[k], lead_inv);
            q[k - (b.size() - 1)] = c;
            if (!m.is_zero(c))
                for (std::size_t j = 0; j < b.size(); ++j)
                    a[k - (b.size() - 1) + j] = m.sub(a[k - (b.size() - 1) + j], m.mul(c, b[j]));
            if (k == 0)
                break;
        }
        a.resize(b.size() - 1);
        trim(m, a);
        trim(m, q);
        return {q, a};
    }

    static Vec rem(const M& m, const Vec& a, const Vec& b) { return divmod(m, a, b).second; }

    static Vec mulmod(const M& m, const Vec& a, const Vec& b, const Vec& f) { return rem(m, mul(m, a, b), f); }

    static Vec powmod(const M& m, Vec base, const Integer& e, const Vec& f)
    {
        Vec r{m.one()};
        r = rem(m, r, f);
        base = rem(m, base, f);
        const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = mulmod(m, r, r, f);
            if (mpz_tstbit(e.get_mpz_t(), i))
                r = mulmod(m, r, base, f);
        }
        return r;
    }

    static Vec monic(const M& m, Vec a)
    {
        if (a.empty())
            return a;
        const V inv = m.inv(a.back());
        for (auto& c : a)
            c = m.mul(c, inv);
        return a;
    }

    static Vec gcd(const M& m, Vec a, Vec b)
    {
        trim(m, a);
        trim(m, b);
        while (!b.empty()) {
            Vec r = rem(m, a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(m, a);
    }

    /// Inverse of a modulo f (gcd must be 1).
    static Vec invmod(const M& m, const Vec& a, const Vec& f)
    {
        Vec r0 = f, r1 = rem(m, a, f);
        Vec s0{}, s1{m.one()};
        while (!r1.empty()) {
            auto [q, r] = divmod(m, r0, r1);
            Vec s = sub(m, s0, mul(m, q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        if (r0.size() != 1)
            throw FieldError("element is not invertible modulo the field polynomial");
        const V c = m.inv(r0[0]);
        for (auto& x : s0)
            x = m.mul(x, c);
        return s0;
    }

    /// Rabin's test for a monic polynomial of degree r >= 1.
    static bool is_irreducible(const M& m, const Vec& f)
    {
        const std::size_t r = f.size() - 1;
        if (r == 1)
            return true;
        if (m.is_zero(f[0]))
            return false;
        const Integer& p = m.characteristic();
        const Vec x{m.zero(), m.one()};
        // x^{p^k} mod f for k = 1..r
        std::vector<Vec> frob_powers;
        frob_powers.reserve(r);
        Vec cur = x;
        for (std::size_t k = 1; k <= r; ++k) {
            cur = powmod(m, cur, p, f);
            frob_powers.push_back(cur);
        }
        if (sub(m, frob_powers[r - 1], x) != Vec{})
            return false;
        for (std::uint64_t s : prime_factors(r)) {
            const Vec g = gcd(m, f, sub(m, frob_powers[r / s - 1], x));
            if (g.size() != 1)
                return false;
        }
        return true;
    }
};

} // namespace detail

template <class M>
class FieldElem;

/// F_{p^r} = F_p[t]/(m(t)) with m monic irreducible. Immutable after construction.
template <class M>
class ExtField {
public:
    using Backend = M;
    using value_type = typename M::value_type;
    using Elem = FieldElem<M>;

    /// Constructs from an explicit monic modulus (little-endian, length r+1).
    ExtField(M base, std::vector<value_type> modulus) : base_(std::move(base)), modulus_(std::move(modulus))
    {
        detail::FpPoly<M>::trim(base_, modulus_);
        if (modulus_.size() < 2)
            throw FieldError("extension degree must be at least 1");
        if (modulus_.back() != base_.one())
            throw FieldError("field modulus must be monic");
        if (!detail::FpPoly<M>::is_irreducible(base_, modulus_))
            throw FieldError("field modulus is reducible");
        degree_ = static_cast<int>(modulus_.size() - 1);
        order_ = ipow(base_.characteristic(), static_cast<unsigned long>(degree_));
        precompute();
    }

    int degree() const { return degree_; }
    const M& base() const { return base_; }
    const Integer& characteristic() const { return base_.characteristic(); }
    /// Field size p^r.
    const Integer& order() const { return order_; }
    const std::vector<value_type>& modulus() const { return modulus_; }

    Elem zero() const { return Elem(this, std::vector<value_type>(degree_, base_.zero())); }
    Elem one() const { return from_integer(1); }
    Elem from_integer(const Integer& x) const
    {
        std::vector<value_type> c(degree_, base_.zero());
        c[0] = base_.from_integer(x);
        return Elem(this, std::move(c));
    }
    Elem from_coeffs(const std::vector<Integer>& coeffs) const
    {
        if (static_cast<int>(coeffs.size()) > degree_)
            throw FieldError("too many coefficients for field element");
        std::vector<value_type> c(degree_, base_.zero());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            c[i] = base_.from_integer(coeffs[i]);
        return Elem(this, std::move(c));
    }
    /// The class of t.
    Elem generator() const
    {
        if (degree_ == 1)
            return from_integer(mod(-Integer(base_.to_integer(modulus_[0])), characteristic()));
        std::vector<value_type> c(degree_, base_.zero());
        c[1] = base_.one();
        return Elem(this, std::move(c));
    }
    Elem random(Rng& rng) const
    {
        std::vector<value_type> c(degree_);
        for (auto& x : c)
            x = base_.from_integer(rng.below(characteristic()));
        return Elem(this, std::move(c));
    }
    /// Element whose coefficient vector is the base-p digit expansion of index.
    Elem from_index(Integer index) const
    {
        std::vector<value_type> c(degree_, base_.zero());
        for (int i = 0; i < degree_ && index > 0; ++i) {
            c[i] = base_.from_integer(mod(index, characteristic()));
            index /= characteristic();
        }
        return Elem(this, std::move(c));
    }

    /// Fixed quadratic non-residue used by square roots.
    const Elem& nonresidue() const { return *nonresidue_; }

    // Kernels used by FieldElem.
    void mul_into(const std::vector<value_type>& a, const std::vector<value_type>& b,
                  std::vector<value_type>& out) const
    {
        const std::size_t r = static_cast<std::size_t>(degree_);
        std::vector<value_type> prod(2 * r - 1);
        base_.convolve(a, b, prod);
        out.assign(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(r));
        if (r > 1) {
            std::span<const value_type> high(prod.data() + r, r - 1);
            for (std::size_t i = 0; i < r; ++i)
                out[i] = base_.dot_column(high, reduce_rows_, i, out[i]);
        }
    }
    std::vector<value_type> frobenius_coeffs(const std::vector<value_type>& a) const
    {
        if (degree_ == 1)
            return a;
        std::vector<value_type> out(degree_);
        for (int i = 0; i < degree_; ++i)
            out[i] = base_.dot_column(a, frob_rows_, static_cast<std::size_t>(i), base_.zero());
        return out;
    }
    std::vector<value_type> inverse_coeffs(const std::vector<value_type>& a) const
    {
        using P = detail::FpPoly<M>;
        std::vector<value_type> v = a;
        P::trim(base_, v);
        if (v.empty())
            throw FieldError("inverse of zero");
        std::vector<value_type> out = P::invmod(base_, v, modulus_);
        out.resize(degree_, base_.zero());
        return out;
    }

private:
    void precompute()
    {
        using P = detail::FpPoly<M>;
        const std::size_t r = static_cast<std::size_t>(degree_);
        // rows[k] = t^{r+k} mod m, k = 0..r-2
        reduce_rows_.clear();
        if (r > 1) {
            std::vector<value_type> cur(r, base_.zero());
            for (std::size_t i = 0; i < r; ++i)
                cur[i] = base_.neg(modulus_[i]);
            for (std::size_t k = 0; k + 1 < r; ++k) {
                reduce_rows_.push_back(cur);
                // multiply by t
                const value_type top = cur[r - 1];
                for (std::size_t i = r - 1; i > 0; --i)
                    cur[i] = base_.sub(cur[i - 1], base_.mul(top, modulus_[i]));
                cur[0] = base_.neg(base_.mul(top, modulus_[0]));
            }
            // rows[j] = (t^j)^p mod m
            std::vector<value_type> xp = P::powmod(base_, {base_.zero(), base_.one()}, characteristic(), modulus_);
            std::vector<value_type> acc{base_.one()};
            frob_rows_.clear();
            for (std::size_t j = 0; j < r; ++j) {
                std::vector<value_type> row = acc;
                row.resize(r, base_.zero());
                frob_rows_.push_back(row);
                acc = P::mulmod(base_, acc, xp, modulus_);
            }
        }
        nonresidue_ = std::make_shared<Elem>(find_nonresidue());
    }

    Elem find_nonresidue() const
    {
        const Integer half = (order_ - 1) / 2;
        for (Integer idx = 2;; ++idx) {
            Elem e = from_index(idx);
            if (e.is_zero())
                continue;
            if (!(e.pow(half) == one()))
                return e;
        }
    }

    M base_;
    std::vector<value_type> modulus_;
    int degree_ = 0;
    Integer order_;
    std::vector<std::vector<value_type>> reduce_rows_;
    std::vector<std::vector<value_type>> frob_rows_;
    std::shared_ptr<const Elem> nonresidue_;
};

template <class M>
class FieldElem {
public:
    using Field = ExtField<M>;
    using value_type = typename M::value_type;

    FieldElem() = default;
    FieldElem(const Field* field, std::vector<value_type> coeffs) : field_(field), c_(std::move(coeffs)) {}

    const Field& field() const
    {
        if (field_ == nullptr)
            throw FieldError("uninitialised field element");
        return *field_;
    }
    const Field* field_ptr() const { return field_; }
    const std::vector<value_type>& coeffs() const { return c_; }

    bool is_zero() const
    {
        for (const auto& x : c_)
            if (!field().base().is_zero(x))
                return false;
        return true;
    }
    bool is_one() const { return *this == field().one(); }

    friend bool operator==(const FieldElem& a, const FieldElem& b)
    {
        a.check_same(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    /// Total order on coefficient vectors; only for use as a map key.
    friend bool operator<(const FieldElem& a, const FieldElem& b) { return a.c_ < b.c_; }

    FieldElem& operator+=(const FieldElem& o)
    {
        check_same(o);
        const M& m = field().base();
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] = m.add(c_[i], o.c_[i]);
        return *this;
    }
    FieldElem& operator-=(const FieldElem& o)
    {
        check_same(o);
        const M& m = field().base();
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] = m.sub(c_[i], o.c_[i]);
        return *this;
    }
    FieldElem& operator*=(const FieldElem& o)
    {
        check_same(o);
        std::vector<value_type> out;
        field().mul_into(c_, o.c_, out);
        c_ = std::move(out);
        return *this;
    }
    FieldElem& operator/=(const FieldElem& o) { return *this *= o.inverse(); }

    friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
    friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
    friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }
    friend FieldElem operator/(FieldElem a, const FieldElem& b) { return a /= b; }
    FieldElem operator-() const
    {
        FieldElem r = *this;
        const M& m = field().base();
        for (auto& x : r.c_)
            x = m.neg(x);
        return r;
    }

    FieldElem inverse() const { return FieldElem(field_, field().inverse_coeffs(c_)); }

    /// this^e for e >= 0 (negative exponents invert first).
    FieldElem pow(const Integer& e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        FieldElem r = field().one();
        const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r *= r;
            if (mpz_tstbit(e.get_mpz_t(), i))
                r *= *this;
        }
        return r;
    }

    /// x^{p^i}, via the precomputed Frobenius matrix.
    FieldElem frobenius(long i = 1) const
    {
        const long r = field().degree();
        long k = ((i % r) + r) % r;
        FieldElem out = *this;
        for (; k > 0; --k)
            out.c_ = field().frobenius_coeffs(out.c_);
        return out;
    }

    bool is_square() const
    {
        if (is_zero())
            return true;
        return pow((field().order() - 1) / 2).is_one();
    }

    std::optional<FieldElem> sqrt() const;

    /// Residue of a prime-subfield element; throws if the element is not in F_p.
    Integer to_prime_field_integer() const
    {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (!field().base().is_zero(c_[i]))
                throw FieldError("element is not in the prime field");
        return field().base().to_integer(c_[0]);
    }
    std::vector<Integer> to_integers() const
    {
        std::vector<Integer> out;
        out.reserve(c_.size());
        for (const auto& x : c_)
            out.push_back(field().base().to_integer(x));
        return out;
    }

private:
    void check_same(const FieldElem& o) const
    {
        if (field_ != o.field_)
            throw FieldError("field elements from different contexts");
    }

    const Field* field_ = nullptr;
    std::vector<value_type> c_;
};

/// Tonelli-Shanks in any finite commutative group-with-zero supporting
/// multiplication and pow. group_order is the order of the unit group.
template <class E>
std::optional<E> tonelli_shanks(const E& a, const E& one, const Integer& group_order, const E& nonresidue)
{
    if (a.is_zero())
        return a;
    Integer t = group_order;
    unsigned long s = 0;
    while (mpz_even_p(t.get_mpz_t())) {
        t /= 2;
        ++s;
    }
    if (!(a.pow(group_order / 2) == one))
        return std::nullopt;
    E z = nonresidue.pow(t);
    E x = a.pow((t + 1) / 2);
    E b = a.pow(t);
    unsigned long m = s;
    while (!(b == one)) {
        unsigned long i = 0;
        E b2 = b;
        while (!(b2 == one)) {
            b2 = b2 * b2;
            ++i;
        }
        if (i >= m)
            return std::nullopt;
        E g = z;
        for (unsigned long j = 0; j + 1 < m - i; ++j)
            g = g * g;
        x = x * g;
        z = g * g;
        b = b * z;
        m = i;
    }
    return x;
}

template <class M>
std::optional<FieldElem<M>> FieldElem<M>::sqrt() const
{
    return tonelli_shanks(*this, field().one(), field().order() - 1, field().nonresidue());
}

namespace detail {

/// Whether some binomial t^r - a is irreducible over F_p (Serret's criterion):
/// every prime factor of r divides p - 1, and 4 | r implies p = 1 mod 4.
inline bool binomial_can_be_irreducible(const Integer& p, int r)
{
    if (r == 1)
        return true;
    for (std::uint64_t s : prime_factors(static_cast<std::uint64_t>(r)))
        if (!mpz_divisible_ui_p(Integer(p - 1).get_mpz_t(), s))
            return false;
    if (r % 4 == 0 && mod(p, 4) != 1)
        return false;
    return true;
}

} // namespace detail

/// Deterministic F_{p^r}: the monic irreducible degree-r modulus whose
/// coefficient vector (c_0, ..., c_{r-1}) has the smallest value of
/// sum c_i p^i (c_0 varies fastest). Blocks of candidates that provably
/// contain no irreducible polynomial are skipped without changing the result.
template <class M>
std::shared_ptr<const ExtField<M>> make_extension(const Integer& p, int r)
{
    if (r < 1)
        throw FieldError("extension degree must be >= 1");
    M base(p);
    using V = typename M::value_type;
    std::vector<V> f(static_cast<std::size_t>(r) + 1, base.zero());
    f[static_cast<std::size_t>(r)] = base.one();
    if (r == 1)
        return std::make_shared<const ExtField<M>>(base, f);
    const Integer block = p; // number of c_0 values per block
    Integer index = 0;
    const Integer total = ipow(p, static_cast<unsigned long>(r));
    const bool binomials = detail::binomial_can_be_irreducible(p, r);
    for (; index < total; ++index) {
        if (!binomials && index < block) {
            index = block - 1;
            continue;
        }
        Integer rest = index;
        for (int i = 0; i < r; ++i) {
            f[static_cast<std::size_t>(i)] = base.from_integer(mod(rest, p));
            rest /= p;
        }
        if (base.is_zero(f[0]))
            continue;
        if (detail::FpPoly<M>::is_irreducible(base, f))
            return std::make_shared<const ExtField<M>>(base, f);
    }
    throw FieldError("no irreducible polynomial found");
}

/// Generator of mu_{ell^n}: the (q-1)/ell^n power of the first element, in
/// the same digit order as make_extension, for which that power has exact
/// order ell^n.
template <class M>
FieldElem<M> primitive_root_of_unity(const ExtField<M>& field, const Integer& ell, unsigned n)
{
    if (n == 0)
        return field.one();
    const Integer ln = ipow(ell, n);
    const Integer qm1 = field.order() - 1;
    if (!mpz_divisible_p(qm1.get_mpz_t(), ln.get_mpz_t()))
        throw FieldError(to_string(ell) + "^" + std::to_string(n) + " does not divide q - 1");
    const Integer cofactor = qm1 / ln;
    const Integer sub = ipow(ell, n - 1);
    const bool constants_possible =
        mpz_divisible_p(Integer(field.characteristic() - 1).get_mpz_t(), ln.get_mpz_t()) != 0;
    Integer idx = constants_possible ? Integer(1) : field.characteristic();
    for (;; ++idx) {
        FieldElem<M> z = field.from_index(idx).pow(cofactor);
        if (z.is_zero())
            continue;
        if (!z.pow(sub).is_one())
            return z;
    }
}

/// Discrete logarithm of y to base zeta (exact order ell^n), digit by digit,
/// each digit found by baby-step giant-step in the order-ell subgroup.
template <class M>
Integer dlog_prime_power(const FieldElem<M>& zeta, const FieldElem<M>& y, const Integer& ell, unsigned n)
{
    const auto& field = zeta.field();
    if (n == 0) {
        if (!y.is_one())
            throw FieldError("dlog: element not in <zeta>");
        return 0;
    }
    const Integer top = ipow(ell, n - 1);
    const FieldElem<M> gamma = zeta.pow(top); // order ell
    // baby steps gamma^j, j < m
    const Integer m_big = sqrt(ell) + 1;
    const unsigned long m = m_big.get_ui();
    std::map<std::vector<typename M::value_type>, unsigned long> baby;
    FieldElem<M> cur = field.one();
    for (unsigned long j = 0; j < m; ++j) {
        baby.emplace(cur.coeffs(), j);
        cur *= gamma;
    }
    const FieldElem<M> giant = gamma.pow(-Integer(static_cast<unsigned long>(m)));
    const FieldElem<M> zeta_inv = zeta.inverse();

    Integer x = 0;
    Integer weight = 1;
    for (unsigned k = 0; k < n; ++k) {
        const FieldElem<M> h = (y * zeta_inv.pow(x)).pow(ipow(ell, n - 1 - k));
        std::optional<Integer> digit;
        FieldElem<M> g = h;
        for (unsigned long i = 0; i <= m && !digit; ++i) {
            auto it = baby.find(g.coeffs());
            if (it != baby.end())
                digit = Integer(static_cast<unsigned long>(i)) * m + it->second;
            else
                g *= giant;
        }
        if (!digit || *digit >= ell)
            throw FieldError("dlog: element not in <zeta>");
        x += *digit * weight;
        weight *= ell;
    }
    return x;
}

} // namespace g2pair
