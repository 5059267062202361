#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace g2pair {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses a signed decimal string; throws std::invalid_argument on anything else.
inline Integer parse_integer(std::string_view text)
{
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start)
        throw std::invalid_argument("empty integer literal");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("malformed integer literal '" + s + "'");
    if (s[0] == '+')
        s.erase(0, 1);
    return Integer(s, 10);
}

inline std::string to_string(const Integer& x) { return x.get_str(10); }

inline std::string to_string(const Rational& x) { return x.get_str(10); }

inline bool is_probable_prime(const Integer& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

inline Integer ipow(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// Non-negative residue of x modulo m (m > 0).
inline Integer mod(const Integer& x, const Integer& m)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Integer powmod(const Integer& b, const Integer& e, const Integer& m)
{
    Integer r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Inverse of x modulo m; nullopt when gcd(x, m) != 1.
inline std::optional<Integer> invmod(const Integer& x, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        return std::nullopt;
    return r;
}

/// ell-adic valuation of a nonzero integer.
inline int valuation(const Integer& x, const Integer& ell)
{
    if (x == 0)
        throw std::domain_error("valuation of zero");
    Integer t = abs(x);
    int v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), ell.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), ell.get_mpz_t());
        ++v;
    }
    return v;
}

inline unsigned long to_ulong_checked(const Integer& x, const char* what)
{
    if (x < 0 || !x.fits_ulong_p())
        throw std::out_of_range(std::string(what) + " out of range");
    return x.get_ui();
}

/// Distinct prime factors by trial division; intended for small arguments
/// such as extension degrees and group exponents.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d)
                large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// Squarefreeness by trial division up to 10^6 followed by a perfect-square
/// test of the cofactor. Exact whenever |n| < 10^18.
inline bool is_squarefree(const Integer& n)
{
    if (n == 0)
        return false;
    Integer t = abs(n);
    for (unsigned long d = 2; d <= 1000000UL; ++d) {
        if (Integer(d) * d > t)
            break;
        if (mpz_divisible_ui_p(t.get_mpz_t(), d)) {
            mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), d);
            if (mpz_divisible_ui_p(t.get_mpz_t(), d))
                return false;
        }
    }
    return t == 1 || mpz_perfect_square_p(t.get_mpz_t()) == 0;
}

/// Deterministic pseudo-random source. The 64-bit engine is fully specified
/// by the standard, and integer sampling is done here rather than through
/// library distributions so that streams agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound) for bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0)
            throw std::invalid_argument("Rng::below(0)");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
            - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    Integer below(const Integer& bound)
    {
        if (bound <= 0)
            throw std::invalid_argument("Rng::below: non-positive bound");
        if (bound.fits_ulong_p())
            return Integer(static_cast<unsigned long>(below(static_cast<std::uint64_t>(bound.get_ui()))));
        const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        for (;;) {
            Integer x = 0;
            for (std::size_t got = 0; got < bits; got += 64) {
                x <<= 64;
                const std::uint64_t word = engine_();
                Integer w;
                mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
                x += w;
            }
            x >>= static_cast<mp_bitcnt_t>(((bits + 63) / 64) * 64 - bits);
            if (x < bound)
                return x;
        }
    }

    /// Child stream for independent sub-computations (e.g. per matrix entry).
    Rng split(std::uint64_t salt)
    {
        return Rng(engine_() ^ (salt * 0x9E3779B97F4A7C15ULL));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace g2pair
