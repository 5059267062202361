#pragma once

// Curves shared by several test suites, plus helpers for moving divisors
// between a prime field and its extensions.

#include <vector>

#include <g2pair/torsion.hpp>

namespace fixtures {

using g2pair::Integer;

inline std::vector<Integer> ints(std::initializer_list<long> v)
{
    std::vector<Integer> out;
    for (long x : v)
        out.push_back(Integer(x));
    return out;
}

/// y^2 = x^5 + 11 over F_31: J[3] is rational and #J = 3^4 * 11.
inline g2pair::CurveParams f31() { return {31, {}, ints({11, 0, 0, 0, 0, 1})}; }
inline g2pair::ZetaData f31_zeta() { return {31, 1, -39}; }

/// The worked example y^2 = 5x^5 + 4x^4 + 98x^2 + 7x + 2 over F_127,
/// moved to a monic quintic model.
inline g2pair::CurveParams example127()
{
    auto m = g2pair::normalize_model(127, {}, ints({2, 7, 98, 0, 4, 5}));
    return {127, m.h, m.f};
}
inline g2pair::ZetaData example127_zeta() { return {127, -5, 154}; }

/// Image of a divisor under the inclusion of fields.
template <class M>
g2pair::Divisor<M> lift(const g2pair::Curve<M>& big, const g2pair::Divisor<M>& D)
{
    auto conv = [&](const g2pair::Poly<M>& p) {
        std::vector<g2pair::FieldElem<M>> c;
        for (const auto& x : p.coeffs())
            c.push_back(big.field().from_coeffs(x.to_integers()));
        return g2pair::Poly<M>(&big.field(), c);
    };
    return {conv(D.u), conv(D.v)};
}

/// A divisor over an extension with coefficients in the prime field, read
/// back over the prime field.
template <class M>
g2pair::Divisor<M> descend(const g2pair::Curve<M>& small, const g2pair::Divisor<M>& D)
{
    auto conv = [&](const g2pair::Poly<M>& p) {
        std::vector<g2pair::FieldElem<M>> c;
        for (const auto& x : p.coeffs())
            c.push_back(small.field().from_integer(x.to_prime_field_integer()));
        return g2pair::Poly<M>(&small.field(), c);
    };
    return {conv(D.u), conv(D.v)};
}

} // namespace fixtures
