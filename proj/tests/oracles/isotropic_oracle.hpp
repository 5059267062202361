#pragma once

// Exhaustive evaluation of k_ell at level ell: every rank-2 subgroup of
// J[ell] is formed as a point set, kept when the Weil pairing vanishes on
// it, and the Tate pairing is evaluated on every pair of its points.

#include <map>
#include <set>
#include <vector>

#include <g2pair/pairing.hpp>
#include <g2pair/torsion.hpp>

namespace oracle {

struct ExhaustiveK {
    unsigned long k = 0;        ///< largest order exponent of T over isotropic planes
    std::size_t planes = 0;     ///< rank-2 subgroups seen
    std::size_t isotropic = 0;  ///< of which Weil-isotropic
};

template <class M>
ExhaustiveK exhaustive_k_ell(const g2pair::Curve<M>& C, const std::array<g2pair::Divisor<M>, 4>& basis,
                             unsigned long ell, g2pair::Rng& rng)
{
    using g2pair::Integer;
    const unsigned long size = ell * ell * ell * ell;
    std::vector<g2pair::Divisor<M>> pts(size);
    for (unsigned long idx = 0; idx < size; ++idx) {
        std::array<Integer, 4> c;
        unsigned long t = idx;
        for (auto& x : c) {
            x = Integer(t % ell);
            t /= ell;
        }
        pts[idx] = g2pair::combine_points(C, basis, c);
    }
    auto add_idx = [&](unsigned long a, unsigned long b) {
        unsigned long out = 0, scale = 1;
        for (int i = 0; i < 4; ++i) {
            out += ((a % ell + b % ell) % ell) * scale;
            a /= ell;
            b /= ell;
            scale *= ell;
        }
        return out;
    };

    std::map<std::pair<unsigned long, unsigned long>, unsigned long> tate_order;
    auto order_of = [&](unsigned long a, unsigned long b) {
        auto key = std::make_pair(a, b);
        auto it = tate_order.find(key);
        if (it != tate_order.end())
            return it->second;
        auto v = g2pair::tate_reduced(C, pts[a], pts[b], Integer(ell), rng);
        unsigned long k = 0;
        while (!v.is_one()) {
            v = v.pow(Integer(ell));
            ++k;
        }
        tate_order[key] = k;
        return k;
    };

    ExhaustiveK out;
    std::set<std::vector<unsigned long>> seen;
    for (unsigned long p = 1; p < size; ++p)
        for (unsigned long q = 1; q < size; ++q) {
            // span of p and q
            std::set<unsigned long> span;
            unsigned long ap = 0;
            for (unsigned long i = 0; i < ell; ++i) {
                unsigned long x = ap;
                for (unsigned long j = 0; j < ell; ++j) {
                    span.insert(x);
                    x = add_idx(x, q);
                }
                ap = add_idx(ap, p);
            }
            if (span.size() != ell * ell)
                continue;
            std::vector<unsigned long> key(span.begin(), span.end());
            if (!seen.insert(key).second)
                continue;
            ++out.planes;
            if (!g2pair::weil(C, pts[p], pts[q], Integer(ell), rng, &pts).is_one())
                continue;
            ++out.isotropic;
            for (unsigned long a : key)
                for (unsigned long b : key)
                    out.k = std::max(out.k, order_of(a, b));
        }
    return out;
}

} // namespace oracle
