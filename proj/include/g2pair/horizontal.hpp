#pragma once

// Lagrangian planes of J[ell] in symplectic coordinates, the degeneracy
// filter on Tate-pairing logs, and kernel generators for the planes that
// survive it.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "endoring.hpp"
#include "pairing_matrix.hpp"
#include "poly.hpp"

namespace g2pair {

class HorizontalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CoeffVec = std::array<Integer, 4>;

/// Plane spanned by lambda and lambda2, coordinates in the order
/// (1, 2, -1, -2) of a symplectic basis.
struct IsotropicPlane {
    CoeffVec lambda{};
    CoeffVec lambda2{};
    bool canonical = true;

    bool operator==(const IsotropicPlane&) const = default;
};

/// omega(x, y) = x1 y-1 - x-1 y1 + x2 y-2 - x-2 y2.
inline Integer symplectic_form(const CoeffVec& x, const CoeffVec& y)
{
    return x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1];
}

/// Reduced row echelon form of two independent vectors mod ell; nullopt if
/// they are dependent.
inline std::optional<IsotropicPlane> canonical_plane(CoeffVec a, CoeffVec b, const Integer& ell)
{
    std::array<CoeffVec, 2> rows{a, b};
    for (auto& row : rows)
        for (auto& x : row)
            x = mod(x, ell);
    int r = 0;
    for (int col = 0; col < 4 && r < 2; ++col) {
        int piv = -1;
        for (int i = r; i < 2; ++i)
            if (rows[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(rows[r], rows[piv]);
        const Integer inv = *invmod(rows[r][col], ell);
        for (auto& x : rows[r])
            x = mod(x * inv, ell);
        for (int i = 0; i < 2; ++i)
            if (i != r && rows[i][col] != 0) {
                const Integer f = rows[i][col];
                for (int c = 0; c < 4; ++c)
                    rows[i][c] = mod(rows[i][c] - f * rows[r][c], ell);
            }
        ++r;
    }
    if (r < 2)
        return std::nullopt;
    return IsotropicPlane{rows[0], rows[1], true};
}

/// Every Lagrangian plane of (Z/ell)^4 once, in canonical form; there are
/// (ell^2 + 1)(ell + 1) of them.
inline std::vector<IsotropicPlane> enumerate_lagrangian(const Integer& ell)
{
    if (ell <= 2 || !is_probable_prime(ell))
        throw HorizontalError("enumerate_lagrangian needs an odd prime");
    const unsigned long l = to_ulong_checked(ell, "ell");
    std::vector<IsotropicPlane> out;
    // pivot columns i < j; entries right of a pivot and outside the other
    // pivot column are free
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            std::vector<int> free0, free1;
            for (int c = i + 1; c < 4; ++c)
                if (c != j)
                    free0.push_back(c);
            for (int c = j + 1; c < 4; ++c)
                free1.push_back(c);
            const std::size_t nfree = free0.size() + free1.size();
            unsigned long total = 1;
            for (std::size_t t = 0; t < nfree; ++t)
                total *= l;
            for (unsigned long idx = 0; idx < total; ++idx) {
                CoeffVec a{}, b{};
                a[i] = 1;
                b[j] = 1;
                unsigned long t = idx;
                for (int c : free0) {
                    a[c] = Integer(t % l);
                    t /= l;
                }
                for (int c : free1) {
                    b[c] = Integer(t % l);
                    t /= l;
                }
                if (mod(symplectic_form(a, b), ell) == 0)
                    out.push_back({a, b, true});
            }
        }
    return out;
}

/// lambda2 shifted by a multiple of ell so that omega(lambda, lambda2) = 0
/// mod ell^n; the plane mod ell is unchanged.
inline CoeffVec isotropic_partner(const CoeffVec& lambda, const CoeffVec& lambda2, const Integer& ell,
                                  const Integer& modulus)
{
    const Integer c = mod(symplectic_form(lambda, lambda2), modulus);
    if (c == 0)
        return lambda2;
    if (mod(c, ell) != 0)
        throw HorizontalError("plane is not isotropic mod ell");
    // mu with omega(lambda, mu) = 1
    for (int k = 0; k < 4; ++k) {
        CoeffVec e{};
        e[k] = 1;
        const Integer w = mod(symplectic_form(lambda, e), modulus);
        if (auto inv = invmod(w, modulus)) {
            CoeffVec out = lambda2;
            out[k] = mod(out[k] - c * *inv, modulus);
            return out;
        }
    }
    throw HorizontalError("lambda vanishes mod ell");
}

/// sum_ij x_i y_j raw[i][j] mod ell^n.
inline Integer bilinear_log(const LogMatrix& raw, const CoeffVec& x, const CoeffVec& y, const Integer& modulus)
{
    Integer s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            s += x[i] * y[j] * raw[i][j];
    return mod(s, modulus);
}

/// True iff the Tate pairing on the lifted plane takes values in
/// mu_{ell^{k-1}}: the four values T(P,P), T(P,P'), T(P',P), T(P',P')
/// have logs divisible by ell^{n-k+1}.
inline bool plane_is_degenerate(const LogMatrix& raw, const Integer& ell, unsigned long n, unsigned long k,
                                const IsotropicPlane& plane)
{
    if (k == 0 || k > n)
        throw HorizontalError("degeneracy needs 0 < k <= n");
    const Integer modulus = ipow(ell, n);
    const Integer bound = ipow(ell, n - k + 1);
    const CoeffVec& a = plane.lambda;
    const CoeffVec b = isotropic_partner(a, plane.lambda2, ell, modulus);
    for (const auto& [x, y] : {std::pair{&a, &a}, std::pair{&a, &b}, std::pair{&b, &a}, std::pair{&b, &b}})
        if (!mpz_divisible_p(bilinear_log(raw, *x, *y, modulus).get_mpz_t(), bound.get_mpz_t()))
            return false;
    return true;
}

/// Lagrangian planes on which the Tate pairing is k-degenerate.
template <class M>
std::vector<IsotropicPlane> degenerate_subgroups(const PairingMatrix<M>& pm, unsigned long k, unsigned threads = 0)
{
    const auto planes = enumerate_lagrangian(pm.ell);
    std::vector<char> keep(planes.size(), 0);
    parallel_for(planes.size(), threads,
                 [&](std::size_t i) { keep[i] = plane_is_degenerate(pm.raw, pm.ell, pm.n, k, planes[i]); });
    std::vector<IsotropicPlane> out;
    for (std::size_t i = 0; i < planes.size(); ++i)
        if (keep[i])
            out.push_back(planes[i]);
    return out;
}

/// Generators ell^{n-1} (sum lambda_i Q_i), ell^{n-1} (sum lambda2_i Q_i) of
/// the kernel inside J[ell].
template <class M>
std::array<Divisor<M>, 2> kernel_points(const Curve<M>& C, const IsotropicPlane& plane, const TorsionBasis<M>& basis)
{
    if (!basis.symplectic)
        throw HorizontalError("kernel_points needs a symplectic basis");
    const Integer scale = ipow(basis.ell, basis.n - 1);
    std::array<Divisor<M>, 2> out{C.mul(combine_points(C, basis.points, plane.lambda), scale),
                                  C.mul(combine_points(C, basis.points, plane.lambda2), scale)};
    for (const auto& D : out)
        if (D.is_identity() || !C.mul(D, basis.ell).is_identity())
            throw HorizontalError("kernel generator does not have order ell");
    for (unsigned long a = 0; a < to_ulong_checked(basis.ell, "ell"); ++a)
        if (C.mul(out[0], Integer(a)) == out[1])
            throw HorizontalError("kernel generators are dependent");
    return out;
}

/// Whether X lies in the span of the two generators (brute force over ell^2).
template <class M>
bool in_span(const Curve<M>& C, const std::array<Divisor<M>, 2>& gens, const Integer& ell, const Divisor<M>& X)
{
    const unsigned long l = to_ulong_checked(ell, "ell");
    Divisor<M> row = C.identity();
    for (unsigned long a = 0; a < l; ++a) {
        Divisor<M> acc = row;
        for (unsigned long b = 0; b < l; ++b) {
            if (acc == X)
                return true;
            acc = C.add(acc, gens[1]);
        }
        row = C.add(row, gens[0]);
    }
    return false;
}

/// True iff the p-power Frobenius maps the span of the generators into itself.
template <class M>
bool frobenius_stable(const Curve<M>& C, const std::array<Divisor<M>, 2>& gens, const Integer& ell)
{
    for (const auto& g : gens)
        if (!in_span(C, gens, ell, C.frobenius(g)))
            return false;
    return true;
}

/// Embedding of a small extension of F_p into a larger one containing it.
template <class M>
class FieldEmbedding {
public:
    FieldEmbedding(const ExtField<M>& small, const ExtField<M>& big, Rng& rng) : small_(&small), big_(&big)
    {
        if (big.degree() % small.degree() != 0 || big.characteristic() != small.characteristic())
            throw HorizontalError("field does not embed");
        std::vector<FieldElem<M>> c;
        for (const auto& x : small.modulus())
            c.push_back(big.from_integer(small.base().to_integer(x)));
        const auto rs = roots(Poly<M>(&big, c), rng);
        if (rs.empty())
            throw HorizontalError("modulus has no root in the larger field");
        theta_ = rs.front();
    }

    FieldElem<M> operator()(const FieldElem<M>& x) const
    {
        FieldElem<M> acc = big_->zero(), pw = big_->one();
        for (const auto& c : x.to_integers()) {
            if (c != 0)
                acc += big_->from_integer(c) * pw;
            pw *= theta_;
        }
        return acc;
    }

    Divisor<M> operator()(const Divisor<M>& D) const
    {
        auto conv = [&](const Poly<M>& p) {
            std::vector<FieldElem<M>> c;
            for (const auto& x : p.coeffs())
                c.push_back((*this)(x));
            return Poly<M>(big_, c);
        };
        return {conv(D.u), conv(D.v)};
    }

private:
    const ExtField<M>* small_;
    const ExtField<M>* big_;
    FieldElem<M> theta_;
};

/// Solves x G = w over F_ell for the 4x4 matrix G; nullopt if singular.
inline std::optional<CoeffVec> solve_mod_ell(const LogMatrix& G, const CoeffVec& w, const Integer& ell)
{
    // rows of the augmented system: equation j is sum_i x_i G[i][j] = w_j
    std::array<std::array<Integer, 5>, 4> m;
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i)
            m[j][i] = mod(G[i][j], ell);
        m[j][4] = mod(w[j], ell);
    }
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            return std::nullopt;
        std::swap(m[col], m[piv]);
        const Integer inv = *invmod(m[col][col], ell);
        for (auto& x : m[col])
            x = mod(x * inv, ell);
        for (int r = 0; r < 4; ++r)
            if (r != col && m[r][col] != 0) {
                const Integer f = m[r][col];
                for (int c = 0; c < 5; ++c)
                    m[r][c] = mod(m[r][c] - f * m[col][c], ell);
            }
    }
    return CoeffVec{m[0][4], m[1][4], m[2][4], m[3][4]};
}

template <class M>
struct HorizontalKernel {
    IsotropicPlane plane;             ///< coordinates over the reported basis of J[ell]
    std::array<Divisor<M>, 2> kernel; ///< generators over the base field F_{p^r}
    bool frobenius_stable = false;
    bool degenerate_at_base = false;
};

template <class M>
struct HorizontalResult {
    LocalAnalysis<M> base;
    bool lifted = false;
    unsigned long work_r = 0;
    unsigned long work_n = 0;
    std::optional<unsigned long> work_k;
    std::size_t planes_total = 0;
    bool necessary_only = false; ///< the coordinate condition fails: degeneracy is only necessary
    bool aborted = false;        ///< k_ell = 0
    std::vector<HorizontalKernel<M>> kernels;
    std::vector<std::string> warnings;
};

struct HorizontalOptions {
    AnalysisOptions analysis;
    bool lift = true;
};

namespace detail {

/// Discrete-log coordinates of X over a basis of J[ell] via Weil logs.
template <class M>
CoeffVec weil_coordinates(const Curve<M>& C, const std::array<Divisor<M>, 4>& basis, const LogMatrix& gram,
                          const Divisor<M>& X, const Integer& ell, const FieldElem<M>& zeta, Rng& rng)
{
    CoeffVec w;
    for (int j = 0; j < 4; ++j)
        w[j] = weil_log(C, X, basis[j], ell, 1, zeta, rng);
    auto x = solve_mod_ell(gram, w, ell);
    if (!x)
        throw HorizontalError("basis of J[ell] has a singular Weil Gram matrix");
    return *x;
}

} // namespace detail

/// Kernels of horizontal (ell, ell)-isogenies: the full pipeline, lifting to
/// F_{p^{r ell}} when k_ell < 2 (unless disabled), with kernels reported
/// over the base field F_{p^r}.
template <class M>
HorizontalResult<M> horizontal_kernels(const CurveParams& params, const ZetaData& zeta, const CMFieldDesc& K,
                                       const Integer& ell, const HorizontalOptions& opt = {})
{
    HorizontalResult<M> res{analyse_locally<M>(params, zeta, K, ell, opt.analysis), false, 0, 0, {}, 0, false, false, {}, {}};
    PhaseTimer local;
    PhaseTimer& timer = opt.analysis.timer ? *opt.analysis.timer : local;
    const auto& base = res.base;
    const Curve<M>& C = base.curve;
    const unsigned threads = opt.analysis.threads;
    res.necessary_only = !base.verdict.condition1;
    res.work_r = base.verdict.r;
    res.work_n = base.verdict.n;
    res.work_k = base.verdict.k_ell;
    const auto planes = enumerate_lagrangian(ell);
    res.planes_total = planes.size();
    Rng rng = Rng(opt.analysis.seed).split(100);

    auto base_kernel = [&](const IsotropicPlane& plane) {
        HorizontalKernel<M> hk;
        hk.plane = plane;
        hk.kernel = kernel_points(C, plane, base.basis);
        hk.frobenius_stable = frobenius_stable(C, hk.kernel, ell);
        if (base.verdict.k_ell)
            hk.degenerate_at_base = plane_is_degenerate(base.matrix.raw, ell, base.verdict.n, *base.verdict.k_ell, plane);
        if (!hk.frobenius_stable)
            res.warnings.push_back("kernel is not Frobenius-stable");
        return hk;
    };

    if (!base.verdict.k_ell) {
        res.aborted = true;
        res.warnings.push_back("k_ell = 0: the pairing table is trivial and every plane is degenerate");
        for (const auto& p : planes)
            res.kernels.push_back(base_kernel(p));
        return res;
    }
    if (res.necessary_only)
        res.warnings.push_back("the coordinate condition fails: degenerate planes are candidates only");

    const unsigned long k = *base.verdict.k_ell;
    if (k >= 2 || !opt.lift) {
        if (k < 2)
            res.warnings.push_back("k_ell < 2 evaluated without lifting");
        const auto found = timer.run("degenerate-planes", [&] { return degenerate_subgroups(base.matrix, k, threads); });
        for (const auto& p : found)
            res.kernels.push_back(base_kernel(p));
        return res;
    }

    // lift: over F_{p^{r ell}} the level and k both grow by one
    res.lifted = true;
    const unsigned long r2 = base.verdict.r * to_ulong_checked(ell, "ell");
    const Curve<M> C2 = curve_over<M>(params, r2);
    const ZetaData z2 = zeta.power(r2);
    Rng lift_rng = rng.split(1);
    auto rt = timer.run("lift-torsion-basis", [&] { return rational_torsion(C2, z2, ell, lift_rng, r2); });
    auto basis2 = timer.run("lift-symplectic-basis", [&] { return symplectic_basis(C2, rt.basis, lift_rng); });
    auto pm2 = timer.run("lift-pairing-matrix", [&] { return pairing_matrix(C2, basis2, lift_rng, threads); });
    res.work_r = r2;
    res.work_n = rt.n;
    res.work_k = compute_k_ell(pm2);
    if (!res.work_k)
        throw HorizontalError("pairing table became trivial after lifting");
    const auto found = timer.run("degenerate-planes", [&] { return degenerate_subgroups(pm2, *res.work_k, threads); });

    // carry each kernel back to F_{p^r} in the base symplectic basis
    timer.run("map-to-base", [&] {
        const FieldEmbedding<M> emb(C.field(), C2.field(), lift_rng);
        const Integer scale = ipow(ell, base.verdict.n - 1);
        std::array<Divisor<M>, 4> small_basis, embedded;
        for (int i = 0; i < 4; ++i) {
            small_basis[i] = C.mul(base.basis.points[i], scale);
            embedded[i] = emb(small_basis[i]);
        }
        const FieldElem<M> zeta1 = pairing_root(C2, ell, 1);
        const LogMatrix gram = weil_gram(C2, embedded, ell, 1, zeta1, lift_rng);
        for (const auto& p : found) {
            const auto big = kernel_points(C2, p, basis2);
            const CoeffVec x = detail::weil_coordinates(C2, embedded, gram, big[0], ell, zeta1, lift_rng);
            const CoeffVec y = detail::weil_coordinates(C2, embedded, gram, big[1], ell, zeta1, lift_rng);
            if (emb(combine_points(C, small_basis, x)) != big[0] || emb(combine_points(C, small_basis, y)) != big[1])
                throw HorizontalError("kernel generator does not descend to the base field");
            auto plane = canonical_plane(x, y, ell);
            if (!plane)
                throw HorizontalError("descended kernel has rank < 2");
            res.kernels.push_back(base_kernel(*plane));
        }
        return 0;
    });
    return res;
}

} // namespace g2pair
