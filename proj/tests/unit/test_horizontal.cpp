#include <gtest/gtest.h>

#include <set>

#include <g2pair/horizontal.hpp>

#include "support/fixtures.hpp"

using namespace g2pair;
using S = SmallModulus;

namespace {

// Brute force: every pair of vectors in F_ell^4, reduced to its row
// echelon form, kept when omega vanishes.
std::size_t brute_force_lagrangian_count(unsigned long ell)
{
    const unsigned long size = ell * ell * ell * ell;
    auto vec = [&](unsigned long idx) {
        CoeffVec v;
        for (auto& x : v) {
            x = Integer(idx % ell);
            idx /= ell;
        }
        return v;
    };
    std::set<std::pair<CoeffVec, CoeffVec>> seen;
    for (unsigned long a = 1; a < size; ++a)
        for (unsigned long b = a + 1; b < size; ++b) {
            const CoeffVec x = vec(a), y = vec(b);
            if (mod(symplectic_form(x, y), Integer(ell)) != 0)
                continue;
            if (auto p = canonical_plane(x, y, Integer(ell)))
                seen.insert({p->lambda, p->lambda2});
        }
    return seen.size();
}

// Point set of the subgroup generated by two divisors.
template <class M>
std::set<Divisor<M>> span_set(const Curve<M>& C, const std::array<Divisor<M>, 2>& g, unsigned long ell)
{
    std::set<Divisor<M>> out;
    Divisor<M> row = C.identity();
    for (unsigned long a = 0; a < ell; ++a) {
        Divisor<M> acc = row;
        for (unsigned long b = 0; b < ell; ++b) {
            out.insert(acc);
            acc = C.add(acc, g[1]);
        }
        row = C.add(row, g[0]);
    }
    return out;
}

bool order_divides(FieldElem<S> v, const Integer& e) { return v.pow(e).is_one(); }

} // namespace

TEST(Lagrangian, CountsMatchBruteForce)
{
    for (unsigned long ell : {3ul, 5ul, 7ul}) {
        const auto planes = enumerate_lagrangian(Integer(ell));
        const std::size_t expected = (ell * ell + 1) * (ell + 1);
        EXPECT_EQ(planes.size(), expected);
        std::set<std::pair<CoeffVec, CoeffVec>> distinct;
        for (const auto& p : planes) {
            EXPECT_EQ(mod(symplectic_form(p.lambda, p.lambda2), Integer(ell)), 0);
            auto c = canonical_plane(p.lambda, p.lambda2, Integer(ell));
            ASSERT_TRUE(c.has_value());
            EXPECT_EQ(*c, p);
            distinct.insert({p.lambda, p.lambda2});
        }
        EXPECT_EQ(distinct.size(), expected);
        if (ell <= 5) {
            EXPECT_EQ(brute_force_lagrangian_count(ell), expected);
        }
    }
    EXPECT_THROW(enumerate_lagrangian(Integer(2)), HorizontalError);
    EXPECT_THROW(enumerate_lagrangian(Integer(9)), HorizontalError);
}

TEST(Lagrangian, IsotropicPartnerStaysInPlane)
{
    const Integer ell = 3, m = 27;
    Rng rng(5);
    for (const auto& p : enumerate_lagrangian(ell)) {
        CoeffVec b = p.lambda2;
        for (auto& x : b)
            x += ell * rng.below(9); // a lift that is isotropic mod 3 only
        const CoeffVec c = isotropic_partner(p.lambda, b, ell, m);
        EXPECT_EQ(mod(symplectic_form(p.lambda, c), m), 0);
        EXPECT_EQ(canonical_plane(p.lambda, c, ell), p);
    }
}

TEST(Degeneracy, FilterMatchesDirectPairings)
{
    // J[9] is rational over F_{31^3}; compare the log filter with the Tate
    // pairing evaluated on the lifted generators themselves
    const auto P = fixtures::f31();
    const auto C = curve_over<S>(P, 3);
    Rng rng(21);
    const auto rt = rational_torsion(C, fixtures::f31_zeta().power(3), Integer(3), rng, 3);
    ASSERT_EQ(rt.n, 2ul);
    const auto basis = symplectic_basis(C, rt.basis, rng);
    const auto pm = pairing_matrix(C, basis, rng, 1);
    const auto k = compute_k_ell(pm);
    ASSERT_TRUE(k.has_value());
    ASSERT_EQ(*k, 2ul);
    const Integer ell = 3, m = 9;
    std::size_t found = 0;
    for (const auto& plane : enumerate_lagrangian(ell)) {
        const CoeffVec b = isotropic_partner(plane.lambda, plane.lambda2, ell, m);
        const auto X = combine_points(C, basis.points, plane.lambda);
        const auto Y = combine_points(C, basis.points, b);
        EXPECT_TRUE(weil(C, X, Y, m, rng).is_one());
        bool direct = true;
        for (const auto& [A, B] : {std::pair{&X, &X}, std::pair{&X, &Y}, std::pair{&Y, &X}, std::pair{&Y, &Y}})
            direct = direct && order_divides(tate_reduced(C, *A, *B, m, rng), ell);
        EXPECT_EQ(plane_is_degenerate(pm.raw, ell, 2, *k, plane), direct);
        found += direct;
    }
    EXPECT_EQ(degenerate_subgroups(pm, *k, 2).size(), found);
}

TEST(Degeneracy, KernelsIndependentOfBasis)
{
    // worked example over F_{127^8} at ell = 5, n = k = 1: a plane is
    // degenerate when the pairing is trivial on it
    std::optional<std::set<std::set<Divisor<S>>>> first;
    AnalysisOptions opt;
    opt.degree = 8;
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        opt.seed = seed;
        const auto base = analyse_locally<S>(fixtures::example127(), fixtures::example127_zeta(),
                                             {27259, -17456, 17}, 5, opt);
        ASSERT_EQ(base.verdict.k_ell, 1ul);
        std::set<std::set<Divisor<S>>> kernels;
        for (const auto& plane : degenerate_subgroups(base.matrix, 1))
            kernels.insert(span_set(base.curve, kernel_points(base.curve, plane, base.basis), 5));
        if (!first)
            first = kernels;
        EXPECT_EQ(kernels, *first) << "seed " << seed;
    }
    EXPECT_EQ(first->size(), 2u);
}

TEST(Degeneracy, RejectsBadK)
{
    EXPECT_THROW(plane_is_degenerate(LogMatrix{}, 3, 2, 0, enumerate_lagrangian(3).front()), HorizontalError);
    EXPECT_THROW(plane_is_degenerate(LogMatrix{}, 3, 2, 3, enumerate_lagrangian(3).front()), HorizontalError);
    // the zero table makes every plane degenerate
    for (const auto& p : enumerate_lagrangian(3))
        EXPECT_TRUE(plane_is_degenerate(LogMatrix{}, 3, 2, 1, p));
}

TEST(Embedding, CommutesWithArithmetic)
{
    const auto P = fixtures::f31();
    const auto C3 = curve_over<S>(P, 3);
    const auto C9 = curve_over<S>(P, 9);
    Rng rng(8);
    const FieldEmbedding<S> emb(C3.field(), C9.field(), rng);
    for (int i = 0; i < 10; ++i) {
        const auto a = C3.field().random(rng), b = C3.field().random(rng);
        EXPECT_EQ(emb(a * b), emb(a) * emb(b));
        EXPECT_EQ(emb(a + b), emb(a) + emb(b));
        const auto D = C3.random_divisor(rng), E = C3.random_divisor(rng);
        EXPECT_EQ(emb(C3.add(D, E)), C9.add(emb(D), emb(E)));
    }
}

TEST(Horizontal, SmallCurveWithoutLift)
{
    // x^5 + 11 over F_31 has CM by Q(zeta_5) = Q(sqrt(-(5 + 2 sqrt 5))), in
    // which 3 is inert; at r = 3, n = k = 2 no lifting is needed and no
    // plane survives
    HorizontalOptions opt;
    opt.analysis.degree = 3;
    opt.analysis.seed = 4;
    const auto res = horizontal_kernels<S>(fixtures::f31(), fixtures::f31_zeta(), {7, 4, 5}, 3, opt);
    EXPECT_FALSE(res.lifted);
    EXPECT_TRUE(res.kernels.empty());
    EXPECT_EQ(res.work_k, 2ul);
    EXPECT_EQ(res.planes_total, 40u);
    Rng rng(1);
    for (const auto& k : res.kernels) {
        const auto& C = res.base.curve;
        EXPECT_EQ(span_set(C, k.kernel, 3).size(), 9u);
        EXPECT_TRUE(weil(C, k.kernel[0], k.kernel[1], Integer(3), rng).is_one());
    }
}

TEST(Horizontal, WorkedExampleHasTwoKernels)
{
    HorizontalOptions opt;
    opt.analysis.seed = 9;
    opt.analysis.degree = 8;
    const auto res = horizontal_kernels<S>(fixtures::example127(), fixtures::example127_zeta(),
                                           {27259, -17456, 17}, 5, opt);
    EXPECT_TRUE(res.lifted);
    EXPECT_EQ(res.work_r, 40ul);
    EXPECT_EQ(res.work_n, 2ul);
    EXPECT_EQ(res.work_k, 2ul);
    EXPECT_FALSE(res.necessary_only);
    EXPECT_FALSE(res.aborted);
    ASSERT_EQ(res.kernels.size(), 2u);
    const auto& C = res.base.curve;
    Rng rng(3);
    std::set<std::set<Divisor<S>>> distinct;
    for (const auto& k : res.kernels) {
        const auto pts = span_set(C, k.kernel, 5);
        EXPECT_EQ(pts.size(), 25u);
        distinct.insert(pts);
        EXPECT_TRUE(k.frobenius_stable);
        EXPECT_TRUE(k.degenerate_at_base);
        EXPECT_TRUE(frobenius_stable(C, k.kernel, Integer(5)));
        EXPECT_TRUE(weil(C, k.kernel[0], k.kernel[1], Integer(5), rng).is_one());
        EXPECT_EQ(mod(symplectic_form(k.plane.lambda, k.plane.lambda2), Integer(5)), 0);
        EXPECT_EQ(span_set(C, kernel_points(C, k.plane, res.base.basis), 5), pts);
    }
    EXPECT_EQ(distinct.size(), 2u);
}

TEST(Horizontal, GenericPlanesAreNotFrobeniusStable)
{
    HorizontalOptions opt;
    opt.analysis.seed = 9;
    opt.analysis.degree = 8;
    const auto base = analyse_locally<S>(fixtures::example127(), fixtures::example127_zeta(), {27259, -17456, 17},
                                         5, opt.analysis);
    std::size_t stable = 0;
    const auto planes = enumerate_lagrangian(5);
    for (const auto& p : planes)
        stable += frobenius_stable(base.curve, kernel_points(base.curve, p, base.basis), Integer(5));
    EXPECT_GE(stable, 2u);
    EXPECT_LT(stable, planes.size() / 4);
}
