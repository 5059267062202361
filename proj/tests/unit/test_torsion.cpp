#include <gtest/gtest.h>

#include <set>

#include <g2pair/splitting.hpp>
#include <g2pair/torsion.hpp>

#include "oracles/curve_oracles.hpp"
#include "support/fixtures.hpp"

using namespace g2pair;
using S = SmallModulus;

namespace {

template <class M>
std::set<Divisor<M>> span_all(const Curve<M>& C, const TorsionBasis<M>& b)
{
    const unsigned long m = to_ulong_checked(b.level(), "level");
    std::set<Divisor<M>> out;
    std::array<Integer, 4> c{};
    for (unsigned long idx = 0; idx < m * m * m * m; ++idx) {
        unsigned long t = idx;
        for (auto& x : c) {
            x = Integer(t % m);
            t /= m;
        }
        out.insert(combine_points(C, b.points, c));
    }
    return out;
}

} // namespace

TEST(TorsionBasis, SpansEveryRationalThreeTorsionPoint)
{
    // the class-group oracle lists all 891 elements of J(F_31)
    const auto P = fixtures::f31();
    auto F = make_extension<S>(31, 1);
    auto F2 = make_extension<S>(31, 2);
    const auto C = Curve<S>::from_integers(F, P.h, P.f);
    oracle::ClassGroupOracle<S> orc(F2, P.h, P.f);
    std::set<Divisor<S>> torsion;
    std::size_t total = 0;
    for (const auto& E : orc.reduced_divisors()) {
        const auto D = orc.to_mumford(C, E);
        ++total;
        if (C.mul(D, 3).is_identity())
            torsion.insert(D);
    }
    ASSERT_EQ(total, 891u);
    ASSERT_EQ(torsion.size(), 81u);

    for (std::uint64_t seed : {1, 2, 3}) {
        Rng rng(seed);
        const auto rt = rational_torsion(C, fixtures::f31_zeta(), Integer(3), rng, 1);
        EXPECT_EQ(rt.n, 1ul);
        EXPECT_EQ(span_all(C, rt.basis), torsion);
        EXPECT_EQ(span_all(C, symplectic_basis(C, rt.basis, rng)), torsion);
    }
}

TEST(TorsionBasis, LevelTooHighIsRejected)
{
    const auto C = curve_over<S>(fixtures::f31(), 1);
    Rng rng(2);
    EXPECT_THROW(torsion_basis(C, fixtures::f31_zeta(), Integer(3), 2, rng), TorsionError);
    EXPECT_THROW(torsion_basis(C, fixtures::f31_zeta(), Integer(5), 1, rng), TorsionError);
    EXPECT_THROW(rational_torsion(C, fixtures::f31_zeta(), Integer(11), rng), TorsionError);
}

TEST(SymplecticBasis, GramIsStandard)
{
    const auto C = curve_over<S>(fixtures::f31(), 3);
    const ZetaData z3 = fixtures::f31_zeta().power(3);
    for (std::uint64_t seed : {4, 5, 6}) {
        Rng rng(seed);
        const auto rt = rational_torsion(C, z3, Integer(3), rng, 3);
        ASSERT_EQ(rt.n, 2ul);
        const auto zeta = pairing_root(C, Integer(3), 2);
        const auto g0 = weil_gram(C, rt.basis.points, Integer(3), 2, zeta, rng);
        EXPECT_NE(mod(pfaffian(g0), Integer(3)), 0); // the basis is nondegenerate
        const auto sb = symplectic_basis(C, rt.basis, rng);
        EXPECT_TRUE(sb.symplectic);
        const auto g = weil_gram(C, sb.points, Integer(3), 2, zeta, rng);
        LogMatrix expected{};
        expected[0][2] = 1;
        expected[1][3] = 1;
        expected[2][0] = 8;
        expected[3][1] = 8;
        EXPECT_EQ(g, expected);
        for (const auto& Q : sb.points) {
            EXPECT_TRUE(C.mul(Q, 9).is_identity());
            EXPECT_FALSE(C.mul(Q, 3).is_identity());
        }
    }
}

TEST(SymplecticTransform, StandardizesRandomForms)
{
    const Integer ell = 5, m = 125;
    Rng rng(7);
    int tried = 0;
    while (tried < 50) {
        LogMatrix g{};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                g[i][j] = rng.below(m);
                g[j][i] = mod(-g[i][j], m);
            }
        if (mod(pfaffian(g), ell) == 0)
            continue;
        ++tried;
        const auto A = symplectic_transform(g, ell, m);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                Integer s = 0;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        s += A[a][i] * g[i][j] * A[b][j];
                const Integer want = (a + 2 == b) ? 1 : (b + 2 == a) ? Integer(m - 1) : Integer(0);
                EXPECT_EQ(mod(s, m), want);
            }
    }
}

TEST(TorsionFieldDegree, WorkedExampleIsEight)
{
    const auto P = fixtures::example127();
    const auto z = fixtures::example127_zeta();
    Rng rng(3);
    const auto d = torsion_field_degree<S>(P, z, Integer(5), std::nullopt, rng);
    EXPECT_EQ(d.r, 8ul);
    const auto hinted = torsion_field_degree<S>(P, z, Integer(5), SplittingType::TwoOrThreeIdeals, rng);
    EXPECT_EQ(hinted.r, 8ul);
    // no proper divisor of 8 works
    for (unsigned long r : {1ul, 2ul, 4ul}) {
        const auto C = curve_over<S>(P, r);
        if (torsion_filter(z, Integer(5), r))
            EXPECT_THROW(torsion_basis(C, z.power(r), Integer(5), 1, rng, r), TorsionError) << r;
    }
    EXPECT_TRUE(torsion_filter(z, Integer(5), 8));
    EXPECT_EQ(max_rational_level(curve_over<S>(P, 8), z.power(8), Integer(5), rng), 1ul);
}

TEST(TorsionFieldDegree, SmallCurve)
{
    Rng rng(1);
    const auto P = fixtures::f31();
    const auto z = fixtures::f31_zeta();
    EXPECT_EQ(torsion_field_degree<S>(P, z, Integer(3), std::nullopt, rng).r, 1ul);
    EXPECT_EQ(max_rational_level(curve_over<S>(P, 3), z.power(3), Integer(3), rng), 2ul);
    EXPECT_THROW(torsion_field_degree<S>(P, z, Integer(31), std::nullopt, rng), TorsionError);
    EXPECT_THROW(torsion_field_degree<S>(P, z, Integer(4), std::nullopt, rng), TorsionError);
}

TEST(TorsionFilter, NecessaryForRationality)
{
    // whenever a basis exists the filter accepts
    const auto P = fixtures::f31();
    const auto z = fixtures::f31_zeta();
    Rng rng(9);
    for (unsigned long r = 1; r <= 6; ++r) {
        const auto C = curve_over<S>(P, r);
        for (long ell : {3L, 5L, 7L, 11L}) {
            bool ok = true;
            try {
                torsion_basis(C, z.power(r), Integer(ell), 1, rng, r);
            } catch (const TorsionError&) {
                ok = false;
            }
            if (ok)
                EXPECT_TRUE(torsion_filter(z, Integer(ell), r)) << "r=" << r << " ell=" << ell;
        }
    }
}
