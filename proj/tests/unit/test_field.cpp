#include <gtest/gtest.h>

#include <g2pair/field.hpp>

using namespace g2pair;

namespace {

using Small = ExtField<SmallModulus>;

// Independent check: a monic quadratic over F_p is irreducible iff it has no root.
bool quadratic_has_root(long c0, long c1, long p)
{
    for (long x = 0; x < p; ++x)
        if ((x * x + c1 * x + c0) % p == 0)
            return true;
    return false;
}

} // namespace

TEST(Field, PrimeFieldIsDegreeOne)
{
    auto F = make_extension<SmallModulus>(127, 1);
    EXPECT_EQ(F->degree(), 1);
    EXPECT_EQ(F->order(), 127);
    auto a = F->from_integer(100), b = F->from_integer(50);
    EXPECT_EQ((a + b).to_prime_field_integer(), 23);
    EXPECT_EQ((a * b).to_prime_field_integer(), 5000 % 127);
}

TEST(Field, ExtensionModulusIsDeterministic)
{
    auto a = make_extension<SmallModulus>(127, 8);
    auto b = make_extension<SmallModulus>(127, 8);
    EXPECT_EQ(a->modulus(), b->modulus());
    EXPECT_EQ(a->order(), ipow(127, 8));
}

TEST(Field, LeastModulusOverF5Squared)
{
    // Oracle: scan candidates by increasing c0 + 5 c1 and test for roots.
    long found0 = -1, found1 = -1;
    for (long idx = 0; idx < 25 && found0 < 0; ++idx) {
        long c0 = idx % 5, c1 = idx / 5;
        if (!quadratic_has_root(c0, c1, 5)) {
            found0 = c0;
            found1 = c1;
        }
    }
    ASSERT_EQ(found0, 2);
    ASSERT_EQ(found1, 0);
    auto F = make_extension<SmallModulus>(5, 2);
    const std::vector<std::uint64_t> expect{2, 0, 1};
    EXPECT_EQ(F->modulus(), expect);
}

TEST(Field, RejectsBadInput)
{
    EXPECT_THROW(make_extension<SmallModulus>(15, 2), FieldError);
    EXPECT_THROW(make_extension<SmallModulus>(7, 0), FieldError);
    EXPECT_THROW(make_extension<BigModulus>(2, 3), FieldError);
}

TEST(Field, ModuliForSeveralDegreesAreIrreducible)
{
    for (int r : {2, 3, 4, 5, 6, 8, 9, 12}) {
        auto F = make_extension<SmallModulus>(7, r);
        // x^{7^r} = x and no smaller subfield contains the generator
        auto t = F->generator();
        EXPECT_EQ(t.frobenius(r), t);
        for (int s = 1; s < r; ++s)
            EXPECT_NE(t.frobenius(s), t) << "r=" << r << " s=" << s;
    }
}

TEST(Field, InverseAndPowerLaws)
{
    auto F = make_extension<SmallModulus>(127, 8);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        auto x = F->random(rng);
        if (x.is_zero())
            continue;
        EXPECT_TRUE((x * x.inverse()).is_one());
        Integer a = rng.below(F->order()), b = rng.below(F->order());
        EXPECT_EQ(x.pow(a).pow(b), x.pow(a * b));
    }
}

TEST(Field, FrobeniusMatchesPowering)
{
    auto F = make_extension<SmallModulus>(5, 2);
    Rng rng(2);
    for (int i = 0; i < 25; ++i) {
        auto x = F->random(rng);
        EXPECT_EQ(x.frobenius(1), x.pow(5));
        EXPECT_EQ(x.frobenius(2), x);
    }
    auto G = make_extension<SmallModulus>(127, 8);
    for (int i = 0; i < 20; ++i) {
        auto x = G->random(rng);
        EXPECT_EQ(x.frobenius(3), x.pow(ipow(127, 3)));
        EXPECT_EQ(x.frobenius(8), x);
        auto c = G->from_integer(rng.below(std::uint64_t(127)));
        EXPECT_EQ(c.frobenius(5), c);
    }
}

TEST(Field, FrobeniusIsRingHomomorphism)
{
    auto F = make_extension<SmallModulus>(127, 8);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        auto x = F->random(rng), y = F->random(rng);
        EXPECT_EQ((x + y).frobenius(1), x.frobenius(1) + y.frobenius(1));
        EXPECT_EQ((x * y).frobenius(1), x.frobenius(1) * y.frobenius(1));
    }
}

TEST(Field, SquareRoots)
{
    for (int r : {1, 2, 3, 8}) {
        auto F = make_extension<SmallModulus>(127, r);
        Rng rng(4 + r);
        EXPECT_FALSE(F->nonresidue().is_square());
        for (int i = 0; i < 30; ++i) {
            auto x = F->random(rng);
            auto s = (x * x).sqrt();
            ASSERT_TRUE(s.has_value());
            EXPECT_EQ(*s * *s, x * x);
            auto n = x * x * F->nonresidue();
            if (!x.is_zero()) {
                EXPECT_FALSE(n.sqrt().has_value());
            }
        }
    }
}

TEST(Field, RootOfUnityOrderNine)
{
    auto F = make_extension<SmallModulus>(127, 1);
    auto z = primitive_root_of_unity(*F, 3, 2);
    EXPECT_TRUE(z.pow(9).is_one());
    EXPECT_FALSE(z.pow(3).is_one());
    // determinism
    EXPECT_EQ(z, primitive_root_of_unity(*F, 3, 2));
}

TEST(Field, RootOfUnityErrors)
{
    auto F = make_extension<SmallModulus>(127, 1);
    EXPECT_THROW(primitive_root_of_unity(*F, 5, 1), FieldError);
    EXPECT_TRUE(primitive_root_of_unity(*F, 5, 0).is_one());
}

TEST(Field, RootOfUnityInExtension)
{
    auto F = make_extension<SmallModulus>(127, 8);
    auto z = primitive_root_of_unity(*F, 5, 1);
    EXPECT_TRUE(z.pow(5).is_one());
    EXPECT_FALSE(z.is_one());
    auto G = make_extension<SmallModulus>(11, 5);
    auto w = primitive_root_of_unity(*G, 5, 2);
    EXPECT_TRUE(w.pow(25).is_one());
    EXPECT_FALSE(w.pow(5).is_one());
}

TEST(Field, DlogExamples)
{
    auto F = make_extension<SmallModulus>(101, 1);
    auto z = primitive_root_of_unity(*F, 5, 2);
    EXPECT_EQ(dlog_prime_power(z, F->one(), 5, 2), 0);
    EXPECT_EQ(dlog_prime_power(z, z, 5, 2), 1);
    // oracle: exhaustive search over exponents 0..24
    auto y = z.pow(17);
    int brute = -1;
    auto acc = F->one();
    for (int e = 0; e < 25; ++e) {
        if (acc == y) {
            brute = e;
            break;
        }
        acc *= z;
    }
    ASSERT_EQ(brute, 17);
    EXPECT_EQ(dlog_prime_power(z, y, 5, 2), 17);
    EXPECT_THROW(dlog_prime_power(z, F->from_integer(3), 5, 2), FieldError);
}

TEST(Field, DlogRandomRoundTrip)
{
    auto G = make_extension<SmallModulus>(11, 5);
    auto w = primitive_root_of_unity(*G, 5, 2);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Integer e = rng.below(Integer(25));
        EXPECT_EQ(dlog_prime_power(w, w.pow(e), 5, 2), e);
    }
    auto F = make_extension<SmallModulus>(109, 1); // 108 = 4 * 27
    auto z = primitive_root_of_unity(*F, 3, 3);
    for (int i = 0; i < 100; ++i) {
        Integer e = rng.below(Integer(27));
        EXPECT_EQ(dlog_prime_power(z, z.pow(e), 3, 3), e);
    }
}

TEST(Field, BigModulusAgreesWithSmall)
{
    auto S = make_extension<SmallModulus>(127, 4);
    auto B = make_extension<BigModulus>(127, 4);
    std::vector<Integer> mods;
    for (auto c : S->modulus())
        mods.push_back(Integer(static_cast<unsigned long>(c)));
    EXPECT_EQ(B->modulus(), mods);
    Rng r1(9), r2(9);
    for (int i = 0; i < 20; ++i) {
        auto a = S->random(r1), b = S->random(r1);
        auto c = B->random(r2), d = B->random(r2);
        EXPECT_EQ((a * b.inverse()).to_integers(), (c * d.inverse()).to_integers());
    }
}

TEST(Field, LargePrimeExtension)
{
    const Integer p = (Integer(1) << 127) - 1;
    auto F = make_extension<BigModulus>(p, 3);
    Rng rng(11);
    auto x = F->random(rng);
    EXPECT_EQ(x.frobenius(1), x.pow(p));
    auto s = (x * x).sqrt();
    ASSERT_TRUE(s);
    EXPECT_EQ(*s * *s, x * x);
}
