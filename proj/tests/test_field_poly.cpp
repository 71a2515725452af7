#include <set>

#include <gtest/gtest.h>

#include "ffbias/field_poly.hpp"

using namespace ffbias;

namespace {

// Smallest monic divisor of degree >= 1 by trial division (the oracle).
Poly smallest_factor(const Poly& f) {
    const u32 q = f.modulus();
    for (unsigned d = 1; 2 * d <= static_cast<unsigned>(f.degree()); ++d)
        for (const auto& g : iter_monic(q, d))
            if ((f % g).is_zero()) return g;
    return f;
}

unsigned omega_trial(Poly f) {
    unsigned k = 0;
    while (f.degree() > 0) {
        f = f / smallest_factor(f);
        ++k;
    }
    return k;
}

} // namespace

TEST(FieldPoly, ArithmeticRoundTrip) {
    const Poly a = parse_poly("2*t^3+t+2", 3), b = parse_poly("t^2+1", 3);
    const auto [qt, r] = divmod(a, b);
    EXPECT_EQ(qt * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    EXPECT_EQ(gcd(a * b, b), b);
}

TEST(FieldPoly, FactorMatchesTrialDivision) {
    for (u32 q : {2u, 3u, 5u}) {
        const unsigned top = q == 5 ? 4 : 6;
        for (unsigned n = 1; n <= top; ++n)
            for (const auto& f : iter_monic(q, n)) {
                const auto fac = factor(f);
                ASSERT_EQ(fac.expand(q), f) << to_string(f);
                ASSERT_EQ(fac.omega(), omega_trial(f)) << to_string(f);
                ASSERT_EQ(omega(f), fac.omega());
                for (const auto& p : fac.factors) ASSERT_EQ(smallest_factor(p.poly), p.poly) << to_string(p.poly);
                ASSERT_EQ(is_irreducible(f), smallest_factor(f) == f) << to_string(f);
            }
    }
}

TEST(FieldPoly, IrreducibleCountsMatchEnumeration) {
    for (u32 q : {2u, 3u, 5u, 7u})
        for (unsigned e = 1; e <= (q <= 3 ? 7u : 4u); ++e) {
            u64 c = 0;
            for (const auto& f : iter_monic(q, e)) c += is_irreducible(f);
            EXPECT_EQ(count_irreducibles(q, e), c) << "q=" << q << " e=" << e;
        }
}

TEST(FieldPoly, DivisorSumIdentity) {
    // sum_{d | n} d pi(d) = q^n
    for (u32 q : {2u, 3u, 5u, 9973u})
        for (unsigned n = 1; n <= 4; ++n) {
            u64 s = 0;
            for (unsigned d = 1; d <= n; ++d)
                if (n % d == 0) s += d * count_irreducibles(q, d);
            EXPECT_EQ(s, monic_count(q, n));
        }
}

TEST(FieldPoly, MonicIndexingIsABijection) {
    std::set<std::string> seen;
    for (u64 i = 0; i < monic_count(3, 3); ++i) {
        const Poly f = monic_at(3, 3, i);
        EXPECT_TRUE(f.is_monic());
        EXPECT_EQ(f.degree(), 3);
        seen.insert(to_string(f));
    }
    EXPECT_EQ(seen.size(), 27u);
}

TEST(FieldPoly, TextFormat) {
    for (const char* s : {"t^2+1", "2*t^3+t+2", "t", "1", "t^4+t+2"}) EXPECT_EQ(to_string(parse_poly(s, 3)), s);
    EXPECT_EQ(to_string(parse_poly(" 2 * t ^ 3 + t + 2 ", 3)), "2*t^3+t+2");
    EXPECT_EQ(to_string(parse_poly("t+t^3", 3)), "t^3+t");
    for (const char* bad : {"", "t^2+3", "t^2++1", "t^2+", "x^2", "2*", "t^2+t^2", "0*t"}) EXPECT_THROW(parse_poly(bad, 3), ParseError) << bad;
    EXPECT_THROW(parse_poly("t", 4), std::invalid_argument);
}
