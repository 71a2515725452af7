#include <gtest/gtest.h>

#include "ffbias/euler.hpp"

using namespace ffbias;

namespace {

struct Fixture {
    LFamily fam;
    EulerData data;
    Fixture(const char* modulus, u64 index, unsigned d_max)
        : fam(l_family(characters(unit_group(parse_poly(modulus, 3)))[index])), data(fam, d_max) {}
};

} // namespace

TEST(Euler, TrivialExponents) {
    Fixture f("t^2+1", 1, 24);
    for (cplx u : {cplx(0.2, 0.1), cplx(-0.3, 0.2), cplx(0.5, 0)}) {
        EXPECT_LT(std::abs(euler_E(f.data, 1.0, u).value - 1.0), 1e-15);
        EXPECT_LT(std::abs(euler_E(f.data, 0.0, u).value - 1.0), 1e-15);
    }
}

TEST(Euler, CutoffDoublingWithinTailBound) {
    Fixture f("t^3+2*t+1", 1, 24);
    const double rho = 1 / std::sqrt(3.0);
    for (cplx z : {cplx(-0.7, 0), cplx(0.5, 0.3), cplx(1.4, 0)})
        for (cplx u : {cplx(rho, 0), std::polar(rho, 1.0), cplx(0.4, 0.1)}) {
            const auto lo = euler_E(f.data, z, u, 12), hi = euler_E(f.data, z, u, 24);
            EXPECT_LE(std::abs(lo.value - hi.value), lo.tail_bound * 1.0000001 + 1e-15) << z << " " << u;
            EXPECT_LT(hi.tail_bound, lo.tail_bound);
        }
}

TEST(Euler, DirectProductAgreesInsideTheDisc) {
    Fixture f("t^3+2*t+1", 1, 40);
    const double au = std::pow(3.0, -0.55);
    for (double th : {0.3, 1.7, 2.9})
        for (cplx z : {cplx(-0.5, 0), cplx(0.8, 0.2)}) {
            const cplx u = std::polar(au, th);
            const auto a = euler_F_direct(f.data, z, u, 40);
            const auto b = euler_F(f.data, z, u, 40);
            EXPECT_LT(std::abs(a.value - b.value), 1e-8) << th << " " << z;
        }
}

TEST(Euler, PrimeValueCountsMatchEnumeration) {
    Fixture f("t^2+1", 1, 8);
    const auto& chi = f.fam.chi;
    for (unsigned e = 1; e <= 6; ++e) {
        std::vector<long long> direct(chi.order(), 0);
        for (const auto& p : iter_monic(3, e))
            if (is_irreducible(p) && chi.value_class(p) >= 0) ++direct[static_cast<u64>(chi.value_class(p))];
        EXPECT_EQ(f.data.counts().count[e], direct) << e;
    }
}

TEST(Euler, PPlusMinusMatchesEnumeratedProduct) {
    Fixture f("t^4+t+2", 40, 8);
    const auto& chi = f.fam.chi;
    ASSERT_EQ(chi.order(), 2u);
    const unsigned D = 8;
    for (double r : {0.3, 0.7, 1.2})
        for (int sign : {+1, -1}) {
            const double w = r * (r + 1) / 2;
            double log_p = 0;
            for (unsigned e = 1; e <= D; ++e) {
                const double t = std::pow(sign, e) * std::pow(3.0, -0.5 * e);
                const double local = w * std::log1p(-std::pow(3.0, -static_cast<double>(e)));
                for (const auto& p : iter_monic(3, e)) {
                    if (!is_irreducible(p)) continue;
                    const auto v = chi.eval(p);
                    if (v.is_zero()) {
                        log_p += local;
                        continue;
                    }
                    const double x = v.is_one() ? t : -t;
                    log_p += -std::log1p(r * x) - r * std::log1p(-x) + local;
                }
            }
            const auto mine = euler_P_pm(f.data, r, sign, D);
            EXPECT_EQ(mine.value.imag(), 0.0);
            EXPECT_NEAR(mine.value.real(), std::exp(log_p), 1e-12 * std::exp(log_p)) << r << " " << sign;
        }
}

TEST(Euler, Errors) {
    Fixture f("t^2+1", 1, 12);
    EXPECT_THROW(euler_E(f.data, 0.5, cplx(0.2, 0), 13), BudgetError);
    EXPECT_THROW(euler_E(f.data, 0.5, cplx(0.9, 0), 12), std::domain_error);
    EXPECT_THROW(euler_P_pm(f.data, 0.5, 1, 12), std::invalid_argument);
}
