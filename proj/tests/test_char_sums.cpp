#include <gtest/gtest.h>

#include "ffbias/char_sums.hpp"

using namespace ffbias;

namespace {

// Direct pi_k(n, chi) from the factorization of every monic polynomial.
std::vector<cplx> brute(const Character& chi, unsigned n) {
    std::vector<cplx> out(n + 1, 0.0);
    for (const auto& f : iter_monic(chi.group().field_size(), n)) out[omega(f)] += chi.eval(f).to_complex();
    return out;
}

} // namespace

TEST(CharSums, PrimeSumsMatchEnumeration) {
    for (const char* m : {"t^2+1", "t^3+2*t+1"}) {
        const auto chis = characters(unit_group(parse_poly(m, 3)));
        for (const auto& chi : chis) {
            const auto ps = prime_char_sums(l_family(chi), 6);
            for (unsigned e = 1; e <= 6; ++e)
                for (u64 j = 0; j < chi.order(); ++j) {
                    cplx s = 0;
                    const auto cj = chi.pow(j);
                    for (const auto& p : iter_monic(3, e))
                        if (is_irreducible(p)) s += cj.eval(p).to_complex();
                    EXPECT_LT(std::abs(ps.value(e, j) - s), 1e-8) << m << " chi " << chi.index() << " e " << e << " j " << j;
                }
        }
    }
}

TEST(CharSums, EnumerationMatchesFactorization) {
    const auto chis = characters(unit_group(parse_poly("t^3+2*t+1", 3)));
    for (u64 i : {0, 1, 5, 13}) {
        for (unsigned n = 1; n <= 6; ++n) {
            const auto t = pi_k_enumerate(chis[i], n, kDefaultEnumerationCap, 2);
            const auto b = brute(chis[i], n);
            for (unsigned k = 0; k <= n; ++k) EXPECT_LT(std::abs(t.raw(k) - b[k]), 1e-9) << i << " " << n << " " << k;
        }
    }
}

TEST(CharSums, AnalyticMatchesEnumeration) {
    const auto chis = characters(unit_group(parse_poly("t^4+t+2", 3)));
    for (u64 i : {0, 1, 40, 41}) {
        const auto an = pi_k_analytic_all(l_family(chis[i]), 9);
        for (unsigned n = 1; n <= 9; ++n) {
            const auto en = pi_k_enumerate(chis[i], n, kDefaultEnumerationCap, 1);
            for (unsigned k = 0; k <= n; ++k) EXPECT_LT(std::abs(an[n].raw(k) - en.raw(k)), 1e-6) << i << " " << n << " " << k;
        }
    }
}

TEST(CharSums, ThreadCountDoesNotChangeResults) {
    const auto chi = characters(unit_group(parse_poly("t^2+1", 3)))[1];
    const auto a = pi_k_enumerate(chi, 9, kDefaultEnumerationCap, 1);
    const auto b = pi_k_enumerate(chi, 9, kDefaultEnumerationCap, 3);
    EXPECT_EQ(a.exact, b.exact);
}

TEST(CharSums, ColumnSumVanishes) {
    // sum_k pi_k(n, chi) = sum over all monic f of chi(f) = 0 once n >= deg d
    const auto chis = characters(unit_group(parse_poly("t^3+2*t+1", 3)));
    for (const auto& chi : chis) {
        if (chi.is_principal()) continue;
        const auto an = pi_k_analytic_all(l_family(chi), 60);
        for (unsigned n = 3; n <= 60; ++n) EXPECT_LT(std::abs(an[n].total_scaled()), 1e-9) << n;
    }
}

TEST(CharSums, MzSeriesMatchesTables) {
    const auto chi = characters(unit_group(parse_poly("t^2+1", 3)))[1];
    const auto fam = l_family(chi);
    const auto tables = pi_k_analytic_all(fam, 40);
    for (cplx z : {cplx(-0.7, 0), cplx(0.4, 0.3)}) {
        const auto m = m_z_series_scaled(fam, z, 40);
        for (unsigned n = 1; n <= 40; ++n) EXPECT_LT(std::abs(m[n] - tables[n].m_z_scaled(z)), 1e-12 * std::max(1.0, std::abs(m[n]))) << n;
    }
}

TEST(CharSums, NormalizationRoundTrip) {
    const auto chi = characters(unit_group(parse_poly("t^2+1", 3)))[1];
    const auto t = pi_k_analytic(l_family(chi), 30);
    const auto nt = normalize(t);
    for (unsigned k = 1; k <= 30; ++k) EXPECT_LT(std::abs(denormalize(nt, k, 3) - t.raw(k)), 1e-9 * std::max(1.0, std::abs(t.raw(k))));
    EXPECT_DOUBLE_EQ(normalization_factor(10, 1), -10.0);
    EXPECT_THROW(normalization_factor(10, 0), std::invalid_argument);
}

TEST(CharSums, Budgets) {
    const auto chi = characters(unit_group(parse_poly("t^2+1", 3)))[1];
    EXPECT_THROW(pi_k_enumerate(chi, 10, 1000), BudgetError);
    EXPECT_THROW(pi_k_analytic_all(l_family(chi), 301), BudgetError);
}
