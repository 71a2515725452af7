#include <random>
#include <set>

#include <gtest/gtest.h>

#include "ffbias/characters.hpp"

using namespace ffbias;

namespace {

const char* kModuli[] = {"t^2+1", "t^2+2", "t^3+2*t+1", "t^4+t+2", "t^3", "t^2+2*t+1"};

std::vector<long long> class_counts(const std::vector<RootOfUnity>& vals, u64 big) {
    std::vector<long long> c(big, 0);
    for (const auto& v : vals)
        if (!v.is_zero()) ++c[v.numerator() * (big / v.denominator())];
    return c;
}

} // namespace

TEST(Characters, CyclotomicPolynomials) {
    EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<long long>{-1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(4), (std::vector<long long>{1, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<long long>{1, -1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<long long>{1, 0, -1, 0, 1}));
    EXPECT_TRUE(is_cyclotomic_zero({1, 1, 1}));
    EXPECT_TRUE(is_cyclotomic_zero({2, 1, 2, 1}));
    EXPECT_FALSE(is_cyclotomic_zero({1, 1, 0}));
    EXPECT_FALSE(is_cyclotomic_zero({1, 0, 0, 0}));
}

TEST(Characters, GroupOrderIsEulerPhi) {
    for (const char* m : kModuli) {
        const auto d = parse_poly(m, 3);
        const auto g = unit_group(d);
        u64 units = 0;
        for (u64 c = 0; c < g->residue_count(); ++c) units += g->log_index_of_code(c) != UnitGroup::kNotUnit;
        EXPECT_EQ(g->order(), units) << m;
        EXPECT_EQ(euler_phi(d), units) << m;
        u64 prod = 1;
        for (const auto& gen : g->generators()) prod *= gen.order;
        EXPECT_EQ(prod, g->order());
    }
}

TEST(Characters, Multiplicativity) {
    std::mt19937_64 rng(12345);
    for (const char* m : kModuli) {
        const auto d = parse_poly(m, 3);
        const auto g = unit_group(d);
        const auto chis = characters(g);
        std::uniform_int_distribution<u64> pick(0, monic_count(3, 5) - 1);
        for (int trial = 0; trial < 1000; ++trial) {
            const Poly a = monic_at(3, 5, pick(rng)), b = monic_at(3, 5, pick(rng));
            const auto& chi = chis[trial % chis.size()];
            ASSERT_EQ(chi.eval(a * b), chi.eval(a) * chi.eval(b)) << m;
            ASSERT_EQ(chi.eval(a), chi.eval(a % d));
        }
    }
}

TEST(Characters, Orthogonality) {
    for (const char* m : kModuli) {
        const auto g = unit_group(parse_poly(m, 3));
        const auto chis = characters(g);
        const u64 big = g->exponent();
        for (const auto& chi : chis) {
            std::vector<RootOfUnity> vals;
            for (u64 c = 0; c < g->residue_count(); ++c) vals.push_back(chi.eval_residue_code(c));
            auto counts = class_counts(vals, big);
            if (chi.is_principal()) counts[0] -= static_cast<long long>(g->order());
            EXPECT_TRUE(is_cyclotomic_zero(counts)) << m << " chi " << chi.index();
        }
        for (u64 c = 0; c < g->residue_count(); ++c) {
            if (g->log_index_of_code(c) == UnitGroup::kNotUnit) continue;
            std::vector<RootOfUnity> vals;
            for (const auto& chi : chis) vals.push_back(chi.eval_residue_code(c));
            auto counts = class_counts(vals, big);
            if (g->residue_at(c).is_one()) counts[0] -= static_cast<long long>(g->order());
            EXPECT_TRUE(is_cyclotomic_zero(counts)) << m << " residue " << c;
        }
    }
}

TEST(Characters, ConjugationAndReality) {
    for (const char* m : kModuli) {
        const auto g = unit_group(parse_poly(m, 3));
        const auto chis = characters(g);
        EXPECT_TRUE(chis[0].is_principal());
        std::set<std::vector<u64>> distinct;
        for (const auto& chi : chis) {
            distinct.insert(chi.exponents());
            const auto cc = chi.conj();
            for (u64 c = 0; c < g->residue_count(); ++c) ASSERT_EQ(cc.eval_residue_code(c), chi.eval_residue_code(c).conj());
            // real iff every value is +-1 or 0
            bool pm1 = true;
            for (u64 c = 0; c < g->residue_count(); ++c) {
                const auto v = chi.eval_residue_code(c);
                pm1 = pm1 && (v.is_zero() || v.denominator() <= 2);
            }
            EXPECT_EQ(chi.is_real(), pm1);
            EXPECT_EQ(chi.pow(chi.order()).is_principal(), true);
            EXPECT_EQ(Character::from_index(g, chi.index()), chi);
        }
        EXPECT_EQ(distinct.size(), chis.size());
    }
}

TEST(Characters, IndexingIsDeterministic) {
    const auto a = characters(unit_group(parse_poly("t^3+2*t+1", 3)));
    const auto b = characters(unit_group(parse_poly("t^3+2*t+1", 3)));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].exponents(), b[i].exponents());
}

TEST(Characters, TableBoundIsABudget) {
    EXPECT_THROW(unit_group(parse_poly("t^4+t+2", 3), 10), BudgetError);
}
