#include <gtest/gtest.h>

#include "ffbias/l_functions.hpp"

using namespace ffbias;

namespace {

struct Case {
    const char* modulus;
    u32 q;
};
const Case kCases[] = {{"t^2+1", 3}, {"t^2+2", 3}, {"t^3+2*t+1", 3}, {"t^4+t+2", 3}, {"t^3+t+1", 5}, {"t^3", 3}};

// Coefficients of prod_{p, deg p <= N} (1 - chi(p) u^deg p)^{-1} mod u^{N+1}, from enumerated irreducibles.
std::vector<cplx> euler_oracle(const Character& chi, unsigned N) {
    const u32 q = chi.group().field_size();
    std::vector<cplx> c(N + 1, 0.0);
    c[0] = 1;
    for (unsigned e = 1; e <= N; ++e)
        for (const auto& p : iter_monic(q, e)) {
            if (!is_irreducible(p)) continue;
            const cplx x = chi.eval(p).to_complex();
            if (x == 0.0) continue;
            // multiply by 1/(1 - x u^e) = sum_j x^j u^{je}
            for (unsigned m = e; m <= N; ++m) c[m] += x * c[m - e];
        }
    return c;
}

} // namespace

TEST(LFunctions, CoefficientsMatchEulerProduct) {
    for (const auto& cs : kCases) {
        const auto g = unit_group(parse_poly(cs.modulus, cs.q));
        const auto deg = static_cast<unsigned>(g->modulus().degree());
        for (const auto& chi : characters(g)) {
            if (chi.is_principal()) continue;
            const auto l = l_function(chi);
            const auto oracle = euler_oracle(chi, deg + 1);
            ASSERT_LE(l.degree(), static_cast<int>(deg) - 1);
            for (unsigned m = 0; m <= deg + 1; ++m) {
                const cplx mine = m < l.coeffs.size() ? l.coeffs[m] : 0.0;
                EXPECT_LT(std::abs(mine - oracle[m]), 1e-9) << cs.modulus << " chi " << chi.index() << " m " << m;
            }
        }
    }
}

TEST(LFunctions, RootsReconstructAndSatisfyRh) {
    for (const auto& cs : kCases) {
        const auto g = unit_group(parse_poly(cs.modulus, cs.q));
        const double sq = std::sqrt(static_cast<double>(cs.q));
        for (const auto& chi : characters(g)) {
            if (chi.is_principal()) continue;
            const auto l = l_function(chi);
            EXPECT_LT(l.reconstruction_residual, 1e-10);
            EXPECT_LT(l.rh_deviation, 1e-9);
            unsigned total = 0;
            for (const auto& r : l.roots) {
                total += r.multiplicity;
                EXPECT_LT(std::abs(l.eval(r.zero())), 1e-8 * std::pow(sq, l.degree()));
                const double a = std::abs(r.value);
                EXPECT_TRUE(std::abs(a - sq) < 1e-9 || std::abs(a - 1) < 1e-9);
                EXPECT_EQ(r.kind == RootKind::Trivial, std::abs(a - 1) < 1e-9);
            }
            EXPECT_EQ(static_cast<int>(total), l.degree());
            // m_+ counts zeros at u = 1/sqrt q, m_- at u = -1/sqrt q
            EXPECT_EQ(l.m_plus > 0, std::abs(l.eval(1 / sq)) < 1e-9);
            EXPECT_EQ(l.m_minus > 0, std::abs(l.eval(-1 / sq)) < 1e-9);
        }
    }
}

TEST(LFunctions, BranchPowerAtIntegers) {
    const auto g = unit_group(parse_poly("t^3+2*t+1", 3));
    for (const auto& chi : characters(g)) {
        if (chi.is_principal()) continue;
        const auto l = l_function(chi);
        const BranchPower bp(l);
        for (cplx u : {cplx(0.1, 0.05), cplx(-0.2, 0.1), cplx(0.3, -0.2)})
            for (int z : {1, 2, 3}) EXPECT_LT(std::abs(bp(u, z) - std::pow(l.eval(u), z)), 1e-12) << z;
    }
}

TEST(LFunctions, CRhoIsMinusRhoTimesDerivative) {
    for (const auto& cs : kCases) {
        const auto g = unit_group(parse_poly(cs.modulus, cs.q));
        for (const auto& chi : characters(g)) {
            if (chi.is_principal()) continue;
            const auto l = l_function(chi);
            for (std::size_t i = 0; i < l.roots.size(); ++i) {
                if (l.roots[i].multiplicity != 1) continue;
                const cplx rho = l.roots[i].zero();
                const cplx expect = -rho * l.eval_derivative(rho);
                EXPECT_LT(std::abs(c_rho(l, i) - expect), 1e-9 * std::max(1.0, std::abs(expect)));
                EXPECT_LT(std::abs(c_rho_z(l, i, 1.0) - c_rho(l, i)), 1e-9 * std::max(1.0, std::abs(expect)));
                EXPECT_EQ(find_root(l, rho), i);
            }
        }
    }
}

TEST(LFunctions, NewtonIdentities) {
    const auto g = unit_group(parse_poly("t^4+t+2", 3));
    const double sq = std::sqrt(3.0);
    for (const auto& chi : characters(g)) {
        if (chi.is_principal()) continue;
        const auto l = l_function(chi);
        const auto c = log_derivative_coeffs_scaled(l, 12);
        for (unsigned m = 1; m <= 12; ++m) {
            cplx s = 0;
            for (const auto& r : l.roots) s -= static_cast<double>(r.multiplicity) * std::pow(r.value / sq, static_cast<int>(m));
            EXPECT_LT(std::abs(c[m] - s), 1e-9) << m;
        }
    }
}

TEST(LFunctions, PrincipalDensity) {
    // L(u, chi_0) = prod_{p | d} (1 - u^deg p) / (1 - q u)
    const auto pl = l_principal(parse_poly("t^3", 3));
    EXPECT_NEAR(pl.density(), 2.0 / 3.0, 1e-15);
    const cplx u(0.1, 0.05);
    EXPECT_LT(std::abs(pl.eval(u) - (1.0 - u) / (1.0 - 3.0 * u)), 1e-14);
}
