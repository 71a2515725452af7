#include <gtest/gtest.h>

#include "ffbias/asymptotics.hpp"

using namespace ffbias;

TEST(Special, ReciprocalGamma) {
    for (double x : {0.3, 0.5, 1.0, 2.5, 7.0, -0.5, -1.7, -3.2}) EXPECT_NEAR(rgamma(x), 1 / std::tgamma(x), 1e-13 * std::abs(1 / std::tgamma(x))) << x;
    for (double x : {0.0, -1.0, -2.0, -5.0}) EXPECT_EQ(rgamma(x), 0.0);
    // 1/Gamma(z) 1/Gamma(1-z) = sin(pi z)/pi off the real axis
    const cplx z(0.3, 0.8);
    EXPECT_LT(std::abs(rgamma(z) * rgamma(1.0 - z) - std::sin(std::numbers::pi * z) / std::numbers::pi), 1e-13);
}

TEST(Special, CircleCoefficient) {
    // [z^k] e^{2z} = 2^k / k!
    for (unsigned k : {0u, 1u, 5u, 12u})
        EXPECT_NEAR(circle_coefficient([](cplx z) { return std::exp(2.0 * z); }, k, 1.0).real(), std::pow(2.0, k) / std::tgamma(k + 1.0), 1e-14);
}

TEST(Hankel, ApproachesReciprocalGamma) {
    for (double z : {-0.5, 0.3, 1.5}) {
        const auto h = hankel_integral_detail(z, 1e4, 0.5);
        EXPECT_LT(std::abs(h.value - rgamma(-z)), 2e-4 * std::max(1.0, std::abs(z))) << z;
        EXPECT_LT(h.quad_error, 1e-10);
    }
    // entire in z: integer points reduce to a residue, n-independent for z = -1
    EXPECT_LT(std::abs(hankel_integral(-1.0, 50.0) - 1.0), 1e-13);
    EXPECT_THROW(hankel_integral(0.3, 1.0), std::domain_error);
}

TEST(Lemmas, Lemma2WithReciprocalGamma) {
    const ComplexFn f = [](cplx z) { return rgamma(1.0 + z); };
    const double a = 2;
    for (double n : {1e6, 1e8}) {
        const double ln = std::log(n);
        for (unsigned k = 1; k <= a * ln; k += 3) {
            const cplx q = lemma2_quadrature(a, f, n, k);
            const cplx m = extract_coeff_lemma2(a, f, n, k);
            EXPECT_LT(std::abs(q / m - 1.0), k / (ln * ln)) << n << " " << k;
        }
    }
    EXPECT_THROW(extract_coeff_lemma2(1, f, 1e6, 100), std::out_of_range);
}

TEST(Lemmas, SaddleRadius) {
    for (unsigned k : {1u, 10u, 40u}) {
        const auto p = saddle_params(0.5, 0.5, k, std::log(1e6));
        EXPECT_GT(p.r, 0);
        EXPECT_LT(std::abs(p.residual()), 1e-15);
    }
    EXPECT_THROW(extract_coeff_lemma3(0.5, 0.5, [](cplx z) { return std::exp(z); }, 1e6, 5, Lemma3Part::A), std::out_of_range);
}

TEST(Bias, Constants) {
    const auto c = solve_constants();
    // high-precision reference values of the roots
    EXPECT_NEAR(c.beta, 0.363757238379119, 1e-14);
    EXPECT_NEAR(c.gamma, 1.202097170841018, 1e-13);
    EXPECT_LT(c.beta_residual, 1e-15);
}

TEST(Bias, FunctionValues) {
    for (double a : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const auto p = bias_function(a);
        EXPECT_NEAR(4 * a * p.s * p.s + p.s - 1, 0.0, 1e-15);  // s solves 4 a s^2 + s = 1
    }
    EXPECT_NEAR(bias_function(1.5).s, 1.0 / 3.0, 1e-16);
    EXPECT_NEAR(bias_function(1.5).b, -0.5 + 1.5 * std::log(1.5), 1e-15);
    EXPECT_LT(bias_function(1.0).b, 0);
    EXPECT_GT(bias_function(1.4).b, 0);
    EXPECT_THROW(bias_function(0), std::domain_error);
}

namespace {

CharacterModel model_of(const char* modulus, u64 index) { return CharacterModel(characters(unit_group(parse_poly(modulus, 3)))[index]); }

} // namespace

TEST(Formulas, HPlusMinusIsRealAndScalesWithR) {
    const auto m = model_of("t^4+t+2", 40);
    ASSERT_TRUE(m.real());
    for (double alpha : {1.0, 1.4}) {
        const double r = (-0.5 + std::sqrt(0.25 + 4 * alpha)) / 2;
        for (int sign : {+1, -1}) {
            const cplx h = h_pm(m, alpha, r, sign, false);
            EXPECT_EQ(h.imag(), 0.0);
            EXPECT_GT(h.real(), 0.0);
            EXPECT_NEAR(h_pm(m, alpha, r, sign, true).real() * r, h.real(), 1e-14 * h.real());
        }
    }
}

TEST(Formulas, Theorem4SignOfBias) {
    const auto m = model_of("t^4+t+2", 40);
    const auto tables = pi_k_analytic_all(m.family(), 200);
    for (unsigned n : {100u, 200u}) {
        for (double c : {1.0, 1.4}) {
            const unsigned k = static_cast<unsigned>(std::lround(c * std::log(n)));
            const auto rep = thm4_eval(m, tables[n], k);
            ASSERT_TRUE(rep.bias_eval);
            const auto& be = *rep.bias_eval;
            EXPECT_NEAR(be.r * be.r + be.r / 2, be.alpha, 1e-14);
            EXPECT_EQ(be.b > 0, be.alpha > solve_constants().gamma);
            EXPECT_GT(be.bias_term.real(), 0.0);
        }
    }
}

TEST(Formulas, HypothesisChecks) {
    const auto real = model_of("t^4+t+2", 40);
    const auto cplx_model = model_of("t^2+1", 1);
    const auto tr = pi_k_analytic_all(real.family(), 50);
    const auto tc = pi_k_analytic_all(cplx_model.family(), 50);
    EXPECT_THROW(thm1_main(real, tr[50], 2), HypothesisError);
    EXPECT_THROW(thm3_main(cplx_model, tc[50], 1, Thm3Variant::First), HypothesisError);
    EXPECT_THROW(CharacterModel(characters(unit_group(parse_poly("t^2+1", 3)))[0]), std::invalid_argument);
}

TEST(Formulas, Proposition1AtSmallZ) {
    // prediction error shrinks like 1/n relative to n^{-1-Re(z) m}
    const auto m = model_of("t^2+1", 1);
    const cplx z(0.4, 0.2);
    const auto exact = m_z_series_scaled(m.family(), z, 200);
    const double e1 = std::abs(exact[50] - prop1_Mz(m, z, 50).total) * std::pow(50.0, 1 + z.real());
    const double e2 = std::abs(exact[200] - prop1_Mz(m, z, 200).total) * std::pow(200.0, 1 + z.real());
    EXPECT_LT(e2, e1 / 2);
}
