#ifndef FFBIAS_ASYMPTOTICS_HPP
#define FFBIAS_ASYMPTOTICS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "char_sums.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "l_functions.hpp"
#include "special.hpp"

namespace ffbias {

using ComplexFn = std::function<cplx(cplx)>;

// ---------------------------------------------------------------------------
// Hankel integral (1/2 pi i) int_H w^z (1 - w/n)^{-(n+1)} dw, H = unit circle plus
// the two sides of the ray [-n delta, -1].

struct HankelResult {
    cplx value;
    cplx circle;
    cplx rays;
    double quad_error = 0;
};

namespace detail {

// log(1 + x) for complex x, accurate for small |x|
inline cplx clog1p(cplx x) {
    if (std::abs(x) < 0.25) {
        cplx sum = 0, p = x;
        for (unsigned m = 1; m < 80; ++m) {
            const cplx term = p / static_cast<double>(m);
            sum += (m % 2 ? term : -term);
            if (std::abs(term) < 1e-19 * std::abs(sum)) break;
            p *= x;
        }
        return sum;
    }
    return std::log(1.0 + x);
}

} // namespace detail

inline HankelResult hankel_integral_detail(cplx z, double n, double delta) {
    if (!(delta > 0)) throw std::domain_error("hankel_integral: delta must be positive");
    if (!(n >= 2)) throw std::domain_error("hankel_integral: n must be >= 2");
    if (n * delta <= 1) throw std::domain_error("hankel_integral: n delta must exceed the unit circle");
    HankelResult out;
    double err1 = 0, err2 = 0;
    // circle: (1/2 pi) int e^{i(z+1) th} (1 - e^{i th}/n)^{-(n+1)} dth
    out.circle = integrate(
                     [&](double th) {
                         const cplx w = std::polar(1.0, th);
                         return std::exp(cplx(0, 1) * (z + 1.0) * th - (n + 1) * detail::clog1p(-w / n));
                     },
                     -std::numbers::pi, std::numbers::pi, 1e-14, &err1) /
                 (2 * std::numbers::pi);
    // rays: -(sin pi z / pi) int_1^{n delta} x^z (1 + x/n)^{-(n+1)} dx, on geometric panels
    const cplx s = detail::sin_pi(z);
    cplx ray = 0;
    if (s != 0.0) {
        const double end = n * delta;
        for (double a = 1; a < end;) {
            const double b = std::min(2 * a, end);
            double e = 0;
            ray += integrate([&](double x) { return std::exp(z * std::log(x) - (n + 1) * std::log1p(x / n)); }, a, b, 1e-14, &e);
            err2 += e;
            a = b;
        }
    }
    out.rays = -s / std::numbers::pi * ray;
    out.value = out.circle + out.rays;
    out.quad_error = err1 / (2 * std::numbers::pi) + std::abs(s) / std::numbers::pi * err2;
    return out;
}

inline cplx hankel_integral(cplx z, double n, double delta = 0.5) { return hankel_integral_detail(z, n, delta).value; }

// ---------------------------------------------------------------------------
// Saddle-point coefficient extraction.

struct SaddleParams {
    double a = 0, b = 0;
    unsigned k = 0;
    double log_n = 0;
    double r = 0;

    // r^2 + (b/2a) r - k/(2a log n)
    double residual() const { return r * r + b / (2 * a) * r - k / (2 * a * log_n); }
};

inline SaddleParams saddle_params(double a, double b, unsigned k, double log_n) {
    if (!(a > 0) || b < 0 || !(log_n > 0)) throw std::invalid_argument("saddle_params: need a > 0, b >= 0, log n > 0");
    SaddleParams p{a, b, k, log_n, 0};
    const double B = b / (2 * a), C = k / (2 * a * log_n);
    p.r = 2 * C / (B + std::sqrt(B * B + 4 * C));  // positive root, no cancellation
    return p;
}

inline double log_factorial(unsigned k) { return std::lgamma(k + 1.0); }

// (a log n)^k / k! f(k / (a log n))
inline cplx extract_coeff_lemma2(double a, const ComplexFn& f, double n, unsigned k, double A = 1.0) {
    const double ln = std::log(n);
    if (!(a > 0)) throw std::invalid_argument("lemma 2: a must be positive");
    if (k < 1 || k > a * A * ln) throw std::out_of_range("lemma 2: k outside 1 <= k <= a A log n");
    const double x = a * ln;
    return std::exp(k * std::log(x) - log_factorial(k)) * f(k / x);
}

// [z^k] n^{az} f(z) by trapezoid quadrature on |z| = k/(a log n)
inline cplx lemma2_quadrature(double a, const ComplexFn& f, double n, unsigned k, unsigned nodes = 512) {
    const double ln = std::log(n);
    return circle_coefficient([&](cplx z) { return std::exp(a * ln * z) * f(z); }, k, k / (a * ln), nodes);
}

enum class Lemma3Part { A, B, C };

inline cplx extract_coeff_lemma3(double a, double b, const ComplexFn& f, double n, unsigned k, Lemma3Part part, double A = 1.0) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("lemma 3: a, b must be positive");
    const double ln = std::log(n);
    if (k < 1) throw std::out_of_range("lemma 3: k must be >= 1");
    const double base = std::exp(k * std::log(b * ln) - log_factorial(k));
    switch (part) {
        case Lemma3Part::A:
            if (k > std::min(std::sqrt(ln), b * A * ln)) throw std::out_of_range("lemma 3(a): k outside its range");
            return base;
        case Lemma3Part::B:
            if (k > std::min(std::pow(ln, 2.0 / 3.0), b * A * ln)) throw std::out_of_range("lemma 3(b): k outside its range");
            return base * std::exp(a * k * k / (b * b * ln));
        case Lemma3Part::C: {
            if (k > 2 * a * A * A * ln) throw std::out_of_range("lemma 3(c): k outside its range");
            const auto sp = saddle_params(a, b, k, ln);
            const double r = sp.r;
            const double mag = std::exp((a * r * r + b * r) * ln - k * std::log(r));
            return mag * f(r) / std::sqrt(2 * std::numbers::pi * (4 * a * r * r + b * r) * ln);
        }
    }
    throw std::logic_error("unreachable");
}

// [z^k] n^{az^2+bz} f(z) by trapezoid quadrature on the saddle circle
inline cplx lemma3_quadrature(double a, double b, const ComplexFn& f, double n, unsigned k, unsigned nodes = 512) {
    const double ln = std::log(n);
    const double r = saddle_params(a, b, k, ln).r;
    return circle_coefficient([&](cplx z) { return std::exp((a * z * z + b * z) * ln) * f(z); }, k, r, nodes);
}

// ---------------------------------------------------------------------------
// Bias function and constants.

struct BiasPoint {
    double s = 0;
    double b = 0;
};

inline BiasPoint bias_function(double alpha) {
    if (!(alpha > 0)) throw std::domain_error("bias_function: alpha must be positive");
    BiasPoint p;
    p.s = 2.0 / (std::sqrt(1 + 16 * alpha) + 1);  // = (sqrt(1 + 16 alpha) - 1) / (8 alpha)
    p.b = alpha * ((p.s - 1) / 2 - std::log(2 * p.s));
    return p;
}

struct Constants {
    double beta = 0;
    double gamma = 0;
    double beta_residual = 0;   // |e^{beta - 1} - 4 beta^2|
    double gamma_residual = 0;  // |gamma - (1 - beta)/(4 beta^2)|
};

inline Constants solve_constants() {
    double x = 0.35;
    for (int it = 0; it < 100; ++it) {
        const double g = std::exp(x - 1) - 4 * x * x;
        const double dg = std::exp(x - 1) - 8 * x;
        const double step = g / dg;
        x -= step;
        if (std::abs(step) < 1e-17) break;
    }
    Constants c;
    c.beta = x;
    c.gamma = (1 - x) / (4 * x * x);
    c.beta_residual = std::abs(std::exp(x - 1) - 4 * x * x);
    c.gamma_residual = std::abs(c.gamma - (1 - c.beta) / (4 * c.beta * c.beta));
    return c;
}

// ---------------------------------------------------------------------------
// Per-character model: L-data of all powers plus the Euler-product data.

inline constexpr unsigned kAsymptoticEulerCutoff = 60;

class CharacterModel {
public:
    explicit CharacterModel(const Character& chi, unsigned euler_cutoff = kAsymptoticEulerCutoff)
        : fam_(std::make_shared<LFamily>(l_family(require_nonprincipal(chi)))), euler_(*fam_, euler_cutoff), cutoff_(euler_cutoff) {}

    const LFamily& family() const { return *fam_; }
    const LData& l() const { return fam_->at(1); }
    const EulerData& euler() const { return euler_; }
    unsigned cutoff() const { return cutoff_; }
    bool real() const { return fam_->chi.order() == 2; }
    u32 q() const { return l().q; }
    double sqrt_q() const { return std::sqrt(static_cast<double>(q())); }

private:
    static const Character& require_nonprincipal(const Character& chi) {
        if (chi.is_principal()) throw std::invalid_argument("asymptotics need a non-principal character");
        return chi;
    }
    std::shared_ptr<LFamily> fam_;
    EulerData euler_;
    unsigned cutoff_;
};

// ---------------------------------------------------------------------------
// Proposition: M_z(n, chi) as a sum over the singularities on |u| = q^{-1/2}.

struct MzTerm {
    std::string label;  // "rho", "+" or "-"
    cplx rho;
    unsigned multiplicity = 0;
    cplx value;         // contribution / q^{n/2}
};

struct MzPrediction {
    cplx z;
    unsigned n = 0;
    std::vector<MzTerm> terms;
    cplx total;         // sum of terms, / q^{n/2}
};

inline MzPrediction prop1_Mz(const CharacterModel& model, cplx z, unsigned n) {
    const LData& l = model.l();
    const double sq = model.sqrt_q();
    const double ln = std::log(static_cast<double>(n));
    if (std::abs(z) >= sq) throw std::domain_error("prop1_Mz: need |z| < q^{1/2}");
    const bool real = model.real();
    const cplx w = z * (z - 1.0) / 2.0;
    MzPrediction out;
    out.z = z;
    out.n = n;
    for (std::size_t i = 0; i < l.roots.size(); ++i) {
        const auto& root = l.roots[i];
        if (root.kind == RootKind::Trivial) continue;
        if (real && root.kind != RootKind::NonReal) continue;  // handled by the +- terms
        const double m = root.multiplicity;
        const cplx rho = root.zero();
        const cplx f = euler_F(model.euler(), z, rho, model.cutoff()).value;
        const cplx t = std::pow(root.value / sq, static_cast<int>(n)) * std::exp((-z * m - 1.0) * ln) * f * c_rho_z(l, i, z) *
                       rgamma(-z * m);
        out.terms.push_back({"rho", rho, root.multiplicity, t});
    }
    if (real) {
        const double density = model.family().principal.density();
        for (int sign : {+1, -1}) {
            const double m = sign > 0 ? l.m_plus : l.m_minus;
            const cplx u = sign / sq;
            const cplx e = euler_E(model.euler(), z, u, model.cutoff()).value;
            const cplx expo = -z * m + w;
            const cplx t = ((sign < 0 && n % 2) ? -1.0 : 1.0) * std::exp((-1.0 - z * m + w) * ln) * e * c_pm_z(l, sign, z) *
                           std::exp(w * std::log(density / 2)) * rgamma(expo);
            out.terms.push_back({sign > 0 ? "+" : "-", u, static_cast<unsigned>(m), t});
        }
    }
    out.total = 0;
    for (const auto& t : out.terms) out.total += t.value;
    return out;
}

// ---------------------------------------------------------------------------
// Explicit-formula reports.

struct BiasEval {
    double alpha = 0;  // (k-1)/log n at finite n
    double r = 0;      // r^2 + r/2 - alpha = 0
    double s = 0;
    double b = 0;
    cplx h_plus, h_minus;
    std::vector<std::pair<double, cplx>> h_j;  // (gamma_j, h_j)
    cplx bias_term;    // (h_+ + (-1)^n h_-) n^b
    cplx oscillating;  // sum h_j e^{i n gamma_j}
    double oscillation_bound = 0;  // sum |h_j|
    double saddle_ratio = 0;         // left / right
};

struct FormulaReport {
    std::string theorem;
    unsigned n = 0, k = 0;
    u64 chi_index = 0;
    cplx exact;        // pi~_k(n, chi)
    cplx main_term;    // oscillating + bias
    cplx oscillating;
    cplx bias;
    cplx residual;     // exact - main_term
    double error_scale = 0;  // the bracket inside the theorem's O(.)
    double empirical_constant() const { return error_scale > 0 ? std::abs(residual) / error_scale : 0.0; }
    std::optional<BiasEval> bias_eval;
};

namespace detail {

inline cplx oscillation_sum(const LData& l, unsigned n, unsigned k, double* weight) {
    const double sq = std::sqrt(static_cast<double>(l.q));
    cplx s = 0;
    double wsum = 0;
    for (const auto& r : l.roots) {
        if (r.kind != RootKind::NonReal) continue;
        const double mk = std::pow(static_cast<double>(r.multiplicity), k);
        s += mk * std::pow(r.value / sq, static_cast<int>(n));
        wsum += mk;
    }
    if (weight) *weight = wsum;
    return s;
}

inline FormulaReport base_report(const CharacterModel& model, const SumTable& table, unsigned k, const char* name) {
    if (table.n < 2) throw std::domain_error("formula reports need n >= 2");
    if (k < 1 || k >= table.scaled.size()) throw std::out_of_range("k outside 1..n");
    FormulaReport rep;
    rep.theorem = name;
    rep.n = table.n;
    rep.k = k;
    rep.chi_index = model.family().chi.index();
    rep.exact = normalize(table).at(k);
    return rep;
}

} // namespace detail

inline FormulaReport thm1_main(const CharacterModel& model, const SumTable& table, unsigned k) {
    if (model.real()) throw HypothesisError("theorem 1 needs chi^2 != chi_0");
    const double ln = std::log(static_cast<double>(table.n));
    if (k > std::sqrt(static_cast<double>(model.q())) * ln) throw std::out_of_range("theorem 1: k > q^{1/2} log n");
    auto rep = detail::base_report(model, table, k, "1");
    const LData& l = model.l();
    double w = 0;
    rep.oscillating = detail::oscillation_sum(l, table.n, k, &w);
    const double mp = std::pow(static_cast<double>(l.m_plus), k), mm = std::pow(static_cast<double>(l.m_minus), k);
    rep.bias = mp + (table.n % 2 ? -mm : mm);
    rep.main_term = rep.oscillating + rep.bias;
    rep.residual = rep.exact - rep.main_term;
    rep.error_scale = k / ln * (w + mp + mm);
    return rep;
}

enum class Thm3Variant { First, Second };

inline FormulaReport thm3_main(const CharacterModel& model, const SumTable& table, unsigned k, Thm3Variant variant) {
    if (!model.real()) throw HypothesisError("theorem 3 needs chi^2 = chi_0");
    const double ln = std::log(static_cast<double>(table.n));
    const double limit = variant == Thm3Variant::First ? std::sqrt(ln) : std::pow(ln, 2.0 / 3.0);
    if (k > limit) throw std::out_of_range("theorem 3: k outside its range");
    auto rep = detail::base_report(model, table, k, variant == Thm3Variant::First ? "3a" : "3b");
    const LData& l = model.l();
    double w = 0;
    rep.oscillating = detail::oscillation_sum(l, table.n, k, &w);
    double term[2];
    for (int i = 0; i < 2; ++i) {
        const double m = (i == 0 ? l.m_plus : l.m_minus) + 0.5;
        term[i] = std::pow(m, k);
        if (variant == Thm3Variant::Second) term[i] *= std::exp((k - 1.0) * (k - 1.0) / (2 * m * m * ln));
    }
    rep.bias = term[0] + (table.n % 2 ? -term[1] : term[1]);
    rep.main_term = rep.oscillating + rep.bias;
    rep.residual = rep.exact - rep.main_term;
    const double big = std::max(term[0], term[1]);
    rep.error_scale = k / ln * w + (variant == Thm3Variant::First ? k * k / ln : 1.0 / k + std::pow(k, 3) / (ln * ln)) * big;
    return rep;
}

// h_+- as printed in the theorem; the extra factor 1/r that the derivation produces
// is applied only when `with_r_factor` is set.
inline cplx h_pm(const CharacterModel& model, double alpha, double r, int sign, bool with_r_factor) {
    const double sq = model.sqrt_q();
    const double x = r * (r + 1) / 2;
    const cplx p = euler_P_pm(model.euler(), r, sign, model.cutoff()).value;
    const double lval = model.l().eval(sign / sq).real();
    if (!(lval > 0)) throw HypothesisError("L(+-q^{-1/2}, chi) must be positive for the real power");
    cplx h = p * std::pow(2.0, -x) * rgamma(x) * std::pow(lval, -r) / std::sqrt(1 + r * r / alpha);
    if (with_r_factor) h /= r;
    return h;
}

// Theorem 2/4 evaluation at finite n with alpha taken as (k-1)/log n.
inline FormulaReport thm4_eval(const CharacterModel& model, const SumTable& table, unsigned k, bool with_r_factor = false) {
    const LData& l = model.l();
    if (k < 2) throw std::out_of_range("theorem 4: k must be >= 2");
    if (l.m_plus != 0 || l.m_minus != 0) throw HypothesisError("theorem 4: needs m_+ = m_- = 0");
    for (const auto& r : l.roots)
        if (r.kind == RootKind::NonReal && r.multiplicity != 1) throw HypothesisError("theorem 4: needs simple non-real zeros");
    auto rep = detail::base_report(model, table, k, model.real() ? "4" : "2");
    const unsigned n = table.n;
    const double ln = std::log(static_cast<double>(n));
    BiasEval be;
    be.alpha = (k - 1.0) / ln;
    if (be.alpha >= model.sqrt_q()) throw std::out_of_range("theorem 4: alpha >= q^{1/2}");
    be.r = saddle_params(0.5, 0.5, k - 1, ln).r;
    const auto bp = bias_function(be.alpha);
    be.s = bp.s;
    be.b = bp.b;
    const double sq = model.sqrt_q();
    for (std::size_t i = 0; i < l.roots.size(); ++i) {
        const auto& root = l.roots[i];
        if (root.kind != RootKind::NonReal) continue;
        const cplx f = euler_F(model.euler(), -be.alpha, root.zero(), model.cutoff()).value;
        const cplx h = f * c_rho_z(l, i, -be.alpha) * rgamma(1.0 + be.alpha);
        be.h_j.emplace_back(root.angle, h);
        be.oscillating += h * std::pow(root.value / sq, static_cast<int>(n));
        be.oscillation_bound += std::abs(h);
    }
    if (model.real()) {
        be.h_plus = h_pm(model, be.alpha, be.r, +1, with_r_factor);
        be.h_minus = h_pm(model, be.alpha, be.r, -1, with_r_factor);
        be.bias_term = (be.h_plus + (n % 2 ? -be.h_minus : be.h_minus)) * std::pow(static_cast<double>(n), be.b);
        // both sides of the saddle/Stirling identity, in logs
        const double r = be.r;
        const double lhs = (r * r / 2 + r / 2) * ln - (k - 1.0) * std::log(r) - 0.5 * std::log(2 * std::numbers::pi * (2 * r * r + r / 2) * ln);
        const double rhs = (k - 1.0) * std::log(ln) - std::lgamma(static_cast<double>(k)) + be.b * ln - 0.5 * std::log(1 + r * r / be.alpha);
        be.saddle_ratio = std::exp(lhs - rhs);
    }
    rep.oscillating = be.oscillating;
    rep.bias = be.bias_term;
    rep.main_term = rep.oscillating + rep.bias;
    rep.residual = rep.exact - rep.main_term;
    rep.error_scale = std::abs(be.bias_term) + be.oscillation_bound;  // o(1) relative to this
    rep.bias_eval = be;
    return rep;
}

} // namespace ffbias

#endif // FFBIAS_ASYMPTOTICS_HPP
