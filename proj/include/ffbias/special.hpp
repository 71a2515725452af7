#ifndef FFBIAS_SPECIAL_HPP
#define FFBIAS_SPECIAL_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ffbias {

using cplx = std::complex<double>;

namespace detail {

// Lanczos coefficients, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re z >= 1/2
inline cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// sin(pi z), exact zero at real integers
inline cplx sin_pi(cplx z) {
    const double x = z.real(), y = z.imag();
    const double sx = x == std::floor(x) ? 0.0 : std::sin(std::numbers::pi * x);
    const double cx = std::cos(std::numbers::pi * x);
    return {sx * std::cosh(std::numbers::pi * y), cx * std::sinh(std::numbers::pi * y)};
}

} // namespace detail

// 1/Gamma(z), entire; exactly 0 at z = 0, -1, -2, ...
inline cplx rgamma(cplx z) {
    if (detail::is_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return std::exp(-detail::lgamma_right(z));
    // reflection: 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
    return std::exp(detail::lgamma_right(1.0 - z)) * detail::sin_pi(z) / std::numbers::pi;
}

inline double rgamma(double x) { return rgamma(cplx(x, 0.0)).real(); }

// Adaptive Gauss-Kronrod (15 points) for complex integrands on [a, b].
template <class F>
cplx integrate(F&& f, double a, double b, double tol = 1e-13, double* error = nullptr) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0;
    const cplx v = gauss_kronrod<double, 15>::integrate(f, a, b, 20, tol, &err);
    if (error) *error = err;
    return v;
}

// (1/2 pi) int_{-pi}^{pi} g(theta) dtheta by the trapezoid rule with m nodes,
// spectrally accurate for smooth periodic g.
template <class F>
cplx circle_average(F&& g, unsigned m) {
    cplx acc = 0;
    for (unsigned j = 0; j < m; ++j) acc += g(2 * std::numbers::pi * j / m - std::numbers::pi);
    return acc / static_cast<double>(m);
}

// Taylor coefficient [z^k] p(z) from samples on |z| = radius.
template <class F>
cplx circle_coefficient(F&& p, unsigned k, double radius, unsigned m = 512) {
    if (!(radius > 0)) throw std::invalid_argument("circle_coefficient: radius must be positive");
    const double lr = std::log(radius);
    return circle_average(
        [&](double th) {
            const cplx z = std::polar(radius, th);
            return p(z) * std::exp(-static_cast<double>(k) * (lr + cplx(0, th)));
        },
        m);
}

} // namespace ffbias

#endif // FFBIAS_SPECIAL_HPP
