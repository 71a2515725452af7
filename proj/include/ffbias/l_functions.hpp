#ifndef FFBIAS_L_FUNCTIONS_HPP
#define FFBIAS_L_FUNCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ffbias/characters.hpp"
#include "ffbias/errors.hpp"
#include "ffbias/field_poly.hpp"

namespace ffbias {

using cplx = std::complex<double>;

inline constexpr double kClusterRadius = 1e-7;
inline constexpr double kRootResidual = 1e-12;
inline constexpr double kRhTolerance = 1e-6;  // beyond this an RhViolation is thrown

enum class RootKind { PlusSqrtQ, MinusSqrtQ, NonReal, Trivial };

// An inverse root a of L(u, chi), i.e. L has the factor (1 - a u)^multiplicity.
struct InverseRoot {
    cplx value;
    unsigned multiplicity = 1;
    RootKind kind = RootKind::NonReal;
    double angle = 0.0;  // arg(a) in [0, 2 pi)

    cplx zero() const { return 1.0 / value; }  // rho = 1/a
};

struct LData {
    Character chi;
    u32 q = 0;
    // Exact coefficients as cyclotomic integers: exact[n][j] counts monic f of
    // degree n with chi(f) = exp(2 pi i j / ord chi).
    std::vector<std::vector<long long>> exact;
    std::vector<cplx> coeffs;  // constant term first, trailing zeros trimmed

    bool has_roots = false;
    std::vector<InverseRoot> roots;
    unsigned m_plus = 0;
    unsigned m_minus = 0;
    std::vector<std::pair<double, unsigned>> nonreal;  // (gamma_j, m_j)
    std::vector<cplx> trivial_roots;                   // |beta| = 1, repeated by multiplicity
    double rh_deviation = 0.0;                         // max distance of |a| from {sqrt q, 1}
    double reconstruction_residual = 0.0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    cplx eval(cplx u) const {
        cplx acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
        return acc;
    }
    cplx eval_derivative(cplx u) const {
        cplx acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * u + static_cast<double>(i) * coeffs[i];
        return acc;
    }
    // Sum over inverse roots of m log(1 - a u) with the principal logarithm.
    cplx log_sum(cplx u) const {
        require_roots();
        cplx s = 0;
        for (const auto& r : roots) s += static_cast<double>(r.multiplicity) * std::log(1.0 - r.value * u);
        return s;
    }
    void require_roots() const {
        if (!has_roots) throw std::logic_error("LData root data not computed (call l_roots)");
    }
};

// exp(2 pi i j / N) as a double, from the exact class.
inline cplx unit_root(u64 j, u64 n) { return RootOfUnity(j, n).to_complex(); }

inline cplx cyclotomic_value(const std::vector<long long>& counts) {
    const u64 n = counts.size();
    cplx s = 0;
    for (u64 j = 0; j < n; ++j)
        if (counts[j]) s += static_cast<double>(counts[j]) * unit_root(j, n);
    return s;
}

// Coefficients of L(u, chi) = sum_f chi(f) u^deg f for non-principal chi. Monic f
// of degree < deg d are pairwise distinct residues; higher degrees cover every
// residue class q^(n - deg d) times and so sum to zero.
inline LData l_coeffs(const Character& chi) {
    if (chi.is_principal()) throw std::invalid_argument("l_coeffs: principal character (use l_principal)");
    const UnitGroup& g = chi.group();
    const u32 q = g.field_size();
    const auto deg = static_cast<unsigned>(g.modulus().degree());
    LData out{chi};
    out.q = q;
    const u64 n_classes = chi.order();
    for (unsigned n = 0; n < deg; ++n) {
        std::vector<long long> counts(n_classes, 0);
        for_each_monic(q, n, [&](const Poly& f) {
            const long long j = chi.value_class_of_log(g.log_index_of_code(g.code(f)));
            if (j >= 0) ++counts[static_cast<u64>(j)];
        });
        out.exact.push_back(std::move(counts));
    }
    for (const auto& c : out.exact) out.coeffs.push_back(cyclotomic_value(c));
    // exact trim: a coefficient vanishes iff its cyclotomic integer is zero;
    // the numeric value is snapped to 0 when it is below rounding noise
    while (out.coeffs.size() > 1 && std::abs(out.coeffs.back()) < 1e-9) out.coeffs.pop_back();
    return out;
}

// L(u, chi_0) = prod_{p | d} (1 - u^deg p) / (1 - q u).
struct PrincipalL {
    u32 q = 0;
    std::vector<unsigned> prime_degrees;

    std::vector<long long> numerator() const {
        std::vector<long long> num{1};
        for (unsigned e : prime_degrees) {
            std::vector<long long> next(num.size() + e, 0);
            for (std::size_t i = 0; i < num.size(); ++i) {
                next[i] += num[i];
                next[i + e] -= num[i];
            }
            num = std::move(next);
        }
        return num;
    }
    // Power-series coefficients up to u^n_max (exact while they fit in 64 bits).
    std::vector<long double> series(unsigned n_max) const {
        const auto num = numerator();
        std::vector<long double> out(n_max + 1, 0);
        long double acc = 0;
        for (unsigned n = 0; n <= n_max; ++n) {
            acc = acc * q + (n < num.size() ? num[n] : 0);
            out[n] = acc;
        }
        return out;
    }
    cplx eval(cplx u) const {
        cplx num = 1;
        for (unsigned e : prime_degrees) num *= 1.0 - std::pow(u, static_cast<int>(e));
        return num / (1.0 - static_cast<double>(q) * u);
    }
    // Branch of log L(v, chi_0) at v = u^2, for |u| <= q^{-1/2}, u^2 != 1/q.
    cplx log_at_square(cplx u) const {
        const cplx v = u * u;
        cplx s = 0;
        for (unsigned e : prime_degrees) s += std::log(1.0 - std::pow(v, static_cast<int>(e)));
        return s - std::log(1.0 - static_cast<double>(q) * v);
    }
    // prod_{p | d} (1 - q^-deg p), which equals phi(d) / q^deg d.
    double density() const {
        double s = 1;
        for (unsigned e : prime_degrees) s *= 1.0 - std::pow(static_cast<double>(q), -static_cast<double>(e));
        return s;
    }
};

inline PrincipalL l_principal(const Poly& d) {
    PrincipalL out;
    out.q = d.modulus();
    for (const auto& f : factor(d).factors) out.prime_degrees.push_back(static_cast<unsigned>(f.poly.degree()));
    return out;
}

namespace detail {

// Inverse roots are the roots of x^D + c_1 x^{D-1} + ... + c_D.
inline std::vector<cplx> reversed_monic(const std::vector<cplx>& c) {
    const std::size_t deg = c.size() - 1;
    std::vector<cplx> p(deg + 1);  // p[i] = coefficient of x^i
    for (std::size_t i = 0; i <= deg; ++i) p[i] = c[deg - i] / c[0];
    return p;
}

inline cplx horner(const std::vector<cplx>& p, cplx x, unsigned deriv = 0) {
    // deriv-th derivative of sum p[i] x^i
    cplx acc = 0;
    for (std::size_t i = p.size(); i-- > deriv;) {
        double f = 1;
        for (unsigned k = 0; k < deriv; ++k) f *= static_cast<double>(i - k);
        acc = acc * x + f * p[i];
    }
    return acc;
}

inline cplx newton_polish(const std::vector<cplx>& p, cplx x, unsigned deriv) {
    for (int it = 0; it < 60; ++it) {
        const cplx f = horner(p, x, deriv);
        const cplx df = horner(p, x, deriv + 1);
        if (std::abs(df) == 0.0) break;
        const cplx step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

inline std::vector<cplx> companion_eigenvalues(const std::vector<cplx>& p) {
    const auto deg = static_cast<Eigen::Index>(p.size() - 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) m(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i) m(i, deg - 1) = -p[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solver failed");
    std::vector<cplx> out(static_cast<std::size_t>(deg));
    for (Eigen::Index i = 0; i < deg; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

struct Cluster {
    cplx center;
    unsigned size;
};

inline std::vector<Cluster> cluster_roots(const std::vector<cplx>& raw, double radius) {
    std::vector<int> label(raw.size(), -1);
    std::vector<Cluster> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (label[i] >= 0) continue;
        label[i] = static_cast<int>(out.size());
        std::vector<std::size_t> members{i};
        for (std::size_t k = 0; k < members.size(); ++k)
            for (std::size_t j = 0; j < raw.size(); ++j)
                if (label[j] < 0 && std::abs(raw[j] - raw[members[k]]) < radius * std::max(1.0, std::abs(raw[members[k]]))) {
                    label[j] = label[i];
                    members.push_back(j);
                }
        cplx c = 0;
        for (auto j : members) c += raw[j];
        out.push_back({c / static_cast<double>(members.size()), static_cast<unsigned>(members.size())});
    }
    return out;
}

inline double reconstruction_error(const std::vector<cplx>& coeffs, const std::vector<InverseRoot>& roots) {
    std::vector<cplx> prod{1.0};
    for (const auto& r : roots)
        for (unsigned k = 0; k < r.multiplicity; ++k) {
            std::vector<cplx> next(prod.size() + 1, 0.0);
            for (std::size_t i = 0; i < prod.size(); ++i) {
                next[i] += prod[i];
                next[i + 1] -= r.value * prod[i];
            }
            prod = std::move(next);
        }
    double err = 0;
    for (std::size_t i = 0; i < std::max(prod.size(), coeffs.size()); ++i) {
        const cplx a = i < prod.size() ? prod[i] : 0.0;
        const cplx b = i < coeffs.size() ? coeffs[i] : 0.0;
        err = std::max(err, std::abs(a - b));
    }
    return err;
}

inline std::vector<InverseRoot> polish_clusters(const std::vector<cplx>& p, const std::vector<Cluster>& clusters) {
    std::vector<InverseRoot> out;
    for (const auto& c : clusters) {
        InverseRoot r;
        r.multiplicity = c.size;
        // a root of multiplicity m is a simple root of the (m-1)-th derivative
        r.value = newton_polish(p, c.center, c.size - 1);
        out.push_back(r);
    }
    return out;
}

} // namespace detail

// Extract, cluster and classify the inverse roots of L(u, chi).
inline LData l_roots(LData l) {
    l.roots.clear();
    l.nonreal.clear();
    l.trivial_roots.clear();
    l.m_plus = l.m_minus = 0;
    l.rh_deviation = 0;
    l.has_roots = true;
    if (l.degree() <= 0) return l;

    const double sq = std::sqrt(static_cast<double>(l.q));
    const auto p = detail::reversed_monic(l.coeffs);
    const auto raw = detail::companion_eigenvalues(p);

    // Eigenvalues of a root of multiplicity m scatter by ~eps^(1/m); group them
    // generously, polish on the matching derivative, then insist the resulting
    // distinct roots are separated by more than the cluster radius.
    std::vector<InverseRoot> roots;
    double best = INFINITY;
    for (double radius : {1e-4, 1e-6, kClusterRadius}) {
        auto cand = detail::polish_clusters(p, detail::cluster_roots(raw, radius));
        bool separated = true;
        for (std::size_t i = 0; i < cand.size(); ++i)
            for (std::size_t j = i + 1; j < cand.size(); ++j)
                if (std::abs(cand[i].value - cand[j].value) < kClusterRadius * std::max(1.0, std::abs(cand[i].value))) separated = false;
        if (!separated) continue;
        const double err = detail::reconstruction_error(l.coeffs, cand);
        if (err < best) {
            best = err;
            roots = std::move(cand);
        }
        if (err < 1e-9) break;
    }
    if (roots.empty()) throw std::runtime_error("l_roots: could not resolve the root clusters");
    for (auto& r : roots) {
        if (r.multiplicity == 1) {
            const double res = std::abs(detail::horner(p, r.value));
            if (res > kRootResidual * std::pow(std::max(1.0, std::abs(r.value)), static_cast<double>(l.degree())) * 10)
                r.value = detail::newton_polish(p, r.value, 0);
        }
        const double mod = std::abs(r.value);
        const double dev = std::min(std::abs(mod - sq), std::abs(mod - 1.0));
        l.rh_deviation = std::max(l.rh_deviation, dev);
        if (dev > kRhTolerance)
            throw RhViolation("inverse root of modulus " + std::to_string(mod) + " is off both circles |a| = sqrt(q) and |a| = 1");
        double ang = std::arg(r.value);
        if (ang < 0) ang += 2 * std::numbers::pi;
        r.angle = ang;
        const bool on_sqrt_q = std::abs(mod - sq) < std::abs(mod - 1.0);
        const bool real_axis = std::abs(r.value.imag()) < kClusterRadius * mod;
        if (on_sqrt_q && real_axis) {
            if (r.value.real() > 0) {
                r.kind = RootKind::PlusSqrtQ;
                r.value = sq;
                r.angle = 0;
                l.m_plus += r.multiplicity;
            } else {
                r.kind = RootKind::MinusSqrtQ;
                r.value = -sq;
                r.angle = std::numbers::pi;
                l.m_minus += r.multiplicity;
            }
        } else if (on_sqrt_q) {
            r.kind = RootKind::NonReal;
            l.nonreal.emplace_back(ang, r.multiplicity);
        } else {
            r.kind = RootKind::Trivial;
            for (unsigned k = 0; k < r.multiplicity; ++k) l.trivial_roots.push_back(r.value);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const InverseRoot& a, const InverseRoot& b) { return a.angle < b.angle; });
    std::sort(l.nonreal.begin(), l.nonreal.end());
    l.roots = std::move(roots);
    l.reconstruction_residual = detail::reconstruction_error(l.coeffs, l.roots);
    return l;
}

inline LData l_function(const Character& chi) { return l_roots(l_coeffs(chi)); }

// L(u, chi)^z := exp(z sum_rho m_rho log(1 - u/rho)), principal log on C \ (-inf, 0].
class BranchPower {
public:
    explicit BranchPower(const LData& base) : base_(&base) { base.require_roots(); }

    cplx log_value(cplx u) const {
        cplx s = 0;
        for (const auto& r : base_->roots) {
            const cplx w = 1.0 - r.value * u;
            if (w.imag() == 0.0 && w.real() <= 0.0) throw std::domain_error("BranchPower: u on a branch cut");
            s += static_cast<double>(r.multiplicity) * std::log(w);
        }
        return s;
    }
    cplx operator()(cplx u, cplx z) const { return std::exp(z * log_value(u)); }

private:
    const LData* base_;
};

// c_rho^z = exp(z sum_{rho' != rho} m' log(1 - rho/rho')) for the stored root at `root_index`.
inline cplx c_rho_z(const LData& l, std::size_t root_index, cplx z) {
    l.require_roots();
    if (root_index >= l.roots.size()) throw std::out_of_range("c_rho: no such root");
    const cplx rho = l.roots[root_index].zero();
    cplx s = 0;
    for (std::size_t i = 0; i < l.roots.size(); ++i) {
        if (i == root_index) continue;
        s += static_cast<double>(l.roots[i].multiplicity) * std::log(1.0 - rho * l.roots[i].value);
    }
    return std::exp(z * s);
}

inline cplx c_rho(const LData& l, std::size_t root_index) {
    l.require_roots();
    if (root_index >= l.roots.size()) throw std::out_of_range("c_rho: no such root");
    const cplx rho = l.roots[root_index].zero();
    cplx prod = 1;
    for (std::size_t i = 0; i < l.roots.size(); ++i)
        if (i != root_index)
            for (unsigned k = 0; k < l.roots[i].multiplicity; ++k) prod *= 1.0 - rho * l.roots[i].value;
    return prod;
}

// Locate a stored root by its zero rho (within the cluster radius).
inline std::size_t find_root(const LData& l, cplx rho) {
    l.require_roots();
    for (std::size_t i = 0; i < l.roots.size(); ++i)
        if (std::abs(l.roots[i].zero() - rho) < kClusterRadius * std::max(1.0, std::abs(rho))) return i;
    throw std::invalid_argument("c_rho: point is not a zero of L(u, chi) within the cluster radius");
}

// c_+- at u = +-q^{-1/2}: L(u)/(1 - u/rho)^{m} evaluated there, as a z-th power.
inline cplx c_pm_z(const LData& l, int sign, cplx z) {
    l.require_roots();
    const double sq = std::sqrt(static_cast<double>(l.q));
    const cplx u = sign > 0 ? 1.0 / sq : -1.0 / sq;
    const RootKind skip = sign > 0 ? RootKind::PlusSqrtQ : RootKind::MinusSqrtQ;
    cplx s = 0;
    for (const auto& r : l.roots)
        if (r.kind != skip) s += static_cast<double>(r.multiplicity) * std::log(1.0 - r.value * u);
    return std::exp(z * s);
}

// Newton's identities: u L'(u)/L(u) = sum_{m>=1} c_m u^m, computed on the rescaled
// variable v = sqrt(q) u so that the returned values are c_m q^{-m/2}, m = 1..n_max.
inline std::vector<cplx> log_derivative_coeffs_scaled(const LData& l, unsigned n_max) {
    const double sq = std::sqrt(static_cast<double>(l.q));
    std::vector<cplx> a(l.coeffs.size());
    double scale = 1;
    for (std::size_t i = 0; i < a.size(); ++i, scale /= sq) a[i] = l.coeffs[i] * scale;
    std::vector<cplx> c(n_max + 1, 0.0);
    for (unsigned m = 1; m <= n_max; ++m) {
        cplx v = m < a.size() ? static_cast<double>(m) * a[m] : 0.0;
        for (unsigned i = 1; i < m; ++i)
            if (m - i < a.size()) v -= c[i] * a[m - i];
        c[m] = v;
    }
    return c;
}

} // namespace ffbias

#endif // FFBIAS_L_FUNCTIONS_HPP
