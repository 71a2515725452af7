#ifndef FFBIAS_EULER_HPP
#define FFBIAS_EULER_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "char_sums.hpp"
#include "errors.hpp"
#include "l_functions.hpp"

namespace ffbias {

inline constexpr unsigned kDefaultEulerCutoff = 12;
// Prime counts per value class are recovered exactly (by rounding) while q^e stays below this.
inline constexpr double kExactCountLimit = 1e9;

enum class EulerKind { E, F, PPlus, PMinus };

struct EulerProductEval {
    EulerKind kind = EulerKind::E;
    unsigned cutoff = 0;   // D: primes of degree <= D are multiplied in
    cplx value = 0;
    double tail_bound = 0; // bound on |full product - value|
};

// count[e][c] = #{p monic irreducible of degree e, p coprime to d, chi(p) = exp(2 pi i c / ord)}.
struct PrimeValueCounts {
    u32 q = 0;
    u64 order = 1;
    std::vector<std::vector<long long>> count;  // e = 1..e_max
    unsigned e_max() const { return count.empty() ? 0 : static_cast<unsigned>(count.size() - 1); }
};

// Inverts the character sums: count[e][c] = (1/ord) sum_j P[e][j] zeta^{-cj}.
inline PrimeValueCounts prime_value_counts(const PrimeCharSums& ps, unsigned e_max) {
    PrimeValueCounts out;
    out.q = ps.q;
    out.order = ps.order;
    e_max = std::min(e_max, ps.n_max);
    out.count.assign(1, {});
    for (unsigned e = 1; e <= e_max; ++e) {
        if (std::pow(static_cast<double>(ps.q), e) > kExactCountLimit) break;
        std::vector<long long> row(ps.order, 0);
        for (u64 c = 0; c < ps.order; ++c) {
            cplx acc = 0;
            for (u64 j = 0; j < ps.order; ++j) acc += ps.value(e, j) * unit_root((ps.order - (c * j) % ps.order) % ps.order, ps.order);
            acc /= static_cast<double>(ps.order);
            const double rounded = std::round(acc.real());
            if (std::abs(acc - rounded) > 1e-3)
                throw Error("prime value counts are not integral at degree " + std::to_string(e));
            row[c] = static_cast<long long>(rounded);
        }
        out.count.push_back(std::move(row));
    }
    return out;
}

namespace detail {

// log of (1 - zT)^{-1} (1 - T)^z (1 - T^2)^w with principal logs, w = z(z-1)/2.
// Series sum_{m>=3} c_m T^m, c_m = (z^m - z)/m - [m even] 2w/m, when T is small.
inline cplx euler_log_factor(cplx z, cplx w, cplx t) {
    const double at = std::abs(t) * std::max(1.0, std::abs(z));
    if (at < 0.125) {
        cplx sum = 0, tm = t * t, zm = z * z;
        for (unsigned m = 3; m < 200; ++m) {
            tm *= t;
            zm *= z;
            cplx cm = (zm - z) / static_cast<double>(m);
            if (m % 2 == 0) cm -= 2.0 * w / static_cast<double>(m);
            const cplx term = cm * tm;
            sum += term;
            if (std::abs(term) < 1e-18 * std::max(1e-300, std::abs(sum)) || std::abs(tm) < 1e-300) break;
        }
        return sum;
    }
    const cplx a = 1.0 - z * t;
    if (std::abs(a) < 1e-13) throw Error("singular Euler factor: 1 - zT vanishes");
    return -std::log(a) + z * std::log(1.0 - t) + w * std::log(1.0 - t * t);
}

// Upper bound for sum_{m>=3} |c_m| t^m, 0 <= t, |z| t < 1.
inline double euler_log_factor_bound(cplx z, cplx w, double t) {
    const double az = std::abs(z) * t;
    const double tail_z = -std::log1p(-az) - az - az * az / 2;
    const double tail_1 = -std::log1p(-t) - t - t * t / 2;
    return tail_z + (std::abs(z) + 2 * std::abs(w)) * tail_1;
}

} // namespace detail

// Everything the Euler products need about one character: its prime sums for
// degrees 1..d_max and the exact value-class counts where those are cheap.
class EulerData {
public:
    EulerData(const LFamily& fam, unsigned d_max)
        : fam_(&fam), sums_(prime_char_sums(fam, std::max(1u, d_max))), counts_(prime_value_counts(sums_, d_max)) {}

    const LFamily& family() const { return *fam_; }
    const PrimeCharSums& sums() const { return sums_; }
    const PrimeValueCounts& counts() const { return counts_; }
    unsigned max_cutoff() const { return sums_.n_max; }
    u32 q() const { return sums_.q; }

    // sum over primes of degree e (coprime to d) of the log factor at T = chi(p) u^e
    cplx degree_log(unsigned e, cplx z, cplx w, cplx u) const {
        const cplx ue = std::pow(u, static_cast<int>(e));
        const u64 ord = sums_.order;
        if (e <= counts_.e_max()) {
            cplx acc = 0;
            for (u64 c = 0; c < ord; ++c) {
                const long long n = counts_.count[e][c];
                if (n != 0) acc += static_cast<double>(n) * detail::euler_log_factor(z, w, unit_root(c, ord) * ue);
            }
            return acc;
        }
        // sum_m c_m u^{em} P[e][m]
        const double half = std::pow(static_cast<double>(q()), 0.5 * e);
        cplx acc = 0, zm = z * z, um = ue * ue;
        for (unsigned m = 3; m < 4000; ++m) {
            zm *= z;
            um *= ue;
            cplx cm = (zm - z) / static_cast<double>(m);
            if (m % 2 == 0) cm -= 2.0 * w / static_cast<double>(m);
            const cplx term = cm * um * sums_.scaled[e][m % ord] * half;
            acc += term;
            if (std::abs(um) * half * (std::abs(zm) + 1 + std::abs(w)) < 1e-19) break;
        }
        return acc;
    }

    // bound on |sum over primes of degree > D of log factors|
    double tail_log_bound(unsigned cutoff, cplx z, cplx w, double abs_u) const {
        double total = 0;
        const double qd = q();
        for (unsigned e = cutoff + 1; e < 100000; ++e) {
            const double t = std::pow(abs_u, e);
            if (std::abs(z) * t >= 1 || t >= 1) return std::numeric_limits<double>::infinity();
            const double term = std::pow(qd, e) / e * detail::euler_log_factor_bound(z, w, t);
            total += term;
            if (term < 1e-18 * std::max(total, 1e-300) || term < 1e-300) break;
            if (e > cutoff + 5000) return std::numeric_limits<double>::infinity();
        }
        return total;
    }

private:
    const LFamily* fam_;
    PrimeCharSums sums_;
    PrimeValueCounts counts_;
};

namespace detail {

inline void check_cutoff(const EulerData& data, unsigned cutoff) {
    if (cutoff < 1) throw std::invalid_argument("Euler cutoff D must be >= 1");
    if (cutoff > data.max_cutoff())
        throw BudgetError("Euler cutoff " + std::to_string(cutoff) + " exceeds the prepared degree " + std::to_string(data.max_cutoff()));
}

inline cplx euler_log_E(const EulerData& data, cplx z, cplx u, unsigned cutoff) {
    const cplx w = z * (z - 1.0) / 2.0;
    cplx acc = 0;
    for (unsigned e = 1; e <= cutoff; ++e) acc += data.degree_log(e, z, w, u);
    return acc;
}

inline double bound_from_log(cplx value, double log_tail) {
    if (!std::isfinite(log_tail)) return log_tail;
    return std::abs(value) * std::expm1(log_tail);
}

} // namespace detail

// E_z(u, chi) truncated to deg p <= D.
inline EulerProductEval euler_E(const EulerData& data, cplx z, cplx u, unsigned cutoff = kDefaultEulerCutoff) {
    detail::check_cutoff(data, cutoff);
    const double q = data.q();
    if (std::abs(z * u) >= 1) throw std::domain_error("E_z: |z u| >= 1, product does not converge");
    if (q * std::pow(std::abs(u), 3) >= 1) throw std::domain_error("E_z: |u| >= q^{-1/3}, product does not converge");
    EulerProductEval out;
    out.kind = EulerKind::E;
    out.cutoff = cutoff;
    out.value = std::exp(detail::euler_log_E(data, z, u, cutoff));
    out.tail_bound = detail::bound_from_log(out.value, data.tail_log_bound(cutoff, z, z * (z - 1.0) / 2.0, std::abs(u)));
    return out;
}

// log L(v, chi^2) at v = rho^2 on the branch used for L(u^2, chi^2)^{z(z-1)/2}.
inline cplx log_l_chi_squared_at_square(const LFamily& fam, cplx rho) {
    const u64 ord = fam.chi.order();
    if (ord <= 2) {
        const double q = fam.principal.q;
        if (std::abs(rho * rho * q - 1.0) < 1e-12)
            throw std::domain_error("F_z: rho = +-q^{-1/2} is a pole of L(u^2, chi_0)");
        return fam.principal.log_at_square(rho);
    }
    return BranchPower(fam.at(2)).log_value(rho * rho);
}

// F_z(rho, chi) := L(rho^2, chi^2)^{z(z-1)/2} E_z(rho, chi).
inline EulerProductEval euler_F(const EulerData& data, cplx z, cplx rho, unsigned cutoff = kDefaultEulerCutoff) {
    const cplx w = z * (z - 1.0) / 2.0;
    const cplx l2 = log_l_chi_squared_at_square(data.family(), rho);
    const auto e = euler_E(data, z, rho, cutoff);
    EulerProductEval out;
    out.kind = EulerKind::F;
    out.cutoff = cutoff;
    const cplx factor = std::exp(w * l2);
    out.value = factor * e.value;
    out.tail_bound = std::abs(factor) * e.tail_bound;
    return out;
}

// The direct product prod_p (1 - z chi(p) u^deg p)^{-1} (1 - chi(p) u^deg p)^z, only
// valid strictly inside |u| < q^{-1/2}. Summed through the prime sums up to degree D.
inline EulerProductEval euler_F_direct(const EulerData& data, cplx z, cplx u, unsigned cutoff) {
    detail::check_cutoff(data, cutoff);
    const double q = data.q();
    const double au = std::abs(u);
    if (q * au * au >= 1 || std::abs(z) * au >= 1) throw std::domain_error("direct F_z product does not converge here");
    const auto& ps = data.sums();
    cplx acc = 0;
    for (unsigned e = 1; e <= cutoff; ++e) {
        const cplx ue = std::pow(u, static_cast<int>(e));
        const double half = std::pow(q, 0.5 * e);
        cplx zm = z, um = ue;
        for (unsigned m = 2; m < 4000; ++m) {
            zm *= z;
            um *= ue;
            const cplx term = (zm - z) / static_cast<double>(m) * um * ps.scaled[e][m % ps.order] * half;
            acc += term;
            if (std::abs(um) * half * (std::abs(zm) + std::abs(z)) < 1e-19) break;
        }
    }
    // tail: |c_m| <= (|z|^m + |z|)/m, at most q^e/e primes of degree e
    double tail = 0;
    for (unsigned e = cutoff + 1; e < cutoff + 100000; ++e) {
        const double t = std::pow(au, e);
        const double az = std::abs(z) * t;
        const double b = (-std::log1p(-az) - az) + std::abs(z) * (-std::log1p(-t) - t);
        const double term = std::pow(q, e) / e * b;
        tail += term;
        if (term < 1e-18 * std::max(tail, 1e-300)) break;
    }
    EulerProductEval out;
    out.kind = EulerKind::F;
    out.cutoff = cutoff;
    out.value = std::exp(acc);
    out.tail_bound = detail::bound_from_log(out.value, tail);
    return out;
}

// P_+-(r) = prod_p (1 + r chi(p) (+-1)^deg p q^{-deg p/2})^{-1} (1 - chi(p) (+-1)^deg p q^{-deg p/2})^{-r}
//            (1 - q^{-deg p})^{r(r+1)/2}, for real non-principal chi.
inline EulerProductEval euler_P_pm(const EulerData& data, double r, int sign, unsigned cutoff = kDefaultEulerCutoff) {
    detail::check_cutoff(data, cutoff);
    const auto& fam = data.family();
    if (fam.chi.order() != 2) throw std::invalid_argument("P_+-: chi must be real and non-principal");
    const double q = data.q();
    if (!(r > 0) || r >= std::sqrt(q)) throw std::domain_error("P_+-: r must lie in (0, q^{1/2})");
    const double sgn = sign > 0 ? 1.0 : -1.0;
    const cplx u = sgn / std::sqrt(q);
    const cplx z = -r;
    const cplx w = z * (z - 1.0) / 2.0;  // = r(r+1)/2
    cplx acc = 0;
    for (unsigned e = 1; e <= cutoff; ++e) {
        if (e <= data.counts().e_max()) {
            const double t = std::pow(sgn, e) * std::pow(q, -0.5 * e);
            for (u64 c = 0; c < 2; ++c) {
                const double x = (c == 0 ? 1.0 : -1.0) * t;
                if (data.counts().count[e][c] != 0 && std::abs(1.0 + r * x) < 1e-12)
                    throw Error("P_+-: singular factor 1 + r chi(p) (+-1)^deg p q^{-deg p/2} = 0 at degree " + std::to_string(e));
            }
        }
        acc += data.degree_log(e, z, w, u);
    }
    // primes dividing d contribute only the last factor
    for (unsigned e : fam.principal.prime_degrees)
        if (e <= cutoff) acc += w * std::log1p(-std::pow(q, -static_cast<double>(e)));
    EulerProductEval out;
    out.kind = sign > 0 ? EulerKind::PPlus : EulerKind::PMinus;
    out.cutoff = cutoff;
    out.value = std::exp(acc);
    out.tail_bound = detail::bound_from_log(out.value, data.tail_log_bound(cutoff, z, w, std::abs(u)));
    return out;
}

} // namespace ffbias

#endif // FFBIAS_EULER_HPP
