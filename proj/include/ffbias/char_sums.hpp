#ifndef FFBIAS_CHAR_SUMS_HPP
#define FFBIAS_CHAR_SUMS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ffbias/characters.hpp"
#include "ffbias/errors.hpp"
#include "ffbias/field_poly.hpp"
#include "ffbias/l_functions.hpp"

namespace ffbias {

inline constexpr unsigned kDefaultNCap = 300;
inline constexpr u64 kDefaultEnumerationCap = u64{1} << 24;

// Worker count from FFBIAS_THREADS, defaulting to the machine parallelism.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FFBIAS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// L-data for every power chi^j, j = 0 .. ord(chi) - 1 (j = 0 is the principal one).
struct LFamily {
    Character chi;
    PrincipalL principal;
    std::vector<std::optional<LData>> powers;  // powers[0] empty

    const LData& at(u64 j) const {
        const auto& p = powers.at(j % powers.size());
        if (!p) throw std::invalid_argument("LFamily: power is principal");
        return *p;
    }
};

inline LFamily l_family(const Character& chi) {
    LFamily fam{chi, l_principal(chi.group().modulus()), {}};
    fam.powers.resize(chi.order());
    for (u64 j = 1; j < chi.order(); ++j) fam.powers[j] = l_function(chi.pow(j));
    return fam;
}

// P[e][j] = sum over monic irreducible p of degree e of chi^j(p), stored rescaled
// as P[e][j] q^{-e/2} so that entries stay O(deg d) for j with chi^j != chi_0.
struct PrimeCharSums {
    u32 q = 0;
    u64 order = 1;
    unsigned n_max = 0;
    std::vector<unsigned> divisor_degrees;      // degrees of the primes dividing d
    std::vector<std::vector<cplx>> scaled;       // scaled[e][j], e = 1..n_max

    cplx value(unsigned e, u64 j) const {
        return scaled.at(e).at(j % order) * std::pow(static_cast<double>(q), 0.5 * e);
    }
};

inline PrimeCharSums prime_char_sums(const LFamily& fam, unsigned n_max) {
    if (n_max < 1) throw std::invalid_argument("prime_char_sums needs n_max >= 1");
    const u32 q = fam.principal.q;
    const double sq = std::sqrt(static_cast<double>(q));
    if (0.5 * n_max * std::log10(static_cast<double>(q)) > 290.0)
        throw BudgetError("q^(n/2) exceeds the double range for n = " + std::to_string(n_max));
    const u64 ord = fam.chi.order();
    PrimeCharSums out;
    out.q = q;
    out.order = ord;
    out.n_max = n_max;
    out.divisor_degrees = fam.principal.prime_degrees;

    // u L'/L = sum_m c_m u^m with c_m = sum_{e | m} e P[e][j m/e] (Euler product);
    // c_m(chi^j) q^{-m/2} from Newton's identities, or in closed form for chi_0
    std::vector<std::vector<cplx>> c(ord);
    for (u64 j = 0; j < ord; ++j) {
        if (j == 0) {
            c[0].assign(n_max + 1, 0.0);
            for (unsigned m = 1; m <= n_max; ++m) {
                double div = 0;
                for (unsigned e : out.divisor_degrees)
                    if (m % e == 0) div += e;
                c[0][m] = std::pow(sq, m) - div * std::pow(sq, -static_cast<double>(m));
            }
        } else {
            c[j] = log_derivative_coeffs_scaled(fam.at(j), n_max);
        }
    }

    out.scaled.assign(n_max + 1, std::vector<cplx>(ord, 0.0));
    for (unsigned m = 1; m <= n_max; ++m) {
        for (u64 j = 0; j < ord; ++j) {
            cplx v = c[j][m];
            for (unsigned e = 1; e < m; ++e) {
                if (m % e) continue;
                const u64 jj = static_cast<u64>((static_cast<unsigned __int128>(j) * (m / e)) % ord);
                v -= static_cast<double>(e) * out.scaled[e][jj] * std::pow(sq, static_cast<double>(e) - m);
            }
            out.scaled[m][j] = v / static_cast<double>(m);
        }
    }
    return out;
}

enum class SumMethod { Analytic, Enumerated };

// pi_k(n, chi) for k = 0..n, stored as pi_k / q^{n/2}.
struct SumTable {
    unsigned n = 0;
    u32 q = 0;
    u64 chi_index = 0;
    u64 chi_order = 1;
    SumMethod method = SumMethod::Analytic;
    std::vector<cplx> scaled;
    std::vector<std::vector<long long>> exact;  // enumerated: exact[k][j], value class j

    double half_power() const { return std::pow(static_cast<double>(q), 0.5 * n); }
    cplx raw(unsigned k) const { return k < scaled.size() ? scaled[k] * half_power() : 0.0; }
    // M_z(n, chi) / q^{n/2} = sum_k z^k pi_k / q^{n/2}
    cplx m_z_scaled(cplx z) const {
        cplx acc = 0;
        for (std::size_t k = scaled.size(); k-- > 0;) acc = acc * z + scaled[k];
        return acc;
    }
    cplx total_scaled() const { return m_z_scaled(1.0); }
};

namespace detail {

// Sparse S_m(z), the coefficient of v^m (v = sqrt(q) u) in log G_z: pairs (j, coefficient of z^j).
inline std::vector<std::vector<std::pair<unsigned, cplx>>> log_series_terms(const PrimeCharSums& psums, unsigned n_max) {
    const double sq = std::sqrt(static_cast<double>(psums.q));
    std::vector<std::vector<std::pair<unsigned, cplx>>> s(n_max + 1);
    for (unsigned m = 1; m <= n_max; ++m)
        for (unsigned j = 1; j <= m; ++j) {
            if (m % j) continue;
            const unsigned e = m / j;
            const cplx pe = psums.scaled[e][j % psums.order] * std::pow(sq, -static_cast<double>(j - 1) * e);
            s[m].emplace_back(j, pe / static_cast<double>(j));
        }
    return s;
}

} // namespace detail

// Tables for every n = 0..n_max from G = exp(S), where
// S(z, u) = sum_{j>=1} (z^j / j) sum_e P[e][j] u^{je}; u is rescaled by sqrt(q).
inline std::vector<SumTable> pi_k_analytic_all(const LFamily& fam, unsigned n_max, unsigned n_cap = kDefaultNCap) {
    if (n_max > n_cap) throw BudgetError("n = " + std::to_string(n_max) + " exceeds the analytic cap " + std::to_string(n_cap));
    const auto psums = prime_char_sums(fam, std::max(1u, n_max));
    const u32 q = psums.q;
    const u64 ord = psums.order;

    const auto s = detail::log_series_terms(psums, n_max);

    // n G_n = sum_{m=1}^n m S_m G_{n-m}
    std::vector<std::vector<cplx>> g(n_max + 1);
    g[0] = {1.0};
    for (unsigned n = 1; n <= n_max; ++n) {
        std::vector<cplx> acc(n + 1, 0.0);
        for (unsigned m = 1; m <= n; ++m) {
            const auto& prev = g[n - m];
            for (const auto& [j, coef] : s[m]) {
                const cplx w = static_cast<double>(m) * coef;
                for (std::size_t k = 0; k < prev.size(); ++k) acc[k + j] += w * prev[k];
            }
        }
        for (auto& v : acc) v /= static_cast<double>(n);
        g[n] = std::move(acc);
    }

    std::vector<SumTable> out;
    for (unsigned n = 0; n <= n_max; ++n) {
        SumTable t;
        t.n = n;
        t.q = q;
        t.chi_index = fam.chi.index();
        t.chi_order = ord;
        t.method = SumMethod::Analytic;
        t.scaled = g[n];
        t.scaled.resize(n + 1, 0.0);
        out.push_back(std::move(t));
    }
    return out;
}

inline SumTable pi_k_analytic(const LFamily& fam, unsigned n, unsigned n_cap = kDefaultNCap) {
    return pi_k_analytic_all(fam, n, n_cap).back();
}

// M_z(n, chi) / q^{n/2} for n = 0..n_max at one fixed z. Runs the same recurrence on
// scalars, which avoids the cancellation of summing sum_k z^k pi_k for large n.
inline std::vector<cplx> m_z_series_scaled(const LFamily& fam, cplx z, unsigned n_max) {
    const auto psums = prime_char_sums(fam, std::max(1u, n_max));
    const auto s = detail::log_series_terms(psums, n_max);
    std::vector<cplx> sz(n_max + 1, 0.0);
    for (unsigned m = 1; m <= n_max; ++m)
        for (const auto& [j, coef] : s[m]) sz[m] += coef * std::pow(z, static_cast<int>(j));
    std::vector<cplx> g(n_max + 1, 0.0);
    g[0] = 1.0;
    for (unsigned n = 1; n <= n_max; ++n) {
        cplx acc = 0;
        for (unsigned m = 1; m <= n; ++m) acc += static_cast<double>(m) * sz[m] * g[n - m];
        g[n] = acc / static_cast<double>(n);
    }
    return g;
}

// Omega(f) for every monic f of degree n, in index order; cached per (q, n).
inline std::shared_ptr<const std::vector<std::uint8_t>> omega_table(u32 q, unsigned n, unsigned threads = 0) {
    if (threads == 0) threads = thread_count();
    static std::mutex mu;
    static std::map<std::pair<u32, unsigned>, std::shared_ptr<const std::vector<std::uint8_t>>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({q, n}); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<std::vector<std::uint8_t>>(monic_count(q, n));
    const auto parts = monic_partitions(q, n, threads);
    std::vector<std::thread> workers;
    for (const auto& part : parts) {
        workers.emplace_back([&, part] {
            u64 i = part.begin;
            for_each_monic(q, n, part, [&](const Poly& f) { (*table)[i++] = static_cast<std::uint8_t>(omega(f)); });
        });
        if (workers.size() >= threads) {
            for (auto& w : workers) w.join();
            workers.clear();
        }
    }
    for (auto& w : workers) w.join();
    std::lock_guard lock(mu);
    return cache.emplace(std::pair{q, n}, std::move(table)).first->second;
}

// Exact enumeration: sum chi(f) over monic f of degree n, bucketed by Omega(f), in
// integer counts per root-of-unity class.
inline SumTable pi_k_enumerate(const Character& chi, unsigned n, u64 enumeration_cap = kDefaultEnumerationCap, unsigned threads = 0) {
    if (threads == 0) threads = thread_count();
    const UnitGroup& g = chi.group();
    const u32 q = g.field_size();
    const u64 total = monic_count(q, n);
    if (total > enumeration_cap)
        throw BudgetError("q^n = " + std::to_string(total) + " exceeds the enumeration cap " + std::to_string(enumeration_cap));
    const auto deg = static_cast<unsigned>(g.modulus().degree());
    const u64 ord = chi.order();

    // t^i mod d as coefficient vectors; f mod d is the linear combination
    std::vector<std::vector<u32>> tpow(n + 1);
    for (unsigned i = 0; i <= n; ++i) {
        Poly r = Poly::monomial(i, q) % g.modulus();
        tpow[i] = r.coeffs();
        tpow[i].resize(deg, 0);
    }
    const auto omegas = omega_table(q, n, threads);

    const auto parts = monic_partitions(q, n, threads);
    std::vector<std::vector<std::vector<long long>>> partial(parts.size(), std::vector<std::vector<long long>>(n + 1, std::vector<long long>(ord, 0)));
    auto work = [&](std::size_t pi) {
        auto& counts = partial[pi];
        std::vector<u32> digits(n, 0);
        u64 idx = parts[pi].begin;
        for (unsigned j = 0; j < n; ++j) {
            digits[j] = static_cast<u32>(idx % q);
            idx /= q;
        }
        std::vector<u64> acc(deg);
        for (u64 i = parts[pi].begin; i < parts[pi].end; ++i) {
            for (unsigned r = 0; r < deg; ++r) acc[r] = tpow[n][r];
            for (unsigned j = 0; j < n; ++j)
                if (digits[j])
                    for (unsigned r = 0; r < deg; ++r) acc[r] += static_cast<u64>(digits[j]) * tpow[j][r];
            u64 code = 0;
            for (unsigned r = deg; r-- > 0;) code = code * q + acc[r] % q;
            const long long cls = chi.value_class_of_log(g.log_index_of_code(code));
            if (cls >= 0) ++counts[(*omegas)[i]][static_cast<u64>(cls)];
            std::size_t j = 0;
            while (j < n && ++digits[j] == q) digits[j++] = 0;
        }
    };
    std::vector<std::thread> workers;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        workers.emplace_back(work, pi);
        if (workers.size() >= threads) {
            for (auto& w : workers) w.join();
            workers.clear();
        }
    }
    for (auto& w : workers) w.join();

    SumTable t;
    t.n = n;
    t.q = q;
    t.chi_index = chi.index();
    t.chi_order = ord;
    t.method = SumMethod::Enumerated;
    t.exact.assign(n + 1, std::vector<long long>(ord, 0));
    for (const auto& p : partial)
        for (unsigned k = 0; k <= n; ++k)
            for (u64 j = 0; j < ord; ++j) t.exact[k][j] += p[k][j];
    const double scale = std::pow(static_cast<double>(q), -0.5 * n);
    for (unsigned k = 0; k <= n; ++k) t.scaled.push_back(cyclotomic_value(t.exact[k]) * scale);
    return t;
}

// pi~_k = pi_k n (k-1)! (-1)^k / (q^{n/2} (log n)^{k-1}), k >= 1.
struct NormalizedTable {
    unsigned n = 0;
    std::vector<cplx> tilde;  // tilde[0] unused

    cplx at(unsigned k) const {
        if (k == 0) throw std::invalid_argument("normalized value undefined for k = 0");
        return tilde.at(k);
    }
};

// n (k-1)! (-1)^k / (log n)^{k-1}
inline double normalization_factor(unsigned n, unsigned k) {
    if (n < 2) throw std::invalid_argument("normalization needs n >= 2");
    if (k == 0) throw std::invalid_argument("normalization undefined for k = 0");
    const double ln = std::log(static_cast<double>(n));
    double mag;
    if (k <= 20) {
        mag = n;
        for (unsigned i = 1; i < k; ++i) mag *= static_cast<double>(i) / ln;
    } else {
        mag = std::exp(std::log(static_cast<double>(n)) + std::lgamma(static_cast<double>(k)) - (k - 1.0) * std::log(ln));
    }
    return (k % 2 ? -1.0 : 1.0) * mag;
}

inline NormalizedTable normalize(const SumTable& t) {
    if (t.n < 2) throw std::invalid_argument("normalize needs n >= 2");
    NormalizedTable out;
    out.n = t.n;
    out.tilde.assign(t.scaled.size(), cplx(NAN, NAN));
    for (unsigned k = 1; k < t.scaled.size(); ++k) out.tilde[k] = t.scaled[k] * normalization_factor(t.n, k);
    return out;
}

inline cplx denormalize(const NormalizedTable& nt, unsigned k, u32 q) {
    return nt.at(k) / normalization_factor(nt.n, k) * std::pow(static_cast<double>(q), 0.5 * nt.n);
}

} // namespace ffbias

#endif // FFBIAS_CHAR_SUMS_HPP
