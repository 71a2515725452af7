#ifndef FFBIAS_FIELD_POLY_HPP
#define FFBIAS_FIELD_POLY_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <compare>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffbias/errors.hpp"

namespace ffbias {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline constexpr u32 kMaxFieldSize = 1u << 16;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline u32 validated_field_size(u64 q) {
    thread_local u64 last_ok = 0;
    if (q == last_ok) return static_cast<u32>(q);
    if (q > kMaxFieldSize || !is_prime(q))
        throw std::invalid_argument("field size q must be a prime <= 65536, got " + std::to_string(q));
    last_ok = q;
    return static_cast<u32>(q);
}

inline u32 mul_mod(u32 a, u32 b, u32 q) { return static_cast<u32>(static_cast<u64>(a) * b % q); }
inline u32 add_mod(u32 a, u32 b, u32 q) { u32 s = a + b; return s >= q ? s - q : s; }
inline u32 sub_mod(u32 a, u32 b, u32 q) { return a >= b ? a - b : a + q - b; }

inline u32 pow_mod(u32 a, u64 e, u32 q) {
    u64 r = 1 % q, x = a % q;
    while (e) {
        if (e & 1) r = r * x % q;
        x = x * x % q;
        e >>= 1;
    }
    return static_cast<u32>(r);
}

inline u32 inv_mod(u32 a, u32 q) {
    if (a % q == 0) throw std::domain_error("inverse of zero in F_q");
    return pow_mod(a, q - 2, q);
}

// Element of the prime field F_q.
class FieldElem {
public:
    FieldElem(u64 value, u32 q) : q_(validated_field_size(q)), v_(static_cast<u32>(value % q)) {}

    u32 value() const { return v_; }
    u32 modulus() const { return q_; }

    FieldElem operator+(FieldElem o) const { check(o); return raw(add_mod(v_, o.v_, q_)); }
    FieldElem operator-(FieldElem o) const { check(o); return raw(sub_mod(v_, o.v_, q_)); }
    FieldElem operator*(FieldElem o) const { check(o); return raw(mul_mod(v_, o.v_, q_)); }
    FieldElem operator-() const { return raw(sub_mod(0, v_, q_)); }
    FieldElem inverse() const { return raw(inv_mod(v_, q_)); }
    FieldElem pow(u64 e) const { return raw(pow_mod(v_, e, q_)); }

    bool operator==(const FieldElem&) const = default;

private:
    struct Raw {};
    FieldElem(Raw, u32 v, u32 q) : q_(q), v_(v) {}
    FieldElem raw(u32 v) const { return FieldElem(Raw{}, v, q_); }
    void check(FieldElem o) const {
        if (o.q_ != q_) throw std::invalid_argument("field elements over different F_q");
    }
    u32 q_;
    u32 v_;
};

// Polynomial over F_q, coefficients stored constant term first. The zero
// polynomial has no coefficients; otherwise the leading coefficient is nonzero.
class Poly {
public:
    explicit Poly(u32 q) : q_(validated_field_size(q)) {}
    Poly(std::vector<u32> coeffs, u32 q) : c_(std::move(coeffs)), q_(validated_field_size(q)) {
        for (auto& x : c_) x %= q_;
        trim();
    }

    static Poly constant(u32 c, u32 q) { return Poly({c}, q); }
    static Poly one(u32 q) { return constant(1, q); }
    static Poly monomial(std::size_t e, u32 q, u32 c = 1) {
        std::vector<u32> v(e + 1, 0);
        v[e] = c;
        return Poly(std::move(v), q);
    }
    static Poly t(u32 q) { return monomial(1, q); }

    u32 modulus() const { return q_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    u32 leading() const { return c_.empty() ? 0 : c_.back(); }
    u32 coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<u32>& coeffs() const { return c_; }

    u32 eval(u32 x) const {
        u64 acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * x + *it) % q_;
        return static_cast<u32>(acc);
    }

    Poly& operator+=(const Poly& o) {
        same_field(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], q_);
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        same_field(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], q_);
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& x : a.c_) x = sub_mod(0, x, a.q_);
        return a;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.same_field(b);
        if (a.is_zero() || b.is_zero()) return Poly(a.q_);
        const u32 q = a.q_;
        std::vector<u64> acc(a.c_.size() + b.c_.size() - 1, 0);
        // products are < 2^32; reducing every 2^16 rows keeps the sums below 2^48
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (!a.c_[i]) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += static_cast<u64>(a.c_[i]) * b.c_[j];
            if ((i & 0xFFFF) == 0xFFFF)
                for (auto& x : acc) x %= q;
        }
        std::vector<u32> out(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<u32>(acc[i] % q);
        return Poly(std::move(out), q);
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(u32 c) const {
        Poly r = *this;
        for (auto& x : r.c_) x = mul_mod(x, c % q_, q_);
        r.trim();
        return r;
    }

    bool operator==(const Poly& o) const { return q_ == o.q_ && c_ == o.c_; }

    // Canonical order: by degree, then lexicographic from the leading coefficient down.
    friend std::strong_ordering canonical_compare(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
        return std::strong_ordering::equal;
    }
    friend bool canonical_less(const Poly& a, const Poly& b) { return canonical_compare(a, b) < 0; }

    void same_field(const Poly& o) const {
        if (o.q_ != q_) throw std::invalid_argument("polynomials over different F_q");
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<u32> c_;
    u32 q_;
};

struct DivMod {
    Poly quotient;
    Poly remainder;
};

inline DivMod divmod(const Poly& a, const Poly& b) {
    a.same_field(b);
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    const u32 q = a.modulus();
    if (a.degree() < b.degree()) return {Poly(q), a};
    std::vector<u32> r = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    const u32 lead_inv = inv_mod(bc.back(), q);
    std::vector<u32> quo(r.size() - db, 0);
    for (std::size_t i = r.size(); i-- > db;) {
        const u32 c = mul_mod(r[i], lead_inv, q);
        quo[i - db] = c;
        if (!c) continue;
        const u32 neg = q - c;
        for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = static_cast<u32>((r[i - db + j] + static_cast<u64>(neg) * bc[j]) % q);
    }
    r.resize(db);
    return {Poly(std::move(quo), q), Poly(std::move(r), q)};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).remainder; }
inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).quotient; }

inline Poly make_monic(const Poly& f) {
    if (f.is_zero() || f.is_monic()) return f;
    return f.scaled(inv_mod(f.leading(), f.modulus()));
}

// Monic gcd (zero only when both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
    a.same_field(b);
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

inline Poly derivative(const Poly& f) {
    if (f.degree() < 1) return Poly(f.modulus());
    const u32 q = f.modulus();
    std::vector<u32> d(f.coeffs().size() - 1);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i) d[i - 1] = mul_mod(static_cast<u32>(i % q), f.coeffs()[i], q);
    return Poly(std::move(d), q);
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

inline Poly pow_mod(Poly base, u64 e, const Poly& m) {
    Poly r = Poly::one(m.modulus()) % m;
    base = base % m;
    while (e) {
        if (e & 1) r = mul_mod(r, base, m);
        e >>= 1;
        if (e) base = mul_mod(base, base, m);
    }
    return r;
}

// x^(q^times) mod m by repeated Frobenius.
inline Poly frobenius_pow(Poly x, unsigned times, const Poly& m) {
    for (unsigned i = 0; i < times; ++i) x = pow_mod(x, m.modulus(), m);
    return x;
}

inline std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Rabin's test: t^(q^n) = t mod f and gcd(t^(q^(n/l)) - t, f) = 1 for primes l | n.
inline bool is_irreducible(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1)
        throw std::invalid_argument("is_irreducible expects a monic polynomial of degree >= 1");
    const auto n = static_cast<unsigned>(f.degree());
    if (n == 1) return true;
    const u32 q = f.modulus();
    const Poly t = Poly::t(q) % f;
    for (u64 l : prime_divisors(n)) {
        Poly h = frobenius_pow(t, static_cast<unsigned>(n / l), f);
        if (!gcd(h - t, f).is_one()) return false;
    }
    return frobenius_pow(t, n, f) == t;
}

struct Factor {
    Poly poly;
    unsigned exponent;
};

struct Factorization {
    std::vector<Factor> factors;  // canonical order, pairwise distinct
    u32 unit = 1;

    unsigned omega() const {
        unsigned s = 0;
        for (const auto& f : factors) s += f.exponent;
        return s;
    }
    Poly expand(u32 q) const {
        Poly r = Poly::constant(unit, q);
        for (const auto& f : factors)
            for (unsigned i = 0; i < f.exponent; ++i) r *= f.poly;
        return r;
    }
};

namespace detail {

// p-th root of a polynomial whose derivative vanishes (all exponents divisible by p).
inline Poly pth_root(const Poly& f) {
    const u32 p = f.modulus();
    std::vector<u32> out(f.coeffs().size() / p + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) out[i / p] = f.coeffs()[i];
    return Poly(std::move(out), p);
}

// Square-free decomposition of a monic f: pairs (g_i, m) with f = prod g_i^m, g_i square-free.
inline std::vector<std::pair<Poly, unsigned>> squarefree(const Poly& f, unsigned mult = 1) {
    std::vector<std::pair<Poly, unsigned>> out;
    const u32 q = f.modulus();
    Poly c = gcd(f, derivative(f));
    Poly w = f / c;
    unsigned i = 1;
    while (!w.is_one()) {
        Poly y = gcd(w, c);
        Poly fac = w / y;
        if (!fac.is_one()) out.emplace_back(std::move(fac), i * mult);
        w = std::move(y);
        c = c / w;
        ++i;
    }
    if (!c.is_one()) {
        auto rest = squarefree(pth_root(c), mult * q);
        for (auto& r : rest) out.push_back(std::move(r));
    }
    return out;
}

// Distinct-degree factorization of a square-free monic f: pairs (g, e) where g
// is the product of all irreducible factors of degree e.
inline std::vector<std::pair<Poly, unsigned>> distinct_degree(Poly f) {
    std::vector<std::pair<Poly, unsigned>> out;
    const u32 q = f.modulus();
    const Poly t = Poly::t(q);
    Poly h = t % f;
    unsigned e = 1;
    while (f.degree() >= 2 * static_cast<int>(e)) {
        h = pow_mod(h, q, f);
        Poly g = gcd(h - t, f);
        if (!g.is_one()) {
            f = f / g;
            h = h % f;
            out.emplace_back(std::move(g), e);
        }
        ++e;
    }
    if (f.degree() > 0) {
        const auto d = static_cast<unsigned>(f.degree());
        out.emplace_back(std::move(f), d);
    }
    return out;
}

// Map a |-> a^((q^e - 1)/2) - 1 (odd q) or the absolute trace (q = 2), mod g.
inline Poly splitting_map(const Poly& a, unsigned e, const Poly& g) {
    const u32 q = g.modulus();
    if (q == 2) {
        Poly acc = a % g, s = acc;
        for (unsigned j = 1; j < e; ++j) {
            s = mul_mod(s, s, g);
            acc += s;
        }
        return acc;
    }
    // (q^e - 1)/2 = ((q - 1)/2) * (1 + q + ... + q^(e-1))
    Poly s = a % g, norm = s;
    for (unsigned j = 1; j < e; ++j) {
        s = pow_mod(s, q, g);
        norm = mul_mod(norm, s, g);
    }
    return pow_mod(norm, (q - 1) / 2, g) - Poly::one(q);
}

// Equal-degree splitting of g (product of irreducibles of degree e). Candidates
// are tried in canonical order, so the result is reproducible without a seed.
inline void equal_degree(const Poly& g, unsigned e, std::vector<Poly>& out) {
    if (g.degree() == static_cast<int>(e)) {
        out.push_back(g);
        return;
    }
    const u32 q = g.modulus();
    const auto n = static_cast<unsigned>(g.degree());
    std::vector<u32> digits(n, 0);
    for (;;) {
        // advance the odometer over all residues of degree < n
        std::size_t i = 0;
        while (i < n && ++digits[i] == q) digits[i++] = 0;
        if (i == n) throw std::logic_error("equal-degree splitting found no splitting element");
        Poly a(digits, q);
        if (a.degree() < 1) continue;
        Poly d = gcd(splitting_map(a, e, g), g);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            equal_degree(d, e, out);
            equal_degree(g / d, e, out);
            return;
        }
    }
}

} // namespace detail

inline Factorization factor(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
    Factorization out;
    out.unit = f.leading();
    const Poly m = make_monic(f);
    std::vector<Factor> acc;
    for (auto& [sf, mult] : detail::squarefree(m)) {
        for (auto& [g, e] : detail::distinct_degree(sf)) {
            std::vector<Poly> parts;
            detail::equal_degree(g, e, parts);
            for (auto& p : parts) acc.push_back({std::move(p), mult});
        }
    }
    std::sort(acc.begin(), acc.end(), [](const Factor& a, const Factor& b) { return canonical_less(a.poly, b.poly); });
    for (auto& fac : acc) {
        if (!out.factors.empty() && out.factors.back().poly == fac.poly)
            out.factors.back().exponent += fac.exponent;
        else
            out.factors.push_back(std::move(fac));
    }
    return out;
}

// Omega(f) without equal-degree splitting: a degree-n product of degree-e
// irreducibles contributes n/e factors.
inline unsigned omega(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("omega of the zero polynomial");
    unsigned total = 0;
    for (auto& [sf, mult] : detail::squarefree(make_monic(f)))
        for (auto& [g, e] : detail::distinct_degree(sf)) total += mult * static_cast<unsigned>(g.degree()) / e;
    return total;
}

// ---------------------------------------------------------------------------
// Monic enumeration. Index i in [0, q^n) maps to t^n + sum c_j t^j with the
// base-q digits of i as c_0 (least significant) .. c_{n-1}; index order is the
// canonical order.

inline u64 checked_pow(u64 base, unsigned e) {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > ~u64{0} / base) throw BudgetError("q^n overflows 64 bits");
        r *= base;
    }
    return r;
}

inline u64 monic_count(u32 q, unsigned n) { return checked_pow(q, n); }

inline Poly monic_at(u32 q, unsigned n, u64 index) {
    std::vector<u32> c(n + 1, 0);
    for (unsigned j = 0; j < n; ++j) {
        c[j] = static_cast<u32>(index % q);
        index /= q;
    }
    c[n] = 1;
    return Poly(std::move(c), q);
}

struct IndexRange {
    u64 begin;
    u64 end;
};

// Split [0, q^n) into at most `parts` contiguous blocks aligned to the leading
// digits, i.e. each block fixes a prefix of the high-order coefficients.
inline std::vector<IndexRange> monic_partitions(u32 q, unsigned n, unsigned parts) {
    const u64 total = monic_count(q, n);
    u64 block = total;
    unsigned fixed = 0;
    while (fixed < n && total / block < parts) {
        block /= q;
        ++fixed;
    }
    std::vector<IndexRange> out;
    for (u64 b = 0; b < total; b += block) out.push_back({b, b + block});
    return out;
}

// Calls fn(const Poly&) for every monic polynomial of degree n with index in [begin, end).
template <class Fn>
void for_each_monic(u32 q, unsigned n, IndexRange range, Fn&& fn) {
    if (range.begin >= range.end) return;
    Poly f = monic_at(q, n, range.begin);
    std::vector<u32> c = f.coeffs();
    for (u64 i = range.begin; i < range.end; ++i) {
        fn(static_cast<const Poly&>(f));
        std::size_t j = 0;
        while (j < n && ++c[j] == q) c[j++] = 0;
        f = Poly(c, q);
    }
}

template <class Fn>
void for_each_monic(u32 q, unsigned n, Fn&& fn) {
    for_each_monic(q, n, IndexRange{0, monic_count(q, n)}, std::forward<Fn>(fn));
}

// Lazy range over monic polynomials of degree n, in canonical order.
class MonicRange {
public:
    MonicRange(u32 q, unsigned n) : q_(validated_field_size(q)), n_(n), count_(monic_count(q, n)) {}

    class iterator {
    public:
        using value_type = Poly;
        using difference_type = std::ptrdiff_t;
        iterator(u32 q, unsigned n, u64 i) : q_(q), n_(n), i_(i) {}
        Poly operator*() const { return monic_at(q_, n_, i_); }
        iterator& operator++() { ++i_; return *this; }
        iterator operator++(int) { auto c = *this; ++i_; return c; }
        bool operator==(const iterator& o) const { return i_ == o.i_; }
    private:
        u32 q_;
        unsigned n_;
        u64 i_;
    };

    iterator begin() const { return {q_, n_, 0}; }
    iterator end() const { return {q_, n_, count_}; }
    u64 size() const { return count_; }

private:
    u32 q_;
    unsigned n_;
    u64 count_;
};

inline MonicRange iter_monic(u32 q, unsigned n) { return {q, n}; }

inline int mobius(u64 m) {
    int mu = 1;
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        m /= p;
        if (m % p == 0) return 0;
        mu = -mu;
    }
    if (m > 1) mu = -mu;
    return mu;
}

// Number of monic irreducibles of degree e: (1/e) sum_{m | e} mu(m) q^(e/m).
inline u64 count_irreducibles(u32 q, unsigned e) {
    if (e == 0) throw std::invalid_argument("count_irreducibles needs e >= 1");
    __int128 s = 0;
    for (unsigned m = 1; m <= e; ++m)
        if (e % m == 0) s += static_cast<__int128>(mobius(m)) * static_cast<__int128>(checked_pow(q, e / m));
    return static_cast<u64>(s / e);
}

// ---------------------------------------------------------------------------
// Text format: terms c*t^e joined by '+', descending exponents; t^1 is 't',
// t^0 is the bare coefficient, coefficient 1 is omitted.

inline std::string to_string(const Poly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        const u32 c = f.coeffs()[i];
        if (!c) continue;
        if (!s.empty()) s += '+';
        if (i == 0) {
            s += std::to_string(c);
            continue;
        }
        if (c != 1) s += std::to_string(c) + "*";
        s += 't';
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& f) { return os << to_string(f); }

inline Poly parse_poly(std::string_view text, u32 q) {
    q = validated_field_size(q);
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty polynomial string");
    if (s == "0") return Poly(q);

    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError("bad polynomial '" + std::string(text) + "': " + why);
    };
    auto read_uint = [&](std::size_t& pos) -> u64 {
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) throw fail("expected a number");
        u64 v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<u64>(s[pos++] - '0');
            if (v > (u64{1} << 40)) throw fail("number too large");
        }
        return v;
    };

    std::map<u64, u32> terms;
    std::size_t pos = 0;
    for (;;) {
        u64 c = 1;
        u64 e = 0;
        bool has_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            c = read_uint(pos);
            has_coeff = true;
            if (c == 0 || c >= q) throw fail("coefficient out of range [1, q)");
        }
        if (pos < s.size() && (s[pos] == '*' || s[pos] == 't')) {
            if (s[pos] == '*') {
                if (!has_coeff) throw fail("'*' without coefficient");
                ++pos;
            }
            if (pos >= s.size() || s[pos] != 't') throw fail("expected 't'");
            ++pos;
            e = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                e = read_uint(pos);
            }
        } else if (!has_coeff) {
            throw fail("expected a term");
        }
        if (e > 100000) throw fail("exponent too large");
        if (!terms.emplace(e, static_cast<u32>(c)).second) throw fail("repeated exponent");
        if (pos == s.size()) break;
        if (s[pos] != '+') throw fail(std::string("unexpected character '") + s[pos] + "'");
        ++pos;
        if (pos == s.size()) throw fail("trailing '+'");
    }
    std::vector<u32> c(terms.rbegin()->first + 1, 0);
    for (auto& [e, v] : terms) c[e] = v;
    return Poly(std::move(c), q);
}

} // namespace ffbias

#endif // FFBIAS_FIELD_POLY_HPP
