#ifndef FFBIAS_CHARACTERS_HPP
#define FFBIAS_CHARACTERS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffbias/errors.hpp"
#include "ffbias/field_poly.hpp"

namespace ffbias {

// exp(2 pi i num/den), or the zero value taken by characters on non-units.
class RootOfUnity {
public:
    RootOfUnity() = default;  // 1
    RootOfUnity(u64 num, u64 den) : num_(den ? num % den : 0), den_(den) {
        if (!den) throw std::invalid_argument("root of unity with zero denominator");
        reduce();
    }
    static RootOfUnity zero() {
        RootOfUnity r;
        r.zero_ = true;
        return r;
    }

    bool is_zero() const { return zero_; }
    bool is_one() const { return !zero_ && num_ == 0; }
    u64 numerator() const { return num_; }
    u64 denominator() const { return den_; }

    RootOfUnity operator*(const RootOfUnity& o) const {
        if (zero_ || o.zero_) return zero();
        const u64 l = std::lcm(den_, o.den_);
        return {(num_ * (l / den_) + o.num_ * (l / o.den_)) % l, l};
    }
    RootOfUnity conj() const {
        if (zero_) return zero();
        return {(den_ - num_) % den_, den_};
    }
    RootOfUnity pow(u64 e) const {
        if (zero_) return e == 0 ? RootOfUnity{} : zero();
        return {static_cast<u64>((static_cast<unsigned __int128>(num_) * e) % den_), den_};
    }

    std::complex<double> to_complex() const {
        if (zero_) return {0.0, 0.0};
        // reduce the angle to [-1/2, 1/2] turns before scaling by 2 pi
        const double frac = num_ * 2 > den_ ? -static_cast<double>(den_ - num_) / den_ : static_cast<double>(num_) / den_;
        if (num_ * 4 == den_) return {0.0, 1.0};
        if (num_ * 2 == den_) return {-1.0, 0.0};
        if (num_ * 4 == 3 * den_) return {0.0, -1.0};
        const double a = 2.0 * std::numbers::pi * frac;
        return {std::cos(a), std::sin(a)};
    }

    bool operator==(const RootOfUnity& o) const {
        if (zero_ || o.zero_) return zero_ == o.zero_;
        return num_ == o.num_ && den_ == o.den_;
    }

private:
    void reduce() {
        const u64 g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }
    u64 num_ = 0;
    u64 den_ = 1;
    bool zero_ = false;
};

// Integer coefficients of the N-th cyclotomic polynomial, constant term first.
inline std::vector<long long> cyclotomic_polynomial(u64 n) {
    // x^n - 1 divided by Phi_d for every proper divisor d
    std::vector<long long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (u64 d = 1; d < n; ++d) {
        if (n % d) continue;
        const auto den = cyclotomic_polynomial(d);
        std::vector<long long> quo(num.size() - den.size() + 1, 0);
        for (std::size_t i = quo.size(); i-- > 0;) {
            const long long c = num[i + den.size() - 1];
            quo[i] = c;
            for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
        }
        num = std::move(quo);
    }
    return num;
}

// True iff sum_j counts[j] exp(2 pi i j / N) = 0 exactly, N = counts.size().
inline bool is_cyclotomic_zero(std::vector<long long> counts) {
    if (counts.empty()) return true;
    const auto phi = cyclotomic_polynomial(counts.size());
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = counts.size(); i-- > deg;) {
        const long long c = counts[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) counts[i - deg + j] -= c * phi[j];
    }
    for (std::size_t i = 0; i < std::min(deg, counts.size()); ++i)
        if (counts[i] != 0) return false;
    return true;
}

struct Generator {
    Poly rep;
    u64 order;
};

inline constexpr u64 kDefaultTableBound = 1'000'000;

// (F_q[t]/d)^x with an explicit basis and a discrete-log table over all residues.
class UnitGroup {
public:
    static constexpr u32 kNotUnit = ~u32{0};

    explicit UnitGroup(const Poly& d, u64 table_bound = kDefaultTableBound) : d_(d), q_(d.modulus()) {
        if (!d.is_monic() || d.degree() < 1) throw std::invalid_argument("modulus must be monic of degree >= 1");
        deg_ = static_cast<unsigned>(d.degree());
        const Factorization fac = factor(d);
        long double phi = 1;
        for (const auto& f : fac.factors) {
            const long double qe = std::pow(static_cast<long double>(q_), f.poly.degree());
            phi *= (qe - 1) * std::pow(qe, static_cast<int>(f.exponent) - 1);
        }
        if (phi > static_cast<long double>(table_bound))
            throw BudgetError("phi(d) = " + std::to_string(static_cast<u64>(phi)) + " exceeds the table bound " + std::to_string(table_bound));
        residues_ = monic_count(q_, deg_);
        if (residues_ > 16 * std::max<u64>(table_bound, 1))
            throw BudgetError("q^deg(d) = " + std::to_string(residues_) + " residues exceeds 16x the table bound");
        order_ = static_cast<u64>(phi);
        for (const auto& f : fac.factors) prime_divisors_.push_back(f.poly);
        build_generators(fac);
        build_log_table();
    }

    const Poly& modulus() const { return d_; }
    u32 field_size() const { return q_; }
    u64 order() const { return order_; }
    u64 exponent() const {
        u64 e = 1;
        for (const auto& g : gens_) e = std::lcm(e, g.order);
        return e;
    }
    const std::vector<Generator>& generators() const { return gens_; }
    const std::vector<Poly>& prime_divisors() const { return prime_divisors_; }
    u64 residue_count() const { return residues_; }

    u64 code(const Poly& r) const {
        u64 c = 0;
        for (std::size_t i = r.coeffs().size(); i-- > 0;) c = c * q_ + r.coeffs()[i];
        return c;
    }
    Poly residue_at(u64 code) const {
        std::vector<u32> c(deg_, 0);
        for (unsigned j = 0; j < deg_; ++j) {
            c[j] = static_cast<u32>(code % q_);
            code /= q_;
        }
        return Poly(std::move(c), q_);
    }

    // Mixed-radix index of the exponent vector of f mod d (first generator least
    // significant), or kNotUnit when gcd(f, d) != 1.
    u32 log_index(const Poly& f) const { return log_[code(f % d_)]; }
    u32 log_index_of_code(u64 residue_code) const { return log_[residue_code]; }

    std::vector<u64> exponents(u32 index) const {
        std::vector<u64> e(gens_.size());
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            e[i] = index % gens_[i].order;
            index = static_cast<u32>(index / gens_[i].order);
        }
        return e;
    }

private:
    struct LocalRing {
        Poly m;
        u64 size;  // q^deg m
        unsigned deg;
    };

    u64 local_code(const Poly& r, u32 q) const {
        u64 c = 0;
        for (std::size_t i = r.coeffs().size(); i-- > 0;) c = c * q + r.coeffs()[i];
        return c;
    }
    Poly local_residue(u64 code, unsigned deg) const {
        std::vector<u32> c(deg, 0);
        for (unsigned j = 0; j < deg; ++j) {
            c[j] = static_cast<u32>(code % q_);
            code /= q_;
        }
        return Poly(std::move(c), q_);
    }

    // Basis of an abelian l-group given as the l-Sylow subgroup of (F_q[t]/m)^x.
    // Greedy: repeatedly take the element of largest order modulo the span so far
    // (first in canonical order) and correct it into a complement.
    std::vector<Generator> sylow_basis(const LocalRing& lr, const Poly& p, u64 group_order, u64 l, unsigned v) const {
        u64 lv = 1;
        for (unsigned i = 0; i < v; ++i) lv *= l;
        const u64 cof = group_order / lv;
        std::vector<char> in_sylow(lr.size, 0);
        for (u64 c = 1; c < lr.size; ++c) {
            Poly x = local_residue(c, lr.deg);
            if ((x % p).is_zero()) continue;
            in_sylow[local_code(pow_mod(x, cof, lr.m), q_)] = 1;
        }

        std::vector<Generator> basis;
        std::vector<u64> span{1};                         // codes of the span, mixed-radix order
        std::vector<long long> span_index(lr.size, -1);  // code -> position in span
        span_index[1] = 0;
        auto l_pow = [&](Poly x, unsigned times) {
            for (unsigned i = 0; i < times; ++i) x = pow_mod(x, l, lr.m);
            return x;
        };

        while (span.size() < lv) {
            u64 best_code = 0;
            unsigned best_a = 0;
            for (u64 c = 1; c < lr.size; ++c) {
                if (!in_sylow[c] || span_index[c] >= 0) continue;
                Poly x = local_residue(c, lr.deg);
                unsigned a = 0;
                while (span_index[local_code(x, q_)] < 0) {
                    x = pow_mod(x, l, lr.m);
                    ++a;
                }
                if (a > best_a) {
                    best_a = a;
                    best_code = c;
                }
            }
            u64 order = 1;
            for (unsigned i = 0; i < best_a; ++i) order *= l;
            Poly h = local_residue(best_code, lr.deg);
            Poly y = l_pow(h, best_a);
            // y = prod g_j^{c_j} with order | c_j; divide out to make h' of exact order
            auto pos = static_cast<u64>(span_index[local_code(y, q_)]);
            for (const auto& g : basis) {
                const u64 cj = pos % g.order;
                pos /= g.order;
                if (cj % order) throw std::logic_error("unit group basis: exponent not divisible");
                h = mul_mod(h, pow_mod(g.rep, g.order - cj / order, lr.m), lr.m);
            }
            basis.push_back({h, order});
            const std::size_t old = span.size();
            Poly power = Poly::one(q_);
            for (u64 i = 1; i < order; ++i) {
                power = mul_mod(power, h, lr.m);
                for (std::size_t s = 0; s < old; ++s) {
                    const u64 c = local_code(mul_mod(local_residue(span[s], lr.deg), power, lr.m), q_);
                    if (span_index[c] >= 0) throw std::logic_error("unit group basis: span not direct");
                    span_index[c] = static_cast<long long>(span.size());
                    span.push_back(c);
                }
            }
        }
        return basis;
    }

    void build_generators(const Factorization& fac) {
        std::vector<LocalRing> locals;
        for (const auto& f : fac.factors) {
            Poly m = Poly::one(q_);
            for (unsigned i = 0; i < f.exponent; ++i) m *= f.poly;
            const auto deg = static_cast<unsigned>(m.degree());
            locals.push_back({m, monic_count(q_, deg), deg});
        }
        for (std::size_t li = 0; li < locals.size(); ++li) {
            const auto& lr = locals[li];
            const Poly& p = fac.factors[li].poly;
            const u64 qd = monic_count(q_, static_cast<unsigned>(p.degree()));
            u64 n = qd - 1;
            for (unsigned i = 1; i < fac.factors[li].exponent; ++i) n *= qd;
            std::vector<std::vector<Generator>> sylows;
            for (u64 l : ffbias::prime_divisors(n)) {
                unsigned v = 0;
                for (u64 t = n; t % l == 0; t /= l) ++v;
                auto b = sylow_basis(lr, p, n, l, v);
                std::sort(b.begin(), b.end(), [](const Generator& a, const Generator& c) { return a.order > c.order; });
                sylows.push_back(std::move(b));
            }
            // invariant factors: multiply the j-th largest generator of every Sylow basis
            std::size_t width = 0;
            for (const auto& s : sylows) width = std::max(width, s.size());
            const Poly cofactor = d_ / lr.m;
            for (std::size_t j = 0; j < width; ++j) {
                Poly g = Poly::one(q_);
                u64 ord = 1;
                for (const auto& s : sylows) {
                    if (j >= s.size()) continue;
                    g = mul_mod(g, s[j].rep, lr.m);
                    ord *= s[j].order;
                }
                gens_.push_back({crt_lift(g, lr.m, cofactor), ord});
            }
        }
        u64 prod = 1;
        for (const auto& g : gens_) {
            prod *= g.order;
            if (!pow_mod(g.rep, g.order, d_).is_one()) throw std::logic_error("generator order check failed");
            for (u64 l : ffbias::prime_divisors(g.order))
                if (pow_mod(g.rep, g.order / l, d_).is_one()) throw std::logic_error("generator order is not exact");
        }
        if (prod != order_) throw std::logic_error("generator orders do not multiply to phi(d)");
    }

    // The residue mod d that is g mod m and 1 mod d/m.
    Poly crt_lift(const Poly& g, const Poly& m, const Poly& cofactor) const {
        if (cofactor.degree() == 0) return g % d_;
        // inverse of cofactor mod m by extended Euclid
        Poly r0 = m, r1 = cofactor % m, s0(q_), s1 = Poly::one(q_);
        while (!r1.is_zero()) {
            auto [quo, rem] = divmod(r0, r1);
            Poly s2 = s0 - quo * s1;
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant
        Poly inv = s0.scaled(inv_mod(r0.coeff(0), q_)) % m;
        return (Poly::one(q_) + (g - Poly::one(q_)) * cofactor * inv) % d_;
    }

    void build_log_table() {
        log_.assign(residues_, kNotUnit);
        std::vector<u64> codes(order_);
        codes[0] = code(Poly::one(q_) % d_);
        u64 stride = 1;
        for (const auto& g : gens_) {
            for (u64 idx = stride; idx < stride * g.order; ++idx)
                codes[idx] = code(mul_mod(residue_at(codes[idx - stride]), g.rep, d_));
            stride *= g.order;
        }
        for (u64 idx = 0; idx < order_; ++idx) {
            if (log_[codes[idx]] != kNotUnit) throw std::logic_error("discrete log table collision");
            log_[codes[idx]] = static_cast<u32>(idx);
        }
    }

    Poly d_;
    u32 q_;
    unsigned deg_ = 0;
    u64 order_ = 0;
    u64 residues_ = 0;
    std::vector<Poly> prime_divisors_;
    std::vector<Generator> gens_;
    std::vector<u32> log_;
};

// phi(d) = q^deg d * prod_{p | d} (1 - q^-deg p), computed from the factorization.
inline u64 euler_phi(const Poly& d) {
    const Factorization fac = factor(d);
    const u32 q = d.modulus();
    u64 phi = 1;
    for (const auto& f : fac.factors) {
        const u64 qe = monic_count(q, static_cast<unsigned>(f.poly.degree()));
        phi *= qe - 1;
        for (unsigned i = 1; i < f.exponent; ++i) phi *= qe;
    }
    return phi;
}

// A Dirichlet character mod d, given by exponents a_i on the generators g_i:
// chi(g_i) = exp(2 pi i a_i / order_i).
class Character {
public:
    Character(std::shared_ptr<const UnitGroup> group, std::vector<u64> exps) : group_(std::move(group)), exps_(std::move(exps)) {
        const auto& gens = group_->generators();
        if (exps_.size() != gens.size()) throw std::invalid_argument("character exponent vector has wrong length");
        exponent_ = group_->exponent();
        order_ = 1;
        weights_.resize(gens.size());
        for (std::size_t i = 0; i < gens.size(); ++i) {
            exps_[i] %= gens[i].order;
            weights_[i] = exps_[i] * (exponent_ / gens[i].order);
            order_ = std::lcm(order_, gens[i].order / std::gcd(exps_[i], gens[i].order));
        }
    }

    static Character from_index(std::shared_ptr<const UnitGroup> group, u64 index) {
        if (index >= group->order()) throw std::out_of_range("character index " + std::to_string(index) + " out of range");
        std::vector<u64> e;
        for (const auto& g : group->generators()) {
            e.push_back(index % g.order);
            index /= g.order;
        }
        return {std::move(group), std::move(e)};
    }

    const UnitGroup& group() const { return *group_; }
    const std::shared_ptr<const UnitGroup>& group_ptr() const { return group_; }
    const std::vector<u64>& exponents() const { return exps_; }

    u64 index() const {
        u64 idx = 0, stride = 1;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            idx += exps_[i] * stride;
            stride *= group_->generators()[i].order;
        }
        return idx;
    }
    u64 order() const { return order_; }
    bool is_principal() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }

    Character pow(u64 j) const {
        std::vector<u64> e(exps_.size());
        const auto& gens = group_->generators();
        for (std::size_t i = 0; i < e.size(); ++i)
            e[i] = static_cast<u64>((static_cast<unsigned __int128>(exps_[i]) * j) % gens[i].order);
        return {group_, std::move(e)};
    }
    Character conj() const { return pow(order_ - 1); }

    // Value class j with chi(f) = exp(2 pi i j / order()), or -1 when gcd(f, d) != 1.
    long long value_class_of_log(u32 log_index) const {
        if (log_index == UnitGroup::kNotUnit) return -1;
        const auto& gens = group_->generators();
        u64 acc = 0;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const u64 e = log_index % gens[i].order;
            log_index = static_cast<u32>(log_index / gens[i].order);
            acc = (acc + weights_[i] * e) % exponent_;
        }
        return static_cast<long long>(acc / (exponent_ / order_));
    }
    long long value_class(const Poly& f) const { return value_class_of_log(group_->log_index(f)); }

    RootOfUnity eval(const Poly& f) const {
        const long long j = value_class(f);
        if (j < 0) return RootOfUnity::zero();
        return {static_cast<u64>(j), order_};
    }
    RootOfUnity eval_residue_code(u64 code) const {
        const long long j = value_class_of_log(group_->log_index_of_code(code));
        if (j < 0) return RootOfUnity::zero();
        return {static_cast<u64>(j), order_};
    }

    bool operator==(const Character& o) const { return group_ == o.group_ && exps_ == o.exps_; }

private:
    std::shared_ptr<const UnitGroup> group_;
    std::vector<u64> exps_;
    std::vector<u64> weights_;
    u64 exponent_ = 1;
    u64 order_ = 1;
};

// All phi(d) characters in mixed-radix index order; index 0 is principal.
inline std::vector<Character> characters(const std::shared_ptr<const UnitGroup>& group) {
    std::vector<Character> out;
    out.reserve(group->order());
    for (u64 i = 0; i < group->order(); ++i) out.push_back(Character::from_index(group, i));
    return out;
}

inline std::shared_ptr<const UnitGroup> unit_group(const Poly& d, u64 table_bound = kDefaultTableBound) {
    return std::make_shared<const UnitGroup>(d, table_bound);
}

} // namespace ffbias

#endif // FFBIAS_CHARACTERS_HPP
