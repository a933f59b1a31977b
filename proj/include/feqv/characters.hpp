#pragma once

// Dirichlet characters of modulus up to 10^4, built from the cyclic
// decomposition of the unit group. Values are stored as exact rational
// angles so tests like chi(n) == 1 are exact integer comparisons.

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"

namespace feqv {

inline constexpr long long max_character_modulus = 10000;

// e^{2pi i num/den} with 0 <= num < den; den == 0 marks the value 0.
struct RationalAngle {
    long long num = 0;
    long long den = 1;
    bool is_zero() const { return den == 0; }
    bool is_one() const { return den != 0 && num == 0; }
    Complex value() const {
        if (den == 0) return 0.0;
        return std::polar(1.0, 2.0 * pi * static_cast<double>(num) / static_cast<double>(den));
    }
};

namespace detail {

inline long long pow_mod(long long base, long long exp, long long mod) {
    long long r = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

inline std::vector<long long> prime_factors(long long n) {
    std::vector<long long> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline long long primitive_root_mod_p(long long p) {
    if (p == 2) return 1;
    std::vector<long long> qs = prime_factors(p - 1);
    for (long long g = 2; g < p; ++g) {
        bool ok = true;
        for (long long q : qs)
            if (pow_mod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw error("primitive_root_mod_p: no generator found");
}

// One cyclic factor of (Z/q)*: a generator (lifted mod q), its order, and a
// discrete-log table indexed by residues mod pe.
struct CyclicFactor {
    long long pe = 1;
    long long generator_mod_q = 1;
    long long order = 1;
    std::vector<long long> dlog; // size pe, -1 for non-units
};

inline long long crt_lift(long long g, long long pe, long long q) {
    // Solve x = g (mod pe), x = 1 (mod q/pe).
    long long r = q / pe;
    if (r == 1) return g % q;
    for (long long x = g % q; ; x += pe)
        if (x % r == 1) return x % q;
}

struct UnitGroup {
    long long q = 1;
    std::vector<CyclicFactor> factors;

    explicit UnitGroup(long long modulus) : q(modulus) {
        long long n = q;
        long long two_e = 1;
        while (n % 2 == 0) { n /= 2; two_e *= 2; }
        if (two_e == 4) {
            CyclicFactor f;
            f.pe = 4;
            f.order = 2;
            f.dlog.assign(4, -1);
            f.dlog[1] = 0;
            f.dlog[3] = 1;
            f.generator_mod_q = crt_lift(3, 4, q);
            factors.push_back(std::move(f));
        } else if (two_e >= 8) {
            CyclicFactor neg;
            neg.pe = two_e;
            neg.order = 2;
            neg.dlog.assign(two_e, -1);
            CyclicFactor five;
            five.pe = two_e;
            five.order = two_e / 4;
            five.dlog.assign(two_e, -1);
            for (long long a = 0; a < 2; ++a) {
                long long base = (a == 0) ? 1 : two_e - 1;
                long long x = base;
                for (long long b = 0; b < five.order; ++b) {
                    neg.dlog[x] = a;
                    five.dlog[x] = b;
                    x = x * 5 % two_e;
                }
            }
            neg.generator_mod_q = crt_lift(two_e - 1, two_e, q);
            five.generator_mod_q = crt_lift(5, two_e, q);
            factors.push_back(std::move(neg));
            factors.push_back(std::move(five));
        }
        // two_e == 1 or 2: trivial factor, nothing to record.
        long long p = 3;
        while (n > 1) {
            if (p * p > n) p = n;
            if (n % p == 0) {
                long long pe = 1;
                while (n % p == 0) { n /= p; pe *= p; }
                long long g = primitive_root_mod_p(p);
                if (pe > p && pow_mod(g, p - 1, p * p) == 1) g += p;
                CyclicFactor f;
                f.pe = pe;
                f.order = pe / p * (p - 1);
                f.dlog.assign(pe, -1);
                long long x = 1 % pe;
                for (long long j = 0; j < f.order; ++j) {
                    f.dlog[x] = j;
                    x = x * (g % pe) % pe;
                }
                f.generator_mod_q = crt_lift(g % pe, pe, q);
                factors.push_back(std::move(f));
            }
            p += 2;
        }
    }
};

inline const UnitGroup& unit_group(long long q) {
    // Keyed cache; entries are never evicted, so references stay valid.
    thread_local std::vector<UnitGroup*> cache;
    for (const UnitGroup* g : cache)
        if (g->q == q) return *g;
    cache.push_back(new UnitGroup(q));
    return *cache.back();
}

} // namespace detail

class DirichletCharacter {
  public:
    struct GeneratorExponent {
        long long generator = 1;
        long long order = 1;
        long long exponent = 0;
    };

    DirichletCharacter(long long q, std::vector<long long> exponents)
        : q_(q), exponents_(std::move(exponents)) {
        if (q < 1 || q > max_character_modulus)
            throw domain_error("DirichletCharacter: modulus out of range [1, 10^4]");
        const auto& grp = detail::unit_group(q);
        if (exponents_.size() != grp.factors.size())
            throw domain_error("DirichletCharacter: exponent count does not match the group");
        for (std::size_t i = 0; i < exponents_.size(); ++i) {
            long long d = grp.factors[i].order;
            exponents_[i] = ((exponents_[i] % d) + d) % d;
        }
        build_table(grp);
        conductor_ = compute_conductor();
        parity_ = angle(q_ > 1 ? q_ - 1 : 1).is_one() ? 0 : 1;
    }

    long long modulus() const { return q_; }
    long long conductor() const { return conductor_; }
    bool is_primitive() const { return conductor_ == q_; }
    bool is_principal() const {
        return std::all_of(exponents_.begin(), exponents_.end(),
                           [](long long e) { return e == 0; });
    }
    int parity() const { return parity_; }

    RationalAngle angle(long long n) const {
        long long r = n % q_;
        if (r < 0) r += q_;
        return table_[static_cast<std::size_t>(r)];
    }

    Complex operator()(long long n) const { return angle(n).value(); }

    DirichletCharacter conjugate() const {
        std::vector<long long> neg(exponents_.size());
        for (std::size_t i = 0; i < exponents_.size(); ++i) neg[i] = -exponents_[i];
        return DirichletCharacter(q_, std::move(neg));
    }

    std::vector<GeneratorExponent> generator_exponents() const {
        const auto& grp = detail::unit_group(q_);
        std::vector<GeneratorExponent> out;
        for (std::size_t i = 0; i < exponents_.size(); ++i)
            out.push_back({grp.factors[i].generator_mod_q, grp.factors[i].order, exponents_[i]});
        return out;
    }

    bool operator==(const DirichletCharacter& o) const {
        return q_ == o.q_ && exponents_ == o.exponents_;
    }

  private:
    void build_table(const detail::UnitGroup& grp) {
        long long lcm_den = 1;
        for (const auto& f : grp.factors) lcm_den = std::lcm(lcm_den, f.order);
        table_.assign(static_cast<std::size_t>(q_), RationalAngle{0, 0});
        for (long long n = 0; n < q_; ++n) {
            if (std::gcd(n, q_) != 1) continue;
            long long num = 0;
            for (std::size_t i = 0; i < grp.factors.size(); ++i) {
                const auto& f = grp.factors[i];
                long long e = f.dlog[static_cast<std::size_t>(n % f.pe)];
                num = (num + exponents_[i] * e % lcm_den * (lcm_den / f.order)) % lcm_den;
            }
            long long g = std::gcd(num, lcm_den);
            if (num == 0) g = lcm_den;
            table_[static_cast<std::size_t>(n)] = RationalAngle{num / g, lcm_den / g};
        }
        // q = 1: the single residue class counts as the unit.
        if (q_ == 1) table_[0] = RationalAngle{0, 1};
    }

    long long compute_conductor() const {
        for (long long f = 1; f <= q_; ++f) {
            if (q_ % f != 0) continue;
            bool ok = true;
            for (long long n = 1; n < q_ && ok; ++n) {
                if (std::gcd(n, q_) != 1 || (n - 1) % f != 0) continue;
                if (!angle(n).is_one()) ok = false;
            }
            if (ok) return f;
        }
        return q_;
    }

    long long q_;
    std::vector<long long> exponents_;
    std::vector<RationalAngle> table_;
    long long conductor_ = 1;
    int parity_ = 0;
};

inline std::vector<DirichletCharacter> character_group(long long q) {
    if (q < 1 || q > max_character_modulus)
        throw domain_error("character_group: modulus out of range [1, 10^4]");
    const auto& grp = detail::unit_group(q);
    std::vector<long long> orders;
    for (const auto& f : grp.factors) orders.push_back(f.order);
    std::vector<DirichletCharacter> out;
    std::vector<long long> idx(orders.size(), 0);
    while (true) {
        out.emplace_back(q, idx);
        std::size_t i = idx.size();
        while (i > 0) {
            --i;
            if (++idx[i] < orders[i]) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
        if (idx.empty()) return out;
    }
}

inline DirichletCharacter principal_character(long long q) {
    const auto& grp = detail::unit_group(q);
    return DirichletCharacter(q, std::vector<long long>(grp.factors.size(), 0));
}

inline Complex gauss_sum(const DirichletCharacter& chi) {
    long long q = chi.modulus();
    Complex sum = 0.0;
    for (long long a = 1; a <= q; ++a) {
        RationalAngle r = chi.angle(a);
        if (r.is_zero()) continue;
        sum += r.value() * std::polar(1.0, 2.0 * pi * static_cast<double>(a) / static_cast<double>(q));
    }
    return sum;
}

// Pick the unique character matching value pins (n, chi(n)). Tolerance 1e-9
// per pin; zero or multiple matches raise lookup_error.
inline DirichletCharacter find_character(
    long long q, const std::vector<std::pair<long long, Complex>>& pins) {
    auto group = character_group(q);
    std::vector<const DirichletCharacter*> hits;
    for (const auto& chi : group) {
        bool ok = true;
        for (const auto& [n, v] : pins)
            if (std::abs(chi(n) - v) > 1e-9) { ok = false; break; }
        if (ok) hits.push_back(&chi);
    }
    if (hits.empty())
        throw lookup_error("find_character: no character of modulus " + std::to_string(q) +
                           " matches the pinned values");
    if (hits.size() > 1)
        throw lookup_error("find_character: " + std::to_string(hits.size()) +
                           " characters of modulus " + std::to_string(q) +
                           " match the pinned values");
    return *hits.front();
}

} // namespace feqv
