#pragma once

// Dirichlet L-functions and the small zoo of Dirichlet series the ratio
// equations are built from. Every continuation routes through hurwitz_zeta,
// so one error model covers the plane.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "feqv/characters.hpp"
#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"

namespace feqv {

// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q), valid on the whole plane.
inline Complex dirichlet_l(Complex s, const DirichletCharacter& chi) {
    bool principal = chi.conductor() == 1;
    if (principal && std::abs(s - 1.0) < 1e-10)
        throw pole_error("dirichlet_l: principal character, pole at s = 1");
    long long q = chi.modulus();
    Complex sum{0.0, 0.0};
    for (long long a = 1; a <= q; ++a) {
        Complex c = chi(a);
        if (c == Complex{0.0, 0.0}) continue;
        sum += c * hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q));
    }
    return detail::real_pow(static_cast<double>(q), -s) * sum;
}

// Relative gap between L(s, chi) and the reflected side built from the Gauss
// sum, the parity factor and Gamma(1-s). Primitive characters only; the
// reflection below is simply false for imprimitive ones.
inline double l_feq_residual(Complex s, const DirichletCharacter& chi) {
    if (!(s.real() > 0.0 && s.real() < 1.0))
        throw strip_error("l_feq_residual: needs 0 < Re s < 1");
    if (chi.conductor() != chi.modulus() || chi.modulus() == 1)
        throw domain_error("l_feq_residual: character must be primitive of modulus > 1");
    int kappa = chi.parity();
    double q = static_cast<double>(chi.modulus());
    Complex eps = gauss_sum(chi) * (kappa == 1 ? Complex{0.0, -1.0} : Complex{1.0, 0.0}) / std::sqrt(q);
    Complex lhs = dirichlet_l(s, chi);
    Complex rhs = eps * detail::real_pow(2.0, s) * detail::real_pow(pi, s - 1.0) *
                  detail::real_pow(q, 0.5 - s) * cgamma(1.0 - s) *
                  std::sin(0.5 * pi * (s + static_cast<double>(kappa))) *
                  dirichlet_l(1.0 - s, chi.conjugate());
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

struct DHConstants {
    double alpha;
};

inline const DHConstants& dh_constants() {
    static const DHConstants c{(std::sqrt(10.0 - 2.0 * std::sqrt(5.0)) - 2.0) / (std::sqrt(5.0) - 1.0)};
    return c;
}

// The order-4 character mod 5 sending 2 to i.
inline const DirichletCharacter& dh_character() {
    static const DirichletCharacter sigma = find_character(5, {{2, Complex{0.0, 1.0}}});
    return sigma;
}

inline Complex davenport_heilbronn(Complex s) {
    double a = dh_constants().alpha;
    const auto& sigma = dh_character();
    Complex left{0.5, -0.5 * a};
    Complex right{0.5, 0.5 * a};
    return left * dirichlet_l(s, sigma) + right * dirichlet_l(s, sigma.conjugate());
}

// n-th Dirichlet coefficient of the combination: real, 5-periodic.
inline double dh_coefficient(long long n) {
    if (n <= 0) throw domain_error("dh_coefficient: n must be positive");
    Complex v = dh_character()(n);
    return v.real() + dh_constants().alpha * v.imag();
}

inline Complex sigma_5(Complex s) {
    if (std::abs(s - 1.0) < 1e-10) throw pole_error("sigma_5: pole at s = 1");
    return (1.0 + detail::real_pow(5.0, 0.5 - s)) * riemann_zeta(s);
}

struct DirichletPolySpec {
    struct Factor {
        long long a;
        int sign;
    };
    std::vector<Factor> factors;

    long long scale() const {
        long long p = 1;
        for (const auto& f : factors) p *= f.a;
        return p;
    }
    int epsilon() const {
        int e = 1;
        for (const auto& f : factors) e *= f.sign;
        return e;
    }
};

inline Complex dirichlet_poly(const DirichletPolySpec& spec, Complex s) {
    Complex prod{1.0, 0.0};
    for (const auto& f : spec.factors) {
        if (f.a < 2) throw domain_error("dirichlet_poly: factor base must be at least 2");
        if (f.sign != 1 && f.sign != -1) throw domain_error("dirichlet_poly: sign must be +1 or -1");
        double base = static_cast<double>(f.a);
        prod *= 1.0 + static_cast<double>(f.sign) * std::sqrt(base) * detail::real_pow(base, -s);
    }
    return prod;
}

} // namespace feqv
