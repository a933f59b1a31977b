#pragma once

// Concrete coefficient tables: the discriminant cusp form, the weight-4
// Eisenstein series, the Jacobi theta function, an eta product of level 11,
// and character twists of any table. Also the Dirichlet series attached to a
// table, evaluated through the completed transform or a closed form.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "feqv/characters.hpp"
#include "feqv/coeffs.hpp"
#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"
#include "feqv/mellin.hpp"

namespace feqv {

namespace detail {

using wide_int = __int128;

// Multiply the series in place by prod_{n>=1} (1 - q^{stride*n}), using the
// pentagonal-number expansion of the product. Descending order keeps the
// update in place: each new coefficient only reads smaller, untouched indices.
inline void pentagonal_multiply(std::vector<wide_int>& c, long long stride) {
    long long top = static_cast<long long>(c.size()) - 1;
    std::vector<std::pair<long long, int>> terms;
    for (long long j = 1;; ++j) {
        long long g1 = stride * (j * (3 * j - 1) / 2);
        if (g1 > top) break;
        int sign = (j % 2 == 0) ? 1 : -1;
        terms.push_back({g1, sign});
        long long g2 = stride * (j * (3 * j + 1) / 2);
        if (g2 <= top) terms.push_back({g2, sign});
    }
    for (long long n = top; n >= 0; --n) {
        wide_int acc = c[n];
        for (auto [g, sign] : terms) {
            if (g > n) break;
            acc += sign > 0 ? c[n - g] : -c[n - g];
        }
        c[n] = acc;
    }
}

// Coefficients of q * prod (1-q^n)^p1 * (1-q^{11n})^p11 through index n_max.
inline std::vector<wide_int> eta_expansion(long long n_max, int p1, int p11) {
    std::vector<wide_int> c(static_cast<std::size_t>(n_max), 0);
    c[0] = 1;
    for (int i = 0; i < p1; ++i) pentagonal_multiply(c, 1);
    for (int i = 0; i < p11; ++i) pentagonal_multiply(c, 11);
    std::vector<wide_int> shifted(static_cast<std::size_t>(n_max) + 1, 0);
    for (long long n = 1; n <= n_max; ++n) shifted[n] = c[n - 1];
    return shifted;
}

inline double theta_sum(double t) {
    double sum = 1.0;
    for (long long m = 1;; ++m) {
        double term = 2.0 * std::exp(-pi * static_cast<double>(m * m) * t);
        sum += term;
        if (term < 1e-30 * sum) break;
    }
    return sum;
}

} // namespace detail

inline CoeffSeries delta_coefficients(long long n_max) {
    if (n_max < 1 || n_max > 100000)
        throw domain_error("delta_coefficients: n_max out of range");
    auto table = detail::eta_expansion(n_max, 24, 0);
    CoeffSeries c;
    c.a.resize(table.size());
    for (std::size_t n = 0; n < table.size(); ++n)
        c.a[n] = Complex{static_cast<double>(table[n]), 0.0};
    c.lambda = 1.0;
    c.k = 12.0;
    c.level = 1;
    c.label = "delta";
    c.growth_C = 2.0; // |tau(n)| <= d(n) n^{11/2} <= 2 n^6
    c.growth_c = 6.0;
    return c;
}

inline CoeffSeries eisenstein4_coefficients(long long n_max) {
    if (n_max < 1 || n_max > 1000000)
        throw domain_error("eisenstein4_coefficients: n_max out of range");
    std::vector<std::uint64_t> s3(static_cast<std::size_t>(n_max) + 1, 0);
    for (long long d = 1; d <= n_max; ++d) {
        std::uint64_t cube = static_cast<std::uint64_t>(d) * d * d;
        for (long long m = d; m <= n_max; m += d) s3[m] += cube;
    }
    CoeffSeries c;
    c.a.resize(s3.size());
    c.a[0] = Complex{1.0, 0.0};
    for (long long n = 1; n <= n_max; ++n)
        c.a[n] = Complex{240.0 * static_cast<double>(s3[n]), 0.0};
    c.lambda = 1.0;
    c.k = 4.0;
    c.level = 1;
    c.label = "eisenstein4";
    c.growth_C = 289.0; // 240 sigma_3(n) < 240 zeta(3) n^3
    c.growth_c = 3.0;
    return c;
}

// Theta lives on the scale exp(-pi n t), encoded as period 2; the t -> 1/t
// involution below is its own companion.
inline CoeffSeries theta_coefficients(long long n_max) {
    if (n_max < 0 || n_max > 1000000)
        throw domain_error("theta_coefficients: n_max out of range");
    CoeffSeries c;
    c.a.assign(static_cast<std::size_t>(n_max) + 1, Complex{0.0, 0.0});
    c.a[0] = Complex{1.0, 0.0};
    for (long long m = 1; m * m <= n_max; ++m)
        c.a[m * m] = Complex{2.0, 0.0};
    c.lambda = 2.0;
    c.k = 0.5;
    c.level = 1;
    c.label = "theta";
    c.growth_C = 2.0;
    c.growth_c = 0.0;
    return c;
}

inline double theta_eval(double t) {
    if (!(t > 0.0)) throw domain_error("theta_eval: t must be positive");
    if (t >= 1e-3) return detail::theta_sum(t);
    return detail::theta_sum(1.0 / t) / std::sqrt(t);
}

// |theta(1/t) - sqrt(t) theta(t)|, both sides by direct summation so the
// residual is a genuine check rather than a restatement of the swap rule.
inline double theta_modularity_residual(double t) {
    if (!(t > 0.0)) throw domain_error("theta_modularity_residual: t must be positive");
    return std::abs(detail::theta_sum(1.0 / t) - std::sqrt(t) * detail::theta_sum(t));
}

inline CoeffSeries eta_product_11(long long n_max) {
    if (n_max < 1 || n_max > 100000)
        throw domain_error("eta_product_11: n_max out of range");
    auto table = detail::eta_expansion(n_max, 2, 2);
    CoeffSeries c;
    c.a.resize(table.size());
    for (std::size_t n = 0; n < table.size(); ++n)
        c.a[n] = Complex{static_cast<double>(table[n]), 0.0};
    c.lambda = 1.0;
    c.k = 2.0;
    c.level = 11;
    c.label = "eta11";
    c.growth_C = 2.0; // |a_n| <= d(n) sqrt(n) <= 2n
    c.growth_c = 1.0;
    return c;
}

// Twisted coefficients a_n psi(n). The level picks up the square of the
// twisting modulus; keeping the original level in the lcm makes the twist by
// the principal character mod 1 the identity.
inline CoeffSeries twist_coefficients(const CoeffSeries& c, const DirichletCharacter& psi) {
    long long r = psi.modulus();
    CoeffSeries out;
    out.a.resize(c.a.size());
    for (std::size_t n = 0; n < c.a.size(); ++n)
        out.a[n] = c.a[n] * psi(static_cast<long long>(n));
    out.lambda = c.lambda;
    out.k = c.k;
    out.level = std::lcm(c.level, r * r);
    out.label = c.label + "-twist" + std::to_string(r);
    out.growth_C = c.growth_C;
    out.growth_c = c.growth_c;
    return out;
}

// L(s) = sum a_n / n^s. Closed forms where the series has one; otherwise the
// completed transform divided by its gamma factor, which needs a table that
// vanishes at index zero.
inline Complex modular_l(const CoeffSeries& c, Complex s, const QuadratureParams& params = {}) {
    if (c.label == "eisenstein4")
        return 240.0 * riemann_zeta(s) * riemann_zeta(s - 3.0);
    if (c.label == "theta")
        return 2.0 * riemann_zeta(2.0 * s);
    if (!c.cuspidal())
        throw series_error("modular_l: no closed form for this non-cuspidal series");
    double root_n = std::sqrt(static_cast<double>(c.level));
    Complex lam = completed_lambda(c.rescaled(root_n), s, params);
    return lam * detail::real_pow(2.0 * pi / (c.lambda * root_n), s) / cgamma(s);
}

inline void write_coefficients_csv(const CoeffSeries& c, std::ostream& out) {
    out << "index,re,im\n";
    out.precision(17);
    for (std::size_t n = 0; n < c.a.size(); ++n)
        out << n << ',' << c.a[n].real() << ',' << c.a[n].imag() << '\n';
}

} // namespace feqv
