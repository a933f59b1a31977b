#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "feqv/characters.hpp"
#include "feqv/coeffs.hpp"
#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"
#include "feqv/kernels.hpp"
#include "feqv/mellin.hpp"

using feqv::cgamma;
using feqv::CoeffSeries;
using feqv::Complex;
using feqv::DirichletCharacter;
using feqv::MasterTheoremInstance;
using feqv::pi;
using feqv::QuadratureParams;
using feqv::Subtraction;
using feqv::SubtractionTerm;

namespace {

double rel(Complex got, Complex want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Coefficients of the 24th power of the pentagonal-number series, shifted by
// one: an independent route to the discriminant cusp form's expansion, kept
// local to the tests on purpose.
std::vector<long long> tau_table(std::size_t count) {
    std::size_t n = count;
    std::vector<long long> p(n, 0);
    p[0] = 1;
    for (long long k = 1;; ++k) {
        long long g1 = k * (3 * k - 1) / 2;
        long long g2 = k * (3 * k + 1) / 2;
        if (g1 >= static_cast<long long>(n) && g2 >= static_cast<long long>(n)) break;
        long long sign = (k % 2 == 0) ? 1 : -1;
        if (g1 < static_cast<long long>(n)) p[static_cast<std::size_t>(g1)] += sign;
        if (g2 < static_cast<long long>(n)) p[static_cast<std::size_t>(g2)] += sign;
    }
    auto convolve = [n](const std::vector<long long>& a, const std::vector<long long>& b) {
        std::vector<long long> out(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; i + j < n; ++j)
                if (b[j] != 0) out[i + j] += a[i] * b[j];
        }
        return out;
    };
    std::vector<long long> p2 = convolve(p, p);
    std::vector<long long> p4 = convolve(p2, p2);
    std::vector<long long> p8 = convolve(p4, p4);
    std::vector<long long> p16 = convolve(p8, p8);
    std::vector<long long> p24 = convolve(p16, p8);
    std::vector<long long> tau(count, 0);
    for (std::size_t m = 1; m < count; ++m) tau[m] = p24[m - 1];
    return tau;
}

CoeffSeries delta_series(std::size_t count) {
    auto tau = tau_table(count);
    CoeffSeries c;
    c.a.resize(count);
    for (std::size_t m = 0; m < count; ++m) c.a[m] = Complex(static_cast<double>(tau[m]), 0.0);
    c.lambda = 1.0;
    c.k = 12.0;
    c.label = "delta";
    c.growth_C = 2.4;
    c.growth_c = 6.0;
    return c;
}

double delta_direct(double x, const std::vector<long long>& tau) {
    double sum = 0.0;
    for (std::size_t m = 1; m < tau.size(); ++m) {
        double e = std::exp(-2.0 * pi * static_cast<double>(m) * x);
        if (e == 0.0) break;
        sum += static_cast<double>(tau[m]) * e;
    }
    return sum;
}

Subtraction zeta_route_subtraction() {
    Subtraction sub;
    sub.terms.push_back(feqv::one_over_x(1.0));
    sub.fused_lower = [](double x) { return Complex{feqv::bose(x), 0.0}; };
    return sub;
}

Complex dirichlet_l_oracle(const DirichletCharacter& chi, Complex s) {
    long long q = chi.modulus();
    Complex sum{0.0, 0.0};
    for (long long a = 1; a <= q; ++a) {
        Complex c = chi(a);
        if (c == Complex{0.0, 0.0}) continue;
        sum += c * feqv::hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q));
    }
    return feqv::detail::real_pow(static_cast<double>(q), -s) * sum;
}

} // namespace

TEST_CASE("exponential integrands reproduce the gamma factor") {
    auto f = [](double beta) {
        return [beta](double x) { return Complex{std::exp(-beta * x), 0.0}; };
    };

    QuadratureParams p;
    Complex half = feqv::mellin_quadrature(f(1.0), {0.5, 0.0}, p);
    CHECK(std::abs(half.real() - 1.77245385090552) < 1e-10);
    CHECK(std::abs(half.imag()) < 1e-12);

    Complex two = feqv::mellin_quadrature(f(1.0), {2.0, 0.0}, p);
    CHECK(rel(two, {1.0, 0.0}) < 1e-11);

    for (double beta : {1.0, 2.5}) {
        feqv::KernelExpr kernel({{1.0, feqv::Exp{beta}}}, "exp");
        QuadratureParams q;
        q.decay_rate = beta;
        for (double sigma : {0.1, 0.5, 1.0, 1.7, 3.0}) {
            for (double im : {-5.0, -1.3, 0.0, 2.2, 5.0}) {
                Complex s{sigma, im};
                Complex got = feqv::mellin_quadrature(f(beta), s, q);
                Complex want = feqv::kernel_mellin(kernel, s);
                INFO("beta " << beta << " s " << sigma << "+" << im << "i");
                CHECK(rel(got, want) < 1e-9);
            }
        }
    }
}

TEST_CASE("subtraction continues the transform outside its strip") {
    auto f = [](double x) { return Complex{1.0 / std::expm1(x), 0.0}; };
    Subtraction sub = zeta_route_subtraction();

    QuadratureParams p;
    Complex at_half = feqv::mellin_quadrature(f, {0.5, 0.0}, p, sub);
    CHECK(std::abs(at_half.real() - (-2.58841097282679)) < 1e-9);
    CHECK(rel(at_half, cgamma({0.5, 0.0}) * feqv::riemann_zeta({0.5, 0.0})) < 1e-10);
    CHECK(std::abs(at_half.imag()) < 1e-11);

    // inside the convergent strip the compensation is exactly the mass it
    // removed, so the continued value and the plain transform coincide
    Complex at_two = feqv::mellin_quadrature(f, {2.0, 0.0}, p, sub);
    CHECK(rel(at_two, {1.64493406684823, 0.0}) < 1e-10);

    for (double sigma : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        Complex s{sigma, 0.0};
        Complex got = feqv::mellin_quadrature(f, s, p, sub);
        Complex want = cgamma(s) * feqv::riemann_zeta(s);
        INFO("sigma " << sigma);
        CHECK(rel(got, want) < 1e-8);
    }

    CHECK_THROWS_AS(feqv::mellin_quadrature(f, {1.0, 0.0}, p, sub), feqv::pole_error);
}

TEST_CASE("master theorem instances match the gamma-weighted extension") {
    auto instances = {feqv::mt_constant_one(), feqv::mt_linear(), feqv::mt_reciprocal()};
    for (const auto& inst : instances) {
        for (double sigma : {0.15, 0.3, 0.5, 0.7, 0.85}) {
            auto [lhs, rhs] = feqv::master_theorem_check(inst, {sigma, 0.0});
            INFO(inst.label << " at " << sigma);
            CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
        }
    }

    auto [lhs, rhs] = feqv::master_theorem_check(feqv::mt_constant_one(), {0.4, 1.1});
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));
    CHECK(rel(rhs, cgamma({0.4, 1.1})) < 1e-14);

    CHECK_THROWS_AS(feqv::master_theorem_check(feqv::mt_linear(), {1.2, 0.0}), feqv::strip_error);
}

TEST_CASE("series evaluation guards its own cancellation") {
    auto linear = feqv::mt_linear();
    for (double x : {0.3, 2.0, 8.0}) {
        Complex got = feqv::master_theorem_series(linear, x);
        Complex want{(1.0 - x) * std::exp(-x), 0.0};
        CHECK(std::abs(got - want) < 1e-10);
    }

    CHECK_THROWS_AS(feqv::master_theorem_series(feqv::mt_constant_one(), 45.0), feqv::series_error);

    // removing the closed form pushes quadrature nodes past the point where
    // the alternating series has any digits left; that must surface, not
    // average away
    auto degraded = feqv::mt_constant_one();
    degraded.f = nullptr;
    CHECK_THROWS_AS(feqv::master_theorem_check(degraded, {0.3, 0.0}), feqv::series_error);
}

TEST_CASE("character exponential sums in closed form") {
    auto mod1 = feqv::principal_character(1);
    CHECK(rel(feqv::char_exp_sum(mod1, 1.0), {1.0 / (std::exp(1.0) - 1.0), 0.0}) < 1e-14);

    auto sigma_chi = feqv::find_character(5, {{2, {0.0, 1.0}}});
    for (double x : {0.5, 1.0, 3.0}) {
        Complex direct{0.0, 0.0};
        for (long long n = 1; n <= 200; ++n) direct += sigma_chi(n) * std::exp(-static_cast<double>(n) * x);
        INFO("x " << x);
        CHECK(rel(feqv::char_exp_sum(sigma_chi, x), direct) < 1e-14);
    }

    // both evaluation branches, checked just off the switch point against a
    // long partial sum
    for (double x : {0.019, 0.021}) {
        Complex direct{0.0, 0.0};
        for (long long n = 1; n <= 4000; ++n) direct += sigma_chi(n) * std::exp(-static_cast<double>(n) * x);
        INFO("x " << x);
        CHECK(rel(feqv::char_exp_sum(sigma_chi, x), direct) < 1e-13);
    }

    for (const auto& chi : feqv::character_group(5)) {
        if (chi.conductor() == 1) continue;
        Complex v = feqv::char_exp_sum(chi, 1e-8);
        CHECK(std::abs(v) <= 5.0);
    }

    auto principal5 = feqv::principal_character(5);
    Complex direct5{0.0, 0.0};
    for (long long n = 1; n <= 200; ++n)
        if (n % 5 != 0) direct5 += std::exp(-static_cast<double>(n) * 0.5);
    CHECK(rel(feqv::char_exp_sum(principal5, 0.5), direct5) < 1e-14);

    CHECK_THROWS_AS(feqv::char_exp_sum(sigma_chi, 0.0), feqv::domain_error);
}

TEST_CASE("character sums integrate to the gamma-weighted series") {
    auto sigma_chi = feqv::find_character(5, {{2, {0.0, 1.0}}});
    auto f = [&sigma_chi](double x) { return feqv::char_exp_sum(sigma_chi, x); };
    std::vector<Complex> points = {{0.3, 0.0}, {0.7, 0.0}, {1.2, 0.0}, {0.5, 2.0}};
    for (Complex s : points) {
        Complex got = feqv::mellin_quadrature(f, s);
        Complex want = cgamma(s) * dirichlet_l_oracle(sigma_chi, s);
        INFO("s " << s.real() << "+" << s.imag() << "i");
        CHECK(rel(got, want) < 1e-8);
    }
}

TEST_CASE("q-expansion evaluation") {
    CoeffSeries single;
    single.a = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    single.label = "1 + q";
    CHECK(rel(feqv::qexp_eval(single, 1.0), {1.0 + std::exp(-2.0 * pi), 0.0}) < 1e-14);

    CoeffSeries theta;
    theta.a.assign(4096, Complex{0.0, 0.0});
    theta.a[0] = {1.0, 0.0};
    for (long long m = 1; m * m < 4096; ++m) theta.a[static_cast<std::size_t>(m * m)] = {2.0, 0.0};
    theta.lambda = 2.0;
    theta.k = 0.5;
    theta.label = "theta";
    theta.growth_C = 2.0;
    CHECK(std::abs(feqv::qexp_eval(theta, 1.0).real() - 1.08643481121331) < 1e-13);

    auto delta = delta_series(280);
    CHECK(delta.a[2].real() == -24.0);
    CHECK(delta.a[3].real() == 252.0);
    CHECK(delta.a[10].real() == -115920.0);
    auto tau = tau_table(60);
    double want = delta_direct(1.0, tau);
    CHECK(std::abs(want - 0.00178538) < 1e-7);
    CHECK(rel(feqv::qexp_eval(delta, 1.0), {want, 0.0}) < 1e-14);

    CoeffSeries short_theta = theta;
    short_theta.a.resize(8);
    try {
        feqv::qexp_eval(short_theta, 0.001);
        FAIL("expected coefficient_error");
    } catch (const feqv::coefficient_error& e) {
        CHECK(e.required > 1000);
    }

    CHECK_THROWS_AS(feqv::qexp_eval(single, 0.0), feqv::domain_error);
}

TEST_CASE("gaussian pair identities") {
    for (double n : {0.5, 1.0, 2.0}) {
        auto pair = feqv::gaussian_pair_check(n);
        INFO("n " << n);
        CHECK(rel(pair.lhs1, pair.rhs1) < 1e-10);
        CHECK(rel(pair.lhs2, pair.rhs2) < 1e-10);
    }

    auto pair1 = feqv::gaussian_pair_check(1.0);
    CHECK(std::abs(pair1.rhs1.real() - 0.5 * std::sqrt(pi) * std::exp(-1.0)) < 1e-15);
    auto pair2 = feqv::gaussian_pair_check(2.0);
    CHECK(std::abs(pair2.rhs2.real() - std::sqrt(pi) * std::exp(-4.0)) < 1e-15);

    auto tiny = feqv::gaussian_pair_check(1e-5);
    CHECK(std::abs(tiny.lhs1.real() - 0.5 * std::sqrt(pi)) < 1e-8);

    CHECK_THROWS_AS(feqv::gaussian_pair_check(0.0), feqv::domain_error);
}

TEST_CASE("completed transforms of coefficient series") {
    CoeffSeries single;
    single.a = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    single.label = "q";
    Complex got = feqv::completed_lambda(single, {2.0, 0.0});
    CHECK(rel(got, {1.0 / (4.0 * pi * pi), 0.0}) < 1e-10);

    // the same value through the non-cuspidal branch, which has to cut the
    // lower end and subtract the constant term
    CoeffSeries affine;
    affine.a = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    affine.label = "1 + q";
    Complex via_constant = feqv::completed_lambda(affine, {2.0, 0.0});
    CHECK(rel(via_constant, {1.0 / (4.0 * pi * pi), 0.0}) < 1e-9);

    auto delta = delta_series(280);
    auto tau = tau_table(60);

    // split-integral oracle: fold (0,1) onto (1,inf) at the symmetric point
    double oracle = 0.0;
    {
        auto g = [&tau](double x) { return std::pow(x, 5.0) * delta_direct(x, tau); };
        double a = 1.0, b = 7.0;
        int panels = 40000;
        double h = (b - a) / panels;
        double acc = g(a) + g(b);
        for (int i = 1; i < panels; ++i) acc += g(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
        oracle = 2.0 * acc * h / 3.0;
    }
    Complex lambda6 = feqv::completed_lambda(delta, {6.0, 0.0});
    CHECK(rel(lambda6, {oracle, 0.0}) < 1e-9);

    QuadratureParams deeper;
    deeper.level_max = 14;
    deeper.target_tol = 1e-12;
    Complex base = feqv::completed_lambda(delta, {5.0, 3.0});
    Complex refined = feqv::completed_lambda(delta, {5.0, 3.0}, deeper);
    CHECK(rel(base, refined) < 1e-9);

    // explicit cutoff agrees with the automatic one
    QuadratureParams pinned;
    pinned.x_min = 0.02;
    CoeffSeries delta_long = delta_series(2048);
    Complex at_pinned = feqv::completed_lambda(delta_long, {6.0, 0.0}, pinned);
    CHECK(rel(at_pinned, lambda6) < 1e-9);

    CoeffSeries heavy;
    heavy.a = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    heavy.k = 4.0;
    heavy.label = "weight 4 with constant term";
    CHECK_THROWS_AS(feqv::completed_lambda(heavy, {2.0, 0.0}), feqv::convergence_error);

    CoeffSeries constant_only;
    constant_only.a = {Complex{1.0, 0.0}};
    CHECK_THROWS_AS(feqv::completed_lambda(constant_only, {2.0, 0.0}), feqv::domain_error);
}

TEST_CASE("error estimates stay on the safe side") {
    int conservative = 0, total = 0;
    std::vector<Complex> points = {{0.3, 0.0}, {0.8, 0.0}, {1.5, 0.0},
                                   {2.4, 0.0}, {0.5, 2.0}, {1.3, -1.7}};
    for (double beta : {0.7, 2.0}) {
        auto f = [beta](double x) { return Complex{std::exp(-beta * x), 0.0}; };
        for (Complex s : points) {
            QuadratureParams loose;
            loose.target_tol = 1e-9;
            loose.decay_rate = beta;
            QuadratureParams tight;
            tight.target_tol = 1e-13;
            tight.level_max = 16;
            tight.decay_rate = beta;
            auto outcome = feqv::mellin_quadrature_full(f, s, loose);
            Complex reference = feqv::mellin_quadrature(f, s, tight);
            double true_err = std::abs(outcome.value - reference);
            ++total;
            if (outcome.error_estimate >= true_err) ++conservative;
        }
    }
    CHECK(total == 12);
    CHECK(conservative >= 12);
}

TEST_CASE("quadrature guards") {
    auto decaying = [](double x) { return Complex{std::exp(-x), 0.0}; };

    QuadratureParams bad_tol;
    bad_tol.target_tol = 0.5;
    CHECK_THROWS_AS(feqv::mellin_quadrature(decaying, {0.5, 0.0}, bad_tol), feqv::domain_error);

    QuadratureParams bad_cut;
    bad_cut.x_max = 0.8;
    CHECK_THROWS_AS(feqv::mellin_quadrature(decaying, {0.5, 0.0}, bad_cut), feqv::domain_error);

    QuadratureParams bad_min;
    bad_min.x_min = 1.0;
    CHECK_THROWS_AS(feqv::mellin_quadrature(decaying, {0.5, 0.0}, bad_min), feqv::domain_error);

    QuadratureParams declared;
    declared.lower_exponent = -0.5;
    CHECK_THROWS_AS(feqv::mellin_quadrature(decaying, {0.5, 0.0}, declared), feqv::convergence_error);

    Subtraction bad_power;
    bad_power.terms.push_back({1.0, -2.0, SubtractionTerm::End::lower});
    CHECK_THROWS_AS(feqv::mellin_quadrature(decaying, {0.5, 0.0}, {}, bad_power), feqv::domain_error);

    // a pole-order mismatch at 0: declared exponent says integrable, the
    // node sweep says otherwise
    auto divergent = [](double x) { return Complex{1.0 / (x * x), 0.0}; };
    CHECK_THROWS_AS(feqv::mellin_quadrature(divergent, {0.5, 0.0}), feqv::convergence_error);

    // an honest warning when the level budget cannot reach the tolerance
    auto wiggly = [](double x) { return Complex{std::exp(-x) * std::cos(40.0 * x), 0.0}; };
    QuadratureParams cramped;
    cramped.target_tol = 1e-14;
    cramped.level_max = 4;
    auto outcome = feqv::mellin_quadrature_full(wiggly, {0.5, 0.0}, cramped);
    CHECK(!outcome.warning.empty());
}
