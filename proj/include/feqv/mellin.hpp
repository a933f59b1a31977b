#pragma once

// Numerical Mellin transforms on (0, infinity).
//
// The integral is split at x = 1. The lower piece runs tanh-sinh nodes on
// (x_min, 1) directly; the upper piece substitutes x = e^u and runs the same
// rule on (0, log x_max). Endpoint singularities like x^{s-1} near 0 are
// absorbed by the double-exponential clustering, and slowly decaying or
// singular parts of the integrand can be declared as subtraction terms whose
// removed mass is restored in closed form (analytically continued, which is
// what gives the transform its meaning outside the convergent strip).

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feqv/characters.hpp"
#include "feqv/coeffs.hpp"
#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"

namespace feqv {

struct QuadratureParams {
    double target_tol = 1e-10;
    int level_max = 12;
    double x_min = 0.0;                                  // 0 = integrate from 0
    double x_max = std::numeric_limits<double>::infinity(); // inf = size from decay_rate
    double decay_rate = 0.0;                             // e^{-rate x} bound; <=0 means 1
    std::optional<double> lower_exponent;                // Re s override for mass near 0
};

// One removable piece g(x) = coeff * x^power, subtracted on one end of the
// split and restored analytically. Powers are limited to the library forms.
struct SubtractionTerm {
    enum class End { lower, upper };
    double coeff = 0.0;
    double power = 0.0;
    End end = End::lower;
};

// A subtraction plan: the terms, plus optional fused evaluators returning
// f(x) - sum(g) on the affected end. The fused forms matter: computing
// f(x) - 1/x as written loses every digit once x is small, while a series
// form of the same difference is exact.
struct Subtraction {
    std::vector<SubtractionTerm> terms;
    std::function<Complex(double)> fused_lower;
    std::function<Complex(double)> fused_upper;

    bool empty() const { return terms.empty(); }
};

inline SubtractionTerm one_over_x(double c, SubtractionTerm::End end = SubtractionTerm::End::lower) {
    return {c, -1.0, end};
}
inline SubtractionTerm inverse_sqrt(double c) { return {c, -0.5, SubtractionTerm::End::lower}; }
inline SubtractionTerm constant(double c, SubtractionTerm::End end = SubtractionTerm::End::lower) {
    return {c, 0.0, end};
}

// 1/(e^y - 1) - 1/y, stable for all y > 0.
inline double bose(double y) {
    if (y >= 0.25) return 1.0 / std::expm1(y) - 1.0 / y;
    double y2 = y * y;
    // Laurent tail of the pole at 0: -1/2 + y/12 - y^3/720 + y^5/30240 - ...
    return -0.5 + y * (1.0 / 12.0 + y2 * (-1.0 / 720.0 + y2 * (1.0 / 30240.0 + y2 * (-1.0 / 1209600.0 + y2 / 47900160.0))));
}

struct QuadratureOutcome {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    double x_min_used = 0.0;
    double x_max_used = 0.0;
    int levels_lower = 0;
    int levels_upper = 0;
    std::string warning;
};

namespace detail {

struct QuadPiece {
    Complex value{0.0, 0.0};
    double error = 0.0;
    int levels = 0;
    bool converged = false;
    bool stalled = false;
    bool edge_divergent = false;
};

// Tanh-sinh quadrature of f over (a, b). t_neg and t_pos bound the node
// parameter on each side; they are sized by the caller so the discarded tails
// are below the target. f is evaluated at abscissas strictly inside (a, b).
//
// The node weight decays double-exponentially at both window edges, so for
// any integrand the window was correctly sized for, the largest contribution
// sits in the interior. A maximum at the edge means the declared behavior
// near an endpoint is wrong and the integral is not being captured.
template <typename F>
QuadPiece de_integrate(F&& f, double a, double b, double t_neg, double t_pos,
                       double tol, int level_max) {
    const double width = b - a;

    struct EdgeScan {
        double max_mag = 0.0;
        long long argmax = 0;
        long long first = 0, last = 0;
        long long count = 0;
    };

    auto node_sum = [&](double h, bool odd_only, EdgeScan* scan) {
        Complex acc{0.0, 0.0};
        long long k_lo = static_cast<long long>(std::ceil(-t_neg / h));
        long long k_hi = static_cast<long long>(std::floor(t_pos / h));
        for (long long k = k_lo; k <= k_hi; ++k) {
            if (odd_only && (k % 2 == 0)) continue;
            double t = h * static_cast<double>(k);
            double v = pi * std::sinh(t);
            double sig, one_minus;
            if (v >= 0.0) {
                double u = std::exp(-v);
                sig = 1.0 / (1.0 + u);
                one_minus = u / (1.0 + u);
            } else {
                double u = std::exp(v);
                sig = u / (1.0 + u);
                one_minus = 1.0 / (1.0 + u);
            }
            double w = pi * std::cosh(t) * sig * one_minus;
            if (!(w > 1e-290)) continue;
            double x = a + width * sig;
            if (!(x > a) || !(x < b)) continue;
            Complex val = w * f(x);
            if (scan) {
                double mag = std::abs(val);
                if (scan->count == 0) scan->first = k;
                scan->last = k;
                ++scan->count;
                if (mag > scan->max_mag) {
                    scan->max_mag = mag;
                    scan->argmax = k;
                }
            }
            acc += val;
        }
        return acc;
    };

    QuadPiece out;
    double h = 0.5;
    EdgeScan scan;
    Complex sum = node_sum(h, false, &scan);
    if (scan.count >= 5 && scan.max_mag > 1e-120 &&
        (scan.argmax <= scan.first + 1 || scan.argmax >= scan.last - 1)) {
        out.edge_divergent = true;
        out.value = (h * width) * sum;
        return out;
    }
    Complex integral = (h * width) * sum;
    double prev_delta = std::numeric_limits<double>::infinity();
    int grow_count = 0;
    for (int level = 1; level <= level_max; ++level) {
        h *= 0.5;
        Complex refined = 0.5 * integral + (h * width) * node_sum(h, true, nullptr);
        double delta = std::abs(refined - integral);
        integral = refined;
        out.levels = level;
        out.error = delta;
        double scale = std::max(std::abs(integral), 1e-250);
        if (delta <= tol * scale) {
            out.converged = true;
            break;
        }
        if (level >= 4 && delta > 0.9 * prev_delta) {
            if (++grow_count >= 3) {
                out.stalled = true;
                break;
            }
        } else {
            grow_count = 0;
        }
        prev_delta = delta;
    }
    out.value = integral;
    return out;
}

// Smallest t with mass exponent * pi * sinh(t) >= budget, clamped to a range
// that keeps node counts sane while covering the transition region.
inline double de_t_for(double exponent, double budget) {
    double e = std::max(exponent, 0.05);
    double t = std::asinh(budget / (pi * e));
    if (t < 2.8) t = 2.8;
    if (t > 6.6) t = 6.6;
    return t;
}

inline double de_mass_budget(double tol) { return -std::log(1e-3 * tol) + 4.0; }

inline double resolve_x_max(const QuadratureParams& p, double sigma) {
    if (std::isfinite(p.x_max)) {
        if (!(p.x_max > 1.0)) throw domain_error("mellin_quadrature: x_max must exceed 1 (the split point)");
        return p.x_max;
    }
    double beta = p.decay_rate > 0.0 ? p.decay_rate : 1.0;
    double budget = de_mass_budget(p.target_tol);
    double x = std::max(2.0, budget / beta);
    for (int i = 0; i < 4; ++i) {
        double corr = std::max(sigma - 1.0, 0.0) * std::log(x);
        x = std::max(2.0, (budget + corr) / beta);
    }
    return x;
}

inline Complex subtraction_compensation(const std::vector<SubtractionTerm>& terms,
                                        Complex s, double x_min) {
    Complex total{0.0, 0.0};
    for (const auto& term : terms) {
        Complex sp = s + term.power;
        if (std::abs(sp) < 1e-10)
            throw pole_error("subtraction compensation has a pole at s = " + std::to_string(-term.power));
        if (term.end == SubtractionTerm::End::lower) {
            Complex head = x_min > 0.0 ? 1.0 - real_pow(x_min, sp) : Complex{1.0, 0.0};
            total += term.coeff * head / sp;
        } else {
            total -= term.coeff / sp;
        }
    }
    return total;
}

} // namespace detail

// Mellin transform of f at s with an optional subtraction plan. The returned
// value includes the analytic compensation for every subtraction term, so out
// of the convergent strip it is the continued transform that the subtraction
// defines.
inline QuadratureOutcome mellin_quadrature_full(const std::function<Complex(double)>& f,
                                                Complex s,
                                                QuadratureParams p = {},
                                                const Subtraction& sub = {}) {
    if (!(p.target_tol > 0.0) || p.target_tol > 1e-2)
        throw domain_error("mellin_quadrature: target_tol out of range");
    if (p.level_max < 4 || p.level_max > 20)
        throw domain_error("mellin_quadrature: level_max out of range");
    if (!(p.x_min >= 0.0) || p.x_min >= 1.0)
        throw domain_error("mellin_quadrature: x_min must lie in [0, 1)");
    for (const auto& term : sub.terms) {
        bool known = term.power == -1.0 || term.power == -0.5 || term.power == 0.0;
        if (!known) throw domain_error("mellin_quadrature: unsupported subtraction power");
    }

    double sigma = s.real();
    double x_max = detail::resolve_x_max(p, sigma);
    double budget = detail::de_mass_budget(p.target_tol);

    bool lower_sub = false, upper_sub = false;
    for (const auto& term : sub.terms) {
        if (term.end == SubtractionTerm::End::lower) lower_sub = true;
        else upper_sub = true;
    }

    auto g_sum = [&sub](double x, SubtractionTerm::End end) {
        double g = 0.0;
        for (const auto& term : sub.terms)
            if (term.end == end) g += term.coeff * std::pow(x, term.power);
        return g;
    };

    auto lower_f = [&](double x) -> Complex {
        if (lower_sub) {
            if (sub.fused_lower) return sub.fused_lower(x);
            return f(x) - g_sum(x, SubtractionTerm::End::lower);
        }
        return f(x);
    };
    auto upper_f = [&](double x) -> Complex {
        if (upper_sub) {
            if (sub.fused_upper) return sub.fused_upper(x);
            return f(x) - g_sum(x, SubtractionTerm::End::upper);
        }
        return f(x);
    };

    double p_eff = p.lower_exponent ? *p.lower_exponent : sigma;
    if (!(p_eff > 0.0))
        throw convergence_error("mellin_quadrature: integrand mass at 0 does not converge "
                                "(effective exponent " + std::to_string(p_eff) + ")");

    double tol_piece = 0.45 * p.target_tol;
    Complex s1 = s - 1.0;

    auto lower_integrand = [&](double x) { return detail::real_pow(x, s1) * lower_f(x); };
    double t_lo = p.x_min > 0.0 ? detail::de_t_for(1.0, budget) : detail::de_t_for(p_eff, budget);
    double t_hi = detail::de_t_for(1.0, budget);
    auto low = detail::de_integrate(lower_integrand, p.x_min, 1.0, t_lo, t_hi, tol_piece, p.level_max);
    if (low.edge_divergent)
        throw convergence_error("mellin_quadrature: lower-piece mass concentrates at the window edge; "
                                "the integrand diverges faster than its declared exponent near 0");
    if (low.stalled)
        throw convergence_error("mellin_quadrature: lower piece stopped contracting "
                                "(last delta " + std::to_string(low.error) + ")");

    auto upper_integrand = [&](double u) { return std::exp(s * u) * upper_f(std::exp(u)); };
    auto up = detail::de_integrate(upper_integrand, 0.0, std::log(x_max), t_hi, t_hi, tol_piece, p.level_max);
    if (up.edge_divergent)
        throw convergence_error("mellin_quadrature: upper-piece mass concentrates at the window edge; "
                                "the decay declaration does not hold out to x_max");
    if (up.stalled)
        throw convergence_error("mellin_quadrature: upper piece stopped contracting "
                                "(last delta " + std::to_string(up.error) + ")");

    QuadratureOutcome out;
    out.value = low.value + up.value + detail::subtraction_compensation(sub.terms, s, p.x_min);
    out.error_estimate = low.error + up.error + 0.1 * p.target_tol * std::max(1.0, std::abs(out.value));
    out.x_min_used = p.x_min;
    out.x_max_used = x_max;
    out.levels_lower = low.levels;
    out.levels_upper = up.levels;
    if (!low.converged || !up.converged)
        out.warning = "level_max reached while still improving; error estimate " +
                      std::to_string(out.error_estimate);
    return out;
}

inline Complex mellin_quadrature(const std::function<Complex(double)>& f, Complex s,
                                 QuadratureParams p = {}, const Subtraction& sub = {}) {
    return mellin_quadrature_full(f, s, p, sub).value;
}

// Character-twisted geometric kernel: sum over a of chi(a) e^{-a x} divided
// by 1 - e^{-q x}, in closed form. For non-principal characters the numerator
// cancels to O(x) at the origin, so a short moment series replaces the direct
// sum there; the direct sum at small x would be pure round-off.
inline Complex char_exp_sum(const DirichletCharacter& chi, double x) {
    if (!(x > 0.0)) throw domain_error("char_exp_sum: x must be positive");
    long long q = chi.modulus();
    double qx = static_cast<double>(q) * x;
    double denom = -std::expm1(-qx);
    bool principal = chi.conductor() == 1;

    Complex num{0.0, 0.0};
    if (!principal && qx < 0.1) {
        std::vector<double> apow(static_cast<std::size_t>(q), 1.0);
        double xk = 1.0;
        for (int k = 1; k <= 48; ++k) {
            xk *= -x / static_cast<double>(k);
            Complex mk{0.0, 0.0};
            for (long long a = 1; a < q; ++a) {
                apow[static_cast<std::size_t>(a)] *= static_cast<double>(a);
                Complex c = chi(a);
                if (c != Complex{0.0, 0.0}) mk += c * apow[static_cast<std::size_t>(a)];
            }
            Complex term = mk * xk;
            num += term;
            if (k > 3 && std::abs(term) < 1e-20 * (std::abs(num) + 1e-300)) break;
        }
    } else {
        for (long long a = 1; a < q; ++a) {
            double ax = static_cast<double>(a) * x;
            if (ax > 750.0) break;
            Complex c = chi(a);
            if (c != Complex{0.0, 0.0}) num += c * std::exp(-ax);
        }
        if (q == 1) num = std::exp(-x);
    }
    return num / denom;
}

// f(ix) for a coefficient series, truncated where the documented growth bound
// proves the tail is below 1e-18 of the largest term seen.
inline Complex qexp_eval(const CoeffSeries& c, double x) {
    if (!(x > 0.0)) throw domain_error("qexp_eval: x must be positive");
    if (c.a.empty()) return {0.0, 0.0};
    double t = 2.0 * pi * x / c.lambda;
    double r = std::exp(-t);
    Complex sum = c.a[0];
    double max_term = std::abs(c.a[0]);
    double pw = 1.0;
    for (std::size_t n = 1; n < c.a.size(); ++n) {
        if ((n & 63u) == 0u) pw = std::exp(-t * static_cast<double>(n));
        else pw *= r;
        if (pw == 0.0) return sum;
        if (std::abs(c.a[n]) != 0.0) {
            Complex term = c.a[n] * pw;
            sum += term;
            double mag = std::abs(term);
            if (mag > max_term) max_term = mag;
        }
        if ((n & 7u) == 0u && c.growth_C > 0.0) {
            double m = static_cast<double>(n + 1);
            if (m * t > c.growth_c) {
                double tail = c.growth_C * std::pow(m, c.growth_c) * std::exp(-t * m) / (-std::expm1(-t));
                if (tail < 1e-18 * std::max(max_term, 1e-300)) return sum;
            }
        }
    }
    if (c.growth_C <= 0.0) return sum;
    double thresh = 1e-18 * std::max(max_term, 1e-300);
    double m_end = static_cast<double>(c.a.size());
    if (m_end * t > c.growth_c) {
        double tail = c.growth_C * std::pow(m_end, c.growth_c) * std::exp(-t * m_end) / (-std::expm1(-t));
        if (tail < thresh) return sum;
    }
    double needed = std::max(static_cast<double>(c.a.size()) * 2.0, 16.0);
    for (int i = 0; i < 6; ++i) {
        double top = std::log(std::max(c.growth_C, 1e-300) / (thresh * (-std::expm1(-t))));
        double next = (top + c.growth_c * std::log(needed)) / t;
        if (!(next > 1.0)) { needed = 1.0; break; }
        needed = next;
    }
    throw coefficient_error("qexp_eval: series '" + c.label + "' has " + std::to_string(c.a.size()) +
                                " coefficients but x = " + std::to_string(x) + " needs more",
                            static_cast<long long>(std::ceil(needed)) + 8);
}

// One interchange instance: a coefficient function phi with its analytic
// extension, an optional closed form for the alternating sum, and the
// upper-end handling the closed form needs.
struct MasterTheoremInstance {
    std::function<Complex(Complex)> phi;
    std::function<Complex(double)> f;
    Subtraction sub;
    double decay_rate = 1.0;
    std::string label;
};

// sum (-x)^n phi(n) / n!, guarded: when cancellation has eaten the result the
// evaluation refuses rather than returning noise.
inline Complex master_theorem_series(const MasterTheoremInstance& inst, double x) {
    Complex sum{0.0, 0.0};
    double max_term = 0.0;
    double xn = 1.0;
    int below = 0;
    for (int n = 0; n <= 500; ++n) {
        if (n > 0) xn *= -x / static_cast<double>(n);
        Complex term = inst.phi(Complex(static_cast<double>(n), 0.0)) * xn;
        sum += term;
        double mag = std::abs(term);
        if (mag > max_term) max_term = mag;
        if (n > x && mag < 1e-16 * std::max(max_term, 1e-300)) {
            if (++below >= 3) break;
        } else {
            below = 0;
        }
    }
    if (below < 3)
        throw series_error("master_theorem_series: '" + inst.label + "' terms never fell below 1e-16 of the running maximum at x = " + std::to_string(x));
    // terms converged, but the round-off floor 1e-16 * max|term| may still
    // swamp the value itself
    if (max_term * 1e-16 > std::max(std::abs(sum), 1e-300) * 1e-3)
        throw series_error("master_theorem_series: '" + inst.label + "' loses the sum to cancellation at x = " + std::to_string(x) + "; supply a closed-form evaluator");
    return sum;
}

// Left side by quadrature of the series (or its closed form), right side
// Gamma(s) phi(-s). Valid on 0 < Re s < 1.
inline std::pair<Complex, Complex> master_theorem_check(const MasterTheoremInstance& inst,
                                                        Complex s, QuadratureParams p = {}) {
    if (!(s.real() > 0.0 && s.real() < 1.0))
        throw strip_error("master_theorem_check: needs 0 < Re s < 1");
    if (p.decay_rate <= 0.0) p.decay_rate = inst.decay_rate;
    std::function<Complex(double)> fx = inst.f;
    if (!fx) fx = [&inst](double x) { return master_theorem_series(inst, x); };
    Complex lhs = mellin_quadrature(fx, s, p, inst.sub);
    Complex rhs = cgamma(s) * inst.phi(-s);
    return {lhs, rhs};
}

inline MasterTheoremInstance mt_constant_one() {
    MasterTheoremInstance inst;
    inst.phi = [](Complex) { return Complex{1.0, 0.0}; };
    inst.f = [](double x) { return Complex{std::exp(-x), 0.0}; };
    inst.label = "phi = 1";
    return inst;
}

inline MasterTheoremInstance mt_linear() {
    MasterTheoremInstance inst;
    inst.phi = [](Complex z) { return z + 1.0; };
    inst.f = [](double x) { return Complex{(1.0 - x) * std::exp(-x), 0.0}; };
    inst.label = "phi = n + 1";
    return inst;
}

inline MasterTheoremInstance mt_reciprocal() {
    MasterTheoremInstance inst;
    inst.phi = [](Complex z) { return 1.0 / (z + 1.0); };
    inst.f = [](double x) { return Complex{-std::expm1(-x) / x, 0.0}; };
    inst.sub.terms.push_back(one_over_x(1.0, SubtractionTerm::End::upper));
    inst.sub.fused_upper = [](double x) { return Complex{-std::exp(-x) / x, 0.0}; };
    inst.label = "phi = 1/(n + 1)";
    return inst;
}

struct GaussianPair {
    Complex lhs1, rhs1, lhs2, rhs2;
};

// Both halves of the damped-oscillation pair: integral of e^{-x^2} cos(2nx)
// against the closed form (sqrt(pi)/2) e^{-n^2}, and of x e^{-x^2} sin(2nx)
// against n times the same.
inline GaussianPair gaussian_pair_check(double n, QuadratureParams p = {}) {
    if (!(n > 0.0)) throw domain_error("gaussian_pair_check: n must be positive");
    if (!std::isfinite(p.x_max)) p.x_max = 8.0;
    GaussianPair out;
    auto f1 = [n](double x) { return Complex{std::exp(-x * x) * std::cos(2.0 * n * x), 0.0}; };
    auto f2 = [n](double x) { return Complex{std::exp(-x * x) * std::sin(2.0 * n * x), 0.0}; };
    out.lhs1 = mellin_quadrature(f1, Complex{1.0, 0.0}, p);
    out.rhs1 = 0.5 * std::sqrt(pi) * std::exp(-n * n);
    out.lhs2 = mellin_quadrature(f2, Complex{2.0, 0.0}, p);
    out.rhs2 = 0.5 * n * std::sqrt(pi) * std::exp(-n * n);
    return out;
}

namespace detail {

// Cutoff below which the cusp decay e^{-a/x} x^{-k} provably holds less than
// a sliver of the tolerance. Solved by fixed point on a/x >= budget + (k - sigma) log(1/x).
inline double cusp_cutoff(double a, double k, double sigma, double tol) {
    double budget = -std::log(1e-3 * tol) + 6.0;
    double x = a / budget;
    for (int i = 0; i < 4; ++i) {
        double corr = std::max(k - sigma, 0.0) * std::log(1.0 / x);
        x = a / (budget + corr);
    }
    return x;
}

} // namespace detail

// Completed transform of a coefficient series: integral of x^{s-1}(f(ix) - a0).
// Cuspidal series converge for every s once the cusp cutoff is in place. A
// constant term makes the integral converge only for Re s > k, and the caller
// owns that declaration; divergence diagnostics still veto it.
inline Complex completed_lambda(const CoeffSeries& c, Complex s, QuadratureParams p = {}) {
    long long n1 = c.first_support();
    if (n1 < 0) throw domain_error("completed_lambda: series has no nonzero coefficient past a0");
    double decay = 2.0 * pi * static_cast<double>(n1) / c.lambda;
    if (p.decay_rate <= 0.0) p.decay_rate = decay;

    if (c.cuspidal()) {
        // A truncated infinite series cannot be evaluated arbitrarily close
        // to 0, and does not need to be: cusp decay e^{-a/x} bounds the mass
        // below the cutoff. A complete table is exact everywhere, and its
        // value near 0 is just the coefficient sum, so it integrates from 0.
        if (p.x_min == 0.0 && c.growth_C > 0.0)
            p.x_min = detail::cusp_cutoff(decay, c.k, s.real(), p.target_tol);
        auto f = [&c](double x) { return qexp_eval(c, x); };
        return mellin_quadrature(f, s, p);
    }

    double p_eff = s.real() - c.k;
    if (!(p_eff > 0.05))
        throw convergence_error("completed_lambda: Re s = " + std::to_string(s.real()) +
                                " is not inside the declared convergence region (needs Re s > " +
                                std::to_string(c.k) + ")");
    if (p.x_min == 0.0) {
        // f(ix) - a0 grows like x^{-k} toward 0, so the integrand mass below
        // the cutoff is x_min^{Re s - k} and this choice pins it under budget.
        double budget = -std::log(1e-3 * p.target_tol) + 2.0;
        p.x_min = std::exp(-budget / p_eff);
    }
    Complex a0 = c.a[0];
    auto f = [&c, a0](double x) { return qexp_eval(c, x) - a0; };
    return mellin_quadrature(f, s, p);
}

} // namespace feqv
