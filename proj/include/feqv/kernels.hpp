#pragma once

// Kernel expressions: finite sums of primitives with closed-form Mellin
// transforms. Each primitive carries its own validity strip; transforms of
// sums are valid on the intersection and requests outside it name the term
// that failed.

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "feqv/complexfn.hpp"
#include "feqv/errors.hpp"

namespace feqv {

struct Exp {
    double beta;
};
struct ExpSin {
    double beta;
    double gamma;
};
struct ExpCos {
    double beta;
    double gamma;
};
struct PowerRational {
    int alpha;
};
struct BesselHalf {
    double nu;
};

using KernelPrimitive = std::variant<Exp, ExpSin, ExpCos, PowerRational, BesselHalf>;

struct KernelTerm {
    double coeff;
    KernelPrimitive prim;
};

namespace detail {

inline const char* primitive_name(const KernelPrimitive& p) {
    switch (p.index()) {
        case 0: return "Exp";
        case 1: return "ExpSin";
        case 2: return "ExpCos";
        case 3: return "PowerRational";
        default: return "BesselHalf";
    }
}

} // namespace detail

class KernelExpr {
  public:
    explicit KernelExpr(std::vector<KernelTerm> terms, std::string name = "")
        : terms_(std::move(terms)), name_(std::move(name)) {
        int heavy = 0;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            const auto& p = terms_[i].prim;
            if (const auto* e = std::get_if<Exp>(&p)) {
                if (!(e->beta > 0.0)) bad(i, "Exp needs beta > 0");
            } else if (const auto* es = std::get_if<ExpSin>(&p)) {
                if (!(es->beta >= 0.0) || !(es->gamma > 0.0))
                    bad(i, "ExpSin needs beta >= 0 and gamma > 0");
            } else if (const auto* ec = std::get_if<ExpCos>(&p)) {
                if (!(ec->beta >= 0.0) || !(ec->gamma > 0.0))
                    bad(i, "ExpCos needs beta >= 0 and gamma > 0");
            } else if (std::holds_alternative<PowerRational>(p)) {
                ++heavy;
            } else if (const auto* b = std::get_if<BesselHalf>(&p)) {
                if (!(b->nu > -1.0)) bad(i, "BesselHalf needs nu > -1");
                ++heavy;
            }
        }
        if (heavy > 1)
            throw domain_error("KernelExpr: at most one PowerRational or BesselHalf term");
    }

    const std::vector<KernelTerm>& terms() const { return terms_; }
    const std::string& name() const { return name_; }

  private:
    [[noreturn]] static void bad(std::size_t i, const std::string& what) {
        throw domain_error("KernelExpr: term " + std::to_string(i) + ": " + what);
    }

    std::vector<KernelTerm> terms_;
    std::string name_;
};

// Pointwise evaluation for x > 0. The Bessel primitive is transform-only.
inline double kernel_eval(const KernelExpr& k, double x) {
    if (!(x > 0.0)) throw domain_error("kernel_eval: x must be positive");
    double sum = 0.0;
    for (const auto& t : k.terms()) {
        if (const auto* e = std::get_if<Exp>(&t.prim)) {
            sum += t.coeff * std::exp(-e->beta * x);
        } else if (const auto* es = std::get_if<ExpSin>(&t.prim)) {
            sum += t.coeff * std::exp(-es->beta * x) * std::sin(es->gamma * x);
        } else if (const auto* ec = std::get_if<ExpCos>(&t.prim)) {
            sum += t.coeff * std::exp(-ec->beta * x) * std::cos(ec->gamma * x);
        } else if (const auto* pr = std::get_if<PowerRational>(&t.prim)) {
            sum += t.coeff * std::pow(x, pr->alpha) / (1.0 + x * x);
        } else {
            throw domain_error("kernel_eval: the BesselHalf primitive has no pointwise form here");
        }
    }
    return sum;
}

namespace detail {

[[noreturn]] inline void strip_violation(std::size_t i, const KernelPrimitive& p,
                                         const Complex& s, const std::string& cond) {
    throw strip_error("kernel_mellin: term " + std::to_string(i) + " (" + primitive_name(p) +
                      ") needs " + cond + "; got Re s = " + std::to_string(s.real()));
}

inline Complex term_mellin(std::size_t i, const KernelTerm& t, const Complex& s) {
    double sigma = s.real();
    if (const auto* e = std::get_if<Exp>(&t.prim)) {
        if (!(sigma > 0.0)) strip_violation(i, t.prim, s, "Re s > 0");
        return cgamma(s) * std::exp(-s * std::log(e->beta));
    }
    if (const auto* es = std::get_if<ExpSin>(&t.prim)) {
        if (es->beta == 0.0) {
            if (!(sigma > 0.0 && sigma < 1.0)) strip_violation(i, t.prim, s, "0 < Re s < 1");
        } else if (!(sigma > -1.0)) {
            strip_violation(i, t.prim, s, "Re s > -1");
        }
        Complex zp = Complex(es->beta, es->gamma);
        Complex zm = Complex(es->beta, -es->gamma);
        return cgamma(s) * Complex(0.0, 0.5) *
               (std::exp(-s * std::log(zp)) - std::exp(-s * std::log(zm)));
    }
    if (const auto* ec = std::get_if<ExpCos>(&t.prim)) {
        if (ec->beta == 0.0) {
            if (!(sigma > 0.0 && sigma < 1.0)) strip_violation(i, t.prim, s, "0 < Re s < 1");
        } else if (!(sigma > 0.0)) {
            strip_violation(i, t.prim, s, "Re s > 0");
        }
        Complex zp = Complex(ec->beta, ec->gamma);
        Complex zm = Complex(ec->beta, -ec->gamma);
        return cgamma(s) * 0.5 * (std::exp(-s * std::log(zp)) + std::exp(-s * std::log(zm)));
    }
    if (const auto* pr = std::get_if<PowerRational>(&t.prim)) {
        double shifted = sigma + pr->alpha;
        if (!(shifted > 0.0 && shifted < 2.0))
            strip_violation(i, t.prim, s, "0 < Re(s + alpha) < 2");
        return (pi / 2.0) / std::sin(pi * (s + static_cast<double>(pr->alpha)) / 2.0);
    }
    const auto& b = std::get<BesselHalf>(t.prim);
    if (!(sigma > -b.nu - 0.5 && sigma < 1.0))
        strip_violation(i, t.prim, s, "-nu - 1/2 < Re s < 1");
    return std::exp((s - 0.5) * std::log(2.0)) * cgamma((s + b.nu + 0.5) / 2.0) /
           cgamma((b.nu - s + 1.5) / 2.0);
}

} // namespace detail

inline Complex kernel_mellin(const KernelExpr& k, const Complex& s) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < k.terms().size(); ++i)
        sum += k.terms()[i].coeff * detail::term_mellin(i, k.terms()[i], s);
    return sum;
}

// X1(s) X2(1-s) over a list of sample points.
inline std::vector<Complex> product_check(const KernelExpr& k1, const KernelExpr& k2,
                                          const std::vector<Complex>& points) {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const Complex& s : points)
        out.push_back(kernel_mellin(k1, s) * kernel_mellin(k2, 1.0 - s));
    return out;
}

} // namespace feqv
