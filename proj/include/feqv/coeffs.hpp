#pragma once

// q-expansion coefficient tables shared by the transform engine and the
// modular-form constructors.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "feqv/complexfn.hpp"

namespace feqv {

// f(tau) = sum a_n e^{2 pi i n tau / lambda}, evaluated on the imaginary
// axis as f(ix) = sum a_n e^{-2 pi n x / lambda}. growth_C and growth_c give
// a documented bound |a_n| <= C n^c on the full series, used for truncation
// and sizing; growth_C = 0 declares the stored table complete (a polynomial
// in the expansion variable).
struct CoeffSeries {
    std::vector<Complex> a;
    double lambda = 1.0;
    double k = 0.0;
    long long level = 1;
    std::string label;
    double growth_C = 0.0;
    double growth_c = 0.0;

    bool cuspidal() const { return a.empty() || std::abs(a[0]) == 0.0; }

    long long first_support() const {
        for (std::size_t n = 1; n < a.size(); ++n)
            if (std::abs(a[n]) != 0.0) return static_cast<long long>(n);
        return -1;
    }

    CoeffSeries rescaled(double factor) const {
        CoeffSeries r = *this;
        r.lambda *= factor;
        return r;
    }
};

} // namespace feqv
