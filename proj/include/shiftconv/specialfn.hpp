#pragma once

// Integer-order Bessel functions J and I and the incomplete Gamma function at
// positive integer first argument, each returned with an absolute error bound.

#include "shiftconv/bigfloat.hpp"

#include <cmath>

namespace shiftconv {

struct PrecisionReal {
    BigFloat value;
    double error_bound = 0.0;  // absolute, finite, >= 0

    double to_double() const { return value.to_double(); }
};

PrecisionReal bessel_J(long order, const BigFloat& x, long bits = BigFloat::kDefaultBits);
PrecisionReal bessel_J(long order, double x, long bits = BigFloat::kDefaultBits);
PrecisionReal bessel_I(long order, const BigFloat& x, long bits = BigFloat::kDefaultBits);
PrecisionReal bessel_I(long order, double x, long bits = BigFloat::kDefaultBits);

// Gamma(n; x) = (n-1)! e^-x sum_{j<n} x^j / j!
PrecisionReal incomplete_gamma_int(long n, const BigFloat& x, long bits = BigFloat::kDefaultBits);
PrecisionReal incomplete_gamma_int(long n, double x, long bits = BigFloat::kDefaultBits);

// Machine-precision power series kernels for hot loops where the argument is
// small (x well below the order's turning point).  Accurate to a few ulps for
// x <= 2 * order + 10; the poincare module only calls them in that range.
template <class T>
T bessel_j_series(int order, T x) {
    const T half = x / 2;
    T term = 1;
    for (int i = 1; i <= order; ++i) term *= half / static_cast<T>(i);
    const T q = half * half;
    T sum = term;
    for (int j = 1; j < 400; ++j) {
        term *= -q / (static_cast<T>(j) * static_cast<T>(j + order));
        sum += term;
        if (std::fabs(term) <= std::fabs(sum) * static_cast<T>(1e-22) && static_cast<T>(j) > half) break;
    }
    return sum;
}

template <class T>
T bessel_i_series(int order, T x) {
    const T half = x / 2;
    T term = 1;
    for (int i = 1; i <= order; ++i) term *= half / static_cast<T>(i);
    const T q = half * half;
    T sum = term;
    for (int j = 1; j < 400; ++j) {
        term *= q / (static_cast<T>(j) * static_cast<T>(j + order));
        sum += term;
        if (term <= sum * static_cast<T>(1e-22) && static_cast<T>(j) > half) break;
    }
    return sum;
}

}  // namespace shiftconv
