#include "shiftconv/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shiftconv {

namespace {

void check_argument(long order, const BigFloat& x) {
    if (order < 0) throw std::invalid_argument("Bessel order must be nonnegative");
    if (x.sign() < 0) throw std::invalid_argument("Bessel argument must be nonnegative");
}

// log2 of the largest term of sum (x/2)^(2j+v) / (j! (j+v)!), estimated in
// double precision; used to size the guard bits against cancellation.
double log2_peak_term(long order, double x) {
    if (x == 0.0) return 0.0;
    const double lh = std::log2(x / 2);
    double best = -std::numeric_limits<double>::infinity();
    for (long j = 0; j < 100000; ++j) {
        const double lt = (2.0 * j + order) * lh -
                          (std::lgamma(j + 1.0) + std::lgamma(j + order + 1.0)) / std::log(2.0);
        best = std::max(best, lt);
        if (j > x && lt < best - 10) break;
    }
    return best;
}

double ldexp_bound(long exponent) { return std::ldexp(1.0, static_cast<int>(std::max(exponent, -1000L))); }

PrecisionReal bessel_series(long order, const BigFloat& x, long bits, bool alternating) {
    check_argument(order, x);
    if (x.is_zero()) {
        return {BigFloat(order == 0 ? 1L : 0L, bits), 0.0};
    }
    const double xd = x.to_double();
    const double peak = log2_peak_term(order, xd);
    const long terms_guess = static_cast<long>(xd) + bits + 16;
    const long guard = (alternating ? static_cast<long>(std::ceil(std::max(peak, 0.0))) : 0) +
                       static_cast<long>(std::ceil(std::log2(static_cast<double>(terms_guess)))) + 16;
    const long work = bits + guard;

    const BigFloat half = x.with_bits(work) / 2L;
    const BigFloat q = half * half;
    BigFloat term(1L, work);
    for (long i = 1; i <= order; ++i) {
        term *= half;
        term /= i;
    }
    BigFloat sum = term;
    const double target = std::ldexp(1.0, static_cast<int>(-bits - 2));
    long j = 1;
    double tail = 0.0;
    for (;; ++j) {
        term *= q;
        term /= j * (j + order);
        if (alternating) term = -term;
        const double mag = std::fabs(term.to_double());
        const double ratio = q.to_double() / (static_cast<double>(j + 1) * static_cast<double>(j + 1 + order));
        const bool decreasing = ratio < 1.0;
        if (decreasing && static_cast<double>(j) > xd / 2 && mag <= target * std::max(1.0, std::fabs(sum.to_double()))) {
            // term is the first omitted term.
            tail = alternating ? mag : mag / (1.0 - ratio);
            break;
        }
        sum += term;
        if (j > 1000000) throw std::runtime_error("Bessel series failed to converge");
    }
    // Each of the j accumulated terms carries a relative rounding error of a
    // few units in the last place of the working precision.
    const double rounding = 4.0 * static_cast<double>(j + order) *
                            std::exp2(std::max(peak, std::log2(std::fabs(sum.to_double()) + 1e-300))) *
                            ldexp_bound(-work);
    return {sum.with_bits(bits), tail + rounding + ldexp_bound(-bits) * std::fabs(sum.to_double())};
}

}  // namespace

PrecisionReal bessel_J(long order, const BigFloat& x, long bits) { return bessel_series(order, x, bits, true); }

PrecisionReal bessel_J(long order, double x, long bits) { return bessel_J(order, BigFloat(x, std::max(bits, 64L)), bits); }

PrecisionReal bessel_I(long order, const BigFloat& x, long bits) { return bessel_series(order, x, bits, false); }

PrecisionReal bessel_I(long order, double x, long bits) { return bessel_I(order, BigFloat(x, std::max(bits, 64L)), bits); }

PrecisionReal incomplete_gamma_int(long n, const BigFloat& x, long bits) {
    if (n < 1) throw std::invalid_argument("incomplete Gamma needs a positive integer first argument");
    if (x.sign() < 0) throw std::invalid_argument("incomplete Gamma argument must be nonnegative");
    const long work = bits + 16;
    const BigFloat xw = x.with_bits(work);
    BigFloat term(1L, work);
    BigFloat sum = term;
    for (long j = 1; j < n; ++j) {
        term *= xw;
        term /= j;
        sum += term;
    }
    BigFloat factorial(1L, work);
    for (long j = 2; j < n; ++j) factorial *= j;
    BigFloat value = factorial * sum * exp(-xw);
    const double mag = std::fabs(value.to_double());
    return {value.with_bits(bits), mag * (static_cast<double>(2 * n + 4) * ldexp_bound(-work) + ldexp_bound(-bits))};
}

PrecisionReal incomplete_gamma_int(long n, double x, long bits) {
    return incomplete_gamma_int(n, BigFloat(x, std::max(bits, 64L)), bits);
}

}  // namespace shiftconv
