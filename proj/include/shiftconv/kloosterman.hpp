#pragma once

// Kloosterman sums K(m, n, c) = sum over d mod c, gcd(d, c) = 1, of
// e((m dbar + n d) / c), together with the multiplicativity and vanishing
// statements used for the level 9 Poincare series.

#include "shiftconv/specialfn.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace shiftconv {

struct KloostermanQuery {
    long m = 0;
    long n = 0;
    long c = 1;  // >= 1
};

// Representative of d^-1 mod c in [0, c); std::domain_error if gcd(d, c) != 1.
long mod_inverse(long d, long c);

// The real value of K(m, n, c) at the requested precision.  error_bound is
// c^2 * 2^-bits (c terms, each cosine correct to a few ulps).
PrecisionReal kloosterman_sum(const KloostermanQuery& q, long bits = BigFloat::kDefaultBits);

// Real and imaginary parts of the raw exponential sum.
struct ComplexSum {
    BigFloat re;
    BigFloat im;
    double error_bound = 0.0;
};
ComplexSum kloosterman_sum_complex(const KloostermanQuery& q, long bits = BigFloat::kDefaultBits);

// |K(m, n, c1 c2) - K(m cb2, n cb2, c1) K(m cb1, n cb1, c2)| < tol, where cb2 is
// c2^-1 mod c1 and vice versa.  std::invalid_argument if gcd(c1, c2) != 1.
bool check_multiplicativity(long m, long n, long c1, long c2, double tol, long bits = BigFloat::kDefaultBits);

struct VanishingReport {
    long p = 0;
    double max_abs = 0.0;
    std::array<long, 3> worst_case{0, 0, 1};  // (m, n, c) of the largest |K|
    long evaluated = 0;
    double tolerance = 0.0;
    bool pass = false;
};

// Evaluates K(m, n p, p^2 c) for 1 <= n <= n_max, 1 <= c <= c_max.
// std::invalid_argument if p | m.
VanishingReport vanishing_scan(long p, long m, long n_max, long c_max, double tol,
                               long bits = BigFloat::kDefaultBits);

nlohmann::json to_json(const VanishingReport& r);

// Largest |K(m, n, c)| / (d(c) sqrt(gcd(m, n, c)) sqrt(c)) over the scan
// range; Weil's bound says this never exceeds 1.
double weil_ratio_max(long m, long n_max, long c_max, long bits = BigFloat::kDefaultBits);

// Precomputed residues and cosine/sine tables for one modulus c, for fast
// machine-precision evaluation of many K(m, n, c).
class KloostermanTable {
public:
    explicit KloostermanTable(long c);

    long modulus() const { return c_; }
    long totient() const { return static_cast<long>(units_.size()); }

    // Real part of K(m, n, c).
    long double real(long m, long n) const;
    // Imaginary part; identically zero in exact arithmetic.
    long double imag(long m, long n) const;

private:
    long index(long m, long n, std::size_t k) const;

    long c_;
    std::vector<std::pair<long, long>> units_;  // (d, dbar)
    std::vector<long double> cos_;
    std::vector<long double> sin_;
};

}  // namespace shiftconv
