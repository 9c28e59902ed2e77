#pragma once

// Fourier coefficients of the cuspidal Poincare series P(m, k, N) and of the
// holomorphic part of the Maass-Poincare series Q(-m, k, N), evaluated as
// truncated Kloosterman-Bessel sums over c = N, 2N, ..., <= c_max with a
// certified bound on the omitted tail.
//
// Sign conventions: for even k, i^k = (-1)^(k/2) and (2 pi i)^k =
// (-1)^(k/2) (2 pi)^k are applied as exact integers, so every quantity is real.
// The imaginary part of each Kloosterman sum is still computed and the
// evaluation aborts if it is not negligible.
//
// The holomorphic part of Q(-m, k, N) has principal part Gamma(k) q^-m.  The
// normalized form Q^+ / Gamma(k), with principal part q^-m, is what the level
// 9 example tabulates; normalize_maass() converts between the two.

#include "shiftconv/specialfn.hpp"

#include <json.hpp>

#include <vector>

namespace shiftconv {

struct HarmonicParams {
    long m = 1;
    int k = 4;
    long N = 1;

    // k even and >= 2, m >= 1, N >= 1; std::invalid_argument otherwise.
    void validate() const;
};

inline constexpr long kDefaultCMax = 9 * 2048;

struct PoincareCoefficient {
    long n = 0;
    long double value = 0.0L;
    double tail_bound = 0.0;  // truncation tail plus accumulated rounding
    long c_max = 0;
};

nlohmann::json to_json(const HarmonicParams& params, const PoincareCoefficient& c);

// Full q^n coefficient of P(m, k, N), including the leading q^m.
PoincareCoefficient classical_coeff(const HarmonicParams& params, long n, long c_max = kDefaultCMax);
std::vector<PoincareCoefficient> classical_coeffs(const HarmonicParams& params, const std::vector<long>& ns,
                                                  long c_max = kDefaultCMax);

// Coefficient of q^n (n >= 1) in Q^+(-m, k, N), unnormalized.
PoincareCoefficient maass_hol_coeff(const HarmonicParams& params, long n, long c_max = kDefaultCMax);
std::vector<PoincareCoefficient> maass_hol_coeffs(const HarmonicParams& params, const std::vector<long>& ns,
                                                  long c_max = kDefaultCMax);

// Constant term of Q^+(-m, k, N), unnormalized.
PoincareCoefficient maass_const_term(const HarmonicParams& params, long c_max = kDefaultCMax);

// Divides value and bound by Gamma(k) = (k - 1)!.
PoincareCoefficient normalize_maass(const PoincareCoefficient& c, int k);

// beta = (4 pi)^3 / 2 * ||P(1, 4, 9)||^2.  The Petersson coefficient formula
// gives ||P(1,k,N)||^2 = (k-2)! / (4 pi)^(k-1) * a_P(1), so for k = 4 beta is
// the first coefficient of P(1, 4, 9).
PrecisionReal beta_constant(long c_max = kDefaultCMax);

// Coefficient-level check of xi_{2-k} Q(-m,k,N) = (4 pi)^(k-1) m^(k-1) (k-1) P(m,k,N).
// The q^n coefficient of the left side is rebuilt from the negative-index
// coefficient c_m(-n, y) of Q (J-Bessel sum with K(-m, -n, c)) and compared,
// after dividing by the proportionality constant, with classical_coeff(n),
// which uses K(m, n, c).
struct XiComparison {
    long n = 0;
    long double from_maass = 0.0L;
    long double from_classical = 0.0L;
    double difference = 0.0;
    double combined_bound = 0.0;
};
XiComparison xi_relation(const HarmonicParams& params, long n, long c_max = kDefaultCMax);
bool xi_relation_check(const HarmonicParams& params, long n, long c_max, double tol);

}  // namespace shiftconv
