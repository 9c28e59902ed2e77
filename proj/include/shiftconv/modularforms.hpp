#pragma once

// q-expansions of the specific forms used here: eta quotients (including the
// level 9 newform eta(3z)^8 and the weakly holomorphic form m), E2, the two
// level-3 Eisenstein-type series, and ingestion of published coefficients.

#include "shiftconv/qseries.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shiftconv {

struct EtaFactor {
    long scale;     // delta in eta(delta * tau)
    long exponent;  // r_delta
};

class EtaQuotient {
public:
    // Throws std::invalid_argument on empty/duplicate/nonpositive scales or
    // when sum(delta * r_delta) is not divisible by 24.
    explicit EtaQuotient(std::vector<EtaFactor> factors);

    // "3:8" or "1:3,9:-3" (scale:exponent pairs).
    static EtaQuotient parse(const std::string& text);

    const std::vector<EtaFactor>& factors() const { return factors_; }
    // sum(delta * r_delta) / 24
    long lead_exponent() const { return lead_; }
    std::string to_string() const;

private:
    std::vector<EtaFactor> factors_;
    long lead_ = 0;
};

// Exact expansion of prod eta(delta tau)^r_delta on [lead, window).
QSeries eta_quotient_expand(const EtaQuotient& eta, long window);
ResidueSeries eta_quotient_expand_mod(const EtaQuotient& eta, long window, std::uint64_t p, unsigned T);

// f = eta(3 tau)^8, the weight 4 newform of level 9.
QSeries newform_f(long window);
ResidueSeries newform_f_mod(long window, std::uint64_t p, unsigned T);
// a_f(n) for 0 <= n < count as machine integers (index n), for long scans.
std::vector<std::int64_t> newform_coefficients(long count);

// m = (eta(tau)^3 / eta(9 tau)^3 + 3)^2 * eta(3 tau)^8 = q^-1 + 2q^2 - 49q^5 + ...
QSeries weakform_m9(long window);
ResidueSeries weakform_m9_mod(long window, std::uint64_t p, unsigned T);

// 1 - 24 sum sigma_1(n) q^n
QSeries eisenstein_E2(long window);
// 1 - 24 sum sigma_1(3n) q^(3n)
QSeries sigma_series_A(long window);
// 1 + 12 sum_{n} (sum_{d | 3n, 3 !| d} d) q^(3n)
QSeries sigma_series_B(long window);

// sigma_1(n) for 0 <= n < count (index 0 holds 0).
std::vector<std::int64_t> divisor_sigma1(long count);
// Sum of the divisors of n prime to 3, for 0 <= n < count.
std::vector<std::int64_t> divisor_sigma1_prime_to_3(long count);

struct CoefficientRecord {
    long level = 0;
    int weight = 0;
    QSeries series;  // a_1 q + a_2 q^2 + ... on [1, len + 1)
    std::vector<std::string> warnings;
};

// Reads {"level": int, "weight": int, "an": ["a1", "a2", ...]}.  The result
// is for cross-checks only; nothing in the main pipeline consumes it.
CoefficientRecord import_coefficients(const nlohmann::json& document,
                                      std::optional<long> expected_level = std::nullopt,
                                      std::optional<int> expected_weight = std::nullopt);

}  // namespace shiftconv
