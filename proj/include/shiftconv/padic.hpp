#pragma once

// 3-adic statements about the rational series f * L_f: the unit congruence,
// the two higher congruence families, the D-power congruences for L_f, and the
// density table pi(3^t; X).  Everything is exact (rationals or residues).

#include "shiftconv/qseries.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace shiftconv {

inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

// v_p(num) - v_p(den); kInfiniteValuation for 0.
long vp(const Rational& x, std::uint64_t p);

enum class StatementId { UnitCongruence, Family9n6, Family36n30, DPower };
std::string to_string(StatementId id);

struct PadicFailure {
    long exponent;
    long found;     // kInfiniteValuation when the coefficient is 0
    long required;
};

struct PadicReport {
    std::uint64_t p = 3;
    StatementId statement = StatementId::UnitCongruence;
    long range_lo = 0;
    long range_hi = 0;  // exclusive
    long checked = 0;   // exponents actually tested
    bool pass = true;
    std::vector<PadicFailure> failures;
    std::string detail;
};

nlohmann::json to_json(const PadicReport& r);

// [q^0](f L_f) = 1 and v_3([q^h](f L_f)) >= 1 for 1 <= h < window.
PadicReport unit_congruence_check(long window);
PadicReport unit_congruence_check(const QSeries& fLf);

// v_3 >= 2 on h = 6 mod 9 and v_3 >= 3 on h = 30 mod 36, h < window.  Two
// reports, one per family.
std::vector<PadicReport> congruence_families_check(long window);
std::vector<PadicReport> congruence_families_check(const QSeries& fLf);

// Smallest r >= 1 with r * phi(p^t) >= k - 1.
long minimal_r(std::uint64_t p, unsigned t, int k);
// r (p - 1) p^(t-1) - k + 1.
long d_power_exponent(std::uint64_t p, unsigned t, int k, long r);

// F = D^e(g) mod p^t with e = d_power_exponent(p, t, k, r), coefficientwise on
// the common window.  Requires r * phi(p^t) >= k - 1 and p prime to every
// exponent in the support of g.
PadicReport d_power_congruence(const QSeries& g, const QSeries& F, std::uint64_t p, unsigned t, int k, long r);

// The level 9 case: g = -m, F = L_f (CM case, alpha = 0), k = 4.
// r defaults to the minimal admissible value.
PadicReport d_power_congruence_check(std::uint64_t p, unsigned t, long window, std::optional<long> r = std::nullopt);

// M^+ - alpha E_f, the normalized mock modular form for a general alpha.
QSeries normalized_mock(const QSeries& M_plus, const QSeries& eichler_f, const Rational& alpha);

struct DensityRow {
    unsigned t = 0;
    long X = 0;
    long count = 0;
    Rational proportion() const {
        Rational q(count, X);
        q.canonicalize();
        return q;
    }
    // 1000 * count / X rounded to nearest, ties toward zero.
    long permille() const;
};

// f * L_f modulo 3^T on [0, window), via residue arithmetic only.
ResidueSeries fLf_mod(long window, unsigned T);

// Which h are counted for a given X.
enum class DensityRange {
    Inclusive,       // 1 <= h <= X
    ExclusiveUpper,  // 1 <= h < X, still divided by X
};

// pi(3^t; X) for each (t, X).  Requires T > max(t); std::invalid_argument
// ("cannot distinguish valuation boundary") otherwise.
std::vector<DensityRow> density_table(const std::vector<unsigned>& t_values, const std::vector<long>& X_values,
                                      unsigned T = 8, DensityRange range = DensityRange::Inclusive);
// Same counts from an existing residue series.
std::vector<DensityRow> density_table(const ResidueSeries& fLf, const std::vector<unsigned>& t_values,
                                      const std::vector<long>& X_values,
                                      DensityRange range = DensityRange::Inclusive);

// Wide layout: "X,pi_3,pi_9,..." with proportions to three decimals.
std::string density_csv(const std::vector<DensityRow>& rows);
// Long layout: "t,X,count,proportion" with exact count/X.
std::string density_rows_csv(const std::vector<DensityRow>& rows);

struct CongruenceFamily {
    long modulus;
    long residue;
    unsigned t;
    long members;  // nonzero coefficients on the progression in [1, window)
};

// Arithmetic progressions h = residue mod modulus (modulus <= max_modulus)
// along which every nonzero coefficient in [1, window) has v_3 >= t, with at
// least min_members nonzero members, and which are not implied by a
// progression already reported.  Observational only.
std::vector<CongruenceFamily> scan_congruence_families(const QSeries& fLf, unsigned t, long max_modulus,
                                                       long min_members = 4);

}  // namespace shiftconv
