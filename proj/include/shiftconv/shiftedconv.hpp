#pragma once

// The generating function
//   L(f, f; tau) = f * L_f / beta + gamma * A + delta * B
// for f = eta(3 tau)^8, where L_f = -E_m is the Eichler integral of the
// weakly holomorphic form m, and A, B are the two Eisenstein-type series
// supported on exponents divisible by 3.  Its q^h coefficient is the
// symmetrized shifted-convolution value Dhat(f, f, h; 3).

#include "shiftconv/qseries.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace shiftconv {

struct GenFunctionAssembly {
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    long window = 0;
    QSeries f;                 // on [1, window + 1)
    QSeries L_f;               // on [-1, window - 1)
    QSeries fLf;               // exact product on [0, window)
    std::vector<double> Q_f;   // gamma A_h + delta B_h, index h in [0, window)
    std::vector<double> L;     // index h in [0, window)

    double coefficient(long h) const;
};

// Exact pieces only (f, L_f, f L_f) on a window; shared by assemble() and the
// p-adic checks.
struct ExactPieces {
    QSeries f;
    QSeries L_f;
    QSeries fLf;
};
ExactPieces exact_pieces(long window);

// Builds the assembly and validates it: [q^h] L must vanish for 3 !| h
// (support_tol) and the constant term 1/beta + gamma + delta must vanish
// within const_tol.  std::runtime_error naming h on violation.
GenFunctionAssembly assemble(double beta, double gamma, double delta, long window, double support_tol = 1e-9,
                             double const_tol = 1e-3);
// Same, reusing precomputed exact pieces.
GenFunctionAssembly assemble(double beta, double gamma, double delta, const ExactPieces& pieces,
                             double support_tol = 1e-9, double const_tol = 1e-3);

struct Anchor {
    long h;
    double value;
};

// Solves gamma A_h + delta B_h = Dhat(h) - [q^h](f L_f) / beta for two anchors.
// std::runtime_error("anchor exponents do not separate the basis") when the
// 2x2 system is singular.
std::pair<double, double> fit_gamma_delta(double beta, const std::vector<Anchor>& anchors, long window);

// Imposes gamma + delta = -1/beta and fits gamma by least squares over the
// anchors.  Works for any number >= 1 of anchors, including the pair
// (3, 6) whose A and B columns are proportional.
std::pair<double, double> fit_gamma_delta_constrained(double beta, const std::vector<Anchor>& anchors, long window);

enum class ShiftedMethod { ClosedForm, Oracle };

struct ShiftedValue {
    long h = 0;
    double value = 0.0;
    ShiftedMethod method = ShiftedMethod::ClosedForm;
    double oscillation_band = 0.0;     // oracle only: spread of the last stage
    std::vector<double> stage_bands;   // oracle only: spread of every stage 0..depth
};

std::string to_string(ShiftedMethod m);

// [q^h] of L; std::out_of_range unless 1 <= h < window.
ShiftedValue dhat(const GenFunctionAssembly& assembly, long h);

// Direct summation of sum_n a(n) a(n+h) (n^-3 - (n+h)^-3) up to X, smoothed by
// `depth` stages of half-window means: stage_j(n) is the mean of stage_{j-1}(i)
// over n/2 < i <= n.  The band of a stage is its max - min over 3X/4 < n <= X.
// Heuristic: the series converges only conditionally.
ShiftedValue oracle_dhat(long h, long X, int depth = 3);
// Several shifts, sharing one coefficient table.
std::vector<ShiftedValue> oracle_dhat(const std::vector<long>& hs, long X, int depth = 3);

nlohmann::json to_json(const GenFunctionAssembly& a);
nlohmann::json to_json(const ShiftedValue& v);

// Rows "h,dhat_closed,dhat_oracle,oscillation_band"; oracle columns empty when
// the oracle entry is missing.
std::string lvalues_csv(const std::vector<ShiftedValue>& closed, const std::vector<ShiftedValue>& oracle);

}  // namespace shiftconv
