#pragma once

// JSON forms shared by the library, the CLI and the Python module.
//
//   exact series:   {"lead": int, "trunc": int, "coeffs": [[n, "num/den"], ...]}
//   residue series: {"lead": int, "trunc": int, "modulus": "p^T", "coeffs": [[n, "r"], ...]}
//
// Only nonzero coefficients are written, in increasing exponent order.

#include "shiftconv/qseries.hpp"

#include <json.hpp>

#include <string>

namespace shiftconv {

nlohmann::json to_json(const QSeries& s);
nlohmann::json to_json(const ResidueSeries& s);
QSeries qseries_from_json(const nlohmann::json& j);
ResidueSeries residue_series_from_json(const nlohmann::json& j);

// "num/den" with den >= 1, always both parts.
std::string rational_to_string(const Rational& x);
// Accepts "num/den" or a bare integer.
Rational rational_from_string(const std::string& s);

// Exact hexadecimal rendering ("%a") of a double, e.g. "0x1.0c0a3d70a3d71p+0".
std::string hex_float(double x);
double hex_float_parse(const std::string& s);
// {"hex": hex_float(x), "decimal": rounded}.
nlohmann::json float_json(double x, int digits = 10);

}  // namespace shiftconv
