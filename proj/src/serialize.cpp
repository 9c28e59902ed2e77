#include "shiftconv/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace shiftconv {

std::string rational_to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) {
        throw std::invalid_argument("malformed rational '" + s + "'");
    }
    r.canonicalize();
    return r;
}

nlohmann::json to_json(const QSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [n, c] : s.nonzero_terms()) coeffs.push_back({n, rational_to_string(c)});
    return {{"lead", s.lead_order()}, {"trunc", s.trunc_order()}, {"coeffs", coeffs}};
}

nlohmann::json to_json(const ResidueSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (long n = s.lead_order(); n < s.trunc_order(); ++n) {
        if (const auto r = s.coefficient(n); r != 0) coeffs.push_back({n, std::to_string(r)});
    }
    return {{"lead", s.lead_order()},
            {"trunc", s.trunc_order()},
            {"modulus", std::to_string(s.prime()) + "^" + std::to_string(s.exponent())},
            {"coeffs", coeffs}};
}

QSeries qseries_from_json(const nlohmann::json& j) {
    try {
        const long lead = j.at("lead").get<long>();
        const long trunc = j.at("trunc").get<long>();
        std::map<long, Rational> terms;
        for (const auto& entry : j.at("coeffs")) {
            terms[entry.at(0).get<long>()] = rational_from_string(entry.at(1).get<std::string>());
        }
        return QSeries::from_terms(lead, trunc, terms);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed series document: ") + e.what());
    }
}

ResidueSeries residue_series_from_json(const nlohmann::json& j) {
    try {
        const long lead = j.at("lead").get<long>();
        const long trunc = j.at("trunc").get<long>();
        const auto modulus = j.at("modulus").get<std::string>();
        const auto caret = modulus.find('^');
        if (caret == std::string::npos) throw std::invalid_argument("modulus must read p^T");
        const auto p = std::stoull(modulus.substr(0, caret));
        const auto T = static_cast<unsigned>(std::stoul(modulus.substr(caret + 1)));
        ResidueSeries s(p, T, lead, trunc);
        std::vector<std::uint64_t> dense(static_cast<std::size_t>(trunc - lead));
        for (const auto& entry : j.at("coeffs")) {
            const long n = entry.at(0).get<long>();
            if (n < lead || n >= trunc) throw std::invalid_argument("exponent outside window");
            dense[static_cast<std::size_t>(n - lead)] = std::stoull(entry.at(1).get<std::string>());
        }
        return ResidueSeries::from_dense(p, T, lead, trunc, std::move(dense));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed residue series document: ") + e.what());
    }
}

std::string hex_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double hex_float_parse(const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::invalid_argument("malformed hex float '" + s + "'");
    return x;
}

nlohmann::json float_json(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return {{"hex", hex_float(x)}, {"decimal", std::string(buf)}};
}

}  // namespace shiftconv
