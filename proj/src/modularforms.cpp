#include "shiftconv/modularforms.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shiftconv {

EtaQuotient::EtaQuotient(std::vector<EtaFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("eta quotient needs at least one factor");
    std::set<long> seen;
    long weighted = 0;
    for (const auto& f : factors_) {
        if (f.scale <= 0) throw std::invalid_argument("eta scale must be positive");
        if (!seen.insert(f.scale).second) {
            throw std::invalid_argument("duplicate eta scale " + std::to_string(f.scale));
        }
        weighted += f.scale * f.exponent;
    }
    if (weighted % 24 != 0) throw std::invalid_argument("fractional leading exponent");
    lead_ = weighted / 24;
}

EtaQuotient EtaQuotient::parse(const std::string& text) {
    std::vector<EtaFactor> factors;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("eta factor '" + item + "' must read scale:exponent");
        }
        try {
            std::size_t used = 0;
            const long scale = std::stol(item.substr(0, colon), &used);
            const long exponent = std::stol(item.substr(colon + 1));
            factors.push_back({scale, exponent});
        } catch (const std::logic_error&) {
            throw std::invalid_argument("eta factor '" + item + "' is not numeric");
        }
    }
    return EtaQuotient(std::move(factors));
}

std::string EtaQuotient::to_string() const {
    std::string out;
    for (const auto& f : factors_) {
        if (!out.empty()) out += ",";
        out += std::to_string(f.scale) + ":" + std::to_string(f.exponent);
    }
    return out;
}

namespace {

// Both rings expose the same handful of operations so the expansions below
// are written once.
struct ExactRing {
    using Series = QSeries;

    // prod_{n>=1} (1 - q^(scale n)) on [0, precision), by multiplying in the
    // Euler factors one at a time.
    Series euler_product(long scale, long precision) const {
        std::vector<Integer> c(static_cast<std::size_t>(std::max(precision, 0L)));
        if (!c.empty()) c[0] = 1;
        for (long step = scale; step < precision; step += scale) {
            for (long i = precision - 1; i >= step; --i) {
                auto& slot = c[static_cast<std::size_t>(i)];
                const auto& prev = c[static_cast<std::size_t>(i - step)];
                if (sgn(prev) != 0) slot -= prev;
            }
        }
        std::vector<Rational> r(c.begin(), c.end());
        return QSeries::from_dense(0, std::max(precision, 0L), std::move(r));
    }

    Series constant(std::int64_t value, long trunc) const { return QSeries::constant(value, trunc); }
    Series monomial(std::int64_t value, long exponent, long trunc) const {
        return QSeries::monomial(value, exponent, trunc);
    }
};

struct ResidueRing {
    using Series = ResidueSeries;
    std::uint64_t p;
    unsigned T;

    Series euler_product(long scale, long precision) const {
        ResidueSeries s(p, T, 0, std::max(precision, 0L));
        std::vector<std::uint64_t> c(static_cast<std::size_t>(std::max(precision, 0L)));
        const std::uint64_t m = s.modulus();
        if (!c.empty()) c[0] = 1;
        for (long step = scale; step < precision; step += scale) {
            for (long i = precision - 1; i >= step; --i) {
                auto& slot = c[static_cast<std::size_t>(i)];
                const auto prev = c[static_cast<std::size_t>(i - step)];
                if (prev != 0) slot = (slot + m - prev) % m;
            }
        }
        return ResidueSeries::from_dense(p, T, 0, std::max(precision, 0L), std::move(c));
    }

    Series constant(std::int64_t value, long trunc) const {
        return ResidueSeries::from_integers(p, T, 0, trunc, {value});
    }
    Series monomial(std::int64_t value, long exponent, long trunc) const {
        if (exponent >= trunc) return ResidueSeries(p, T, trunc, trunc);
        return ResidueSeries::from_integers(p, T, exponent, trunc, {value});
    }
};

template <class Ring>
typename Ring::Series expand(const Ring& ring, const EtaQuotient& eta, long window) {
    const long precision = window - eta.lead_exponent();
    if (precision <= 0) {
        return ring.monomial(0, window, window);
    }
    typename Ring::Series product = ring.constant(1, precision);
    for (const auto& f : eta.factors()) {
        if (f.exponent == 0) continue;
        auto base = ring.euler_product(f.scale, precision);
        auto power = pow(base, static_cast<unsigned>(std::labs(f.exponent)));
        if (f.exponent < 0) power = invert(power);
        product = product * power;
    }
    return product.shifted(eta.lead_exponent());
}

template <class Ring>
typename Ring::Series expand_m9(const Ring& ring, long window) {
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    // (X + 3)^2 has lead -2 and f has lead 1, so X must be known to window + 1.
    auto x = expand(ring, EtaQuotient({{1, 3}, {9, -3}}), window + 1);
    auto inner = x + ring.constant(3, window + 1);
    auto f = expand(ring, EtaQuotient({{3, 8}}), window + 2);
    return (inner * inner * f).truncated(window);
}

}  // namespace

QSeries eta_quotient_expand(const EtaQuotient& eta, long window) {
    return expand(ExactRing{}, eta, window);
}

ResidueSeries eta_quotient_expand_mod(const EtaQuotient& eta, long window, std::uint64_t p, unsigned T) {
    return expand(ResidueRing{p, T}, eta, window);
}

QSeries newform_f(long window) { return eta_quotient_expand(EtaQuotient({{3, 8}}), window); }

ResidueSeries newform_f_mod(long window, std::uint64_t p, unsigned T) {
    return eta_quotient_expand_mod(EtaQuotient({{3, 8}}), window, p, T);
}

std::vector<std::int64_t> newform_coefficients(long count) {
    // eta(3 tau)^8 = q * E(q^3)^8 with E(x) = prod (1 - x^n).  The eighth
    // power is built by eight sparse multiplications with Euler's pentagonal
    // series; every intermediate eta power has polynomially bounded
    // coefficients, so 64-bit integers are ample.
    std::vector<std::int64_t> out(static_cast<std::size_t>(std::max(count, 0L)));
    if (count <= 1) return out;
    const long width = (count - 2) / 3 + 1;  // exponents 3j + 1 < count
    std::vector<std::pair<long, int>> pentagonal;
    for (long k = 0;; ++k) {
        bool any = false;
        for (long kk : {k, -k}) {
            const long e = kk * (3 * kk - 1) / 2;
            if (e < width) {
                pentagonal.emplace_back(e, (k % 2 == 0) ? 1 : -1);
                any = true;
            }
            if (k == 0) break;
        }
        if (!any) break;
    }
    std::vector<std::int64_t> power(static_cast<std::size_t>(width));
    power[0] = 1;
    for (int step = 0; step < 8; ++step) {
        std::vector<std::int64_t> next(power.size());
        for (const auto& [e, sign] : pentagonal) {
            for (long i = e; i < width; ++i) next[static_cast<std::size_t>(i)] += sign * power[static_cast<std::size_t>(i - e)];
        }
        power = std::move(next);
    }
    for (long j = 0; j < width; ++j) out[static_cast<std::size_t>(3 * j + 1)] = power[static_cast<std::size_t>(j)];
    return out;
}

QSeries weakform_m9(long window) { return expand_m9(ExactRing{}, window); }

ResidueSeries weakform_m9_mod(long window, std::uint64_t p, unsigned T) {
    return expand_m9(ResidueRing{p, T}, window);
}

std::vector<std::int64_t> divisor_sigma1(long count) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(std::max(count, 0L)));
    for (long d = 1; d < count; ++d) {
        for (long n = d; n < count; n += d) s[static_cast<std::size_t>(n)] += d;
    }
    return s;
}

std::vector<std::int64_t> divisor_sigma1_prime_to_3(long count) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(std::max(count, 0L)));
    for (long d = 1; d < count; ++d) {
        if (d % 3 == 0) continue;
        for (long n = d; n < count; n += d) s[static_cast<std::size_t>(n)] += d;
    }
    return s;
}

QSeries eisenstein_E2(long window) {
    if (window <= 0) return QSeries(window, window);
    const auto sigma = divisor_sigma1(window);
    std::vector<Rational> c(static_cast<std::size_t>(window));
    c[0] = 1;
    for (long n = 1; n < window; ++n) c[static_cast<std::size_t>(n)] = -24 * sigma[static_cast<std::size_t>(n)];
    return QSeries::from_dense(0, window, std::move(c));
}

QSeries sigma_series_A(long window) {
    if (window <= 0) return QSeries(window, window);
    const auto sigma = divisor_sigma1(window);
    std::vector<Rational> c(static_cast<std::size_t>(window));
    c[0] = 1;
    for (long n = 3; n < window; n += 3) c[static_cast<std::size_t>(n)] = -24 * sigma[static_cast<std::size_t>(n)];
    return QSeries::from_dense(0, window, std::move(c));
}

QSeries sigma_series_B(long window) {
    if (window <= 0) return QSeries(window, window);
    const auto sigma = divisor_sigma1_prime_to_3(window);
    std::vector<Rational> c(static_cast<std::size_t>(window));
    c[0] = 1;
    for (long n = 3; n < window; n += 3) c[static_cast<std::size_t>(n)] = 12 * sigma[static_cast<std::size_t>(n)];
    return QSeries::from_dense(0, window, std::move(c));
}

CoefficientRecord import_coefficients(const nlohmann::json& document, std::optional<long> expected_level,
                                      std::optional<int> expected_weight) {
    if (!document.is_object()) throw std::invalid_argument("coefficient record must be a JSON object");
    for (const char* key : {"level", "weight", "an"}) {
        if (!document.contains(key)) {
            throw std::invalid_argument(std::string("coefficient record missing \"") + key + "\"");
        }
    }
    CoefficientRecord rec;
    try {
        rec.level = document.at("level").get<long>();
        rec.weight = document.at("weight").get<int>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("\"level\" and \"weight\" must be integers");
    }
    if (expected_level && *expected_level != rec.level) {
        throw std::invalid_argument("level mismatch: record has " + std::to_string(rec.level) + ", expected " +
                                    std::to_string(*expected_level));
    }
    if (expected_weight && *expected_weight != rec.weight) {
        throw std::invalid_argument("weight mismatch: record has " + std::to_string(rec.weight) +
                                    ", expected " + std::to_string(*expected_weight));
    }
    const auto& an = document.at("an");
    if (!an.is_array()) throw std::invalid_argument("\"an\" must be an array");
    std::vector<Rational> coeffs;
    coeffs.reserve(an.size());
    for (const auto& entry : an) {
        Integer value;
        if (entry.is_string()) {
            if (value.set_str(entry.get<std::string>(), 10) != 0) {
                throw std::invalid_argument("malformed coefficient '" + entry.get<std::string>() + "'");
            }
        } else if (entry.is_number_integer()) {
            value = static_cast<long>(entry.get<std::int64_t>());
        } else {
            throw std::invalid_argument("coefficients must be decimal strings");
        }
        coeffs.emplace_back(value);
    }
    if (coeffs.empty()) rec.warnings.push_back("empty coefficient list");
    const long trunc = 1 + static_cast<long>(coeffs.size());
    rec.series = QSeries::from_dense(1, trunc, std::move(coeffs));
    return rec;
}

}  // namespace shiftconv
