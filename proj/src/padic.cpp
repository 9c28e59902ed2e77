#include "shiftconv/padic.hpp"

#include "shiftconv/modularforms.hpp"
#include "shiftconv/shiftedconv.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace shiftconv {

long vp(const Rational& x, std::uint64_t p) {
    if (p < 2) throw std::invalid_argument("p must be a prime");
    if (sgn(x) == 0) return kInfiniteValuation;
    const Integer pz = static_cast<unsigned long>(p);
    auto count = [&](const Integer& v) {
        Integer t = abs(v);
        long e = 0;
        while (mpz_divisible_p(t.get_mpz_t(), pz.get_mpz_t())) {
            mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t());
            ++e;
        }
        return e;
    };
    return count(x.get_num()) - count(x.get_den());
}

std::string to_string(StatementId id) {
    switch (id) {
        case StatementId::UnitCongruence: return "unit_congruence";
        case StatementId::Family9n6: return "family_9n6";
        case StatementId::Family36n30: return "family_36n30";
        case StatementId::DPower: return "d_power";
    }
    return "unknown";
}

nlohmann::json to_json(const PadicReport& r) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : r.failures) {
        failures.push_back({{"exponent", f.exponent},
                            {"found", f.found == kInfiniteValuation ? nlohmann::json("inf") : nlohmann::json(f.found)},
                            {"required", f.required}});
    }
    return {{"p", r.p},
            {"statement", to_string(r.statement)},
            {"range", {r.range_lo, r.range_hi}},
            {"checked", r.checked},
            {"pass", r.pass},
            {"failures", failures},
            {"detail", r.detail}};
}

PadicReport unit_congruence_check(const QSeries& fLf) {
    PadicReport r;
    r.statement = StatementId::UnitCongruence;
    r.range_lo = 0;
    r.range_hi = fLf.trunc_order();
    if (fLf.coefficient(0) != 1) {
        r.failures.push_back({0, vp(fLf.coefficient(0) - 1, 3), 1});
    }
    ++r.checked;
    for (long h = 1; h < fLf.trunc_order(); ++h) {
        const long v = vp(fLf.coefficient(h), 3);
        if (v < 1) r.failures.push_back({h, v, 1});
        ++r.checked;
    }
    r.pass = r.failures.empty();
    r.detail = "f*L_f = 1 mod 3";
    return r;
}

PadicReport unit_congruence_check(long window) {
    if (window < 2) throw std::invalid_argument("window must be at least 2");
    return unit_congruence_check(exact_pieces(window).fLf);
}

namespace {

PadicReport family_check(const QSeries& fLf, StatementId id, long modulus, long residue, long required) {
    PadicReport r;
    r.statement = id;
    r.range_lo = 1;
    r.range_hi = fLf.trunc_order();
    for (long h = residue; h < fLf.trunc_order(); h += modulus) {
        const long v = vp(fLf.coefficient(h), 3);
        if (v < required) r.failures.push_back({h, v, required});
        ++r.checked;
    }
    r.pass = r.failures.empty();
    r.detail = "v_3 >= " + std::to_string(required) + " on h = " + std::to_string(residue) + " mod " +
               std::to_string(modulus);
    return r;
}

}  // namespace

std::vector<PadicReport> congruence_families_check(const QSeries& fLf) {
    if (fLf.trunc_order() <= 30) throw std::invalid_argument("window must exceed 30 to contain both families");
    return {family_check(fLf, StatementId::Family9n6, 9, 6, 2),
            family_check(fLf, StatementId::Family36n30, 36, 30, 3)};
}

std::vector<PadicReport> congruence_families_check(long window) {
    if (window <= 30) throw std::invalid_argument("window must exceed 30 to contain both families");
    return congruence_families_check(exact_pieces(window).fLf);
}

long minimal_r(std::uint64_t p, unsigned t, int k) {
    const long phi = static_cast<long>((p - 1) * prime_power(p, t - 1));
    long r = 1;
    while (r * phi < k - 1) ++r;
    return r;
}

long d_power_exponent(std::uint64_t p, unsigned t, int k, long r) {
    return r * static_cast<long>((p - 1) * prime_power(p, t - 1)) - k + 1;
}

PadicReport d_power_congruence(const QSeries& g, const QSeries& F, std::uint64_t p, unsigned t, int k, long r) {
    if (t < 1) throw std::invalid_argument("t must be positive");
    const long phi = static_cast<long>((p - 1) * prime_power(p, t - 1));
    if (r < 1 || r * phi < k - 1) throw std::invalid_argument("r must satisfy r * phi(p^t) >= k - 1");
    for (const auto& [n, c] : g.nonzero_terms()) {
        if (n % static_cast<long>(p) == 0) {
            throw std::invalid_argument("exponent " + std::to_string(n) + " in the support of g is divisible by p");
        }
    }
    const long e = d_power_exponent(p, t, k, r);
    const auto lhs = reduce_mod(F, p, t);
    const auto rhs = reduce_mod(d_operator(g, static_cast<unsigned>(e)), p, t);
    PadicReport rep;
    rep.p = p;
    rep.statement = StatementId::DPower;
    rep.range_lo = std::max(lhs.lead_order(), rhs.lead_order());
    rep.range_hi = std::min(lhs.trunc_order(), rhs.trunc_order());
    for (long n = rep.range_lo; n < rep.range_hi; ++n) {
        const std::uint64_t a = n < lhs.lead_order() ? 0 : lhs.coefficient(n);
        const std::uint64_t b = n < rhs.lead_order() ? 0 : rhs.coefficient(n);
        if (a != b) {
            const std::uint64_t diff = (a + lhs.modulus() - b) % lhs.modulus();
            long v = 0;
            for (std::uint64_t x = diff; x % p == 0; x /= p) ++v;
            rep.failures.push_back({n, v, static_cast<long>(t)});
        }
        ++rep.checked;
    }
    rep.pass = rep.failures.empty();
    rep.detail = "F = D^" + std::to_string(e) + "(g) mod " + std::to_string(p) + "^" + std::to_string(t) +
                 " (r = " + std::to_string(r) + ")";
    return rep;
}

PadicReport d_power_congruence_check(std::uint64_t p, unsigned t, long window, std::optional<long> r) {
    if (window < 2) throw std::invalid_argument("window must be at least 2");
    constexpr int k = 4;
    const auto m = weakform_m9(window);
    const auto L_f = -eichler_integral(m, k);
    return d_power_congruence(-m, L_f, p, t, k, r.value_or(minimal_r(p, t, k)));
}

QSeries normalized_mock(const QSeries& M_plus, const QSeries& eichler_f, const Rational& alpha) {
    return M_plus - eichler_f.scaled(alpha);
}

long DensityRow::permille() const {
    if (X <= 0) throw std::invalid_argument("X must be positive");
    return (2000 * count + X - 1) / (2 * X);
}

ResidueSeries fLf_mod(long window, unsigned T) {
    if (window < 2) throw std::invalid_argument("window must be at least 2");
    constexpr std::uint64_t p = 3;
    const auto f = newform_f_mod(window + 1, p, T);
    const auto m = weakform_m9_mod(window - 1, p, T);
    // -E_m: coefficient -m(n) n^-3; the support of m avoids multiples of 3.
    std::vector<std::uint64_t> lf(m.dense().size());
    const std::uint64_t mod = m.modulus();
    for (long n = m.lead_order(); n < m.trunc_order(); ++n) {
        const std::uint64_t c = m.coefficient(n);
        if (c == 0) continue;
        if (n % 3 == 0) throw std::domain_error("m has a nonzero coefficient at exponent " + std::to_string(n));
        const std::uint64_t nn = m.reduce(static_cast<std::int64_t>(n));
        const std::uint64_t cube = mulmod(mulmod(nn, nn, mod), nn, mod);
        lf[static_cast<std::size_t>(n - m.lead_order())] = mulmod((mod - c) % mod, invmod(cube, mod), mod);
    }
    const auto L_f = ResidueSeries::from_dense(p, T, m.lead_order(), m.trunc_order(), std::move(lf));
    return (f * L_f).truncated(window);
}

std::vector<DensityRow> density_table(const ResidueSeries& fLf, const std::vector<unsigned>& t_values,
                                      const std::vector<long>& X_values, DensityRange range) {
    std::vector<DensityRow> rows;
    for (long X : X_values) {
        if (X < 1) throw std::invalid_argument("X must be positive");
        if (X >= fLf.trunc_order()) {
            throw std::invalid_argument("X = " + std::to_string(X) + " needs a window of at least " +
                                        std::to_string(X + 1));
        }
        for (unsigned t : t_values) {
            if (t < 1) throw std::invalid_argument("t must be positive");
            if (t >= fLf.exponent()) throw std::invalid_argument("cannot distinguish valuation boundary");
            DensityRow row{t, X, 0};
            const long last = range == DensityRange::Inclusive ? X : X - 1;
            for (long h = 1; h <= last; ++h) {
                if (fLf.valuation_at(h) >= t) ++row.count;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<DensityRow> density_table(const std::vector<unsigned>& t_values, const std::vector<long>& X_values,
                                      unsigned T, DensityRange range) {
    if (t_values.empty() || X_values.empty()) throw std::invalid_argument("empty density request");
    const unsigned tmax = *std::max_element(t_values.begin(), t_values.end());
    if (T <= tmax) throw std::invalid_argument("cannot distinguish valuation boundary");
    const long Xmax = *std::max_element(X_values.begin(), X_values.end());
    return density_table(fLf_mod(Xmax + 1, T), t_values, X_values, range);
}

std::string density_csv(const std::vector<DensityRow>& rows) {
    std::vector<unsigned> ts;
    std::vector<long> xs;
    for (const auto& r : rows) {
        if (std::find(ts.begin(), ts.end(), r.t) == ts.end()) ts.push_back(r.t);
        if (std::find(xs.begin(), xs.end(), r.X) == xs.end()) xs.push_back(r.X);
    }
    std::ostringstream out;
    out << "X";
    for (unsigned t : ts) out << ",pi_" << prime_power(3, t);
    out << '\n';
    char buf[32];
    for (long X : xs) {
        out << X;
        for (unsigned t : ts) {
            const auto it = std::find_if(rows.begin(), rows.end(), [&](const DensityRow& r) { return r.X == X && r.t == t; });
            out << ',';
            if (it == rows.end()) continue;
            const long pm = it->permille();
            std::snprintf(buf, sizeof buf, "%ld.%03ld", pm / 1000, pm % 1000);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string density_rows_csv(const std::vector<DensityRow>& rows) {
    std::ostringstream out;
    out << "t,X,count,proportion\n";
    for (const auto& r : rows) {
        Rational q = r.proportion();
        out << r.t << ',' << r.X << ',' << r.count << ',' << q.get_str() << '\n';
    }
    return out.str();
}

std::vector<CongruenceFamily> scan_congruence_families(const QSeries& fLf, unsigned t, long max_modulus,
                                                       long min_members) {
    const long window = fLf.trunc_order();
    // 0: zero coefficient (vacuous), 1: v_3 >= t, 2: v_3 < t.
    std::vector<char> state(static_cast<std::size_t>(window));
    for (long h = 1; h < window; ++h) {
        const long v = vp(fLf.coefficient(h), 3);
        state[static_cast<std::size_t>(h)] = v == kInfiniteValuation ? 0 : (v >= static_cast<long>(t) ? 1 : 2);
    }
    std::vector<CongruenceFamily> found;
    for (long mod = 1; mod <= max_modulus; ++mod) {
        for (long res = 0; res < mod; ++res) {
            const bool implied = std::any_of(found.begin(), found.end(), [&](const CongruenceFamily& f) {
                return mod % f.modulus == 0 && res % f.modulus == f.residue;
            });
            if (implied) continue;
            long members = 0;
            bool all = true;
            for (long h = (res == 0 ? mod : res); h < window; h += mod) {
                const char s = state[static_cast<std::size_t>(h)];
                if (s == 2) {
                    all = false;
                    break;
                }
                members += s;
            }
            if (all && members >= min_members) found.push_back({mod, res, t, members});
        }
    }
    return found;
}

}  // namespace shiftconv
