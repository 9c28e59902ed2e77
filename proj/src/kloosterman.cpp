#include "shiftconv/kloosterman.hpp"

#include "shiftconv/parallel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shiftconv {

namespace {

long positive_mod(long a, long c) {
    long r = a % c;
    return r < 0 ? r + c : r;
}

// Multiplicity of each residue r = (m dbar + n d) mod c over the units d.
std::vector<long> residue_histogram(const KloostermanQuery& q) {
    std::vector<long> hist(static_cast<std::size_t>(q.c), 0);
    const long m = positive_mod(q.m, q.c);
    const long n = positive_mod(q.n, q.c);
    for (long d = 0; d < q.c; ++d) {
        if (std::gcd(d, q.c) != 1) continue;
        const long dbar = mod_inverse(d, q.c);
        const auto r = static_cast<std::size_t>((static_cast<__int128>(m) * dbar + static_cast<__int128>(n) * d) % q.c);
        ++hist[r];
    }
    return hist;
}

long divisor_count(long c) {
    long count = 0;
    for (long d = 1; d * d <= c; ++d) {
        if (c % d == 0) count += (d * d == c) ? 1 : 2;
    }
    return count;
}

}  // namespace

long mod_inverse(long d, long c) {
    if (c < 1) throw std::invalid_argument("modulus must be positive");
    long t = 0, new_t = 1;
    long r = c, new_r = positive_mod(d, c);
    if (c == 1) return 0;
    while (new_r != 0) {
        const long quotient = r / new_r;
        t = std::exchange(new_t, t - quotient * new_t);
        r = std::exchange(new_r, r - quotient * new_r);
    }
    if (r != 1) {
        throw std::domain_error(std::to_string(d) + " has no inverse modulo " + std::to_string(c));
    }
    return positive_mod(t, c);
}

ComplexSum kloosterman_sum_complex(const KloostermanQuery& q, long bits) {
    if (q.c < 1) throw std::invalid_argument("Kloosterman modulus must be positive");
    const auto hist = residue_histogram(q);
    const long work = bits + 8;
    const BigFloat two_pi_over_c = BigFloat::pi(work) * 2L / q.c;
    ComplexSum out{BigFloat(work), BigFloat(work), 0.0};
    for (long r = 0; r < q.c; ++r) {
        const long count = hist[static_cast<std::size_t>(r)];
        if (count == 0) continue;
        const BigFloat angle = two_pi_over_c * r;
        out.re += cos(angle) * count;
        out.im += sin(angle) * count;
    }
    out.re = out.re.with_bits(bits);
    out.im = out.im.with_bits(bits);
    const double c = static_cast<double>(q.c);
    out.error_bound = c * c * std::ldexp(1.0, static_cast<int>(-bits));
    return out;
}

PrecisionReal kloosterman_sum(const KloostermanQuery& q, long bits) {
    auto raw = kloosterman_sum_complex(q, bits);
    return {std::move(raw.re), raw.error_bound};
}

bool check_multiplicativity(long m, long n, long c1, long c2, double tol, long bits) {
    if (c1 < 1 || c2 < 1) throw std::invalid_argument("moduli must be positive");
    if (std::gcd(c1, c2) != 1) {
        throw std::invalid_argument("moduli " + std::to_string(c1) + " and " + std::to_string(c2) +
                                    " are not coprime");
    }
    const long inv2 = mod_inverse(c2, c1);  // c2^-1 mod c1
    const long inv1 = mod_inverse(c1, c2);  // c1^-1 mod c2
    const auto whole = kloosterman_sum({m, n, c1 * c2}, bits);
    const auto left = kloosterman_sum({m * inv2, n * inv2, c1}, bits);
    const auto right = kloosterman_sum({m * inv1, n * inv1, c2}, bits);
    const BigFloat diff = abs(whole.value - left.value * right.value);
    return diff.to_double() < tol;
}

VanishingReport vanishing_scan(long p, long m, long n_max, long c_max, double tol, long bits) {
    if (p < 2) throw std::invalid_argument("p must be a prime");
    if (m % p == 0) {
        throw std::invalid_argument("p divides m; the vanishing statement does not apply");
    }
    const long pairs = std::max(n_max, 0L) * std::max(c_max, 0L);
    std::vector<double> magnitude(static_cast<std::size_t>(pairs));
    parallel_for(0, pairs, 8, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t idx = lo; idx < hi; ++idx) {
            const long n = 1 + idx / c_max;
            const long c = 1 + idx % c_max;
            const auto k = kloosterman_sum({m, n * p, p * p * c}, bits);
            magnitude[static_cast<std::size_t>(idx)] = std::fabs(k.value.to_double());
        }
    });
    VanishingReport report;
    report.p = p;
    report.tolerance = tol;
    report.evaluated = pairs;
    report.worst_case = {m, p, p * p};
    for (long idx = 0; idx < pairs; ++idx) {
        if (magnitude[static_cast<std::size_t>(idx)] > report.max_abs) {
            report.max_abs = magnitude[static_cast<std::size_t>(idx)];
            report.worst_case = {m, (1 + idx / c_max) * p, p * p * (1 + idx % c_max)};
        }
    }
    report.pass = report.max_abs < tol;
    return report;
}

nlohmann::json to_json(const VanishingReport& r) {
    return {{"max_abs", r.max_abs},
            {"worst_case", {r.worst_case[0], r.worst_case[1], r.worst_case[2]}},
            {"pass", r.pass}};
}

double weil_ratio_max(long m, long n_max, long c_max, long bits) {
    double worst = 0.0;
    for (long n = 1; n <= n_max; ++n) {
        for (long c = 1; c <= c_max; ++c) {
            const double k = std::fabs(kloosterman_sum({m, n, c}, bits).value.to_double());
            const long g = std::gcd(std::gcd(std::labs(m), n), c);
            const double bound = static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(g)) *
                                 std::sqrt(static_cast<double>(c));
            worst = std::max(worst, k / bound);
        }
    }
    return worst;
}

KloostermanTable::KloostermanTable(long c) : c_(c) {
    if (c < 1) throw std::invalid_argument("Kloosterman modulus must be positive");
    for (long d = 0; d < c; ++d) {
        if (std::gcd(d, c) == 1) units_.emplace_back(d, mod_inverse(d, c));
    }
    cos_.resize(static_cast<std::size_t>(c));
    sin_.resize(static_cast<std::size_t>(c));
    const long double step = 2.0L * 3.141592653589793238462643383279502884L / static_cast<long double>(c);
    for (long r = 0; r < c; ++r) {
        cos_[static_cast<std::size_t>(r)] = std::cos(step * static_cast<long double>(r));
        sin_[static_cast<std::size_t>(r)] = std::sin(step * static_cast<long double>(r));
    }
}

long KloostermanTable::index(long m, long n, std::size_t k) const {
    const auto& [d, dbar] = units_[k];
    return static_cast<long>((static_cast<__int128>(m) * dbar + static_cast<__int128>(n) * d) % c_);
}

long double KloostermanTable::real(long m, long n) const {
    m = positive_mod(m, c_);
    n = positive_mod(n, c_);
    long double sum = 0.0L;
    for (std::size_t k = 0; k < units_.size(); ++k) sum += cos_[static_cast<std::size_t>(index(m, n, k))];
    return sum;
}

long double KloostermanTable::imag(long m, long n) const {
    m = positive_mod(m, c_);
    n = positive_mod(n, c_);
    long double sum = 0.0L;
    for (std::size_t k = 0; k < units_.size(); ++k) sum += sin_[static_cast<std::size_t>(index(m, n, k))];
    return sum;
}

}  // namespace shiftconv
