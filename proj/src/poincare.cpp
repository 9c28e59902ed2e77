#include "shiftconv/poincare.hpp"

#include "shiftconv/kloosterman.hpp"
#include "shiftconv/parallel.hpp"
#include "shiftconv/serialize.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shiftconv {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kUlp = std::numeric_limits<long double>::epsilon();

enum class Kernel { BesselJ, BesselI, Constant };

// One Kloosterman-Bessel sum: sum over N | c <= c_max of
// K(km, kn, c) / c^power * kernel(order, x_scale / c).
struct SumSpec {
    long km;
    long kn;
    Kernel kernel;
    int order;             // Bessel order
    long double x_scale;   // x = x_scale / c
    int power;             // exponent of c in the denominator
};

struct SumResult {
    long double value = 0.0L;
    long double rounding = 0.0L;
};

long double factorial(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

int sign_of_half_k(int k) { return (k / 2) % 2 == 0 ? 1 : -1; }

// Pairwise summation over a fixed binary tree: the order of additions depends
// only on the length of the input.
long double pairwise_sum(const std::vector<long double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        long double s = 0.0L;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

std::vector<SumResult> evaluate_sums(const std::vector<SumSpec>& specs, long N, long c_max) {
    if (c_max < N) throw std::invalid_argument("empty sum: c_max is below the level N");
    const long count = c_max / N;
    std::vector<std::vector<long double>> terms(specs.size(), std::vector<long double>(static_cast<std::size_t>(count)));
    std::vector<std::vector<long double>> errs(specs.size(), std::vector<long double>(static_cast<std::size_t>(count)));

    parallel_for(0, count, 16, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t j = lo; j < hi; ++j) {
            const long c = N * (j + 1);
            const KloostermanTable table(c);
            const long double cl = static_cast<long double>(c);
            for (std::size_t s = 0; s < specs.size(); ++s) {
                const SumSpec& spec = specs[s];
                const long double re = table.real(spec.km, spec.kn);
                const long double im = table.imag(spec.km, spec.kn);
                const long double noise = 64.0L * kUlp * static_cast<long double>(table.totient());
                if (std::fabs(im) > 1e-9L + noise) {
                    throw std::runtime_error("Kloosterman sum K(" + std::to_string(spec.km) + "," +
                                             std::to_string(spec.kn) + "," + std::to_string(c) +
                                             ") has a non-negligible imaginary part");
                }
                long double weight = 1.0L;
                switch (spec.kernel) {
                    case Kernel::BesselJ:
                        weight = bessel_j_series<long double>(spec.order, spec.x_scale / cl);
                        break;
                    case Kernel::BesselI:
                        weight = bessel_i_series<long double>(spec.order, spec.x_scale / cl);
                        break;
                    case Kernel::Constant:
                        break;
                }
                const long double scale = std::pow(cl, -static_cast<long double>(spec.power)) * weight;
                terms[s][static_cast<std::size_t>(j)] = re * scale;
                errs[s][static_cast<std::size_t>(j)] = noise * std::fabs(scale) + 8.0L * kUlp * std::fabs(re * scale);
            }
        }
    });

    std::vector<SumResult> out(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        out[s].value = pairwise_sum(terms[s], 0, terms[s].size());
        out[s].rounding = pairwise_sum(errs[s], 0, errs[s].size()) +
                          kUlp * static_cast<long double>(count) * std::fabs(out[s].value);
    }
    return out;
}

// sum over j > J of (N j)^-p, bounded by N^-p J^(1-p) / (p - 1) for p > 1.
double zeta_tail(long N, long J, int p) {
    if (p <= 1) return std::numeric_limits<double>::infinity();
    const double Jd = static_cast<double>(std::max(J, 1L));
    return std::pow(static_cast<double>(N), -p) * std::pow(Jd, 1 - p) / (p - 1);
}

void require_finite_tail(const HarmonicParams& params) {
    if (params.k < 4) {
        throw std::invalid_argument("the certified tail bound needs k >= 4 (the trivial bound |K| <= c diverges for k = 2)");
    }
}

// Tail of sum K/c * B_{k-1}(x_c) for the J or I kernel, using |K| <= c and
// |J_v(x)| <= (x/2)^v / v!,  I_v(x) <= (x/2)^v / v! * exp((x/2)^2 / (v + 1)).
double bessel_tail(const HarmonicParams& params, long n_abs, long c_max, bool i_kernel) {
    const int nu = params.k - 1;
    const long J = c_max / params.N;
    const double half_scale = 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(params.m) * static_cast<double>(n_abs));
    double growth = 1.0;
    if (i_kernel) {
        const double half_x = half_scale / static_cast<double>(params.N * (J + 1));
        growth = std::exp(half_x * half_x / (nu + 1));
    }
    return std::pow(half_scale, nu) / static_cast<double>(factorial(nu)) * growth * zeta_tail(params.N, J, nu);
}

SumSpec classical_spec(const HarmonicParams& params, long n) {
    const long double x = 4.0L * kPi * std::sqrt(static_cast<long double>(params.m) * static_cast<long double>(n));
    return {params.m, n, Kernel::BesselJ, params.k - 1, x, 1};
}

PoincareCoefficient finish_classical(const HarmonicParams& params, long n, long c_max, const SumResult& sum) {
    const long double ratio = static_cast<long double>(n) / static_cast<long double>(params.m);
    const long double pref = 2.0L * kPi * sign_of_half_k(params.k) * std::pow(ratio, (params.k - 1) / 2.0L);
    PoincareCoefficient out;
    out.n = n;
    out.c_max = c_max;
    out.value = (n == params.m ? 1.0L : 0.0L) + pref * sum.value;
    out.tail_bound = static_cast<double>(std::fabs(pref)) * bessel_tail(params, n, c_max, false) +
                     static_cast<double>(std::fabs(pref) * sum.rounding);
    return out;
}

SumSpec maass_spec(const HarmonicParams& params, long n) {
    const long double x = 4.0L * kPi * std::sqrt(static_cast<long double>(params.m) * static_cast<long double>(n));
    return {-params.m, n, Kernel::BesselI, params.k - 1, x, 1};
}

PoincareCoefficient finish_maass(const HarmonicParams& params, long n, long c_max, const SumResult& sum) {
    const long double ratio = static_cast<long double>(n) / static_cast<long double>(params.m);
    const long double pref = -2.0L * kPi * sign_of_half_k(params.k) * factorial(params.k) / params.k *
                             std::pow(ratio, (1 - params.k) / 2.0L);
    PoincareCoefficient out;
    out.n = n;
    out.c_max = c_max;
    out.value = pref * sum.value;
    out.tail_bound = static_cast<double>(std::fabs(pref)) * bessel_tail(params, n, c_max, true) +
                     static_cast<double>(std::fabs(pref) * sum.rounding);
    return out;
}

void check_n(long n) {
    if (n < 1) throw std::invalid_argument("coefficient index n must be positive");
}

}  // namespace

void HarmonicParams::validate() const {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("weight k must be an even integer >= 2");
    if (m < 1) throw std::invalid_argument("m must be a positive integer");
    if (N < 1) throw std::invalid_argument("level N must be a positive integer");
}

nlohmann::json to_json(const HarmonicParams& params, const PoincareCoefficient& c) {
    return {{"m", params.m},
            {"k", params.k},
            {"N", params.N},
            {"n", c.n},
            {"value", static_cast<double>(c.value)},
            {"value_hex", hex_float(static_cast<double>(c.value))},
            {"tail_bound", c.tail_bound},
            {"c_max", c.c_max}};
}

std::vector<PoincareCoefficient> classical_coeffs(const HarmonicParams& params, const std::vector<long>& ns,
                                                  long c_max) {
    params.validate();
    require_finite_tail(params);
    std::vector<SumSpec> specs;
    for (long n : ns) {
        check_n(n);
        specs.push_back(classical_spec(params, n));
    }
    const auto sums = evaluate_sums(specs, params.N, c_max);
    std::vector<PoincareCoefficient> out;
    for (std::size_t i = 0; i < ns.size(); ++i) out.push_back(finish_classical(params, ns[i], c_max, sums[i]));
    return out;
}

PoincareCoefficient classical_coeff(const HarmonicParams& params, long n, long c_max) {
    return classical_coeffs(params, {n}, c_max).front();
}

std::vector<PoincareCoefficient> maass_hol_coeffs(const HarmonicParams& params, const std::vector<long>& ns,
                                                  long c_max) {
    params.validate();
    require_finite_tail(params);
    std::vector<SumSpec> specs;
    for (long n : ns) {
        check_n(n);
        specs.push_back(maass_spec(params, n));
    }
    const auto sums = evaluate_sums(specs, params.N, c_max);
    std::vector<PoincareCoefficient> out;
    for (std::size_t i = 0; i < ns.size(); ++i) out.push_back(finish_maass(params, ns[i], c_max, sums[i]));
    return out;
}

PoincareCoefficient maass_hol_coeff(const HarmonicParams& params, long n, long c_max) {
    return maass_hol_coeffs(params, {n}, c_max).front();
}

PoincareCoefficient maass_const_term(const HarmonicParams& params, long c_max) {
    params.validate();
    require_finite_tail(params);
    const auto sums = evaluate_sums({{-params.m, 0, Kernel::Constant, 0, 0.0L, params.k}}, params.N, c_max);
    const long double two_pi_k = std::pow(2.0L * kPi, static_cast<long double>(params.k));
    const long double pref = -two_pi_k * sign_of_half_k(params.k) *
                             std::pow(static_cast<long double>(params.m), static_cast<long double>(params.k - 1));
    PoincareCoefficient out;
    out.n = 0;
    out.c_max = c_max;
    out.value = pref * sums[0].value;
    // |K(-m, 0, c)| <= c, so the tail is at most sum over c > c_max of c^(1-k).
    out.tail_bound = static_cast<double>(std::fabs(pref)) * zeta_tail(params.N, c_max / params.N, params.k - 1) +
                     static_cast<double>(std::fabs(pref) * sums[0].rounding);
    return out;
}

PoincareCoefficient normalize_maass(const PoincareCoefficient& c, int k) {
    const long double g = factorial(k - 1);
    PoincareCoefficient out = c;
    out.value = c.value / g;
    out.tail_bound = c.tail_bound / static_cast<double>(g);
    return out;
}

PrecisionReal beta_constant(long c_max) {
    const auto a1 = classical_coeff({1, 4, 9}, 1, c_max);
    return {BigFloat(a1.value, 64), a1.tail_bound};
}

XiComparison xi_relation(const HarmonicParams& params, long n, long c_max) {
    params.validate();
    require_finite_tail(params);
    check_n(n);
    // Negative-index route: c_m(-n, y) = 2 pi i^k (1 - k) (n/m)^((1-k)/2) Gamma(k-1; 4 pi n y)
    //   * sum K(-m, -n, c)/c J_{k-1}(4 pi sqrt(mn)/c).
    // xi_{2-k} sends Gamma(k-1; 4 pi n y) q^-n to -(4 pi n)^(k-1) q^n.
    const long double x = 4.0L * kPi * std::sqrt(static_cast<long double>(params.m) * static_cast<long double>(n));
    const std::vector<SumSpec> specs = {{-params.m, -n, Kernel::BesselJ, params.k - 1, x, 1},
                                        classical_spec(params, n)};
    const auto sums = evaluate_sums(specs, params.N, c_max);

    const int k = params.k;
    const long double ratio = static_cast<long double>(n) / static_cast<long double>(params.m);
    const long double c_neg = 2.0L * kPi * sign_of_half_k(k) * (1 - k) * std::pow(ratio, (1 - k) / 2.0L);
    const long double four_pi_n = std::pow(4.0L * kPi * static_cast<long double>(n), static_cast<long double>(k - 1));
    long double xi_coeff = -four_pi_n * c_neg * sums[0].value;
    if (n == params.m) {
        // Principal part (1 - k) Gamma(k-1; 4 pi m y) q^-m.
        xi_coeff += -four_pi_n * (1 - k);
    }
    const long double constant = std::pow(4.0L * kPi * static_cast<long double>(params.m), static_cast<long double>(k - 1)) * (k - 1);

    XiComparison out;
    out.n = n;
    out.from_maass = xi_coeff / constant;
    const auto classical = finish_classical(params, n, c_max, sums[1]);
    out.from_classical = classical.value;
    out.difference = static_cast<double>(std::fabs(out.from_maass - out.from_classical));
    const long double maass_scale = std::fabs(four_pi_n * c_neg / constant);
    out.combined_bound = classical.tail_bound +
                         static_cast<double>(maass_scale) * bessel_tail(params, n, c_max, false) +
                         static_cast<double>(maass_scale * sums[0].rounding);
    return out;
}

bool xi_relation_check(const HarmonicParams& params, long n, long c_max, double tol) {
    return xi_relation(params, n, c_max).difference < tol;
}

}  // namespace shiftconv
