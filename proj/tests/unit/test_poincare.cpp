#include "shiftconv/modularforms.hpp"
#include "shiftconv/parallel.hpp"
#include "shiftconv/poincare.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace shiftconv;

namespace {

const HarmonicParams kLevel9{1, 4, 9};
constexpr long kSmall = 9 * 256;

// Direct evaluation of the J-Bessel sum from brute-force Kloosterman sums and
// the standard library Bessel function.
double reference_classical(long n, long c_max) {
    const double x0 = 4 * std::numbers::pi * std::sqrt(static_cast<double>(n));
    double s = 0;
    for (long c = 9; c <= c_max; c += 9) {
        s += static_cast<double>(oracle::kloosterman(1, n, c).real()) / static_cast<double>(c) *
             std::cyl_bessel_j(3.0, x0 / static_cast<double>(c));
    }
    return (n == 1 ? 1.0 : 0.0) + 2 * std::numbers::pi * std::pow(static_cast<double>(n), 1.5) * s;
}

double reference_maass_normalized(long n, long c_max) {
    const double x0 = 4 * std::numbers::pi * std::sqrt(static_cast<double>(n));
    double s = 0;
    for (long c = 9; c <= c_max; c += 9) {
        s += static_cast<double>(oracle::kloosterman(-1, n, c).real()) / static_cast<double>(c) *
             std::cyl_bessel_i(3.0, x0 / static_cast<double>(c));
    }
    return -2 * std::numbers::pi * std::pow(static_cast<double>(n), -1.5) * s;
}

}  // namespace

TEST_SUITE("poincare") {

TEST_CASE("agrees with a brute-force reference sum") {
    for (long n : {1L, 2L, 4L, 5L}) {
        CHECK(static_cast<double>(classical_coeff(kLevel9, n, 9 * 40).value) ==
              doctest::Approx(reference_classical(n, 9 * 40)).epsilon(1e-12));
        CHECK(static_cast<double>(normalize_maass(maass_hol_coeff(kLevel9, n, 9 * 40), 4).value) ==
              doctest::Approx(reference_maass_normalized(n, 9 * 40)).epsilon(1e-12));
    }
}

TEST_CASE("first coefficient is beta") {
    const auto a1 = classical_coeff(kLevel9, 1, kSmall);
    CHECK(std::fabs(static_cast<double>(a1.value) - 1.0468) < 1.5e-3);
    const auto b = beta_constant(kSmall);
    CHECK(b.to_double() == static_cast<double>(a1.value));
    CHECK(b.error_bound == a1.tail_bound);
}

TEST_CASE("proportionality to eta(3 tau)^8") {
    const auto f = newform_f(17);
    const std::vector<long> ns = {1, 4, 7, 13, 16};
    const auto cs = classical_coeffs(kLevel9, ns, kSmall);
    const double a1 = static_cast<double>(cs[0].value);
    const double t1 = cs[0].tail_bound;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double af = f.coefficient(ns[i]).get_d();
        const double ratio = static_cast<double>(cs[i].value) / a1;
        const double bound = (cs[i].tail_bound + std::fabs(af) * t1) / (a1 - t1);
        CHECK(std::fabs(ratio - af) <= bound);
    }
}

TEST_CASE("vanishing at multiples of 3") {
    for (const auto& c : classical_coeffs(kLevel9, {3, 6, 9, 12}, kSmall)) {
        CHECK(std::fabs(static_cast<double>(c.value)) <= c.tail_bound);
    }
    for (const auto& c : maass_hol_coeffs(kLevel9, {3, 6, 9, 12}, kSmall)) {
        CHECK(std::fabs(static_cast<double>(c.value)) <= c.tail_bound);
    }
}

TEST_CASE("normalized Maass coefficients are the rationals of -E_m") {
    const auto L = -eichler_integral(weakform_m9(10), 4);
    for (const auto& raw : maass_hol_coeffs(kLevel9, {2, 5, 8}, kSmall)) {
        const auto c = normalize_maass(raw, 4);
        CHECK(std::fabs(static_cast<double>(c.value) - L.coefficient(c.n).get_d()) <= c.tail_bound);
        CHECK(c.tail_bound <= 1e-3);
        CHECK(raw.value == doctest::Approx(6 * c.value));
    }
}

TEST_CASE("constant term vanishes and its bound refines") {
    const auto a = maass_const_term(kLevel9, 9 * 64);
    const auto b = maass_const_term(kLevel9, 9 * 128);
    CHECK(std::fabs(static_cast<double>(a.value)) <= a.tail_bound);
    CHECK(std::fabs(static_cast<double>(b.value)) <= b.tail_bound);
    CHECK(b.tail_bound < a.tail_bound);
    CHECK_THROWS_AS(maass_const_term(kLevel9, 8), std::invalid_argument);
}

TEST_CASE("tail bounds are sound under doubling") {
    const std::vector<long> ns = {1, 2, 4, 5, 7};
    const auto c1 = classical_coeffs(kLevel9, ns, 9 * 64);
    const auto c2 = classical_coeffs(kLevel9, ns, 9 * 128);
    const auto m1 = maass_hol_coeffs(kLevel9, ns, 9 * 64);
    const auto m2 = maass_hol_coeffs(kLevel9, ns, 9 * 128);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(std::fabs(static_cast<double>(c2[i].value - c1[i].value)) < c1[i].tail_bound);
        CHECK(std::fabs(static_cast<double>(m2[i].value - m1[i].value)) < m1[i].tail_bound);
        CHECK(c2[i].tail_bound < c1[i].tail_bound);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_WITH_AS(classical_coeff(kLevel9, 1, 8), doctest::Contains("empty sum"), std::invalid_argument);
    CHECK_THROWS_AS(classical_coeff(kLevel9, 0, 90), std::invalid_argument);
    CHECK_THROWS_AS(classical_coeff({1, 3, 9}, 1, 90), std::invalid_argument);
    CHECK_THROWS_AS(classical_coeff({1, 2, 9}, 1, 90), std::invalid_argument);
    CHECK_THROWS_AS(maass_hol_coeff({0, 4, 9}, 1, 90), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicParams({1, 4, 0}).validate(), std::invalid_argument);
}

TEST_CASE("xi relation") {
    CHECK(xi_relation_check(kLevel9, 1, kSmall, 1e-6));
    CHECK(xi_relation_check(kLevel9, 3, kSmall, 1e-6));
    CHECK(xi_relation_check({2, 4, 9}, 2, kSmall, 1e-6));
    CHECK(xi_relation_check({1, 6, 4}, 3, 4 * 200, 1e-6));
    const auto x = xi_relation(kLevel9, 4, kSmall);
    CHECK(x.difference <= 1e-9);
}

TEST_CASE("bit-identical across thread counts") {
    set_thread_count(1);
    const auto a = classical_coeffs(kLevel9, {1, 4}, 9 * 300);
    set_thread_count(4);
    const auto b = classical_coeffs(kLevel9, {1, 4}, 9 * 300);
    set_thread_count(0);
    CHECK(a[0].value == b[0].value);
    CHECK(a[1].value == b[1].value);
}

TEST_CASE("json layout") {
    const auto j = to_json(kLevel9, classical_coeff(kLevel9, 1, 90));
    for (const char* key : {"m", "k", "N", "n", "value", "tail_bound", "c_max"}) CHECK(j.contains(key));
}

}  // TEST_SUITE
