#include "shiftconv/modularforms.hpp"
#include "shiftconv/qseries.hpp"
#include "shiftconv/serialize.hpp"

#include <doctest.h>

#include <random>

using namespace shiftconv;

namespace {

QSeries poly(long lead, long trunc, std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long x : coeffs) c.emplace_back(x);
    return QSeries::from_dense(lead, trunc, std::move(c));
}

QSeries random_series(std::mt19937_64& rng, long lead, long width, bool unit_lead = false) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 6);
    std::vector<Rational> c(static_cast<std::size_t>(width));
    for (auto& x : c) {
        x = Rational(num(rng), den(rng));
        x.canonicalize();
    }
    if (unit_lead && c[0] == 0) c[0] = 1;
    return QSeries::from_dense(lead, lead + width, std::move(c));
}

}  // namespace

TEST_SUITE("qseries") {

TEST_CASE("addition examples") {
    CHECK((QSeries::monomial(1, 1, 5) + QSeries::monomial(-1, 1, 5)).is_zero());
    const auto s = poly(0, 4, {1, 2, 3});
    CHECK(s + QSeries(0, 4) == s);
    CHECK(poly(0, 3, {1, -24}) + poly(0, 3, {0, 24}) == QSeries::constant(1, 3));
}

TEST_CASE("addition narrows to the common window") {
    const auto a = poly(0, 10, {1, 1});
    const auto b = poly(-2, 5, {1});
    const auto s = a + b;
    CHECK(s.lead_order() == -2);
    CHECK(s.trunc_order() == 5);
    CHECK_THROWS_AS(s.coefficient(5), std::out_of_range);
}

TEST_CASE("multiplication examples") {
    const auto f = poly(1, 7, {1, 0, 0, -8});
    const auto L = QSeries::from_terms(-1, 5, {{-1, 1}, {2, Rational(-1, 4)}});
    const auto p = f * L;
    CHECK(p.trunc_order() == 6);
    CHECK(p.coefficient(0) == 1);
    CHECK(p.coefficient(3) == Rational(-33, 4));
    CHECK(p.coefficient(1) == 0);
    const auto s = poly(0, 6, {1, 2, 3, 4, 5, 6});
    CHECK(s * QSeries::constant(1, 6) == s);
    const auto g = poly(0, 4, {1, -1}) * poly(0, 4, {1, 1, 1, 1});
    CHECK(g == QSeries::constant(1, 4));
}

TEST_CASE("invert examples") {
    CHECK(invert(poly(0, 4, {1, -1})) == poly(0, 4, {1, 1, 1, 1}));
    const auto b = invert(poly(0, 9, {1, 0, 0, -8, 0, 0, 20}));
    CHECK(b.coefficient(3) == 8);
    CHECK(b.coefficient(6) == 44);
    CHECK(b.coefficient(1) == 0);
    CHECK_THROWS_WITH_AS(invert(poly(0, 4, {0, 1})), "non-invertible series", std::domain_error);
    const auto r = invert(QSeries::from_terms(-1, 6, {{-1, 2}, {1, 3}}));
    CHECK(r.lead_order() == 1);
    CHECK(r.coefficient(1) == Rational(1, 2));
}

TEST_CASE("d_operator and Eichler integral examples") {
    const auto s = QSeries::from_terms(-1, 5, {{-1, 1}, {2, 1}});
    CHECK(d_operator(s, 1) == QSeries::from_terms(-1, 5, {{-1, -1}, {2, 2}}));
    CHECK(d_operator(QSeries::constant(1, 5), 1).is_zero());
    CHECK(eichler_integral(QSeries::monomial(1, 3, 6), 4).coefficient(3) == Rational(1, 27));
    CHECK(eichler_integral(QSeries::constant(7, 6), 4).is_zero());
    const auto m = weakform_m9(10);
    const auto L = -eichler_integral(m, 4);
    CHECK(L.coefficient(-1) == 1);
    CHECK(L.coefficient(2) == Rational(-1, 4));
    CHECK(L.coefficient(5) == Rational(49, 125));
    CHECK(L.coefficient(8) == Rational(-3, 32));
    // D^3(-E_m) = m minus its constant term, which is 0.
    CHECK(d_operator(L, 3) == -m);
}

TEST_CASE("Serre derivative examples") {
    const auto e2 = eisenstein_E2(12);
    CHECK(serre_derivative(QSeries::constant(1, 12), 0, e2).is_zero());
    const auto th = serre_derivative(newform_f(12), 4, e2);
    CHECK(th.coefficient(1) == Rational(2, 3));
    CHECK(serre_derivative(QSeries::monomial(1, 1, 12), 12, e2).coefficient(1) == 0);
    CHECK_THROWS(serre_derivative(newform_f(20), 4, eisenstein_E2(5)));
}

TEST_CASE("reduce_mod examples") {
    const auto r = reduce_mod(QSeries::monomial(Rational(-33, 4), 3, 5), 3, 2);
    CHECK(r.coefficient(3) == 3);
    CHECK_THROWS_WITH_AS(reduce_mod(QSeries::monomial(Rational(1, 3), 1, 3), 3, 1),
                         doctest::Contains("exponent 1"), std::domain_error);
    CHECK(reduce_mod(QSeries::constant(5, 2), 3, 1).coefficient(0) == 2);
}

TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_series(rng, -1, 8);
        const auto b = random_series(rng, 0, 8);
        const auto c = random_series(rng, 1, 8);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("invert is a two-sided inverse on 200 random unit series") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_series(rng, trial % 3 - 1, 10, true);
        const auto b = invert(a);
        CHECK(a * b == QSeries::constant(1, 10));
        CHECK(b * a == QSeries::constant(1, 10));
    }
}

TEST_CASE("Bol round trip: D^(k-1) of the Eichler integral") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 * (1 + trial % 4);
        const auto a = random_series(rng, -2, 9);
        auto expected = a - QSeries::constant(a.coefficient(0), a.trunc_order());
        CHECK(d_operator(eichler_integral(a, k), static_cast<unsigned>(k - 1)) == expected);
    }
}

TEST_CASE("reduce_mod is a ring morphism") {
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> ca(8), cb(8);
        for (auto* c : {&ca, &cb}) {
            for (auto& x : *c) {
                long d = den(rng);
                while (d % 3 == 0) d = den(rng);
                x = Rational(num(rng), d);
                x.canonicalize();
            }
        }
        const auto a = QSeries::from_dense(-1, 7, ca);
        const auto b = QSeries::from_dense(0, 8, cb);
        CHECK(reduce_mod(a * b, 3, 4) == reduce_mod(a, 3, 4) * reduce_mod(b, 3, 4));
        CHECK(reduce_mod(a + b, 3, 4) == reduce_mod(a, 3, 4) + reduce_mod(b, 3, 4));
    }
}

TEST_CASE("residue inversion and powers agree with the exact path") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_series(rng, 0, 12, true);
        std::vector<Rational> c = a.dense();
        for (auto& x : c) {
            if (mpz_divisible_ui_p(x.get_den_mpz_t(), 3)) x = x.get_num();
        }
        c[0] = Rational(2, 5);
        a = QSeries::from_dense(0, 12, c);
        CHECK(invert(reduce_mod(a, 3, 5)) == reduce_mod(invert(a), 3, 5));
        CHECK(pow(reduce_mod(a, 3, 5), 3) == reduce_mod(pow(a, 3), 3, 5));
        CHECK(d_operator(reduce_mod(a, 3, 5), 2) == reduce_mod(d_operator(a, 2), 3, 5));
    }
}

TEST_CASE("n^(1-k) = n^((p-1)p^(t-1)+1-k) mod p^t for 3 !| n") {
    const int k = 4;
    for (unsigned t = 1; t <= 6; ++t) {
        const std::uint64_t mod = prime_power(3, t);
        const std::uint64_t phi = 2 * prime_power(3, t - 1);
        for (std::uint64_t n = 1; n < 1000; ++n) {
            if (n % 3 == 0) continue;
            const std::uint64_t lhs = invmod(powmod(n % mod, k - 1, mod), mod);
            // exponent phi + 1 - k may be negative at t = 1; shift by phi.
            const std::uint64_t e = phi + 1 >= static_cast<std::uint64_t>(k) ? phi + 1 - k : 2 * phi + 1 - k;
            CHECK(lhs == powmod(n % mod, e, mod));
        }
    }
}

TEST_CASE("serialization round trip") {
    const auto s = -eichler_integral(weakform_m9(12), 4);
    const auto j = to_json(s);
    CHECK(j["lead"] == -1);
    CHECK(j["coeffs"][1][1] == "-1/4");
    CHECK(qseries_from_json(j) == s);
    const auto r = reduce_mod(s, 3, 3);
    const auto jr = to_json(r);
    CHECK(jr["modulus"] == "3^3");
    CHECK(residue_series_from_json(jr) == r);
    CHECK(hex_float_parse(hex_float(1.0468)) == 1.0468);
}

TEST_CASE("truncated and shifted windows") {
    const auto s = poly(0, 5, {1, 2, 3, 4, 5});
    CHECK(s.shifted(-2).lead_order() == -2);
    CHECK(s.shifted(-2).coefficient(0) == 3);
    CHECK(s.truncated(3).trunc_order() == 3);
    CHECK(poly(0, 5, {0, 0, 3}).normalized().lead_order() == 2);
    CHECK(poly(0, 5, {0, 0, 3}).valuation() == 2);
}

}  // TEST_SUITE
