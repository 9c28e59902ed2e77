#include "shiftconv/modularforms.hpp"
#include "shiftconv/padic.hpp"
#include "shiftconv/shiftedconv.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace shiftconv;

TEST_SUITE("padic") {

TEST_CASE("vp") {
    CHECK(vp(Rational(-33, 4), 3) == 1);
    CHECK(vp(0, 3) == kInfiniteValuation);
    CHECK(vp(Rational(9, 2), 3) == 2);
    CHECK(vp(Rational(2, 27), 3) == -3);
    CHECK(vp(Rational(2799, 125), 3) == 2);
    CHECK(vp(Rational(-32919, 4000), 3) == 1);
    CHECK(vp(Rational(2799, 125), 5) == -3);
}

TEST_CASE("unit congruence") {
    const auto r = unit_congruence_check(10);
    CHECK(r.pass);
    CHECK(r.failures.empty());
    CHECK(r.checked == 10);
    CHECK(unit_congruence_check(600).pass);
    // A series that is not 1 mod 3 is reported with its exponents.
    const auto bad = unit_congruence_check(QSeries::from_terms(0, 5, {{0, 1}, {2, Rational(1, 2)}}));
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.failures.size() == 1);
    CHECK(bad.failures[0].exponent == 2);
    CHECK(bad.failures[0].found == 0);
}

TEST_CASE("congruence families") {
    const auto fLf = exact_pieces(600).fLf;
    const auto reports = congruence_families_check(fLf);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].pass);
    CHECK(reports[1].pass);
    CHECK(vp(fLf.coefficient(6), 3) == 2);
    CHECK(vp(fLf.coefficient(30), 3) >= 3);
    CHECK(vp(fLf.coefficient(9), 3) == 1);
    CHECK_THROWS_AS(congruence_families_check(20), std::invalid_argument);
}

TEST_CASE("valuations agree with an oracle built from independent expansions") {
    const long W = 300;
    const auto f = oracle::newform(W + 2);
    const auto m = oracle::weakform(W + 1);  // m(n) at index n + 1
    std::vector<mpq_class> lf(static_cast<std::size_t>(W + 1));  // L_f(n) at index n + 1
    for (long n = -1; n < W - 1; ++n) {
        if (n == 0) continue;
        lf[static_cast<std::size_t>(n + 1)] = -mpq_class(m[static_cast<std::size_t>(n + 1)]) / (mpz_class(n) * n * n);
        lf[static_cast<std::size_t>(n + 1)].canonicalize();
    }
    const auto fLf = exact_pieces(W).fLf;
    for (long h = 0; h < W; ++h) {
        mpq_class s = 0;
        for (long j = 1; j <= h + 1; ++j) s += f[static_cast<std::size_t>(j)] * lf[static_cast<std::size_t>(h - j + 1)];
        REQUIRE(fLf.coefficient(h) == s);
    }
}

TEST_CASE("D-power congruences") {
    CHECK(minimal_r(3, 1, 4) == 2);
    CHECK(minimal_r(3, 2, 4) == 1);
    CHECK(d_power_exponent(3, 1, 4, 2) == 1);
    CHECK(d_power_exponent(3, 2, 4, 1) == 3);
    const auto r1 = d_power_congruence_check(3, 1, 500);
    CHECK(r1.pass);
    CHECK(r1.checked > 0);
    CHECK(d_power_congruence_check(3, 2, 500).pass);
    // Two smallest admissible r at each t <= 4.
    for (unsigned t = 1; t <= 4; ++t) {
        const long r0 = minimal_r(3, t, 4);
        for (long r = r0; r <= r0 + 1; ++r) {
            INFO("t = " << t << ", r = " << r);
            CHECK(d_power_congruence_check(3, t, 300, r).pass);
        }
    }
    // Coefficient-level spot checks.
    const auto m = weakform_m9(10);
    const auto L = -eichler_integral(m, 4);
    CHECK(reduce_mod(L, 3, 1).coefficient(2) == 2);
    CHECK(d_operator(-m, 1).coefficient(2) == -4);
    CHECK(d_operator(-m, 3).coefficient(2) == -16);
    CHECK(reduce_mod(d_operator(-m, 3), 3, 2).coefficient(2) == reduce_mod(L, 3, 2).coefficient(2));
    CHECK_THROWS_AS(d_power_congruence_check(3, 1, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(d_power_congruence(QSeries::monomial(1, 3, 10), QSeries::monomial(1, 3, 10), 3, 1, 4, 2),
                    std::invalid_argument);
    // A wrong exponent is caught.
    const auto wrong = d_power_congruence(-m, d_operator(-m, 2), 3, 2, 4, 1);
    CHECK_FALSE(wrong.pass);
}

TEST_CASE("general alpha helper reduces to M^+ at alpha = 0") {
    const auto M = QSeries::from_terms(-1, 10, {{-1, 1}, {2, 3}});
    const auto E = eichler_integral(newform_f(10), 4);
    CHECK(normalized_mock(M, E, 0).agrees_with(M));
    CHECK(normalized_mock(M, E, Rational(1, 2)).coefficient(1) == Rational(-1, 2));
}

TEST_CASE("density counts agree with exact valuations on X <= 500") {
    const auto fLf = exact_pieces(501).fLf;
    const auto res = fLf_mod(501, 8);
    for (long h = 0; h < 501; ++h) {
        const long v = vp(fLf.coefficient(h), 3);
        const unsigned capped = v >= 8 ? 8u : static_cast<unsigned>(v);
        REQUIRE(res.valuation_at(h) == capped);
    }
    const auto rows = density_table(res, {1, 2, 3, 4, 5}, {100, 250, 500});
    for (const auto& r : rows) {
        long count = 0;
        for (long h = 1; h <= r.X; ++h) count += vp(fLf.coefficient(h), 3) >= static_cast<long>(r.t);
        CHECK(r.count == count);
    }
}

TEST_CASE("density table properties") {
    const std::vector<unsigned> ts = {1, 2, 3, 4, 5};
    const auto rows = density_table(ts, {300, 600, 900}, 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].count <= rows[i].X);
        if (rows[i].t == 1) CHECK(rows[i].count == rows[i].X);
        if (i % ts.size() != 0) CHECK(rows[i].count <= rows[i - 1].count);
    }
    CHECK_THROWS_WITH_AS(density_table({2, 8}, {100}, 8), "cannot distinguish valuation boundary",
                         std::invalid_argument);
    const auto excl = density_table(ts, {300}, 8, DensityRange::ExclusiveUpper);
    const auto incl = density_table(ts, {300}, 8, DensityRange::Inclusive);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(incl[i].count - excl[i].count <= 1);
}

TEST_CASE("permille rounding and csv layouts") {
    CHECK(DensityRow{2, 6000, 5505}.permille() == 917);  // tie goes down
    CHECK(DensityRow{2, 6000, 5506}.permille() == 918);
    CHECK(DensityRow{2, 3000, 2735}.permille() == 912);
    CHECK(DensityRow{1, 3000, 3000}.permille() == 1000);
    const std::vector<DensityRow> rows = {{1, 3000, 3000}, {2, 3000, 2735}, {1, 6000, 6000}, {2, 6000, 5505}};
    CHECK(density_csv(rows) == "X,pi_3,pi_9\n3000,1.000,0.912\n6000,1.000,0.917\n");
    CHECK(density_rows_csv(rows).rfind("t,X,count,proportion\n1,3000,3000,1\n2,3000,2735,547/600\n", 0) == 0);
}

TEST_CASE("congruence family scan") {
    const auto fLf = exact_pieces(400).fLf;
    const auto fams = scan_congruence_families(fLf, 2, 36);
    bool has_9n6 = false;
    for (const auto& f : fams) {
        has_9n6 = has_9n6 || (f.modulus == 9 && f.residue == 6);
        for (long h = f.residue == 0 ? f.modulus : f.residue; h < 400; h += f.modulus) {
            CHECK(vp(fLf.coefficient(h), 3) >= 2);
        }
    }
    CHECK(has_9n6);
    const auto fams3 = scan_congruence_families(fLf, 3, 36);
    bool has_36n30 = false;
    for (const auto& f : fams3) has_36n30 = has_36n30 || (36 % f.modulus == 0 && 30 % f.modulus == f.residue);
    CHECK(has_36n30);
}

TEST_CASE("report json") {
    const auto j = to_json(unit_congruence_check(20));
    CHECK(j["statement"] == "unit_congruence");
    CHECK(j["pass"] == true);
    CHECK(j["failures"].empty());
}

}  // TEST_SUITE
