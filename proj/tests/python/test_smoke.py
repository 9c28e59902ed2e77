from fractions import Fraction

import pytest

import shiftconv as sc


def test_weakform_leading_terms():
    m = sc.weakform_m9(10)
    assert m.lead == -1
    assert [m[n] for n in (-1, 2, 5, 8)] == [1, 2, -49, 48]


def test_lf_is_minus_eichler_integral():
    lf = -sc.eichler_integral(sc.weakform_m9(10), 4)
    assert lf[2] == Fraction(-1, 4)
    assert lf[5] == Fraction(49, 125)
    assert lf[8] == Fraction(-3, 32)


def test_newform_and_product():
    f = sc.newform_f(20)
    assert [f[n] for n in (1, 4, 7, 10, 13, 16)] == [1, -8, 20, 0, -70, 64]
    p = sc.fLf(10)
    assert p[0] == 1 and p[3] == Fraction(-33, 4) and p[6] == Fraction(2799, 125)


def test_series_json_round_trip():
    s = sc.eta_quotient("1:3,9:-3", 12)
    assert sc.series_from_json(s.to_json()) == s


def test_bad_eta_spec():
    with pytest.raises(ValueError):
        sc.eta_quotient("1:1", 5)


def test_kloosterman():
    assert sc.kloosterman_sum(1, 1, 3) == pytest.approx(-1.0)
    assert sc.mod_inverse(4, 9) == 7
    assert abs(sc.kloosterman_sum(1, 3, 9)) < 1e-30
    assert sc.vanishing_scan(3, 1, 5, 5, 1e-20)["pass"]


def test_poincare_small_cmax():
    a1 = sc.classical_coeff(1, 4, 9, 1, c_max=9 * 256)
    assert abs(a1["value"] - 1.0468) < 1.5e-3
    q2 = sc.maass_hol_coeff(1, 4, 9, 2, c_max=9 * 256)
    assert abs(q2["value"] + 0.25) < 1e-3 + q2["tail_bound"]


def test_padic():
    assert sc.vp(Fraction(-33, 4), 3) == 1
    assert sc.vp(0, 3) == float("inf")
    assert sc.unit_congruence_check(200)["pass"]
    assert all(r["pass"] for r in sc.congruence_families_check(200))
    assert sc.d_power_congruence_check(3, 2, 100)["pass"]
    rows = sc.density_table([1, 2], [300], 8)
    assert rows[0] == (1, 300, 300)


def test_lvalues():
    beta = 1.046839
    gamma, delta = sc.fit_gamma_delta(beta, [(3, -10.7466), (6, 12.7931)])
    assert gamma + delta == pytest.approx(-1 / beta)
    d9, = sc.dhat(beta, gamma, delta, [9])
    assert d9 == pytest.approx(6.4671, abs=1e-2)
    with pytest.raises(RuntimeError):
        sc.fit_gamma_delta(beta, [(3, -10.7466), (6, 12.7931)], constrained=False)
    value, band = sc.oracle_dhat(3, 20000)
    assert abs(value + 10.7466) < 0.5
