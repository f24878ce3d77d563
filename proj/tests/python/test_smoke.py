from fractions import Fraction

import pytest

import thinsieve as ts


def test_constants():
    assert abs(ts.delta0(2, ts.greaves_threshold()) - 0.983994) < 5e-6
    opt = ts.optimize_m(5 / 32, 4)
    assert opt["R"] == 18 and 17.5 < opt["m"] < 18
    assert abs(ts.alpha_min_for_R(5, 26) - 0.09981) < 1e-4
    assert [row["R"] for row in ts.theorem4_table()] == [4, 18, 26]
    assert ts.find_feasible_point(2, 5 / 16 + 1e-4) is None
    with pytest.raises(ValueError):
        ts.delta0(2, 0.0)


def test_forms_and_exact_values():
    assert ts.form_value("z", 1, 2) == 5
    x, y, z = ts.triple_from_row(1, 2)
    assert x * x + y * y == z * z and z == 5
    big = 10**30 + 7
    assert ts.form_value("z", big, 1) == big * big + 1
    assert ts.rho(5) == Fraction(9, 25)
    assert ts.s1(7, "x") == 0
    assert ts.s1(7, "x", mutant=True) != 0
    omega = ts.sample_omegas(3, 1)[0]
    for k, l in [(1, 0), (2, 3)]:
        v = ts.s4(11, "y", k, l, omega)
        assert isinstance(v, Fraction)
        assert v == ts.s4_direct(11, "y", k, l, omega) == ts.s4_closed_form(11, "y", k, l, omega)


def test_groups():
    ball = ts.enumerate_ball("modular", 1.5)
    assert len(ball) == 4
    assert len(ts.enumerate_ball("schottky", 200)) == len(ts.enumerate_ball("schottky", 200, walk="descent"))
    custom = ts.enumerate_ball([(2, 3, 1, 2), (3, 1, 5, 2)], 100)
    assert custom == ts.enumerate_ball("schottky", 100)
    est = ts.estimate_delta("modular", 30, 300, 6)
    assert 0.9 <= est["delta"] <= 1.05
    assert ts.certify_no_parabolic("schottky", 6)["passed"]
    with pytest.raises(ts.BudgetExceeded):
        ts.enumerate_ball("modular", 300, cap=100)


def test_congruences_and_census():
    assert ts.eta(35) == 48
    assert ts.coset_table(5)["index"] == 6
    assert ts.local_density("z", 13)["measured"] == Fraction(1, 7)
    assert ts.local_density("z", 7)["measured"] == 0
    f = ts.factorize(2**32 + 1)
    assert f["complete"] and f["primes"] == [641, 6700417]
    # beyond 64 bits only small factors are split off; the rest is flagged
    g = ts.factorize(2**64 + 1)
    assert not g["complete"] and g["cofactor"] == 2**64 + 1
    s = ts.census_summary("modular", 60, "z", 4)
    assert s["at_most"][0] > 0 and s["rows"] == len(ts.enumerate_ball("modular", 60))


def test_cli():
    code, out, _ = ts.cli("constants", "--format", "csv")
    assert code == 0 and "# command = constants" in out
    assert ts.cli("frobnicate")[0] == 4
