from fractions import Fraction

import pytest

import lolab


def test_enumerate_small():
    assert lolab.enumerate_sums([[1], [1]]) == {(-2,): 1, (0,): 2, (2,): 1}
    assert lolab.enumerate_sums([], dim=1) == {(0,): 1}


def test_counterexample_family():
    vectors = [[1, 0], [1, 0], [1, 0], [0, 1]]
    p, ball = lolab.max_ball_probability(vectors, "3/2")
    assert p == Fraction(12, 16)
    assert ball["center"] == (0, 0)
    assert lolab.erdos_bound(4, Fraction(3, 2)) == Fraction(10, 16)
    assert lolab.classify_regime("3/2") == "counterexample"


def test_prob_in_ball_and_decimals():
    assert lolab.prob_in_ball([[1], [1]], [1], 1) == Fraction(3, 4)
    assert lolab.prob_in_ball([["0.5", "1"]], ["0.5", "1"], "0.1") == Fraction(1, 2)


def test_combinatorics():
    assert lolab.binom_sum(4, 2) == 10
    assert lolab.binom_sum(200, 1) == 90548514656103281165404177077484163874504589675413336841320
    assert lolab.stirling_approx(1e4, 1) == pytest.approx(0.0079788, rel=1e-4)


def test_charfun_and_geometry():
    value, converged = lolab.q_integral([], dim=2)
    assert converged and value == pytest.approx(3.14159, rel=0.01)
    assert lolab.cos_dominated(0.25)[2]
    s = lolab.min_spread([[2, 0]] * 3 + [[0, 2]] * 2)
    assert s["empirical_min"] == 2 and s["certified_lower"] <= 2


def test_search_and_mc():
    r = lolab.local_search_max(4, 2, "3/2", restarts=2, steps=10)
    assert r["violation"] and r["best_prob"] >= Fraction(12, 16)
    e = lolab.mc_probability(1, [[1], [1]], [0], "1/2", samples=20000, seed=3)
    assert e["lower"] <= 0.5 <= e["upper"]
    assert lolab.hoeffding_radius(20000) == pytest.approx(0.009603, rel=1e-3)


def test_errors():
    with pytest.raises(ValueError):
        lolab.max_ball_probability([["1/2"]], 1)
    with pytest.raises(lolab.CapExceeded):
        lolab.enumerate_sums([[1]] * 9, max_n=8)
