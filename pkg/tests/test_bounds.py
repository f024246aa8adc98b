import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdlbn import (
    InputError,
    Penalty,
    Problem,
    asymptotic_reference,
    f_inverse,
    ideal_case_n,
    lemma37_e,
    sample_complexity,
    sanov_bound,
    skew_bound,
    thm39_eval,
)
from mdlbn.bounds import Z, log2_sanov_bound, penalty_weight

BIC = Penalty.half_log()
PROB = Problem(n_vars=2, card_u=4, m=0.2, g=2, penalty=BIC)


def test_z():
    assert Z == pytest.approx(1.177410, abs=1e-6)


def test_sanov_examples():
    assert sanov_bound(100, 4, 0.5) == pytest.approx(101**4 * 2.0**-50, rel=1e-12)
    assert sanov_bound(100, 4, 0.5) == pytest.approx(9.24e-8, rel=1e-3)
    assert sanov_bound(10, 4, 0.0) == pytest.approx(11**4, rel=1e-12)


def test_sanov_eventually_decreasing():
    vals = [sanov_bound(n, 4, 0.3) for n in range(200, 2000, 50)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_log_space_no_overflow():
    assert log2_sanov_bound(10**12, 2**20, 1e-3) == pytest.approx(
        2**20 * math.log2(10**12 + 1) - 1e9)
    assert sanov_bound(10**12, 2**20, 0.0) == math.inf
    assert sanov_bound(10**12, 2**20, 1.0) == 0.0


def test_skew_examples():
    rate = (0.75 * 0.25 / 4) ** 2
    assert rate == pytest.approx(2.197e-3, rel=1e-3)
    # frozen from direct log-space evaluation
    assert skew_bound(10**5, 4, 0.25) == pytest.approx(7.1735e-47, rel=1e-4)
    assert skew_bound(10**4, 4, 0.25) > 1
    for m in (1e-6, 1 - 1e-6):
        assert skew_bound(10**6, 4, m) > 1


@pytest.mark.parametrize("penalty, expected", [
    (Penalty.constant(1), 21), (BIC, 59), (Penalty.polynomial(0.5), 401)])
def test_ideal_case(penalty, expected):
    n = ideal_case_n(2, 0.1, penalty)
    assert n == expected
    # exactness by direct substitution
    assert n / penalty_weight(penalty, n) > 20
    assert not (n - 1) / penalty_weight(penalty, n - 1) > 20


@given(g=st.integers(1, 50), eps=st.floats(1e-3, 2.0),
       kind=st.sampled_from(["c", "bic", "poly"]))
@settings(max_examples=60, deadline=None)
def test_ideal_case_exact(g, eps, kind):
    p = {"c": Penalty.constant(1.5), "bic": BIC, "poly": Penalty.polynomial(0.3)}[kind]
    n = ideal_case_n(g, eps, p)
    ratio = (lambda k: math.inf if penalty_weight(p, k) == 0 else k / penalty_weight(p, k))
    assert ratio(n) > g / eps
    if n > 1:
        assert not ratio(n - 1) > g / eps


def test_f_inverse():
    assert f_inverse(2) == pytest.approx(4.0, rel=1e-8)
    x = f_inverse(10)
    assert x == pytest.approx(58.77, abs=0.01)
    assert x / math.log2(x) == pytest.approx(10, rel=1e-8)
    for y in (5, 10, 100):
        assert f_inverse(y) <= 2 * y * math.log2(y)
    with pytest.raises(InputError):
        f_inverse(1.9)


@given(y=st.floats(2, 1e8))
@settings(max_examples=100, deadline=None)
def test_f_inverse_round_trip(y):
    x = f_inverse(y)
    assert abs(x / math.log2(x) - y) <= 1e-6 * y


def test_lemma37_examples():
    assert lemma37_e(0, 0, 3.0, 0.1) == 0.0
    assert lemma37_e(1e-4, 1e-6, 4, 0.2) == pytest.approx(5.0619e-4, rel=1e-4)
    assert lemma37_e(1e-3, 1e-4, 4, 0.2) is None


def test_thm39_example():
    rep = thm39_eval(1e-4, 1e-6, 10**6, PROB)
    assert rep.valid and rep.violated_conditions == ()
    # frozen from direct evaluation with c = 2 * 2 * log2(5)
    assert rep.epsilon == pytest.approx(1.05416e-3, rel=1e-5)
    assert rep.epsilon == lemma37_e(1e-4, 1e-6, 4 * math.log2(5), 0.2)
    assert rep.delta == sanov_bound(10**6, 4, 1e-6) + skew_bound(10**6, 4, 0.2)


def test_thm39_invalid_skewness():
    rep = thm39_eval(1e-2, 1e-2, 10**6, PROB)
    assert not rep.valid
    assert "skewness" in rep.violated_conditions
    assert rep.epsilon is None


def test_thm39_invalid_sample_size():
    rep = thm39_eval(1e-4, 1e-6, 100, PROB)
    assert rep.violated_conditions == ("sample_size",)


def test_problem_validation():
    with pytest.raises(InputError):
        Problem(2, 4, 0.3, 2, BIC)
    with pytest.raises(InputError):
        Problem(3, 4, 0.1, 2, BIC)


def test_sample_complexity_example():
    res = sample_complexity(0.1, 0.1, PROB)
    # frozen from the grid-search oracle (64 x 64 grid)
    assert res.n_samples == 21719247
    rep = thm39_eval(res.a, res.b, res.n_samples, PROB)
    assert rep.valid and rep.epsilon <= 0.1 and rep.delta <= 0.1
    # one sample fewer fails at the chosen grid point
    worse = thm39_eval(res.a, res.b, res.n_samples - 1, PROB)
    assert not (worse.valid and worse.delta <= 0.1)


def test_sample_complexity_is_grid_minimal():
    # brute-force check on a coarse grid: no grid point succeeds below the answer
    grid = 8
    res = sample_complexity(0.1, 0.1, PROB, grid=grid)
    n = res.n_samples - 1
    for a in np.geomspace(1e-5, 0.1, grid):
        for b in np.geomspace(1e-12, 1.0, grid):
            rep = thm39_eval(float(a), float(b), n, PROB)
            assert not (rep.valid and rep.epsilon <= 0.1 and rep.delta <= 0.1)


def test_sample_complexity_monotone():
    base = sample_complexity(0.1, 0.1, PROB).n_samples
    assert sample_complexity(0.2, 0.1, PROB).n_samples <= base
    assert sample_complexity(0.1, 0.3, PROB).n_samples <= base
    assert sample_complexity(0.05, 0.1, PROB).n_samples >= base


def test_sample_complexity_infeasible_for_tiny_m():
    assert sample_complexity(0.1, 0.1, Problem(2, 4, 1e-3, 2, BIC)) is None


def test_asymptotic_reference_scaling():
    r1 = asymptotic_reference(0.1, 0.1, PROB)
    assert asymptotic_reference(0.05, 0.1, PROB) / r1 == pytest.approx(2 ** (4 / 3))
    p2 = Problem(2, 4, 0.1, 2, BIC)
    assert asymptotic_reference(0.1, 0.1, p2) / r1 == pytest.approx((0.2 / 0.1) ** 2)
    small = Problem(2, 4, 0.2, 2, Penalty.polynomial(1e-9))
    # as alpha -> 0 the eps and m exponents approach the half_log ones
    rs = asymptotic_reference(0.05, 0.1, small) / asymptotic_reference(0.1, 0.1, small)
    assert rs == pytest.approx(2 ** (4 / 3), rel=1e-6)
    with pytest.raises(InputError):
        asymptotic_reference(0.1, 0.1, Problem(2, 4, 0.2, 2, Penalty.constant(1)))
