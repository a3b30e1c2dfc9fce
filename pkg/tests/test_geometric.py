"""Down-or-stay chains: closed forms vs the summation and derivative routes.

A chain at state i steps to i-1 with probability a(i) and stays otherwise, so
its duration from r is a sum of independent geometric variables.  Mean and
variance therefore have two independent derivations (term sums and the PGF
derivative chain) and the tests insist they agree exactly.
"""

import random
from fractions import Fraction

import pytest

from ballcell.approx import approx_mean, approx_variance
from ballcell.geometric import (
    StepSequence,
    alpha_closed_forms,
    alpha_limits,
    alpha_moments,
    chain_mean,
    chain_pgf,
    chain_variance,
)
from ballcell.polys import Poly
from ballcell.ratfuncs import RatFunc

X = Poly.var()

ALPHAS = (Fraction(1, 2), Fraction(1, 3), Fraction(3, 4))


def rand_table(rng: random.Random, r: int) -> list[Fraction]:
    return [Fraction(rng.randint(1, 12), 12) for _ in range(r)]


def test_step_sequence_kinds():
    t = StepSequence.from_table([Fraction(1, 2), Fraction(1, 3)])
    assert t.kind == "table"
    assert t.step(1) == Fraction(1, 2)
    assert t.step(2) == Fraction(1, 3)
    p = StepSequence.power(Fraction(1, 2))
    assert p.kind == "power"
    assert p.step(3) == Fraction(1, 8)
    b = StepSequence.ball_cell(3)
    assert b.kind == "ball-cell"
    assert b.step(1) == 1
    assert b.step(2) == Fraction(4, 3)


def test_step_sequence_validation():
    t = StepSequence.from_table([Fraction(1, 2)])
    with pytest.raises(ValueError):
        t.step(2)
    with pytest.raises(ValueError):
        t.step(0)
    with pytest.raises(ValueError):
        StepSequence.power(Fraction(1))
    with pytest.raises(ValueError):
        StepSequence.power(Fraction(0))
    with pytest.raises(ValueError):
        StepSequence.power(Fraction(5, 4))
    with pytest.raises(ValueError):
        StepSequence.ball_cell(1)


def test_single_state_chain_is_geometric():
    f = chain_pgf(1, StepSequence.power(Fraction(1, 2)))
    assert f == RatFunc(X, 2 - X)


def test_empty_chain():
    assert chain_pgf(0, StepSequence.power(Fraction(1, 2))) == 1
    assert chain_mean(0, StepSequence.power(Fraction(1, 2))) == 0
    assert chain_variance(0, StepSequence.power(Fraction(1, 2))) == 0


def test_two_state_half_table_pgf():
    seq = StepSequence.from_table([Fraction(1, 2), Fraction(1, 2)])
    assert chain_pgf(2, seq) == RatFunc(X**2, (2 - X) ** 2)


def test_chain_pgf_rejects_improper_step():
    # the ball-cell sequence exceeds 1 from state 2 on, fine for the sums
    # but meaningless as a per-round probability
    with pytest.raises(ValueError):
        chain_pgf(2, StepSequence.ball_cell(3))


def test_sum_route_matches_term_formulas():
    rng = random.Random(3301)
    for _ in range(20):
        r = rng.randint(1, 12)
        table = rand_table(rng, r)
        seq = StepSequence.from_table(table)
        assert chain_mean(r, seq) == sum(1 / a for a in table)
        assert chain_variance(r, seq) == sum((1 - a) / a**2 for a in table)


def test_sum_route_matches_derivative_route():
    rng = random.Random(3302)
    from ballcell.pgf import moments_of

    for _ in range(12):
        r = rng.randint(1, 10)
        seq = StepSequence.from_table(rand_table(rng, r))
        rep = moments_of(chain_pgf(r, seq), 2)
        assert rep.mean == chain_mean(r, seq)
        assert rep.variance == chain_variance(r, seq)


def test_alpha_closed_forms_small_cases():
    assert alpha_closed_forms(Fraction(1, 2), 0) == (0, 0)
    assert alpha_closed_forms(Fraction(1, 2), 1) == (2, 2)
    assert alpha_closed_forms(Fraction(1, 2), 3) == (14, 70)


def test_alpha_closed_forms_match_both_routes():
    for alpha in ALPHAS:
        seq = StepSequence.power(alpha)
        for r in range(0, 26):
            mean, variance = alpha_closed_forms(alpha, r)
            assert mean == chain_mean(r, seq)
            assert variance == chain_variance(r, seq)
    # derivative route on a modest prefix
    for alpha in ALPHAS:
        for r in range(1, 11):
            rep = alpha_moments(alpha, r, 2)
            assert (rep.mean, rep.variance) == alpha_closed_forms(alpha, r)


def test_alpha_validation():
    with pytest.raises(ValueError):
        alpha_closed_forms(Fraction(0), 2)
    with pytest.raises(ValueError):
        alpha_closed_forms(Fraction(1), 2)
    with pytest.raises(ValueError):
        alpha_closed_forms(Fraction(1, 2), -1)
    with pytest.raises(ValueError):
        alpha_limits(Fraction(7, 5))


def test_limits_at_one_half():
    lim = alpha_limits(Fraction(1, 2))
    assert lim.cv_squared == Fraction(1, 3)
    assert lim.skewness_squared == Fraction(108, 49)
    assert lim.kurtosis == Fraction(33, 5)
    assert lim.m5_scaled_squared == Fraction(34111152, 47089)
    assert lim.m6_scaled == Fraction(6981, 49)


def test_limit_decimals_square_back():
    for alpha in (Fraction(1, 2), Fraction(1, 3)):
        lim = alpha_limits(alpha)
        assert abs(Fraction(str(lim.cv)) ** 2 - lim.cv_squared) < Fraction(1, 10**45)
        assert abs(Fraction(str(lim.skewness)) ** 2 - lim.skewness_squared) < Fraction(1, 10**40)
        assert Fraction(str(lim.kurtosis_decimal)) - lim.kurtosis < Fraction(1, 10**40)
        assert abs(Fraction(str(lim.m5_scaled)) ** 2 - lim.m5_scaled_squared) < Fraction(1, 10**35)


def test_moments_converge_to_limits():
    for alpha in (Fraction(1, 2), Fraction(1, 3)):
        rep = alpha_moments(alpha, 40, 6)
        lim = alpha_limits(alpha)
        pairs = [
            (rep.variance / rep.mean**2, lim.cv_squared),
            (rep.scaled[0].squared, lim.skewness_squared),
            (rep.scaled[1].exact, lim.kurtosis),
            (rep.scaled[2].squared, lim.m5_scaled_squared),
            (rep.scaled[3].exact, lim.m6_scaled),
        ]
        for got, want in pairs:
            assert abs(got - want) / abs(want) < Fraction(1, 10**6)


def test_ball_cell_bridge_reproduces_partial_sums():
    for n in (3, 4, 5):
        seq = StepSequence.ball_cell(n)
        for r in range(0, 41):
            assert chain_mean(r, seq) == approx_mean(n, r)
            assert chain_variance(r, seq) == approx_variance(n, r)
