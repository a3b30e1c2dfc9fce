"""Canonical rational functions, their expansion, rendering, and wire format.

Canonical form is the load-bearing invariant here: equality is structural, so
every constructor path must land on the same (num, den) pair.
"""

import json
import random
from fractions import Fraction

import pytest

from ballcell.polys import Poly, Poly2
from ballcell.ratfuncs import (
    RatFunc,
    RatFunc2,
    poly2_from_json,
    poly2_to_json,
    poly_from_json,
    poly_to_json,
    polynomial_text,
    ratfunc2_from_json,
    ratfunc_from_json,
    ratfunc_latex,
    ratfunc_text,
    ratfunc_to_json,
)

X = Poly.var()
N2 = Poly2.var_n()
X2 = Poly2.var_x()


def rand_ratfunc(rng: random.Random) -> RatFunc:
    num = Poly({e: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for e in range(rng.randint(0, 3) + 1)})
    while True:
        den = Poly({e: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for e in range(rng.randint(0, 3) + 1)})
        if not den.is_zero():
            return RatFunc(num, den)


def test_reduction_to_lowest_terms():
    f = RatFunc(2 * X, 4 - 2 * X)
    assert f.num == X
    assert f.den == 2 - X
    # common polynomial factor cancels
    assert RatFunc(X * (X - 1), (X - 1) * (X + 2)) == RatFunc(X, X + 2)


def test_denominator_sign_anchor():
    # head term of the denominator (lowest power of x) is forced positive
    f = RatFunc(X, X - 2)
    assert f.den == 2 - X
    assert f.num == -X
    assert ratfunc_text(f) == "-x/(2 - x)"


def test_rational_coefficients_cleared():
    # joint rescaling preserves the quotient: (x/3) / ((2-x)/5) = 5x/(6-3x)
    f = RatFunc(X * Fraction(1, 3), Poly({0: Fraction(2, 5), 1: Fraction(-1, 5)}))
    assert f.num == 5 * X
    assert f.den == 6 - 3 * X


def test_zero_and_constants():
    z = RatFunc(0)
    assert z.is_zero()
    assert z == 0
    assert RatFunc.from_fraction(Fraction(3, 4)) == Fraction(3, 4)
    assert RatFunc(Poly.const(6), Poly.const(4)) == Fraction(3, 2)
    with pytest.raises(ZeroDivisionError):
        RatFunc(X, Poly.zero())


def test_field_identities_random():
    rng = random.Random(2201)
    for _ in range(50):
        f = rand_ratfunc(rng)
        g = rand_ratfunc(rng)
        assert f + g - g == f
        assert f - f == 0
        if not g.is_zero():
            assert f * g / g == f
        assert f * g == g * f
        assert (f + g) * 2 == 2 * f + g + g


def test_scalar_mixing():
    f = RatFunc(X, 2 - X)
    assert 1 - f == RatFunc(2 - 2 * X, 2 - X)
    assert (f + 1) - 1 == f
    assert f / 2 == RatFunc(X, 4 - 2 * X)
    assert 2 / (1 / f + 1) == RatFunc(2 * X, 2)  # 2f/(1+f) with f = x/(2-x)
    with pytest.raises(ZeroDivisionError):
        f / RatFunc(0)


def test_pow():
    f = RatFunc(X, 2 - X)
    assert f**0 == 1
    assert f**3 == f * f * f
    with pytest.raises(ValueError):
        f ** (-2)


def test_eval_and_poles():
    f = RatFunc(X, 2 - X)
    assert f.eval(Fraction(1)) == 1
    assert f.eval(Fraction(1, 2)) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        f.eval(Fraction(2))


def test_derivative_quotient_rule():
    f = RatFunc(X, 2 - X)
    assert f.derivative() == RatFunc(Poly.const(2), (2 - X) ** 2)
    rng = random.Random(2202)
    for _ in range(25):
        f = rand_ratfunc(rng)
        g = rand_ratfunc(rng)
        assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_series_geometric():
    assert RatFunc(1, 1 - X).series(5) == [1, 1, 1, 1, 1, 1]
    # x/(2-x) expands to sum_k x^k / 2^k starting at k = 1
    got = RatFunc(X, 2 - X).series(6)
    assert got == [Fraction(0)] + [Fraction(1, 2**k) for k in range(1, 7)]
    assert RatFunc(3 * X**2 + 1).series(3) == [1, 0, 3, 0]


def test_series_validation():
    with pytest.raises(ZeroDivisionError):
        RatFunc(1, X).series(3)
    with pytest.raises(ValueError):
        RatFunc(1, 1 - X).series(-1)


def test_series_solves_the_quotient():
    # den * (partial series) - num must vanish through degree kmax
    rng = random.Random(2203)
    for _ in range(30):
        f = rand_ratfunc(rng)
        if f.den.coeff(0) == 0:
            continue
        kmax = rng.randint(0, 8)
        coeffs = f.series(kmax)
        residue = f.den * Poly(dict(enumerate(coeffs))) - f.num
        for e, _ in residue.items():
            assert e > kmax


def test_from_coprime_matches_checking_constructor():
    rng = random.Random(2204)
    for _ in range(40):
        f = rand_ratfunc(rng)
        if f.is_zero():
            continue
        # f.num, f.den are coprime by construction; a rational rescaling of
        # the pair must normalize back to the same fields
        s = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        g = RatFunc.from_coprime(f.num * s, f.den * s)
        assert g.num == f.num and g.den == f.den
        h = RatFunc.from_coprime(-f.num, -f.den)
        assert h == f
    assert RatFunc.from_coprime(Poly.zero(), 1 - X) == 0
    with pytest.raises(ZeroDivisionError):
        RatFunc.from_coprime(X, Poly.zero())


def test_ratfunc2_reduction():
    f = RatFunc2((N2 - 1) * (N2 - X2), N2 * (N2 - X2))
    assert f == RatFunc2(N2 - 1, N2)
    g = RatFunc2(X2 * (N2 - 1), N2 - X2)
    assert g.num == X2 * N2 - X2
    assert g.den == N2 - X2
    with pytest.raises(ZeroDivisionError):
        RatFunc2(N2, Poly2.zero())


def test_ratfunc2_sign_anchor_on_head_term():
    f = RatFunc2(X2, X2 - N2)
    assert f.den == N2 - X2
    assert f.num == -X2


def test_ratfunc2_arithmetic():
    f = RatFunc2(X2 * (N2 - 1), N2 - X2)
    one = RatFunc2.from_fraction(Fraction(1))
    assert f / f == one
    assert f - f == 0
    assert (f + 1) - 1 == f
    assert f**2 == f * f


def test_ratfunc2_subs_n():
    f = RatFunc2(X2 * (N2 - 1), N2 - X2)
    assert f.subs_n(Fraction(2)) == RatFunc(X, 2 - X)
    assert f.subs_n(Fraction(3)) == RatFunc(2 * X, 3 - X)
    with pytest.raises(ZeroDivisionError):
        RatFunc2(Poly2.const(1), N2 - 2).subs_n(Fraction(2))


def test_ratfunc2_eval():
    f = RatFunc2(X2 * (N2 - 1), N2 - X2)
    assert f.eval(Fraction(2), Fraction(1)) == 1
    with pytest.raises(ZeroDivisionError):
        f.eval(Fraction(2), Fraction(2))


def test_ratfunc2_series_in_x():
    # x(n-1)/(n-x): coefficient of x^k is (n-1)/n^k for k >= 1
    f = RatFunc2(X2 * (N2 - 1), N2 - X2)
    out = f.series(4)
    assert out[0] == 0
    for k in range(1, 5):
        assert out[k] == RatFunc2(N2 - 1, N2**k)
    with pytest.raises(ZeroDivisionError):
        RatFunc2(Poly2.const(1), X2).series(2)
    with pytest.raises(ValueError):
        f.series(-1)


def test_ratfunc2_series_consistent_with_substitution():
    rng = random.Random(2205)
    f = RatFunc2(X2 * (N2 - 1) + N2, N2**2 - X2 * (N2 + 2))
    out = f.series(6)
    for _ in range(10):
        n0 = Fraction(rng.randint(2, 9))
        uni = f.subs_n(n0).series(6)
        for k in range(7):
            assert out[k].eval(n0, Fraction(0)) == uni[k]


def test_polynomial_text_ordering():
    assert polynomial_text(2 - X) == "2 - x"
    assert polynomial_text(Poly({0: 27, 1: -12, 2: 1})) == "27 - 12x + x^2"
    assert polynomial_text(Poly.zero()) == "0"
    assert polynomial_text(-X) == "-x"
    assert polynomial_text(Poly({1: Fraction(1, 2)})) == "(1/2)x"
    # bivariate terms print n-degree descending, then x-degree ascending
    assert polynomial_text(N2 - X2) == "n - x"
    assert polynomial_text(N2**2 + 2 * N2 * X2 - 3 * X2) == "n^2 + 2nx - 3x"


def test_polynomial_text_latex():
    assert polynomial_text(Poly({1: Fraction(1, 2)}), latex=True) == r"\frac{1}{2}x"
    assert polynomial_text(N2**2 - X2, latex=True) == "n^{2} - x"


def test_ratfunc_text():
    assert ratfunc_text(RatFunc(X, 2 - X)) == "x/(2 - x)"
    assert ratfunc_text(RatFunc(X)) == "x"
    assert ratfunc_text(RatFunc2(N2, N2 - 1)) == "n/(n - 1)"
    assert ratfunc_text(RatFunc(X + 1, 2 - X)) == "(1 + x)/(2 - x)"
    assert ratfunc_text(RatFunc(X, Poly({1: 2}))) == "1/2"
    assert ratfunc_text(RatFunc.from_fraction(Fraction(3, 4))) == "3/4"


def test_ratfunc_latex():
    assert ratfunc_latex(RatFunc(X, 2 - X)) == r"\frac{x}{2 - x}"
    assert ratfunc_latex(RatFunc(X)) == "x"
    factored = ratfunc_latex(
        RatFunc(X, (2 - X) * (3 - X)), den_factors=[2 - X, 3 - X]
    )
    assert factored == r"\frac{x}{\left(2 - x\right)\left(3 - x\right)}"


def test_json_round_trip_univariate():
    rng = random.Random(2206)
    for _ in range(30):
        f = rand_ratfunc(rng)
        wire = json.loads(json.dumps(ratfunc_to_json(f)))
        assert ratfunc_from_json(wire) == f
    p = Poly({0: Fraction(1, 3), 2: -2})
    assert poly_to_json(p) == [[0, "1/3"], [2, "-2"]]
    assert poly_from_json(poly_to_json(p)) == p


def test_json_round_trip_bivariate():
    f = RatFunc2(X2 * (N2 - 1), N2 - X2)
    wire = json.loads(json.dumps(ratfunc_to_json(f)))
    assert ratfunc2_from_json(wire) == f
    p = N2**2 - 3 * X2
    assert poly2_to_json(p) == [[[0, 1], "-3"], [[2, 0], "1"]]
    assert poly2_from_json(poly2_to_json(p)) == p


def test_json_values_are_strings_not_floats():
    wire = ratfunc_to_json(RatFunc(X, Poly({0: Fraction(2), 1: Fraction(-1, 3)})))
    flat = json.dumps(wire)
    assert "." not in flat
    for _, v in wire["num"] + wire["den"]:
        assert isinstance(v, str)
