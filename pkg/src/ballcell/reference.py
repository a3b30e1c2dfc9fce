"""Known closed forms for small states, kept as regression targets.

The verify command and the test suite compare computed results against these
by cross-multiplication.  A transcription slip here cannot create a silent
pass; it shows up as a loud mismatch against the computed pipeline.
"""

from __future__ import annotations

from fractions import Fraction

from .polys import Poly, Poly2
from .ratfuncs import RatFunc, RatFunc2

_X = Poly.var()


def _p(*coeffs) -> Poly:
    """Polynomial in x from ascending coefficients."""
    return Poly(dict(enumerate(coeffs)))


def _pn(*coeffs) -> Poly2:
    """Polynomial in n alone from ascending coefficients."""
    return Poly2({(e, 0): c for e, c in enumerate(coeffs)})


def _p2(*terms) -> Poly2:
    """Polynomial in n and x from (deg_n, deg_x, coeff) triples."""
    return Poly2({(dn, dx): c for dn, dx, c in terms})


def diagonal_pgf(r: int) -> RatFunc:
    """Golden duration PGF with as many cells as balls, 1 <= r <= 5."""
    x = _X
    if r == 1:
        return RatFunc(x)
    if r == 2:
        return RatFunc(-x, _p(-2, 1))
    if r == 3:
        return RatFunc(2 * x * _p(3, 5), _p(-3, 1) * _p(-9, 1))
    if r == 4:
        return RatFunc(-3 * x * _p(64, 316, 25), _p(-4, 1) * _p(-16, 1) * _p(-32, 5))
    if r == 5:
        return RatFunc(
            24 * x * _p(15625, 182125, 63115, 767),
            _p(-5, 1) * _p(-25, 1) * _p(-125, 13) * _p(-625, 41),
        )
    raise ValueError(f"no golden diagonal form for r = {r}")


_SYM_NUM_3 = _p2((3, 0, 1), (2, 1, 2), (2, 0, -3), (1, 1, -3), (1, 0, 2), (0, 1, 1))

_SYM_NUM_4 = _p2(
    (6, 0, 1), (5, 1, 5), (5, 0, -6), (4, 1, -15), (3, 2, 3), (4, 0, 11),
    (3, 1, 9), (2, 2, -2), (3, 0, -6), (2, 1, 3), (1, 2, -3), (1, 1, -2), (0, 2, 2),
)

_SYM_NUM_5 = _p2(
    (10, 0, 1), (9, 1, 9), (9, 0, -10), (8, 1, -39), (7, 2, 59), (8, 0, 35),
    (7, 1, -13), (6, 2, -284), (5, 3, 12), (7, 0, -50), (6, 1, 280), (5, 2, 508),
    (4, 3, -38), (6, 0, 24), (5, 1, -494), (4, 2, -415), (3, 3, 35), (4, 1, 359),
    (3, 2, 111), (2, 3, 20), (3, 1, -102), (2, 2, 39), (1, 3, -47), (1, 2, -18),
    (0, 3, 18),
)


def symbolic_pgf(r: int) -> RatFunc2:
    """Golden duration PGF with the cell count left as n, 1 <= r <= 5."""
    n = Poly2.var_n()
    x = Poly2.var_x()
    d1 = n - x
    d2 = n**2 - x
    d3 = n**3 - 3 * n * x + 2 * x
    d4 = n**4 - 10 * n * x + 9 * x
    if r == 1:
        return RatFunc2(x)
    if r == 2:
        return RatFunc2(x * _p2((1, 0, 1), (0, 0, -1)), d1)
    if r == 3:
        return RatFunc2(x * _SYM_NUM_3, d1 * d2)
    if r == 4:
        return RatFunc2(x * _SYM_NUM_4, d1 * d2 * d3)
    if r == 5:
        return RatFunc2(x * _SYM_NUM_5, d1 * d2 * d3 * d4)
    raise ValueError(f"no golden symbolic form for r = {r}")


def symbolic_mean(r: int) -> RatFunc2:
    """Golden mean duration as a function of the cell count, 1 <= r <= 5."""
    if r == 1:
        return RatFunc2.from_fraction(Fraction(1))
    if r == 2:
        return RatFunc2(_pn(0, 1), _pn(-1, 1))
    if r == 3:
        return RatFunc2(_pn(0, 1) * _pn(3, 1), _pn(-1, 0, 1))
    if r == 4:
        return RatFunc2(_pn(-2, 7, 1) * _pn(0, 0, 1), _pn(2, -3, 0, 1) * _pn(1, 1))
    if r == 5:
        return RatFunc2(
            _pn(0, 0, 1) * _pn(10, -125, 48, -6, 12, 1),
            _pn(9, -10, 0, 0, 1) * _pn(-2, 1, 1) * _pn(1, 1),
        )
    raise ValueError(f"no golden mean form for r = {r}")


# Estimated limits of the mean-approximation error, with the tolerance each
# estimate is known to.
LIMIT_TARGETS: dict[int, tuple[Fraction, Fraction]] = {
    3: (Fraction("0.04213658385"), Fraction(1, 10**8)),
    4: (Fraction("0.254461"), Fraction(1, 10**4)),
    5: (Fraction("0.5312"), Fraction(1, 10**3)),
}
