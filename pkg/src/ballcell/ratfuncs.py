"""Reduced rational functions over the exact polynomial layer.

``RatFunc`` is a quotient of univariate polynomials in x, ``RatFunc2`` of
bivariate polynomials in n and x.  Both are kept in a canonical form at all
times:

* numerator and denominator coprime (divided by their gcd),
* all coefficients integral (rational denominators cleared jointly),
* joint integer content stripped,
* the denominator's head term positive, where the head term is the first one
  in canonical term order (degree in n descending, then degree in x
  ascending).

Canonical form makes equality a structural comparison: two quotients are equal
iff their reduced forms match field by field.  The module also carries the
Maclaurin expansion, the text/LaTeX renderers, and the JSON wire format used
by the CLI ("p/q" strings, never floats).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .polys import Poly, Poly2, poly2_div_exact, poly2_gcd, poly_gcd

Q0 = Fraction(0)
Q1 = Fraction(1)


def _coerce_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.const(v)
    raise TypeError(f"expected polynomial, got {type(v).__name__}")


def _coerce_poly2(v) -> Poly2:
    if isinstance(v, Poly2):
        return v
    if isinstance(v, Poly):
        raise TypeError("ambiguous variable: convert Poly to Poly2 explicitly")
    if isinstance(v, (int, Fraction)):
        return Poly2.const(v)
    raise TypeError(f"expected bivariate polynomial, got {type(v).__name__}")


def _integer_scale(polys: list[Poly] | list[Poly2]) -> Fraction:
    """Positive rational s such that multiplying every input by s leaves
    integer coefficients with joint content 1."""
    dens = [v.denominator for p in polys for _, v in p.items()]
    if not dens:
        return Q1
    big = lcm(*dens)
    nums = [v.numerator * big // v.denominator for p in polys for _, v in p.items()]
    content = gcd(*nums)
    return Fraction(big, content)


class RatFunc:
    """Quotient of univariate polynomials in x, always in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly.zero(), Poly.const(1)
            return
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num // g
            den = den // g
        s = _integer_scale([num, den])
        num = num * s
        den = den * s
        # Head term of the denominator (lowest x power) is the sign anchor.
        if den.coeff(den.min_exponent()) < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RatFunc":
        return cls(Poly.const(q))

    @classmethod
    def from_coprime(cls, num, den) -> "RatFunc":
        """Build from a numerator and denominator known to be coprime.

        Skips the gcd step; only rescales to integer coefficients and fixes
        the sign anchor.  Callers own the coprimality argument.
        """
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            return cls(Poly.zero())
        s = _integer_scale([num, den])
        num = num * s
        den = den * s
        if den.coeff(den.min_exponent()) < 0:
            num, den = -num, -den
        f = object.__new__(cls)
        f.num = num
        f.den = den
        return f

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(Poly.var())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == Poly.const(1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __add__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * Fraction(other), self.den)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.from_fraction(Fraction(other)) / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            raise ValueError("negative power of a rational function")
        return RatFunc(self.num**k, self.den**k)

    def eval(self, x0: Fraction) -> Fraction:
        """Exact value at x0; raises ZeroDivisionError at a pole."""
        x0 = Fraction(x0)
        d = self.den.eval(x0)
        if d == 0:
            raise ZeroDivisionError(f"pole at x = {x0}")
        return self.num.eval(x0) / d

    def derivative(self) -> "RatFunc":
        """Quotient-rule derivative, reduced."""
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def series(self, kmax: int) -> list[Fraction]:
        """First kmax+1 Maclaurin coefficients, exact.

        Requires a nonzero constant term in the denominator.
        """
        if kmax < 0:
            raise ValueError("kmax must be nonnegative")
        d0 = self.den.coeff(0)
        if d0 == 0:
            raise ZeroDivisionError("denominator vanishes at 0; no Maclaurin expansion")
        coeffs: list[Fraction] = []
        dmax = self.den.degree()
        for k in range(kmax + 1):
            acc = self.num.coeff(k)
            for i in range(1, min(k, dmax) + 1):
                di = self.den.coeff(i)
                if di:
                    acc -= di * coeffs[k - i]
            coeffs.append(acc / d0)
        return coeffs


class RatFunc2:
    """Quotient of polynomials in Q[n, x], always in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _coerce_poly2(num)
        den = _coerce_poly2(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly2.zero(), Poly2.const(1)
            return
        g = poly2_gcd(num, den)
        if not g.is_constant():
            num = poly2_div_exact(num, g)
            den = poly2_div_exact(den, g)
        s = _integer_scale([num, den])
        num = num * s
        den = den * s
        if den.head_coeff() < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RatFunc2":
        return cls(Poly2.const(q))

    @classmethod
    def from_coprime(cls, num: Poly2, den: Poly2) -> "RatFunc2":
        """Build from a numerator and denominator known to be coprime.

        Skips the gcd step (the expensive part for large operands) and applies
        only the scale and sign normalization.  The caller carries the proof
        obligation; feeding a reducible pair breaks canonical equality.
        """
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            return cls(Poly2.zero())
        s = _integer_scale([num, den])
        num = num * s
        den = den * s
        if den.head_coeff() < 0:
            num, den = -num, -den
        f = object.__new__(cls)
        f.num = num
        f.den = den
        return f

    @classmethod
    def n(cls) -> "RatFunc2":
        return cls(Poly2.var_n())

    @classmethod
    def x(cls) -> "RatFunc2":
        return cls(Poly2.var_x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc2({self.num!r}, {self.den!r})"

    def __neg__(self) -> "RatFunc2":
        return RatFunc2(-self.num, self.den)

    def __add__(self, other) -> "RatFunc2":
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return RatFunc2(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc2":
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc2":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc2":
        if isinstance(other, (int, Fraction)):
            return RatFunc2(self.num * Fraction(other), self.den)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return RatFunc2(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc2":
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.from_fraction(Fraction(other))
        if not isinstance(other, RatFunc2):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc2(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc2":
        return RatFunc2.from_fraction(Fraction(other)) / self

    def __pow__(self, k: int) -> "RatFunc2":
        if k < 0:
            raise ValueError("negative power of a rational function")
        return RatFunc2(self.num**k, self.den**k)

    def subs_n(self, n0: Fraction) -> RatFunc:
        """Substitute a rational for n; the result is a reduced function of x."""
        n0 = Fraction(n0)
        den = self.den.subs_n(n0)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes identically at n = {n0}")
        return RatFunc(self.num.subs_n(n0), den)

    def eval(self, n0: Fraction, x0: Fraction) -> Fraction:
        d = self.den.eval(n0, x0)
        if d == 0:
            raise ZeroDivisionError(f"pole at (n, x) = ({n0}, {x0})")
        return self.num.eval(n0, x0) / d

    def series(self, kmax: int) -> list["RatFunc2"]:
        """First kmax+1 coefficients of the expansion in powers of x.

        Each coefficient is a reduced rational function of n alone.  Needs a
        denominator whose x-constant term is nonzero.
        """
        if kmax < 0:
            raise ValueError("kmax must be nonnegative")
        num_x = self.num.as_x_coeffs()
        den_x = {
            dx: RatFunc2(Poly2.from_poly_in_n(p)) for dx, p in self.den.as_x_coeffs().items()
        }
        if 0 not in den_x:
            raise ZeroDivisionError("denominator vanishes at x = 0; no expansion")
        out: list[RatFunc2] = []
        for k in range(kmax + 1):
            acc = RatFunc2(Poly2.from_poly_in_n(num_x[k])) if k in num_x else RatFunc2(Poly2.zero())
            for j, bj in den_x.items():
                if 1 <= j <= k:
                    acc = acc - bj * out[k - j]
            out.append(acc / den_x[0])
        return out


# ---------------------------------------------------------------------------
# Rendering

_SUPERSCRIPTS = None  # plain ASCII output only


def _term_sort_key(key: tuple[int, int]):
    dn, dx = key
    return (-dn, dx)


def _monomial_text(dn: int, dx: int, latex: bool) -> str:
    parts = []
    if dn:
        if dn == 1:
            parts.append("n")
        else:
            parts.append(f"n^{{{dn}}}" if latex else f"n^{dn}")
    if dx:
        if dx == 1:
            parts.append("x")
        else:
            parts.append(f"x^{{{dx}}}" if latex else f"x^{dx}")
    return "".join(parts)


def _coeff_text(v: Fraction, latex: bool, lone: bool) -> str:
    # `lone` means the monomial part is empty, so the coefficient must show.
    a = abs(v)
    if a == 1 and not lone:
        return ""
    if a.denominator == 1:
        return str(a.numerator)
    if latex:
        return rf"\frac{{{a.numerator}}}{{{a.denominator}}}"
    return f"({a})"


def _poly_terms(p: Poly | Poly2) -> list[tuple[int, int, Fraction]]:
    if isinstance(p, Poly2):
        return [(dn, dx, v) for (dn, dx), v in p.items()]
    # Univariate polynomials in this package are polynomials in x.
    return [(0, e, v) for e, v in p.items()]


def polynomial_text(p: Poly | Poly2, latex: bool = False) -> str:
    """Render with terms in canonical order and explicit signs."""
    terms = _poly_terms(p)
    if not terms:
        return "0"
    terms.sort(key=lambda t: _term_sort_key((t[0], t[1])))
    chunks: list[str] = []
    for i, (dn, dx, v) in enumerate(terms):
        mono = _monomial_text(dn, dx, latex)
        body = _coeff_text(v, latex, lone=not mono) + mono
        if i == 0:
            chunks.append(("-" if v < 0 else "") + body)
        else:
            chunks.append((" - " if v < 0 else " + ") + body)
    return "".join(chunks)


def _needs_parens(p: Poly | Poly2) -> bool:
    return len(list(p.items())) > 1


def ratfunc_text(f: RatFunc | RatFunc2) -> str:
    """Plain-text rendering like "x/(2 - x)" or "n/(n - 1)"."""
    num_s = polynomial_text(f.num)
    if f.den == 1:
        return num_s
    if _needs_parens(f.num):
        num_s = f"({num_s})"
    den_s = polynomial_text(f.den)
    if _needs_parens(f.den):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


def ratfunc_latex(f: RatFunc | RatFunc2, den_factors=None) -> str:
    """LaTeX rendering; `den_factors`, when given, must multiply to f.den
    up to a positive rational constant and are printed as a factored
    denominator (the caller is responsible for having verified that)."""
    num_s = polynomial_text(f.num, latex=True)
    if f.den == 1:
        return num_s
    if den_factors:
        den_s = "".join(
            rf"\left({polynomial_text(fac, latex=True)}\right)" for fac in den_factors
        )
    else:
        den_s = polynomial_text(f.den, latex=True)
    return rf"\frac{{{num_s}}}{{{den_s}}}"


# ---------------------------------------------------------------------------
# JSON wire format


def rational_to_json(q: Fraction) -> str:
    return str(q)


def rational_from_json(s: str) -> Fraction:
    from .scalars import parse_rational

    return parse_rational(s)


def poly_to_json(p: Poly) -> list:
    return [[e, str(v)] for e, v in sorted(p.items())]


def poly_from_json(data) -> Poly:
    return Poly.from_pairs((int(e), rational_from_json(v)) for e, v in data)


def poly2_to_json(p: Poly2) -> list:
    return [[[dn, dx], str(v)] for (dn, dx), v in sorted(p.items())]


def poly2_from_json(data) -> Poly2:
    out = {}
    for (dn, dx), v in ((tuple(k), v) for k, v in data):
        out[(int(dn), int(dx))] = out.get((int(dn), int(dx)), Q0) + rational_from_json(v)
    return Poly2(out)


def ratfunc_to_json(f: RatFunc | RatFunc2) -> dict:
    if isinstance(f, RatFunc2):
        return {"num": poly2_to_json(f.num), "den": poly2_to_json(f.den)}
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def ratfunc_from_json(data) -> RatFunc:
    return RatFunc(poly_from_json(data["num"]), poly_from_json(data["den"]))


def ratfunc2_from_json(data) -> RatFunc2:
    return RatFunc2(poly2_from_json(data["num"]), poly2_from_json(data["den"]))
