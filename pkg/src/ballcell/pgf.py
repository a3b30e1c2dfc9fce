"""Probability generating functions for the game's duration.

For r balls and n cells, let X be the number of rounds until every ball has
been captured.  Conditioning on the first round gives the recurrence

    F_r(x) = x / (1 - P[0 captured] x) * sum_{t=1}^{r} P[t captured] F_{r-t}(x)

with F_0 = 1, where the capture probabilities come from `game` and each F is a
rational function of x (numeric cell count) or of n and x (cell count left
symbolic).  This module builds those functions bottom-up, extracts exact
distributions and moments from them, and carries the fast mean/variance
recurrences that skip the rational functions entirely.

The degenerate state n = 1 with r >= 2 never terminates; the recurrence then
yields the zero function, which is kept, flagged, and refused by the moment
operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import comb, factorial

from .errors import BudgetExceededError, DivergentDurationError
from .game import transition_prob_symbolic, transition_row
from .polys import Poly, Poly2, poly2_div_exact
from .ratfuncs import RatFunc, RatFunc2
from .scalars import decimal_sqrt

DEFAULT_SYMBOLIC_CEILING = 40

Q0 = Fraction(0)
Q1 = Fraction(1)


@dataclass(frozen=True)
class DurationPGF:
    """The duration's generating function; cells is None on the symbolic path.

    `terminating` is False exactly in the degenerate one-cell multi-ball case,
    where `func` is identically zero.
    """

    balls: int
    cells: int | None
    func: RatFunc | RatFunc2
    terminating: bool


@dataclass(frozen=True)
class ScaledMoment:
    """Central moment m_i divided by m_2^(i/2).

    Odd i leaves the rational field, so the exact content is the squared value
    together with the sign of m_i; `value` is the signed square root at the
    active precision, and `exact` is the rational value when i is even.
    """

    order: int
    squared: Fraction
    sign: int
    value: Decimal
    exact: Fraction | None


@dataclass(frozen=True)
class MomentReport:
    """Exact moments of an integer-valued variable given by its PGF.

    raw[i-1] = E[X^i] for i = 1..order; central[i-2] = m_i for i = 2..order;
    scaled[i-3] covers i = 3..order and is None (undefined, not an error)
    when the variance is zero.
    """

    order: int
    raw: tuple[Fraction, ...]
    central: tuple[Fraction, ...]
    scaled: tuple[ScaledMoment, ...] | None
    mean: Fraction
    variance: Fraction | None


@dataclass(frozen=True)
class SymbolicMomentReport:
    """Moments as rational functions of the cell count n.

    Scaled moments of odd order are not rational functions of n, so the
    scaled entries carry the squared values only (i = 3..order); None when
    the variance is identically zero.
    """

    order: int
    raw: tuple[RatFunc2, ...]
    central: tuple[RatFunc2, ...]
    scaled_squared: tuple[RatFunc2, ...] | None
    mean: RatFunc2
    variance: RatFunc2 | None


def _check_state(n: int, r: int) -> None:
    if n < 1:
        raise ValueError(f"cells must be >= 1, got {n}")
    if r < 0:
        raise ValueError(f"balls must be >= 0, got {r}")


# ---------------------------------------------------------------------------
# PGF tables, grown bottom-up and cached per context.  Tables are replaced
# wholesale (never mutated in place) so completed entries are always safe to
# read from other threads.

_NUMERIC: dict[int, list[RatFunc]] = {}
# Symbolic levels keep the denominator factored: (numerator, {factor: power}).
_SYM_LEVELS: list[tuple[Poly2, dict[Poly2, int]]] = []


def _numeric_funcs(n: int, rmax: int) -> list[RatFunc]:
    table = _NUMERIC.get(n)
    if table is None:
        table = [RatFunc.from_fraction(Q1)]
    if len(table) <= rmax:
        table = list(table)
        x = RatFunc.x()
        for r in range(len(table), rmax + 1):
            probs = transition_row(n, r).probs
            acc = RatFunc.from_fraction(Q0)
            for t in range(1, r + 1):
                if probs[t]:
                    acc = acc + probs[t] * table[r - t]
            f = x * acc / (1 - probs[0] * x)
            table.append(f)
        _NUMERIC[n] = table
    return table


def _monomial_degree(den: Poly2) -> int:
    """Degree e of a denominator known to be the monomial n^e."""
    terms = list(den.items())
    if len(terms) != 1 or terms[0][0][1] != 0 or terms[0][1] != 1:
        raise AssertionError(f"transition denominator not a power of n: {den!r}")
    return terms[0][0][0]


def _cancel_factors(num: Poly2, den: dict[Poly2, int]) -> tuple[Poly2, dict[Poly2, int]]:
    """Divide out every denominator factor that exactly divides the numerator.

    Each factor is irreducible (the monomial n, or a polynomial linear and
    primitive in x), so repeated exact division is a complete reduction: what
    survives is provably coprime to the numerator.
    """
    out: dict[Poly2, int] = {}
    for f, mult in den.items():
        while mult > 0:
            try:
                num = poly2_div_exact(num, f)
            except ValueError:
                break
            mult -= 1
        if mult:
            out[f] = mult
    return num, out


def _sym_levels(rmax: int) -> list[tuple[Poly2, dict[Poly2, int]]]:
    """Grow the symbolic PGF table.

    Working over factored denominators sidesteps general bivariate gcds: the
    recurrence only ever introduces the factor n^e - A*x from the reduced
    stay probability A/n^e (A coprime to n, so the factor is primitive and
    linear in x) plus powers of n itself, and reducing against those is
    plain exact division.
    """
    global _SYM_LEVELS
    levels = _SYM_LEVELS
    if not levels:
        levels = [(Poly2.const(1), {})]
    if len(levels) <= rmax:
        levels = list(levels)
        var_n = Poly2.var_n()
        var_x = Poly2.var_x()
        for r in range(len(levels), rmax + 1):
            terms = []
            for t in range(1, r + 1):
                p = transition_prob_symbolic(r, t)
                if p.is_zero():
                    continue
                own = dict(levels[r - t][1])
                e_t = _monomial_degree(p.den)
                if e_t:
                    own[var_n] = own.get(var_n, 0) + e_t
                terms.append((p.num * levels[r - t][0], own))
            common: dict[Poly2, int] = {}
            for _, own in terms:
                for f, m in own.items():
                    if m > common.get(f, 0):
                        common[f] = m
            total = Poly2.zero()
            for anum, own in terms:
                for f, m in common.items():
                    extra = m - own.get(f, 0)
                    if extra:
                        anum = anum * f**extra
                total = total + anum
            stay = transition_prob_symbolic(r, 0)
            num = var_x * total
            den = dict(common)
            if not stay.is_zero():
                e0 = _monomial_degree(stay.den)
                num = num * var_n**e0
                factor = var_n**e0 - stay.num * var_x
                den[factor] = den.get(factor, 0) + 1
            num, den = _cancel_factors(num, den)
            levels.append((num, den))
        _SYM_LEVELS = levels
    return levels


def _symbolic_funcs(rmax: int) -> list[RatFunc2]:
    out = []
    for num, den in _sym_levels(rmax)[: rmax + 1]:
        den_poly = Poly2.const(1)
        for f, m in den.items():
            den_poly = den_poly * f**m
        out.append(RatFunc2.from_coprime(num, den_poly))
    return out


def pgf_numeric(r: int, n: int) -> DurationPGF:
    """Duration PGF for r balls in n cells, exact and reduced."""
    _check_state(n, r)
    func = _numeric_funcs(n, r)[r]
    return DurationPGF(r, n, func, terminating=not func.is_zero())


def symbolic_den_factors(r: int, max_balls: int = DEFAULT_SYMBOLIC_CEILING) -> list[Poly2]:
    """Denominator of pgf_symbolic(r) as its exact factor list (with
    multiplicity), ordered by degree.  Their product is the reduced
    denominator by construction."""
    if r < 0:
        raise ValueError(f"balls must be >= 0, got {r}")
    if r > max_balls:
        raise BudgetExceededError(
            f"symbolic table stops at r = {max_balls}; raise max_balls to go further"
        )
    _, den = _sym_levels(r)[r]
    factors = []
    for f, m in den.items():
        factors.extend([f] * m)
    factors.sort(key=lambda f: (f.degree_n(), f.degree_x(), sorted(f.items())))
    return factors


def pgf_symbolic(r: int, max_balls: int = DEFAULT_SYMBOLIC_CEILING) -> DurationPGF:
    """Duration PGF with the cell count left as the variable n.

    Substituting any integer n >= 2 reproduces pgf_numeric(r, n).  Guarded by
    `max_balls` because bivariate coefficients grow quickly with r.
    """
    if r < 0:
        raise ValueError(f"balls must be >= 0, got {r}")
    if r > max_balls:
        raise BudgetExceededError(
            f"symbolic table stops at r = {max_balls}; raise max_balls to go further"
        )
    func = _symbolic_funcs(r)[r]
    return DurationPGF(r, None, func, terminating=True)


# ---------------------------------------------------------------------------
# Independent distribution oracle


def duration_distribution(r: int, n: int, kmax: int) -> list[Fraction]:
    """Pr[duration = k] for k = 0..kmax by powering the transition matrix.

    Walks the ball-count Markov chain directly (states r down to 0, one
    capture row per state) and differences the absorption probabilities.
    Deliberately shares nothing with pgf_numeric; it is the oracle the PGF
    path is tested against.
    """
    _check_state(n, r)
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    rows = [transition_row(n, i).probs for i in range(r + 1)]
    state = [Q0] * (r + 1)
    state[r] = Q1
    out = [state[0]]
    absorbed = state[0]
    for _ in range(kmax):
        nxt = [Q0] * (r + 1)
        for i in range(r + 1):
            w = state[i]
            if w:
                row = rows[i]
                for t in range(i + 1):
                    if row[t]:
                        nxt[i - t] += w * row[t]
        state = nxt
        out.append(state[0] - absorbed)
        absorbed = state[0]
    return out


def exact_distribution(r: int, n: int, min_coverage: Fraction = Fraction(10**9 - 1, 10**9)) -> list[Fraction]:
    """Distribution extended until its mass reaches min_coverage.

    Refuses the non-terminating state, where no horizon can cover the mass.
    """
    _check_state(n, r)
    if n == 1 and r >= 2:
        raise DivergentDurationError("divergent duration: one cell can never isolate a ball")
    kmax = 32
    while True:
        probs = duration_distribution(r, n, kmax)
        if sum(probs) >= min_coverage:
            return probs
        kmax *= 2


# ---------------------------------------------------------------------------
# Moments


def _stirling2(i: int, k: int) -> int:
    total = 0
    for j in range(k + 1):
        s = comb(k, j) * (k - j) ** i
        total = total - s if j & 1 else total + s
    return total // factorial(k)


def _factorial_moments_numeric(f: RatFunc, order: int) -> list[Fraction]:
    """E[X(X-1)...(X-k+1)] for k = 1..order via the derivative chain.

    With F = N_0/D, the numerators N_{k+1} = N_k' D - (k+1) N_k D' satisfy
    F^(k) = N_k / D^(k+1), so no gcd reduction is ever needed mid-chain.
    """
    num, den = f.num, f.den
    dden = den.derivative()
    d1 = den.eval(Q1)
    out = []
    nk = num
    for k in range(1, order + 1):
        nk = nk.derivative() * den - k * nk * dden
        out.append(nk.eval(Q1) / d1 ** (k + 1))
    return out


def _factorial_moments_symbolic(f: RatFunc2, order: int) -> list[RatFunc2]:
    num, den = f.num, f.den
    dden = den.derivative_x()
    d1 = Poly2.from_poly_in_n(den.subs_x(Q1))
    out = []
    nk = num
    for k in range(1, order + 1):
        nk = nk.derivative_x() * den - k * nk * dden
        out.append(RatFunc2(Poly2.from_poly_in_n(nk.subs_x(Q1)), d1 ** (k + 1)))
    return out


def _raw_from_factorial(fact: list) -> list:
    """E[X^i] = sum_k S(i,k) E[(X)_k] with Stirling numbers of the second kind."""
    out = []
    for i in range(1, len(fact) + 1):
        acc = 0
        for k in range(1, i + 1):
            acc = acc + _stirling2(i, k) * fact[k - 1]
        out.append(acc)
    return out


def _central_from_raw(raw: list, order: int) -> list:
    mean = raw[0]
    out = []
    for i in range(2, order + 1):
        acc = (-mean) ** i
        for j in range(1, i + 1):
            acc = acc + comb(i, j) * raw[j - 1] * (-mean) ** (i - j)
        out.append(acc)
    return out


def moments_of(func: RatFunc, order: int) -> MomentReport:
    """Moment report for any PGF given as a rational function with f(1) = 1.

    Used for the game duration and for the down-or-stay chains; the caller
    is responsible for only passing genuine PGFs.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    fact = _factorial_moments_numeric(func, order)
    raw = _raw_from_factorial(fact)
    mean = raw[0]
    central = _central_from_raw(raw, order)
    variance = central[0] if order >= 2 else None
    scaled: tuple[ScaledMoment, ...] | None = ()
    if order >= 3:
        m2 = central[0]
        if m2 == 0:
            scaled = None
        else:
            entries = []
            for i in range(3, order + 1):
                mi = central[i - 2]
                squared = mi * mi / m2**i
                sign = 0 if mi == 0 else (1 if mi > 0 else -1)
                root = decimal_sqrt(squared)
                # copy_negate keeps all digits; context arithmetic would round
                value = root.copy_negate() if sign < 0 else root if sign else Decimal(0)
                exact = mi / m2 ** (i // 2) if i % 2 == 0 else None
                entries.append(ScaledMoment(i, squared, sign, value, exact))
            scaled = tuple(entries)
    return MomentReport(order, tuple(raw), tuple(central), scaled, mean, variance)


def moments(r: int, n: int, order: int) -> MomentReport:
    """Exact raw, central, and scaled duration moments up to `order`."""
    p = pgf_numeric(r, n)
    if not p.terminating:
        raise DivergentDurationError("divergent duration: one cell can never isolate a ball")
    return moments_of(p.func, order)


def moments_symbolic(r: int, order: int, max_balls: int = DEFAULT_SYMBOLIC_CEILING) -> SymbolicMomentReport:
    """Moments as reduced rational functions of the cell count."""
    if order < 1:
        raise ValueError("order must be >= 1")
    p = pgf_symbolic(r, max_balls)
    fact = _factorial_moments_symbolic(p.func, order)
    raw = _raw_from_factorial(fact)
    mean = raw[0]
    central = _central_from_raw(raw, order)
    variance = central[0] if order >= 2 else None
    scaled: tuple[RatFunc2, ...] | None = ()
    if order >= 3:
        m2 = central[0]
        if m2.is_zero():
            scaled = None
        else:
            scaled_list = []
            for i in range(3, order + 1):
                mi = central[i - 2]
                scaled_list.append(mi * mi / m2**i)
            scaled = tuple(scaled_list)
    return SymbolicMomentReport(order, tuple(raw), tuple(central), scaled, mean, variance)


# ---------------------------------------------------------------------------
# Fast mean/variance recurrences (no rational functions in x)

_MEAN_TABLES: dict[int, tuple[list[Fraction], list[Fraction]]] = {}


def _mean_tables(n: int, rmax: int) -> tuple[list[Fraction], list[Fraction]]:
    """M(k) = E[X] and S(k) = E[X(X-1)] for k = 0..rmax, from differentiating
    the PGF recurrence at x = 1:

        M(k)(1 - p_0) = 1 + sum_{t>=1} p_t M(k-t)
        S(k)(1 - p_0) = 2(M(k) - 1) + sum_{t>=1} p_t S(k-t)
    """
    cached = _MEAN_TABLES.get(n)
    if cached is not None and len(cached[0]) > rmax:
        return cached
    means, seconds = ([Q0], [Q0]) if cached is None else (list(cached[0]), list(cached[1]))
    for k in range(len(means), rmax + 1):
        probs = transition_row(n, k).probs
        stay = probs[0]
        if stay == 1:
            raise DivergentDurationError(
                "divergent duration: one cell can never isolate a ball"
            )
        m_acc = Q1
        s_acc = Q0
        for t in range(1, k + 1):
            if probs[t]:
                m_acc += probs[t] * means[k - t]
                s_acc += probs[t] * seconds[k - t]
        m = m_acc / (1 - stay)
        means.append(m)
        seconds.append((2 * (m - 1) + s_acc) / (1 - stay))
    _MEAN_TABLES[n] = (means, seconds)
    return means, seconds


def expected_duration(r: int, n: int) -> Fraction:
    """Mean duration, exact; fast enough for r in the thousands."""
    _check_state(n, r)
    return _mean_tables(n, r)[0][r]


def duration_variance(r: int, n: int) -> Fraction:
    """Variance of the duration, exact."""
    _check_state(n, r)
    means, seconds = _mean_tables(n, r)
    m = means[r]
    return seconds[r] + m - m * m


def diagonal_sequence(rmax: int) -> list[tuple[int, Fraction, Fraction]]:
    """(r, mean, variance) along the diagonal n = r, for r = 1..rmax."""
    if rmax < 1:
        raise ValueError("rmax must be >= 1")
    out = []
    for r in range(1, rmax + 1):
        out.append((r, expected_duration(r, r), duration_variance(r, r)))
    return out
