"""Harmonic-geometric approximation of the mean duration and its error.

The mean duration for r balls in n cells is approximated by the partial sum

    A_n(r) = sum_{j=1}^{r} (1/j) (n/(n-1))^(j-1)

and the variance by sum_{j=1}^{r} (1/j^2) (n/(n-1))^(2j-2) - A_n(r).  The
error E_n(r) = M_n(r) - A_n(r) vanishes identically at n = 2 and appears to
approach a small n-dependent constant as r grows; `error_limit` estimates that
constant.  E_n(r) is a tiny difference of enormous numbers (both terms grow
like (n/(n-1))^r / r), so everything here is exact rational arithmetic, with
the limit estimator switching to high-precision decimals only once exact
numerators pass a digit budget, at a working precision wide enough to absorb
the cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import ceil, log10

from .game import transition_row
from .pgf import duration_variance, expected_duration
from .scalars import default_precision, to_decimal

DEFAULT_LIMIT_ROUNDS = 400
DEFAULT_DIGIT_BUDGET = 10**4

Q1 = Fraction(1)


@dataclass(frozen=True)
class ApproxReport:
    """Approximate vs exact mean and variance for one (n, r).

    `error` is exact_mean - approx_mean, exact.  Ratios are exact/approx at
    the active precision; None when the approximation is zero (r <= 1 for the
    variance), where the ratio is undefined.
    """

    cells: int
    balls: int
    approx_mean: Fraction
    exact_mean: Fraction
    error: Fraction
    ratio_mean: Decimal | None
    approx_variance: Fraction
    exact_variance: Fraction
    ratio_variance: Decimal | None


@dataclass(frozen=True)
class LimitEstimate:
    """E_n(rmax) in decimals, with the gap to the half-horizon value.

    `stabilized` records whether the gap beat 10^-(digits+2); with many
    requested digits the honest answer is often False even though far fewer
    digits have long since settled.
    """

    cells: int
    rmax: int
    digits: int
    estimate: Decimal
    gap: Decimal
    stabilized: bool


def _check_cells(n: int) -> None:
    if n < 2:
        raise ValueError(f"approximation needs cells >= 2, got {n}")


def approx_mean(n: int, r: int) -> Fraction:
    """Partial sum sum_{j=1}^r (1/j)(n/(n-1))^(j-1), exact."""
    _check_cells(n)
    if r < 0:
        raise ValueError(f"balls must be >= 0, got {r}")
    q = Fraction(n, n - 1)
    total = Fraction(0)
    power = Q1
    for j in range(1, r + 1):
        total += power / j
        power *= q
    return total


def approx_variance(n: int, r: int) -> Fraction:
    """Partial sum sum_{j=1}^r (1/j^2)(n/(n-1))^(2j-2) minus the mean sum."""
    _check_cells(n)
    if r < 0:
        raise ValueError(f"balls must be >= 0, got {r}")
    q2 = Fraction(n, n - 1) ** 2
    total = Fraction(0)
    power = Q1
    for j in range(1, r + 1):
        total += power / (j * j)
        power *= q2
    return total - approx_mean(n, r)


def error_term(n: int, r: int) -> Fraction:
    """E_n(r) = exact mean - approximate mean, exact."""
    _check_cells(n)
    return expected_duration(r, n) - approx_mean(n, r)


def approx_report(n: int, r: int) -> ApproxReport:
    """Approximation against exact values, with error and convergence ratios."""
    a_mean = approx_mean(n, r)
    a_var = approx_variance(n, r)
    e_mean = expected_duration(r, n)
    e_var = duration_variance(r, n)
    ratio_mean = to_decimal(e_mean / a_mean) if a_mean else None
    ratio_var = to_decimal(e_var / a_var) if a_var else None
    return ApproxReport(n, r, a_mean, e_mean, e_mean - a_mean, ratio_mean, a_var, e_var, ratio_var)


def _digits(value: int) -> int:
    return (value.bit_length() * 30103) // 100000 + 1


def error_limit(
    n: int,
    rmax: int = DEFAULT_LIMIT_ROUNDS,
    digits: int | None = None,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> LimitEstimate:
    """Estimate lim_r E_n(r) as E_n(rmax), with the half-horizon gap.

    The mean recurrence runs exactly until its numerators pass `digit_budget`
    digits, then continues in Decimal at working precision digits + ceil(rmax
    log10(n/(n-1))) + 10: the extra term covers the magnitude of the two
    nearly-cancelling quantities, so the final difference still carries the
    requested number of correct digits.
    """
    if n < 3:
        raise ValueError(f"limit estimation needs cells >= 3 (the n = 2 error is identically 0), got {n}")
    if rmax < 2:
        raise ValueError(f"rmax must be >= 2, got {rmax}")
    if digits is None:
        digits = default_precision()
    half = rmax // 2
    wp = digits + max(0, ceil(rmax * log10(n / (n - 1)))) + 10

    a_half = approx_mean(n, half)
    a_full = approx_mean(n, rmax)

    # Rolling window of the last n mean values; capture rows put no mass on
    # t > n, so the recurrence never reaches further back.
    window: list = [Fraction(0)]
    exact = True
    e_half: Decimal | None = None
    with localcontext() as ctx:
        ctx.prec = wp
        for k in range(1, rmax + 1):
            probs = transition_row(n, k).probs
            stay = probs[0]
            if exact:
                acc = Q1
                for t in range(1, min(n, k) + 1):
                    if probs[t]:
                        acc += probs[t] * window[-t]
                m = acc / (1 - stay)
                if _digits(m.numerator) > digit_budget or _digits(m.denominator) > digit_budget:
                    window = [to_decimal(v, wp) for v in window]
                    m = to_decimal(m, wp)
                    exact = False
            else:
                acc = Decimal(1)
                for t in range(1, min(n, k) + 1):
                    if probs[t]:
                        acc += to_decimal(probs[t], wp) * window[-t]
                m = acc / to_decimal(1 - stay, wp)
            window.append(m)
            if len(window) > n:
                window.pop(0)
            if k == half:
                e_half = to_decimal(m - a_half, wp) if exact else m - to_decimal(a_half, wp)
        e_full = to_decimal(m - a_full, wp) if exact else m - to_decimal(a_full, wp)
        gap_wide = abs(e_full - e_half)
    with localcontext() as ctx:
        ctx.prec = digits
        estimate = +e_full
        gap = +gap_wide
    return LimitEstimate(n, rmax, digits, estimate, gap, gap < Decimal(1).scaleb(-(digits + 2)))
