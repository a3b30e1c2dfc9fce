"""Exact analysis and seeded simulation of the ball-and-cell capture game.

Each round, r balls are thrown uniformly at random into n cells; every ball
that lands alone in its cell is captured and removed, and the survivors are
thrown again.  The package computes the distribution of the number of rounds
until no balls remain, exactly (as rational generating functions, numerically
in n or symbolically with n left as a variable), along with moments, a
harmonic-sum approximation of the mean with error tracking, the limiting
moment profile of related down-or-stay chains, and a seeded Monte Carlo
simulator with goodness-of-fit checks against the exact law.
"""

from .approx import approx_report, error_limit, error_term
from .errors import BudgetExceededError, DivergentDurationError
from .game import brute_force_row, transition_prob, transition_row
from .geometric import StepSequence, alpha_closed_forms, alpha_limits, alpha_moments
from .montecarlo import DurationLaw, gof_compare, simulate_batch, simulate_game
from .pgf import (
    diagonal_sequence,
    duration_variance,
    exact_distribution,
    expected_duration,
    moments,
    moments_symbolic,
    pgf_numeric,
    pgf_symbolic,
)
from .polys import Poly, Poly2, poly2_gcd, poly_gcd
from .ratfuncs import RatFunc, RatFunc2, polynomial_text, ratfunc_latex, ratfunc_text

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DivergentDurationError",
    "DurationLaw",
    "Poly",
    "Poly2",
    "RatFunc",
    "RatFunc2",
    "StepSequence",
    "alpha_closed_forms",
    "alpha_limits",
    "alpha_moments",
    "approx_report",
    "brute_force_row",
    "diagonal_sequence",
    "duration_variance",
    "error_limit",
    "error_term",
    "exact_distribution",
    "expected_duration",
    "gof_compare",
    "moments",
    "moments_symbolic",
    "pgf_numeric",
    "pgf_symbolic",
    "poly_gcd",
    "poly2_gcd",
    "polynomial_text",
    "ratfunc_latex",
    "ratfunc_text",
    "simulate_batch",
    "simulate_game",
    "transition_prob",
    "transition_row",
    "__version__",
]
