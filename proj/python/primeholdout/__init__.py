"""Verification engine for prime holdout and divisor iteration problems.

The heavy lifting happens in the compiled ``_core`` extension; this wrapper
keeps the boundary honest (arbitrary-precision values travel as decimal
strings) while handing back plain ints, dicts and lists.
"""

import json as _json

from primeholdout import _core
from primeholdout._core import BudgetError, ContractError, ParseError

__all__ = [
    "BudgetError",
    "ContractError",
    "ParseError",
    "factorize",
    "find_cycles",
    "g_step",
    "holdout_part",
    "is_prime",
    "is_smooth",
    "is_trivial",
    "padic_split",
    "problem_name",
    "run_props",
    "run_trajectory",
    "survey",
    "survey_csv",
    "t_step",
    "two_cycle_analytic",
    "verify_range",
]


def _dec(n):
    """Decimal-string form of a non-negative int (or numeric string)."""
    if isinstance(n, bool):
        raise TypeError("expected an integer, got bool")
    if isinstance(n, int):
        if n < 0:
            raise ValueError("negative values are out of domain: %d" % n)
        return str(n)
    if isinstance(n, str):
        return n
    raise TypeError("expected int or decimal string, got %r" % type(n).__name__)


def problem_name(problem):
    """Canonical display name, e.g. 'H_{5,{2,3}}' for 'H:5:2,3'."""
    return _core.problem_name(problem)


def is_prime(n):
    return _core.is_prime(_dec(n))


def factorize(n, seed=0):
    """Prime factorization as a list of (prime, exponent), ascending."""
    return [(int(p), e) for p, e in _core.factorize(_dec(n), seed)]


def padic_split(n, p):
    """(exponent, cofactor) with n = p**exponent * cofactor, p ∤ cofactor."""
    exponent, cofactor = _core.padic_split(_dec(n), _dec(p))
    return exponent, int(cofactor)


def holdout_part(problem, n):
    """(kept, removed) split of n under the problem's retention rule."""
    kept, removed = _core.holdout_part(problem, _dec(n))
    return int(kept), int(removed)


def is_smooth(problem, n):
    return _core.is_smooth(problem, _dec(n))


def g_step(problem, n):
    return int(_core.g_step(problem, _dec(n)))


def t_step(problem, n):
    return int(_core.t_step(problem, _dec(n)))


def is_trivial(problem):
    """None, or the reason string: 'singleton' / 'multiplier_retained'."""
    return _core.is_trivial(problem)


def run_trajectory(problem, n, max_steps=10_000, max_bits=4_096, record=False, seed=0):
    """Full trajectory record as a dict; see the JSON wire format."""
    raw = _core.run_trajectory_json(problem, _dec(n), max_steps, max_bits, record, seed)
    return _json.loads(raw)


def verify_range(problem, lo, hi, max_steps=10_000, max_bits=4_096, workers=1, seed=0):
    """Classify every n in [lo, hi]; returns the verification report dict."""
    raw = _core.verify_range_json(problem, _dec(lo), _dec(hi), max_steps, max_bits,
                                  workers, seed)
    return _json.loads(raw)


def find_cycles(problem, bound, max_steps=10_000, max_bits=4_096, seed=0):
    """All cycles with minimal element up to bound, as report dicts."""
    raw = _core.find_cycles_json(problem, _dec(bound), max_steps, max_bits, seed)
    return _json.loads(raw)


def two_cycle_analytic(problem, seed=0):
    """Analytic 2-combined-step loop scan for a finite holdout problem."""
    return _json.loads(_core.two_cycle_analytic_json(problem, seed))


def survey(multipliers, pool, max_set_size=2, hi=10_000, max_steps=10_000,
           max_bits=4_096, workers=1, seed=0):
    """Scan every multiplier/holdout-subset combination; returns the report."""
    raw = _core.survey_json([_dec(c) for c in multipliers], [_dec(p) for p in pool],
                            max_set_size, _dec(hi), max_steps, max_bits, workers, seed)
    return _json.loads(raw)


def survey_csv(report):
    """CSV rendering of a survey() report dict."""
    return _core.survey_csv(_json.dumps(report))


def run_props(scale="standard"):
    """Run the lemma battery; returns a list of result dicts."""
    return _json.loads(_core.run_props_json(scale))
