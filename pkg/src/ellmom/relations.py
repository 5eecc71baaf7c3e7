"""Integer relation search (PSLQ) with mandatory re-verification.

Wraps mpmath's PSLQ behind a query type that enforces a precision floor,
bounds the coefficients, and re-checks any detected relation at doubled
precision (through a refine callback when the values can be recomputed,
or with the full stored digits otherwise) before reporting it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .mpcore import BigReal, PrecisionError, DomainError, workdps

__all__ = ["RelationQuery", "RelationResult", "pslq", "min_precision"]


def min_precision(nvalues: int, max_coeff_bits: int) -> int:
    """Heuristic floor on the digits PSLQ needs to be trustworthy."""
    return int(20 + 5 * nvalues * max_coeff_bits / 3 + 1)


@dataclass
class RelationQuery:
    values: list
    max_coeff_bits: int = 20
    precision: int = 50
    refine: object = None  # optional callable digits -> list of values


@dataclass
class RelationResult:
    coefficients: list
    residual: BigReal
    confidence: float
    verified_digits: int


def _value_mpf(v):
    return v.value if isinstance(v, BigReal) else mp.mpf(v)


def pslq(query: RelationQuery) -> RelationResult | None:
    """Find an integer vector v with sum(v_i x_i) ~ 0, or None.

    Refuses (PrecisionError, with the required floor in the message) when
    query.precision is below the heuristic floor.  A candidate relation is
    only reported after its residual at doubled precision stays below
    10^-(precision/2); the confidence field is
    -log10(residual) - log10(coefficient norm).
    """
    vals = list(query.values)
    if len(vals) < 2:
        raise DomainError("pslq needs at least two values")
    floor = min_precision(len(vals), query.max_coeff_bits)
    if query.precision < floor:
        raise PrecisionError(
            f"pslq needs precision >= {floor} digits for {len(vals)} values with "
            f"{query.max_coeff_bits}-bit coefficients; got {query.precision}"
        )
    with workdps(query.precision + 10):
        xs = [_value_mpf(v) for v in vals]
        tol = mp.mpf(10) ** (-query.precision + 4)
        coeffs = mpmath.pslq(xs, tol=tol, maxcoeff=1 << query.max_coeff_bits, maxsteps=20000)
    if coeffs is None:
        return None

    verify_digits = 2 * query.precision
    with workdps(verify_digits + 10):
        if query.refine is not None:
            ys = [_value_mpf(v) for v in query.refine(verify_digits)]
        else:
            ys = [_value_mpf(v) for v in vals]
        residual = abs(mp.fsum(c * y for c, y in zip(coeffs, ys)))
        norm = mp.sqrt(mp.fsum(mp.mpf(c) ** 2 for c in coeffs))
        if residual > mp.mpf(10) ** (-(query.precision // 2)):
            return None
        conf = float(-mp.log10(residual) - mp.log10(norm)) if residual > 0 else float("inf")
    return RelationResult(
        coefficients=list(coeffs),
        residual=BigReal(residual, max(15, query.precision // 2)),
        confidence=conf,
        verified_digits=verify_digits if query.refine is not None else query.precision,
    )
