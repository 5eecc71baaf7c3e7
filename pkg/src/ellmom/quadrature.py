"""Tanh-sinh (double-exponential) quadrature, the package's independent oracle.

Integrands receive a QuadPoint carrying, besides the abscissa, the exact
distances to both interval endpoints.  The distances are produced directly
from the double-exponential transform (never by subtracting nearly equal
numbers), so endpoint-singular integrands such as K'(x) near 0 or 1/x' near 1
can be evaluated to full relative precision arbitrarily close to the ends.

A vectorized float64 product-grid variant handles the unit-cube triple
integrals (low-precision sanity checks by design).
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .mpcore import BigReal, ConvergenceError, PrecisionContext

__all__ = ["QuadPoint", "QuadResult", "integrate", "integrate_unit", "integrate3d"]

QuadPoint = namedtuple("QuadPoint", "x dlo dhi")

DEFAULT_MAX_LEVEL = 12
_BASE_LEVEL = 2

# (prec_bits, level) -> list of (d, w) for the new positive-t nodes at that level
_node_cache: dict = {}


@dataclass
class QuadResult:
    value: BigReal
    error_estimate: BigReal
    levels_used: int
    evaluations: int


def _t_max(working_digits):
    # weight decays like exp(-pi/2 * sinh t); leave room for d^(-3/4)-type
    # endpoint growth and log powers in the integrand
    return math.asinh(3.0 * (working_digits + 20))


def _new_nodes(level, working_digits):
    """(d, w) pairs for positive t nodes new at `level` (odd multiples of h).

    d = 1 - tanh(u) with u = (pi/2) sinh(t), computed as 2/(e^(2u)+1);
    w = (pi/2) cosh(t) sech^2(u) = (pi/2) cosh(t) d (2-d).
    Level _BASE_LEVEL includes all multiples (plus t = 0).
    """
    key = (mp.prec, level)
    hit = _node_cache.get(key)
    if hit is not None:
        return hit
    h = mp.mpf(1) / (1 << level)
    tmax = _t_max(working_digits)
    jmax = int(tmax / h) + 1
    if level == _BASE_LEVEL:
        js = range(0, jmax + 1)
    else:
        js = range(1, jmax + 1, 2)
    half_pi = mp.pi / 2
    nodes = []
    for j in js:
        t = j * h
        u = half_pi * mp.sinh(t)
        d = 2 / (mp.exp(2 * u) + 1)
        w = half_pi * mp.cosh(t) * d * (2 - d)
        if w < mp.mpf(10) ** (-(working_digits + 40)) and j > 0:
            break
        nodes.append((d, w))
    _node_cache[key] = nodes
    return nodes


def _level_sum(f, a, b, half, level, working_digits):
    """h-free weighted sum of f over the nodes new at `level`; also eval count."""
    nodes = _new_nodes(level, working_digits)
    total = mp.mpf(0)
    evals = 0
    width = 2 * half
    start = 0
    if level == _BASE_LEVEL:
        d0, w0 = nodes[0]
        mid_lo = half * d0  # d0 = 1 at t = 0
        total += w0 * f(QuadPoint(a + mid_lo, mid_lo, width - mid_lo))
        evals += 1
        start = 1
    for d, w in nodes[start:]:
        dist = half * d
        far = width - dist
        total += w * f(QuadPoint(b - dist, far, dist))
        total += w * f(QuadPoint(a + dist, dist, far))
        evals += 2
    return total, evals


def integrate(f, a, b, ctx: PrecisionContext, max_level=DEFAULT_MAX_LEVEL) -> QuadResult:
    """Integrate f over (a, b) to about ctx.digits digits by level doubling.

    f maps a QuadPoint to an mpf-compatible value and may be endpoint-singular
    of algebraic-logarithmic type.  Raises ConvergenceError (with the last two
    level values) if successive levels refuse to agree within max_level.
    """
    with ctx.workprec():
        av, bv = ctx.mpf(a), ctx.mpf(b)
        if not av < bv:
            raise ConvergenceError(f"empty or reversed interval ({av}, {bv})")
        half = (bv - av) / 2
        wd = ctx.working
        tol = mp.mpf(10) ** (-(ctx.digits + 3))
        raw, evals = _level_sum(f, av, bv, half, _BASE_LEVEL, wd)
        prev = half * raw / (1 << _BASE_LEVEL)
        prev_prev = None
        for level in range(_BASE_LEVEL + 1, max_level + 1):
            new, ev = _level_sum(f, av, bv, half, level, wd)
            evals += ev
            value = prev / 2 + half * new / (1 << level)
            diff = abs(value - prev)
            if diff < tol * max(mp.mpf(1), abs(value)) and level > _BASE_LEVEL + 1:
                return QuadResult(
                    value=ctx.bigreal(value),
                    error_estimate=ctx.bigreal(diff),
                    levels_used=level,
                    evaluations=evals,
                )
            prev_prev, prev = prev, value
        raise ConvergenceError(
            f"tanh-sinh did not converge by level {max_level}: "
            f"last levels {mp.nstr(prev_prev, 20)} and {mp.nstr(prev, 20)}"
        )


def integrate_unit(f, ctx: PrecisionContext, max_level=DEFAULT_MAX_LEVEL) -> QuadResult:
    """Integrate f over (0, 1)."""
    return integrate(f, 0, 1, ctx, max_level=max_level)


# ---------------------------------------------------------------------------
# Triple integrals over the unit cube (Zudilin-form kernels)
# ---------------------------------------------------------------------------


def _nodes_3d(level):
    """float64 tanh-sinh nodes on (0,1): arrays (x, dx, w) with dx = 1-x exact."""
    h = 1.0 / (1 << level)
    tmax = math.asinh(2.0 * 19 * math.log(10) / math.pi) + 1.0
    js = np.arange(-int(tmax / h), int(tmax / h) + 1)
    u = 0.5 * math.pi * np.sinh(js * h)
    with np.errstate(over="ignore"):
        x = 1.0 / (1.0 + np.exp(-2 * u))  # (1 + tanh u)/2, stable near 0
        d = 1.0 / (1.0 + np.exp(2 * u))  # 1 - x, stable near 1
        w = 0.25 * math.pi * np.cosh(js * h) / np.cosh(u) ** 2 * h
    keep = (w > 1e-320) & (x > 0.0) & (d > 0.0)
    return x[keep], d[keep], w[keep]


def _zudilin_kernel_sum(h_params, level):
    """Product tanh-sinh sum of the Zudilin integrand at one refinement level."""
    h0, h1, h2, h3, h4, h5 = (float(v) for v in h_params)
    x, dx, wx = _nodes_3d(level)
    n = x.size

    def axis_weight(p_var, p_dist):
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            out = wx * np.power(x, p_var) * np.power(dx, p_dist)
        out[~np.isfinite(out)] = 0.0
        return out

    px = axis_weight(h2 - 1.0, h0 - h2 - h3)
    py = axis_weight(h3 - 1.0, h0 - h3 - h4)
    pz = axis_weight(h4 - 1.0, h0 - h4 - h5)

    y, dy = x, dx
    total = 0.0
    evals = 0
    for k in range(n):
        if pz[k] == 0.0:
            continue
        zk, dzk = x[k], dx[k]
        # 1 - x(1 - y(1-z)): u = 1-y(1-z) = dy + y z;  1 - x u = y dz + dx u
        u = dy + y * zk
        coupling = np.outer(dx, u) + (y * dzk)[None, :]
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            slab = np.power(coupling, -h1)
            slab *= px[:, None]
            slab *= py[None, :]
        slab[~np.isfinite(slab)] = 0.0
        total += pz[k] * float(slab.sum())
        evals += n * n
    return total, evals


def integrate3d(h_params, target=1e-7, max_level=7):
    """Triple integral over the unit cube of the Zudilin kernel with parameters h0..h5.

    Kernel: x^(h2-1) y^(h3-1) z^(h4-1) (1-x)^(h0-h2-h3) (1-y)^(h0-h3-h4)
    (1-z)^(h0-h4-h5) / (1 - x(1-y(1-z)))^h1.  Runs in float64 (this is a
    low-precision sanity check by design); level-doubles until successive
    values agree to `target`.
    """
    if len(h_params) != 6:
        raise ValueError("integrate3d expects six parameters h0..h5")
    prev = None
    evals = 0
    for level in range(3, max_level + 1):
        value, ev = _zudilin_kernel_sum(h_params, level)
        evals += ev
        if prev is not None:
            diff = abs(value - prev)
            if diff < target * max(1.0, abs(value)):
                ctx = PrecisionContext(15, 10)
                return QuadResult(
                    value=ctx.bigreal(value),
                    error_estimate=ctx.bigreal(diff),
                    levels_used=level,
                    evaluations=evals,
                )
        prev = value
    raise ConvergenceError(f"3d tanh-sinh did not reach {target} by level {max_level}")
