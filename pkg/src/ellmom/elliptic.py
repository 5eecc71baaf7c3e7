"""Complete elliptic integrals K, E and their complements on the modulus convention.

K(x) = pi/2 * 2F1(1/2,1/2;1;x^2), E(x) = pi/2 * 2F1(-1/2,1/2;1;x^2);
K'(x) = K(x'), E'(x) = E(x') with x' = sqrt(1-x^2).

Evaluation is by the arithmetic-geometric mean: K = pi / (2*AGM(1, x')),
E from the companion sum of the squared AGM gaps.  Every entry point takes
an optional exact complement so that callers sitting on top of quadrature
nodes never have to form 1-x^2 by cancellation.
"""

from __future__ import annotations

from enum import Enum

from mpmath import mp

from .mpcore import BigReal, ConvergenceError, DomainError, PrecisionContext

__all__ = [
    "EllipticKind",
    "agm",
    "ellk",
    "elle",
    "ellkc",
    "ellec",
    "ellk_imag",
    "elle_imag",
    "quad_transform",
    "ke_pair_mpf",
]


class EllipticKind(Enum):
    K = "K"
    E = "E"
    KC = "Kc"
    EC = "Ec"


_MAX_AGM_ITER = 200

# (prec, modulus, complement) -> (K, E); complement may be None
_ke_cache: dict = {}
_KE_CACHE_MAX = 1 << 19


def agm(a, b):
    """Arithmetic-geometric mean at ambient precision."""
    a, b = mp.mpf(a), mp.mpf(b)
    if a <= 0 or b <= 0:
        raise DomainError("agm requires positive arguments")
    tol = mp.mpf(2) ** (-mp.prec + 4)
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= tol * a:
            return (a + b) / 2
        a, b = (a + b) / 2, mp.sqrt(a * b)
    raise ConvergenceError("agm did not converge")


def _complement_mpf(x):
    """sqrt(1-x^2) as (1-x)(1+x); fine for x not extremely close to 1."""
    return mp.sqrt((1 - x) * (1 + x))


def ke_pair_mpf(k=None, kc=None):
    """(K, E) at modulus k, at ambient precision.

    Exactly one convention matters: whichever of k (modulus) and kc
    (complement) the caller knows exactly should be passed; the other may be
    omitted and is derived.  When only kc is given, the companion seed
    1 - kc^2 is formed from kc directly, so K'(x) near x = 0 (modulus
    rounding to 1) stays fully accurate.  kc = 0 yields (inf, 1).
    """
    if k is None and kc is None:
        raise DomainError("ke_pair_mpf needs a modulus or a complement")
    if kc is None:
        k = mp.mpf(k)
        if k < 0 or k > 1:
            raise DomainError(f"modulus {k} outside [0,1]")
        kc = _complement_mpf(k)
        c0sq = k * k
    elif k is None:
        kc = mp.mpf(kc)
        if kc < 0 or kc > 1:
            raise DomainError(f"complement {kc} outside [0,1]")
        c0sq = (1 - kc) * (1 + kc)
        k = mp.sqrt(c0sq)
    else:
        k, kc = mp.mpf(k), mp.mpf(kc)
        if k < 0 or k > 1:
            raise DomainError(f"modulus {k} outside [0,1]")
        c0sq = k * k
    key = (mp.prec, k, kc)
    hit = _ke_cache.get(key)
    if hit is not None:
        return hit
    if kc == 0:
        result = (mp.inf, mp.mpf(1))
    else:
        a, b = mp.mpf(1), kc
        csum = c0sq / 2  # sum of 2^(n-1) c_n^2, n = 0 term
        pow2 = mp.mpf(1)
        # past the quadratic phase the AGM error is ~c^2, so stopping at
        # c ~ a*2^(-prec+8) leaves error far below working eps; the stall
        # check catches c bottoming out at rounding noise
        tiny = mp.mpf(2) ** (-mp.prec + 8)
        prev_c = None
        for _ in range(_MAX_AGM_ITER):
            c = (a - b) / 2
            a, b = (a + b) / 2, mp.sqrt(a * b)
            pow2 *= 2
            csum += pow2 / 2 * c * c
            if c < tiny * a or (prev_c is not None and c >= prev_c):
                break
            prev_c = c
        else:
            raise ConvergenceError("elliptic AGM did not converge")
        K = mp.pi / (2 * a)
        result = (K, K * (1 - csum))
    if len(_ke_cache) > _KE_CACHE_MAX:
        _ke_cache.clear()
    _ke_cache[key] = result
    return result


def _check_unit_interval(x, lo_open=False, hi_open=False, name="x"):
    if x < 0 or (lo_open and x == 0):
        raise DomainError(f"{name}={x} below domain")
    if x > 1 or (hi_open and x == 1):
        raise DomainError(f"{name}={x} outside domain")


def ellk(x, ctx: PrecisionContext, complement=None) -> BigReal:
    """K(x) for 0 <= x < 1 (logarithmic singularity at x = 1)."""
    with ctx.workprec():
        xv = ctx.mpf(x)
        _check_unit_interval(xv, hi_open=True)
        K, _ = ke_pair_mpf(xv, None if complement is None else ctx.mpf(complement))
        return ctx.bigreal(K)


def elle(x, ctx: PrecisionContext, complement=None) -> BigReal:
    """E(x) for 0 <= x <= 1; E(1) = 1 exactly."""
    with ctx.workprec():
        xv = ctx.mpf(x)
        _check_unit_interval(xv)
        _, E = ke_pair_mpf(xv, None if complement is None else ctx.mpf(complement))
        return ctx.bigreal(E)


def ellkc(x, ctx: PrecisionContext) -> BigReal:
    """K'(x) = K(sqrt(1-x^2)) for 0 < x <= 1; the modulus complement is x itself."""
    with ctx.workprec():
        xv = ctx.mpf(x)
        _check_unit_interval(xv, lo_open=True)
        K, _ = ke_pair_mpf(kc=xv)  # complement of x' is exactly x
        return ctx.bigreal(K)


def ellec(x, ctx: PrecisionContext) -> BigReal:
    """E'(x) = E(sqrt(1-x^2)) for 0 <= x <= 1."""
    with ctx.workprec():
        xv = ctx.mpf(x)
        _check_unit_interval(xv)
        _, E = ke_pair_mpf(kc=xv)
        return ctx.bigreal(E)


def ellk_imag(y, ctx: PrecisionContext) -> BigReal:
    """K(iy) for y >= 0, reduced to K(sqrt(k/(k+1)))/sqrt(k+1) with k = y^2."""
    with ctx.workprec():
        yv = ctx.mpf(y)
        if yv < 0:
            raise DomainError(f"y={yv} must be nonnegative")
        k = yv * yv
        modulus = mp.sqrt(k / (k + 1))
        # complement of the reduced modulus is exactly 1/sqrt(k+1)
        K, _ = ke_pair_mpf(modulus, 1 / mp.sqrt(k + 1))
        return ctx.bigreal(K / mp.sqrt(k + 1))


def elle_imag(y, ctx: PrecisionContext) -> BigReal:
    """E(iy) for y >= 0, reduced to sqrt(k+1)*E(sqrt(k/(k+1))) with k = y^2."""
    with ctx.workprec():
        yv = ctx.mpf(y)
        if yv < 0:
            raise DomainError(f"y={yv} must be nonnegative")
        k = yv * yv
        modulus = mp.sqrt(k / (k + 1))
        _, E = ke_pair_mpf(modulus, 1 / mp.sqrt(k + 1))
        return ctx.bigreal(mp.sqrt(k + 1) * E)


def quad_transform(which: str, x, ctx: PrecisionContext):
    """Both sides of one of the four quadratic transforms, evaluated independently.

    k1:  K'(x) = 2/(1+x) K((1-x)/(1+x))
    k2:  K(x)  = 1/(1+x) K(2 sqrt(x)/(1+x))
    e1:  E'(x) = (1+x) E((1-x)/(1+x)) - x K'(x)
    e2:  E(x)  = (1+x)/2 E(2 sqrt(x)/(1+x)) + (1-x^2)/2 K(x)
    """
    with ctx.workprec():
        xv = ctx.mpf(x)
        if not 0 < xv < 1:
            raise DomainError(f"quad_transform needs x in (0,1), got {xv}")
        up = (1 - xv) / (1 + xv)
        down = 2 * mp.sqrt(xv) / (1 + xv)
        if which == "k1":
            lhs = ke_pair_mpf(kc=xv)[0]
            rhs = 2 / (1 + xv) * ke_pair_mpf(up)[0]
        elif which == "k2":
            lhs = ke_pair_mpf(xv)[0]
            rhs = 1 / (1 + xv) * ke_pair_mpf(down)[0]
        elif which == "e1":
            lhs = ke_pair_mpf(kc=xv)[1]
            rhs = (1 + xv) * ke_pair_mpf(up)[1] - xv * ke_pair_mpf(kc=xv)[0]
        elif which == "e2":
            lhs = ke_pair_mpf(xv)[1]
            rhs = (1 + xv) / 2 * ke_pair_mpf(down)[1] + (1 - xv * xv) / 2 * ke_pair_mpf(xv)[0]
        else:
            raise DomainError(f"unknown transform {which!r}; expected k1, k2, e1 or e2")
        return ctx.bigreal(lhs), ctx.bigreal(rhs)
