"""Fourier sine-series coefficients of K(sin t) and E(sin t).

K(sin t) expands over sin((4n+1)t) with coefficients Gamma(n+1/2)^2 /
Gamma(n+1)^2; E(sin t) needs both the sin((4n+1)t) and sin((4n+3)t)
families.  The numeric check integrates (2/pi) f(sin t) sin(mt) over
(0, pi), folded onto (0, pi/2) by the t -> pi - t symmetry (valid for
odd m, which covers every nonzero coefficient).
"""

from __future__ import annotations

from mpmath import mp

from .elliptic import ke_pair_mpf
from .mpcore import BigReal, DomainError, PrecisionContext, gamma_mpf
from .quadrature import integrate

__all__ = ["fourier_coeff", "fourier_integral"]


def fourier_coeff(kind: str, n: int, ctx: PrecisionContext):
    """Closed-form sine coefficients at index n >= 0.

    kind "K": the sin((4n+1)t) coefficient, as a BigReal.
    kind "E": the pair (sin((4n+1)t) coefficient, sin((4n+3)t) coefficient).
    """
    if n < 0:
        raise DomainError(f"fourier_coeff needs n >= 0, got {n}")
    with ctx.workprec():
        ratio = (gamma_mpf(n + mp.mpf(1) / 2) / gamma_mpf(mp.mpf(n + 1))) ** 2
        if kind == "K":
            return ctx.bigreal(ratio)
        if kind == "E":
            c1 = ratio / 2
            c3 = (n + mp.mpf(1) / 2) / (2 * (n + 1)) * ratio
            return ctx.bigreal(c1), ctx.bigreal(c3)
    raise DomainError(f"unknown kind {kind!r}; expected 'K' or 'E'")


def fourier_integral(kind: str, m: int, ctx: PrecisionContext) -> BigReal:
    """(2/pi) * integral over (0, pi) of f(sin t) sin(m t) dt, m odd.

    f is K or E.  Odd m allows folding to (4/pi) * integral over (0, pi/2),
    keeping the K singularity at t = pi/2 on an interval endpoint where
    tanh-sinh handles it.
    """
    if kind not in ("K", "E"):
        raise DomainError(f"unknown kind {kind!r}; expected 'K' or 'E'")
    if m < 1 or m % 2 == 0:
        raise DomainError(f"fourier_integral needs odd m >= 1, got {m}")
    pick = 0 if kind == "K" else 1

    def f(p):
        s = mp.cos(p.dhi)
        c = mp.sin(p.dhi)
        val = ke_pair_mpf(s, c)[pick]
        return val * mp.sin(m * p.x)

    with ctx.workprec():
        res = integrate(f, 0, mp.pi / 2, ctx)
        return ctx.bigreal(4 / mp.pi * res.value.value)
