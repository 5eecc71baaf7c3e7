"""Generalized hypergeometric series pFq, including slowly convergent unit-argument cases.

The unit-argument engine sums N explicit terms and then sums the tail in
closed form: the Poincare expansion coefficients of t_k * k^(1+s) are
obtained exactly (rational recursion driven by the term ratio, which is a
rational function of k), and each power of the expansion contributes a
Hurwitz zeta value.  The error estimate is the first omitted expansion term;
budgets are doubled until it clears the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from mpmath import mp

from .mpcore import (
    BigReal,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    gamma_mpf,
    hurwitz_zeta_mpf,
)

__all__ = [
    "HypSpec",
    "pochhammer",
    "pfq",
    "pfq_mpf",
    "gauss_2f1_unit",
    "dixon_3f2",
]

_MAX_DIRECT_TERMS = 2_000_000
_MAX_EXPANSION_ORDER = 64


@dataclass(frozen=True)
class HypSpec:
    """Upper/lower parameter lists and argument of a pFq series."""

    upper: tuple
    lower: tuple
    z: object = 1

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(_as_param(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(_as_param(b) for b in self.lower))
        object.__setattr__(self, "z", _as_param(self.z))

    @property
    def convergence_margin(self):
        """sum(lower) - sum(upper); must be positive at z = 1."""
        return sum(self.lower, start=Fraction(0)) - sum(self.upper, start=Fraction(0))

    @property
    def terminating_at(self):
        """Smallest termination index if some upper parameter is in {0,-1,-2,...}."""
        cut = None
        for a in self.upper:
            if isinstance(a, Fraction) and a.denominator == 1 and a <= 0:
                k = -int(a)
                cut = k if cut is None else min(cut, k)
        return cut


def _as_param(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    return v  # mpf and friends pass through


def pochhammer(a, n, ctx: PrecisionContext | None = None):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1);  (a)_0 = 1.

    Exact (Fraction) for rational a; BigReal otherwise (ctx required).
    """
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    a = _as_param(a)
    if isinstance(a, Fraction):
        out = Fraction(1)
        for i in range(n):
            out *= a + i
        return out
    if ctx is None:
        raise DomainError("pochhammer with non-rational a requires a PrecisionContext")
    with ctx.workprec():
        out = mp.mpf(1)
        av = ctx.mpf(a)
        for i in range(n):
            out *= av + i
        return ctx.bigreal(out)


# ---------------------------------------------------------------------------
# Exact asymptotics of the term sequence at z = 1
# ---------------------------------------------------------------------------


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return out


def _series_div(num, den, order):
    """num(u)/den(u) as a power series to `order` (den[0] != 0)."""
    num = list(num) + [Fraction(0)] * max(0, order + 1 - len(num))
    den = list(den) + [Fraction(0)] * max(0, order + 1 - len(den))
    inv0 = Fraction(1) / den[0]
    out = []
    for m in range(order + 1):
        acc = num[m]
        for j in range(1, m + 1):
            acc -= den[j] * out[m - j]
        out.append(acc * inv0)
    return out


def _binomial_series(sigma: Fraction, order):
    """(1+u)^sigma coefficients to `order`."""
    out = [Fraction(1)]
    for m in range(1, order + 1):
        out.append(out[-1] * (sigma - m + 1) / m)
    return out


def _asymptotic_coeffs(upper, lower, sigma: Fraction, order):
    """Coefficients e_j (e_0 = 1) of t_k ~ C k^(-sigma) (1 + e_1/k + e_2/k^2 + ...).

    Derived from t_{k+1}/t_k = R(k): with F(k) = t_k k^sigma and u = 1/k,
    F(k+1) = F(k) G(u) where G(u) = R(1/u)(1+u)^sigma, which pins every
    coefficient after the leading one.
    """
    num = [Fraction(1)]
    for a in upper:
        num = _poly_mul(num, [Fraction(1), a])
    den = [Fraction(1)]
    for b in lower:
        den = _poly_mul(den, [Fraction(1), b])
    den = _poly_mul(den, [Fraction(1), Fraction(1)])  # the k! factor
    g = _series_div(num, den, order + 1)
    g = _poly_mul(g, _binomial_series(sigma, order + 1))[: order + 2]

    e = [Fraction(1)]
    for p in range(2, order + 2):
        acc = Fraction(0)
        for j in range(p - 1):
            # C(-j, p-j) = (-1)^(p-j) C(p-1, p-j) for j >= 1; C(0, m>0) = 0
            binom_neg = Fraction((-1) ** (p - j) * comb(p - 1, p - j)) if j > 0 else Fraction(0)
            acc += e[j] * (binom_neg - g[p - j])
        e.append(acc / (p - 1 + g[1]))
    return e


def _tail_zeta_sum(e, sigma_m, C, N):
    """C * sum_j e_j zeta(sigma+j, N+1), truncated at the smallest term.

    Returns (tail, error_estimate); the estimate is the first omitted term.
    """
    tail = mp.mpf(0)
    prev_mag = None
    grew = 0
    err = None
    for j, ej in enumerate(e):
        term = mp.mpf(ej.numerator) / ej.denominator * hurwitz_zeta_mpf(sigma_m + j, N + 1)
        mag = abs(term)
        if prev_mag is not None and mag > prev_mag:
            grew += 1
            if grew >= 2 or j >= 6:
                err = mag * abs(C)
                break
        else:
            grew = 0
        tail += term
        prev_mag = mag
    if err is None:
        err = (prev_mag if prev_mag is not None else mp.mpf(1)) * abs(C) / max(N, 2)
    return C * tail, err


def _pfq_unit(upper, lower, working, target_eps, nmin=None):
    """Sum pFq(...; 1) with the zeta-accelerated tail.  Rational parameters only."""
    sigma = Fraction(1) + sum(lower, start=Fraction(0)) - sum(upper, start=Fraction(0))
    order = min(_MAX_EXPANSION_ORDER, max(24, working))
    e = _asymptotic_coeffs(upper, lower, sigma, order)
    sigma_m = mp.mpf(sigma.numerator) / sigma.denominator

    au = [mp.mpf(a.numerator) / a.denominator for a in upper]
    bl = [mp.mpf(b.numerator) / b.denominator for b in lower]

    N = nmin if nmin is not None else max(400, 16 * working)
    t = mp.mpf(1)
    total = mp.mpf(1)
    k = 0
    for _ in range(6):
        while k < N:
            ratio = mp.mpf(1)
            for a in au:
                ratio *= a + k
            for b in bl:
                ratio /= b + k
            ratio /= k + 1
            t *= ratio
            total += t
            k += 1
        phi = mp.mpf(0)
        for j in range(len(e) - 1, -1, -1):
            phi = phi / N + mp.mpf(e[j].numerator) / e[j].denominator
        C = t * mp.mpf(N) ** sigma_m / phi
        tail, err = _tail_zeta_sum(e, sigma_m, C, N)
        scale = max(mp.mpf(1), abs(total + tail))
        if err < target_eps * scale:
            return total + tail
        N *= 2
    raise ConvergenceError(
        f"unit-argument pFq did not reach target accuracy (last error estimate {err})"
    )


# ---------------------------------------------------------------------------
# Public evaluation
# ---------------------------------------------------------------------------


def _terminating_sum_exact(upper, lower, z: Fraction, nterms):
    total = Fraction(0)
    t = Fraction(1)
    for k in range(nterms + 1):
        total += t
        ratio = Fraction(1)
        for a in upper:
            ratio *= a + k
        for b in lower:
            if b + k == 0:
                raise DomainError(
                    f"lower parameter {b} hits a nonpositive integer before termination"
                )
            ratio /= b + k
        t *= ratio * z / (k + 1)
    return total


def pfq_mpf(upper, lower, z, working, target_digits):
    """pFq value as an mpf at `working` digits; see pfq() for the contract."""
    spec = HypSpec(tuple(upper), tuple(lower), z)
    eps = mp.mpf(10) ** (-target_digits)
    cut = spec.terminating_at
    if cut is not None:
        if all(isinstance(p, Fraction) for p in spec.upper + spec.lower) and isinstance(
            spec.z, Fraction
        ):
            exact = _terminating_sum_exact(spec.upper, spec.lower, spec.z, cut)
            return mp.mpf(exact.numerator) / exact.denominator
        return _direct_sum(spec, eps, hard_stop=cut + 1)

    zv = spec.z if not isinstance(spec.z, Fraction) else mp.mpf(spec.z.numerator) / spec.z.denominator
    if zv == 1:
        if spec.convergence_margin <= 0:
            raise DomainError(
                "divergent pFq at z=1: sum(lower) - sum(upper) = "
                f"{spec.convergence_margin} <= 0"
            )
        if not all(isinstance(p, Fraction) for p in spec.upper + spec.lower):
            raise DomainError("unit-argument pFq requires rational parameters")
        for b in spec.lower:
            if b.denominator == 1 and b <= 0:
                raise DomainError(f"nonpositive integer lower parameter {b}")
        return _pfq_unit(spec.upper, spec.lower, working, mp.mpf(10) ** (-target_digits))
    if abs(zv) >= 1:
        raise DomainError(f"pFq only evaluated for |z| < 1 or z = 1, got z = {zv}")
    return _direct_sum(spec, eps)


def _direct_sum(spec, eps, hard_stop=None):
    au = [mp.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mp.mpf(a) for a in spec.upper]
    bl = [mp.mpf(b.numerator) / b.denominator if isinstance(b, Fraction) else mp.mpf(b) for b in spec.lower]
    for b in spec.lower:
        if isinstance(b, Fraction) and b.denominator == 1 and b <= 0:
            if hard_stop is None or -int(b) < hard_stop - 1:
                raise DomainError(f"nonpositive integer lower parameter {b}")
    zv = spec.z if not isinstance(spec.z, Fraction) else mp.mpf(spec.z.numerator) / spec.z.denominator
    t = mp.mpf(1)
    total = mp.mpf(0)
    k = 0
    settle = max((abs(p) for p in au + bl), default=mp.mpf(1)) * 4 + 16
    while True:
        total += t
        if hard_stop is not None and k + 1 >= hard_stop + 1:
            return total
        ratio = mp.mpf(1)
        for a in au:
            ratio *= a + k
        for b in bl:
            ratio /= b + k
        t *= ratio * zv / (k + 1)
        k += 1
        if hard_stop is None and k > settle and abs(t) < eps * max(mp.mpf(1), abs(total)) * (1 - abs(zv)):
            return total
        if k > _MAX_DIRECT_TERMS:
            raise ConvergenceError(f"pFq direct summation exceeded {_MAX_DIRECT_TERMS} terms")


def pfq(spec, ctx: PrecisionContext) -> BigReal:
    """Evaluate a pFq series to ctx.digits digits.

    Accepts a HypSpec or an (upper, lower, z) triple.  Terminating series are
    summed exactly; |z| < 1 directly; z = 1 through the accelerated tail
    (requires sum(lower) - sum(upper) > 0).
    """
    if not isinstance(spec, HypSpec):
        spec = HypSpec(*spec)
    with ctx.workprec():
        return ctx.bigreal(pfq_mpf(spec.upper, spec.lower, spec.z, ctx.working, ctx.digits + 5))


def gauss_2f1_unit(a, b, c, ctx: PrecisionContext) -> BigReal:
    """2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)), c-a-b > 0."""
    with ctx.workprec():
        av, bv, cv = (ctx.mpf(v) for v in (a, b, c))
        if cv - av - bv <= 0:
            raise DomainError(f"Gauss sum needs c-a-b > 0, got {cv - av - bv}")
        value = gamma_mpf(cv) * gamma_mpf(cv - av - bv) / (gamma_mpf(cv - av) * gamma_mpf(cv - bv))
        return ctx.bigreal(value)


def dixon_3f2(a, b, c, ctx: PrecisionContext) -> BigReal:
    """Well-poised 3F2(a,b,c; 1+a-b, 1+a-c; 1) by Dixon's theorem.

    Terminating instances (a a nonpositive even integer) are summed exactly;
    otherwise requires 1 + a/2 - b - c > 0 and evaluates the Gamma product.
    """
    af, bf, cf = (_as_param(v) for v in (a, b, c))
    if isinstance(af, Fraction) and af.denominator == 1 and af <= 0:
        spec = HypSpec((af, bf, cf), (1 + af - bf, 1 + af - cf), 1)
        return pfq(spec, ctx)
    with ctx.workprec():
        av, bv, cv = (ctx.mpf(v) for v in (a, b, c))
        if 1 + av / 2 - bv - cv <= 0:
            raise DomainError("Dixon sum needs 1 + a/2 - b - c > 0")
        try:
            value = (
                gamma_mpf(1 + av / 2)
                * gamma_mpf(1 + av - bv)
                * gamma_mpf(1 + av - cv)
                * gamma_mpf(1 + av / 2 - bv - cv)
                / (
                    gamma_mpf(1 + av)
                    * gamma_mpf(1 + av / 2 - bv)
                    * gamma_mpf(1 + av / 2 - cv)
                    * gamma_mpf(1 + av - bv - cv)
                )
            )
        except DomainError as exc:
            raise DomainError(f"parameters outside Dixon's constellation: {exc}") from exc
        return ctx.bigreal(value)
