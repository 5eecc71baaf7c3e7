"""Closed-form moments of products of K, E, K', E', and the exact odd-moment engine.

Single-factor moments reduce to Gamma prefactors times 3F2(...;1); the four
mixed products to 4F3(...;1); the three complementary products to 7F6(...;1)
with 2^(4n) prefactors.  Odd moments of the six zeta(3)-class products are
propagated as exact rationals from two hard-coded ignition values, through
the three-term recurrences, the rec1 linkage, and the x -> x' binomial swap;
odd moments of K K' are exact rational multiples of pi^3 through h(n).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from mpmath import mp

from .elliptic import ke_pair_mpf
from .hyper import HypSpec, pfq_mpf
from .mpcore import BigReal, DomainError, PrecisionContext, gamma_mpf
from .quadrature import QuadResult, integrate_unit

__all__ = [
    "MomentSpec",
    "parse_product",
    "Zeta3Linear",
    "Pi3Rational",
    "RecurrenceDef",
    "REC_K2",
    "REC_E2",
    "REC_KC2",
    "REC_G",
    "moment_single",
    "moment_mixed",
    "moment_comp_pair",
    "moment_quadrature",
    "moment_closed_form",
    "h_seq",
    "odd_moment_exact",
    "recurrence_residual",
    "gf_check",
    "export_rows",
]

_KINDS = ("K", "E", "Kc", "Ec")
MIXED_PAIRS = ("KKc", "EKc", "KEc", "EEc")
COMP_PAIRS = ("EcEc", "EcKc", "EcKc_alt", "KcKc")
ZETA3_PRODUCTS = ("K2", "E2", "KE", "Kc2", "Ec2", "KcEc")


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise DomainError(f"expected a rational, got {v!r}")


@dataclass(frozen=True)
class MomentSpec:
    """Exponents of K, E, K', E', the power n of x and optional power m of x'."""

    aK: int = 0
    aE: int = 0
    aKc: int = 0
    aEc: int = 0
    n: Fraction = Fraction(0)
    m: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "n", _frac(self.n))
        object.__setattr__(self, "m", _frac(self.m))
        if min(self.aK, self.aE, self.aKc, self.aEc) < 0:
            raise DomainError("negative elliptic exponent")
        if not 1 <= self.degree <= 4:
            raise DomainError(f"total elliptic degree {self.degree} outside 1..4")

    @property
    def degree(self) -> int:
        return self.aK + self.aE + self.aKc + self.aEc

    def product_key(self):
        """Canonical token for the exact engine, or None if unsupported."""
        combo = (self.aK, self.aE, self.aKc, self.aEc)
        return {
            (2, 0, 0, 0): "K2",
            (0, 2, 0, 0): "E2",
            (1, 1, 0, 0): "KE",
            (0, 0, 2, 0): "Kc2",
            (0, 0, 0, 2): "Ec2",
            (0, 0, 1, 1): "KcEc",
            (1, 0, 1, 0): "KKc",
        }.get(combo)

    def __str__(self):
        parts = []
        for name, a in zip(_KINDS, (self.aK, self.aE, self.aKc, self.aEc)):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return " ".join(parts)


def parse_product(text: str) -> MomentSpec:
    """Parse a product such as "K Kc", "Kc^2" or "E*K" into a MomentSpec."""
    counts = dict.fromkeys(_KINDS, 0)
    for token in text.replace("*", " ").split():
        name, _, power = token.partition("^")
        if name not in counts:
            raise DomainError(f"unknown elliptic factor {name!r} in {text!r}")
        try:
            p = int(power) if power else 1
        except ValueError:
            raise DomainError(f"bad exponent in token {token!r}") from None
        if p < 1:
            raise DomainError(f"exponent must be positive in {token!r}")
        counts[name] += p
    return MomentSpec(aK=counts["K"], aE=counts["E"], aKc=counts["Kc"], aEc=counts["Ec"])


# ---------------------------------------------------------------------------
# Closed forms: Gamma prefactor x pFq(...; 1)
# ---------------------------------------------------------------------------


def _gam(q: Fraction):
    return gamma_mpf(mp.mpf(q.numerator) / q.denominator)


def moment_single(kind, m, n, ctx: PrecisionContext) -> BigReal:
    """Closed form of the weighted moment of one elliptic integral.

    Computes the integral over (0,1) of x'^n x^m f(x) dx for f in
    {K, E, Kc, Ec}; requires m > -1 and n > -2.  Complementary kinds reduce
    by x -> x' to the plain formulas with (m, n) -> (n+1, m-1).
    """
    kind = kind.value if hasattr(kind, "value") else str(kind)
    if kind not in _KINDS:
        raise DomainError(f"unknown kind {kind!r}")
    m, n = _frac(m), _frac(n)
    if m <= -1 or n <= -2:
        raise DomainError(f"divergent moment: need m > -1 and n > -2, got m={m}, n={n}")
    if kind in ("Kc", "Ec"):
        kind = "K" if kind == "Kc" else "E"
        m, n = n + 1, m - 1
    first = Fraction(1, 2) if kind == "K" else Fraction(-1, 2)
    upper = (first, Fraction(1, 2), (m + 1) / 2)
    lower = (Fraction(1), (m + n + 3) / 2)
    with ctx.workprec():
        pref = mp.pi / 4 * _gam((m + 1) / 2) * _gam((n + 2) / 2) / _gam((m + n + 3) / 2)
        value = pref * pfq_mpf(upper, lower, Fraction(1), ctx.working, ctx.digits + 5)
        return ctx.bigreal(value)


def moment_mixed(pair, n, ctx: PrecisionContext) -> BigReal:
    """Closed form of the moment of one plain and one complementary integral.

    The integral over (0,1) of x^n P(x) dx with P in {K K', E K', K E', E E'};
    requires n > -1.
    """
    if pair not in MIXED_PAIRS:
        raise DomainError(f"unknown mixed pair {pair!r}; expected one of {MIXED_PAIRS}")
    n = _frac(n)
    if n <= -1:
        raise DomainError(f"divergent moment: need n > -1, got {n}")
    half = Fraction(1, 2)
    first = -half if pair in ("EKc", "EEc") else half
    if pair in ("KKc", "EKc"):
        upper = (first, half, (n + 1) / 2, (n + 1) / 2)
        lower = (Fraction(1), (n + 2) / 2, (n + 2) / 2)
        extra = Fraction(1)
    else:
        upper = (first, half, (n + 1) / 2, (n + 3) / 2)
        lower = (Fraction(1), (n + 2) / 2, (n + 4) / 2)
        extra = (n + 1) / (n + 2)
    with ctx.workprec():
        g1, g2 = _gam((n + 1) / 2), _gam((n + 2) / 2)
        pref = mp.pi**2 / 8 * mp.mpf(extra.numerator) / extra.denominator * g1 * g1 / (g2 * g2)
        value = pref * pfq_mpf(upper, lower, Fraction(1), ctx.working, ctx.digits + 5)
        return ctx.bigreal(value)


_COMP_TABLE = {
    # pair -> (rational prefactor in n, upper builder, lower builder)
    "KcKc": (
        lambda n: (n + 1) / 16,
        lambda n, h: (h, h, h, h, (n + 1) / 2, (n + 1) / 2, (n + 5) / 4),
        lambda n: (Fraction(1), (n + 1) / 4, (n + 2) / 2, (n + 2) / 2, (n + 2) / 2, (n + 2) / 2),
    ),
    "EcKc": (
        lambda n: (n + 1) ** 2 / (16 * (n + 2)),
        lambda n, h: (-h, h, h, h, (n + 1) / 2, (n + 1) / 2, (n + 5) / 4),
        lambda n: (Fraction(1), (n + 1) / 4, (n + 2) / 2, (n + 2) / 2, (n + 2) / 2, (n + 4) / 2),
    ),
    "EcKc_alt": (
        lambda n: (n + 1) ** 3 * (n + 3) / (16 * (n + 2) ** 3),
        lambda n, h: (h, h, h, 3 * h, (n + 3) / 2, (n + 3) / 2, (n + 7) / 4),
        lambda n: (Fraction(1), (n + 3) / 4, (n + 2) / 2, (n + 4) / 2, (n + 4) / 2, (n + 4) / 2),
    ),
    "EcEc": (
        lambda n: (n + 1) ** 3 * (n + 3) ** 2 / (16 * (n + 2) ** 3 * (n + 4)),
        lambda n, h: (-h, h, h, 3 * h, (n + 3) / 2, (n + 3) / 2, (n + 7) / 4),
        lambda n: (Fraction(1), (n + 3) / 4, (n + 2) / 2, (n + 4) / 2, (n + 4) / 2, (n + 6) / 2),
    ),
}


def moment_comp_pair(pair, n, ctx: PrecisionContext) -> BigReal:
    """Closed form of the moment of two complementary integrals (7F6 at 1).

    The integral over (0,1) of x^n P(x) dx for P in {E'^2, E'K', K'^2}; the
    two E'K' builds ("EcKc" and "EcKc_alt") are distinct 7F6 representations
    of the same integral.  Requires n > -1.
    """
    if pair not in COMP_PAIRS:
        raise DomainError(f"unknown pair {pair!r}; expected one of {COMP_PAIRS}")
    n = _frac(n)
    if n <= -1:
        raise DomainError(f"divergent moment: need n > -1, got {n}")
    rat_pref, up, low = _COMP_TABLE[pair]
    half = Fraction(1, 2)
    upper = up(n, half)
    lower = low(n)
    pref_rat = rat_pref(n)
    with ctx.workprec():
        nv = mp.mpf(n.numerator) / n.denominator
        g1, g2 = _gam((n + 1) / 2), _gam(n + 1)
        pref = (
            mp.mpf(2) ** (4 * nv)
            * mp.mpf(pref_rat.numerator)
            / pref_rat.denominator
            * g1**8
            / g2**4
        )
        value = pref * pfq_mpf(upper, lower, Fraction(1), ctx.working, ctx.digits + 5)
        return ctx.bigreal(value)


def moment_closed_form(spec: MomentSpec, ctx: PrecisionContext):
    """Best available closed-form value for spec, or None.

    Covers single factors (any m, n in range), the four mixed pairs and the
    complementary pairs (m = 0 only).
    """
    if spec.degree == 1:
        kind = next(k for k, a in zip(_KINDS, (spec.aK, spec.aE, spec.aKc, spec.aEc)) if a == 1)
        return moment_single(kind, spec.n, spec.m, ctx)
    if spec.m != 0:
        return None
    combo = (spec.aK, spec.aE, spec.aKc, spec.aEc)
    mixed = {(1, 0, 1, 0): "KKc", (0, 1, 1, 0): "EKc", (1, 0, 0, 1): "KEc", (0, 1, 0, 1): "EEc"}
    compp = {(0, 0, 2, 0): "KcKc", (0, 0, 0, 2): "EcEc", (0, 0, 1, 1): "EcKc"}
    if combo in mixed:
        return moment_mixed(mixed[combo], spec.n, ctx)
    if combo in compp:
        return moment_comp_pair(compp[combo], spec.n, ctx)
    return None


def moment_quadrature(spec: MomentSpec, ctx: PrecisionContext) -> QuadResult:
    """Independent oracle: tanh-sinh integration of the product moment."""
    if spec.n <= -1 or spec.m <= -2:
        raise DomainError(f"divergent moment spec {spec}")
    nv = spec.n
    mv = spec.m
    aK, aE, aKc, aEc = spec.aK, spec.aE, spec.aKc, spec.aEc

    def f(p):
        xp = mp.sqrt(p.dhi * (1 + p.x))
        out = mp.mpf(1)
        if nv:
            out *= p.x ** (mp.mpf(nv.numerator) / nv.denominator)
        if mv:
            out *= xp ** (mp.mpf(mv.numerator) / mv.denominator)
        if aK or aE:
            K, E = ke_pair_mpf(p.x, xp)
            if aK:
                out *= K**aK
            if aE:
                out *= E**aE
        if aKc or aEc:
            Kc, Ec = ke_pair_mpf(xp, p.x)
            if aKc:
                out *= Kc**aKc
            if aEc:
                out *= Ec**aEc
        return out

    return integrate_unit(f, ctx)


# ---------------------------------------------------------------------------
# Exact values: a + b zeta(3) and rational multiples of pi^3
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zeta3Linear:
    """a + b*zeta(3) with exact rational a, b."""

    a: Fraction
    b: Fraction

    def __add__(self, other):
        if isinstance(other, Zeta3Linear):
            return Zeta3Linear(self.a + other.a, self.b + other.b)
        return Zeta3Linear(self.a + _frac(other), self.b)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        c = _frac(c)
        return Zeta3Linear(self.a * c, self.b * c)

    __rmul__ = __mul__

    def to_real(self, ctx: PrecisionContext) -> BigReal:
        with ctx.workprec():
            z3 = mp.zeta(3)
            return ctx.bigreal(mp.mpf(self.a.numerator) / self.a.denominator
                               + mp.mpf(self.b.numerator) / self.b.denominator * z3)

    def __str__(self):
        return f"{self.a} + {self.b}*zeta(3)"


@dataclass(frozen=True)
class Pi3Rational:
    """c * pi^3 with exact rational c."""

    c: Fraction

    def to_real(self, ctx: PrecisionContext) -> BigReal:
        with ctx.workprec():
            return ctx.bigreal(mp.mpf(self.c.numerator) / self.c.denominator * mp.pi**3)

    def __str__(self):
        return f"{self.c}*pi^3"


def h_seq(n: int) -> int:
    """The integer sequence h(n) = sum_k C(2n-2k, n-k)^2 C(2k, k)^2."""
    if n < 0:
        raise DomainError(f"h_seq needs n >= 0, got {n}")
    return sum(comb(2 * n - 2 * k, n - k) ** 2 * comb(2 * k, k) ** 2 for k in range(n + 1))


def _check_odd(n):
    n = int(n)
    if n < 1 or n % 2 == 0:
        raise DomainError(f"odd moment engine needs odd n >= 1, got {n}")
    return n


@functools.lru_cache(maxsize=None)
def _k2_odd(n: int) -> Zeta3Linear:
    # ignition values for int x K^2 and int x^3 K^2
    if n == 1:
        return Zeta3Linear(Fraction(0), Fraction(7, 4))
    if n == 3:
        return Zeta3Linear(Fraction(1, 4), Fraction(7, 8))
    m = n - 2
    val = (
        Zeta3Linear(Fraction(2), Fraction(0))
        + Fraction(2 * m * (m * m + 1)) * _k2_odd(m)
        - Fraction((m - 1) ** 3) * _k2_odd(m - 2)
    )
    return Fraction(1, (m + 1) ** 3) * val


@functools.lru_cache(maxsize=None)
def _e2_odd(n: int) -> Zeta3Linear:
    if n in (1, 3):
        # propagated, never hand-entered: (KE)_1 = K_3 from the x K^2
        # derivative relation; E_1 from int(2xE^2 - xEK) = 1/2; (KE)_3 and
        # E_3 from the n=2 and n=4 moment relations
        ke1 = _k2_odd(3)
        e1 = Fraction(1, 2) * (Zeta3Linear(Fraction(1, 2), Fraction(0)) + ke1)
        if n == 1:
            return e1
        ke3 = Fraction(1, 4) * (2 * ke1 + e1 - _k2_odd(1) + _k2_odd(3))
        return Fraction(1, 6) * (Zeta3Linear(Fraction(1), Fraction(0)) + 2 * ke3)
    m = n - 2
    val = (
        Zeta3Linear(Fraction(8), Fraction(0))
        + Fraction(2 * (m**3 + 3 * m * m + m + 1)) * _e2_odd(m)
        - Fraction((m - 1) ** 3) * _e2_odd(m - 2)
    )
    return Fraction(1, (m + 1) * (m + 3) * (m + 5)) * val


def _ke_odd(n: int) -> Zeta3Linear:
    # (n+3) E_n - 2 (KE)_n = 1
    return Fraction(1, 2) * (Fraction(n + 3) * _e2_odd(n) - Zeta3Linear(Fraction(1), Fraction(0)))


def _swap_to_complement(plain, n: int) -> Zeta3Linear:
    # int x^(2m+1) f(x') dx = int x(1-x^2)^m f(x) dx, expanded binomially
    m = (n - 1) // 2
    total = Zeta3Linear(Fraction(0), Fraction(0))
    for j in range(m + 1):
        total = total + Fraction((-1) ** j * comb(m, j)) * plain(2 * j + 1)
    return total


def odd_moment_exact(product, n: int):
    """Exact odd moment int x^n P(x) dx as Zeta3Linear or Pi3Rational.

    product: a MomentSpec, a product string, or one of the canonical tokens
    K2, E2, KE, Kc2, Ec2, KcEc (zeta(3) class) and KKc (pi^3 class).
    """
    if isinstance(product, MomentSpec):
        key = product.product_key()
        if product.m != 0:
            raise DomainError("exact odd moments require x' power 0")
    elif product in ZETA3_PRODUCTS + ("KKc",):
        key = product
    else:
        key = parse_product(product).product_key()
    n = _check_odd(n)
    if key == "K2":
        return _k2_odd(n)
    if key == "E2":
        return _e2_odd(n)
    if key == "KE":
        return _ke_odd(n)
    if key == "Kc2":
        return _swap_to_complement(_k2_odd, n)
    if key == "Ec2":
        return _swap_to_complement(_e2_odd, n)
    if key == "KcEc":
        return _swap_to_complement(_ke_odd, n)
    if key == "KKc":
        m = (n - 1) // 2
        return Pi3Rational(Fraction(h_seq(m), 16 ** (m + 1)))
    raise DomainError(f"no exact odd-moment engine for product {product!r}")


# ---------------------------------------------------------------------------
# Recurrences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecurrenceDef:
    """Three-term recurrence with polynomial coefficients in n.

    sum_i poly_i(n) * value(n + offset_i) should equal rhs for every valid n.
    Coefficient polynomials are stored low-to-high degree.
    """

    name: str
    offsets: tuple
    polys: tuple
    rhs: Fraction = Fraction(0)

    def coeff(self, i, n) -> Fraction:
        n = _frac(n)
        return sum((c * n**p for p, c in enumerate(self.polys[i])), start=Fraction(0))


REC_K2 = RecurrenceDef(
    name="x^n K^2 moments",
    offsets=(2, 0, -2),
    polys=(
        (Fraction(1), Fraction(3), Fraction(3), Fraction(1)),
        (Fraction(0), Fraction(-2), Fraction(0), Fraction(-2)),
        (Fraction(-1), Fraction(3), Fraction(-3), Fraction(1)),
    ),
    rhs=Fraction(2),
)

REC_E2 = RecurrenceDef(
    name="x^n E^2 moments",
    offsets=(2, 0, -2),
    polys=(
        (Fraction(15), Fraction(23), Fraction(9), Fraction(1)),
        (Fraction(-2), Fraction(-2), Fraction(-6), Fraction(-2)),
        (Fraction(-1), Fraction(3), Fraction(-3), Fraction(1)),
    ),
    rhs=Fraction(8),
)

REC_KC2 = RecurrenceDef(
    name="x^n K'^2 moments",
    offsets=REC_K2.offsets,
    polys=REC_K2.polys,
    rhs=Fraction(0),
)

REC_G = RecurrenceDef(
    name="g(n) = int x^(2n-1) K K'",
    offsets=(1, 0, -1),
    polys=(
        (Fraction(0), Fraction(0), Fraction(0), Fraction(2)),
        (Fraction(1), Fraction(-4), Fraction(6), Fraction(-4)),
        (Fraction(-2), Fraction(6), Fraction(-6), Fraction(2)),
    ),
    rhs=Fraction(0),
)


def recurrence_residual(rdef: RecurrenceDef, values, n):
    """The recurrence combination sum_i c_i(n) values[n+offset_i].

    Exact (Fraction / Zeta3Linear) when the supplied values are exact;
    an mpf otherwise.  Missing indices raise DomainError.
    """
    picked = []
    for off in rdef.offsets:
        idx = n + off
        if idx not in values:
            raise DomainError(f"missing value at index {idx} for recurrence {rdef.name}")
        picked.append(values[idx])
    exact = all(isinstance(v, (Zeta3Linear, Fraction, int)) for v in picked)
    if exact:
        total = Zeta3Linear(Fraction(0), Fraction(0))
        for i, v in enumerate(picked):
            if not isinstance(v, Zeta3Linear):
                v = Zeta3Linear(_frac(v), Fraction(0))
            total = total + rdef.coeff(i, n) * v
        if total.b == 0:
            return total.a
        return total
    total = mp.mpf(0)
    for i, v in enumerate(picked):
        c = rdef.coeff(i, n)
        vv = v.value if isinstance(v, BigReal) else mp.mpf(v)
        total += mp.mpf(c.numerator) / c.denominator * vv
    return total


# ---------------------------------------------------------------------------
# Generating-function identities
# ---------------------------------------------------------------------------


def gf_check(t, ctx: PrecisionContext) -> dict:
    """Both sides of the three moment generating-function identities at t.

    gf    : int x/(1-t^2 x^2) K K' dx   = (pi/4) K(t)^2
    gf2_k : int 1/(1-t^2 x^2) K'  dx    = (pi/2) K(t)
    gf2_e : int 1/(1-t^2 x^2) E'  dx    = (pi/(2 t^2)) (K(t) - E(t))
    """
    with ctx.workprec():
        tv = ctx.mpf(t)
        if not 0 < tv < 1:
            raise DomainError(f"gf_check needs t in (0,1), got {tv}")
        t2 = tv * tv

        def f_gf(p):
            xp = mp.sqrt(p.dhi * (1 + p.x))
            K, _ = ke_pair_mpf(p.x, xp)
            Kc, _ = ke_pair_mpf(xp, p.x)
            return p.x / (1 - t2 * p.x * p.x) * K * Kc

        def f_k(p):
            Kc, _ = ke_pair_mpf(kc=p.x)
            return Kc / (1 - t2 * p.x * p.x)

        def f_e(p):
            _, Ec = ke_pair_mpf(kc=p.x)
            return Ec / (1 - t2 * p.x * p.x)

        Kt, Et = ke_pair_mpf(tv)
        out = {
            "gf": (integrate_unit(f_gf, ctx).value, ctx.bigreal(mp.pi / 4 * Kt * Kt)),
            "gf2_k": (integrate_unit(f_k, ctx).value, ctx.bigreal(mp.pi / 2 * Kt)),
            "gf2_e": (integrate_unit(f_e, ctx).value, ctx.bigreal(mp.pi / (2 * t2) * (Kt - Et))),
        }
        return out


def _h_seq_int(nmax: int) -> list[int]:
    """h(0..nmax) by the integer three-term recurrence (exact division)."""
    hs = [1, 8]
    for n in range(2, nmax + 1):
        num = 16 * (2 * n - 1) * (2 * n * n - 2 * n + 1) * hs[n - 1] - 512 * (n - 1) ** 3 * hs[n - 2]
        q, r = divmod(num, 2 * n**3)
        if r:
            raise DomainError(f"h({n}) recurrence produced a non-integer")
        hs.append(q)
    return hs[: nmax + 1]


def conjecture2_sum_form(ctx: PrecisionContext, nterms: int = 4000, fit_order: int = 7):
    """The slowly convergent series equivalent of the mixed-cube conjecture.

    Evaluates sum_n pi * h(n) * Gamma(n+1/2)^2 / (16^n Gamma(n+1)^2), whose
    terms decay like (log n)/n^2, by direct summation plus a fitted
    (log n)/n^(2+j), 1/n^(2+j) tail summed with Hurwitz zeta values and
    derivatives.  Returns (value, conjectured) where the conjectured closed
    form is Gamma(1/4)^8 / (24 pi^4).
    """
    hs = _h_seq_int(nterms)
    with ctx.workprec():
        f = +mp.pi  # Gamma(n+1/2)^2 / (16^n Gamma(n+1)^2) at n = 0
        total = mp.mpf(0)
        terms = {}
        for n in range(nterms + 1):
            if n:
                ratio = (n - mp.mpf(1) / 2) / (4 * n)
                f *= ratio * ratio
            t = mp.pi * hs[n] * f
            total += t
            terms[n] = t
        # fit t_n ~ sum_j (u_j log n + v_j) n^-(2+j) on nodes in (N/2, N)
        npts = 2 * (fit_order + 1)
        nodes = [nterms // 2 + i * (nterms // 2 - 1) // (npts - 1) for i in range(npts)]
        rows, rhs = [], []
        for nd in nodes:
            ln = mp.log(nd)
            row = []
            for j in range(fit_order + 1):
                scale = mp.mpf(nd) ** (-(2 + j))
                row.extend((ln * scale, scale))
            rows.append(row)
            rhs.append(terms[nd])
        import mpmath

        sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        tail = mp.mpf(0)
        a = nterms + 1
        for j in range(fit_order + 1):
            s = mp.mpf(2 + j)
            tail += -sol[2 * j] * mp.zeta(s, a, 1) + sol[2 * j + 1] * mp.zeta(s, a)
        value = total + tail
        g4 = mp.gamma(mp.mpf(1) / 4)
        conjectured = g4**8 / (24 * mp.pi**4)
        return ctx.bigreal(value), ctx.bigreal(conjectured)


def export_rows(products, ns, ctx: PrecisionContext) -> list[dict]:
    """Moment table rows: product, n, exact a and b when known, numeric value."""
    rows = []
    for prod in products:
        spec = parse_product(prod) if not isinstance(prod, MomentSpec) else prod
        for n in ns:
            spec_n = MomentSpec(spec.aK, spec.aE, spec.aKc, spec.aEc, n=n)
            row = {"product": str(spec_n), "n": int(n), "a": None, "b": None, "digits": ctx.digits}
            exact = None
            if spec_n.product_key() and n % 2 == 1 and n >= 1:
                exact = odd_moment_exact(spec_n, n)
            if isinstance(exact, Zeta3Linear):
                row["a"], row["b"] = str(exact.a), str(exact.b)
                row["value"] = exact.to_real(ctx).digits_str(ctx.digits)
            elif isinstance(exact, Pi3Rational):
                row["a"], row["b"] = "0", f"{exact.c}*pi^3/zeta3"
                row["value"] = exact.to_real(ctx).digits_str(ctx.digits)
            else:
                closed = moment_closed_form(spec_n, ctx)
                if closed is None:
                    closed = moment_quadrature(spec_n, ctx).value
                row["value"] = closed.digits_str(ctx.digits)
            rows.append(row)
    return rows
