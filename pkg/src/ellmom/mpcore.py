"""Arbitrary-precision arithmetic facade.

Everything numeric in this package flows through here: the working-precision
context, the tagged-precision real type, the four fundamental constants and
the Gamma function.  The backend is mpmath (gmpy-accelerated when available);
no other module touches mpmath's global state directly.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

__all__ = [
    "DomainError",
    "ConvergenceError",
    "PrecisionError",
    "PrecisionContext",
    "BigReal",
    "constant",
    "gamma",
    "to_mpf",
    "workdps",
]

CONSTANT_NAMES = ("pi", "catalan", "zeta3", "gamma_quarter")

MIN_DIGITS = 15
DEFAULT_GUARD = 15


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative computation failed to reach its accuracy target."""


class PrecisionError(ValueError):
    """Requested operation needs more working precision than supplied."""


_mp_lock = threading.RLock()


@contextmanager
def workdps(digits):
    """Run a block at `digits` decimal digits of mpmath working precision.

    Serialized with a lock: mpmath precision is process-global state.
    """
    with _mp_lock:
        old = mp.dps
        mp.dps = int(digits)
        try:
            yield mp
        finally:
            mp.dps = old


def to_mpf(x, digits=None):
    """Coerce x (BigReal, mpf, int, Fraction, str, float) to an mpf.

    Conversion happens at `digits` working digits when given, else at the
    ambient precision.  Fractions convert exactly (numerator / denominator
    at working precision); strings are parsed in decimal.
    """
    if isinstance(x, BigReal):
        x = x.value
    if digits is None:
        return _convert(x)
    with workdps(digits):
        return _convert(x)


def _convert(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


@dataclass(frozen=True)
class PrecisionContext:
    """Requested output precision plus guard digits for internal work.

    Module entry points compute at ``digits + guard`` and report values
    meaningful to ``digits``.
    """

    digits: int = 50
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise DomainError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.guard < 10:
            raise DomainError(f"guard must be >= 10, got {self.guard}")

    @property
    def working(self) -> int:
        return self.digits + self.guard

    def workprec(self):
        return workdps(self.working)

    def mpf(self, x):
        return to_mpf(x, self.working)

    def bigreal(self, x) -> "BigReal":
        """Wrap a finished working-precision value, tagged at self.digits."""
        return BigReal(to_mpf(x, self.working), self.digits)

    def eps(self):
        """10^-digits as an mpf at working precision."""
        with self.workprec():
            return mp.mpf(10) ** (-self.digits)

    def widened(self, extra) -> "PrecisionContext":
        return PrecisionContext(self.digits + extra, self.guard)


class BigReal:
    """A real number tagged with the decimal precision it is good to.

    Arithmetic between two BigReals rounds the result to the minimum of the
    operands' precisions (a value is never more trustworthy than its least
    trustworthy input).  Plain numbers mixed in are treated as exact.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value, precision):
        precision = int(precision)
        if precision < MIN_DIGITS:
            raise DomainError(f"precision must be >= {MIN_DIGITS}, got {precision}")
        self.value = to_mpf(value, precision + DEFAULT_GUARD)
        self.precision = precision

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _meet(a, b):
        pa = a.precision if isinstance(a, BigReal) else None
        pb = b.precision if isinstance(b, BigReal) else None
        if pa is None:
            return pb
        if pb is None:
            return pa
        return min(pa, pb)

    def _binop(self, other, op):
        prec = BigReal._meet(self, other)
        ov = other.value if isinstance(other, BigReal) else other
        with workdps(prec + DEFAULT_GUARD):
            if isinstance(ov, Fraction):
                ov = mp.mpf(ov.numerator) / ov.denominator
            return BigReal(op(self.value, ov), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, other):
        return self._binop(other, lambda a, b: a ** b)

    def __neg__(self):
        return BigReal(-self.value, self.precision)

    def __abs__(self):
        return BigReal(abs(self.value), self.precision)

    # -- comparisons (on values) ---------------------------------------

    def _cmp_value(self, other):
        return other.value if isinstance(other, BigReal) else other

    def __eq__(self, other):
        return self.value == self._cmp_value(other)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return float(self.value)

    # -- formatting -----------------------------------------------------

    def digits_str(self, n=None) -> str:
        """First n significant digits, stable when precision >= n + 10."""
        n = self.precision if n is None else min(n, self.precision)
        with workdps(self.precision + DEFAULT_GUARD):
            return mpmath.nstr(self.value, n, strip_zeros=False)

    def __repr__(self):
        return f"BigReal({self.digits_str(min(self.precision, 30))}, digits={self.precision})"

    def __str__(self):
        return self.digits_str()


# ---------------------------------------------------------------------------
# Constants and Gamma
# ---------------------------------------------------------------------------

_constant_cache: dict[tuple[str, int], mpmath.mpf] = {}


def constant(name: str, ctx: PrecisionContext) -> BigReal:
    """One of pi, catalan, zeta3, gamma_quarter to ctx.digits correct digits.

    Memoized per (name, working precision); repeated calls are cheap.
    """
    if name not in CONSTANT_NAMES:
        raise DomainError(f"unknown constant {name!r}; supported: {CONSTANT_NAMES}")
    key = (name, ctx.working)
    cached = _constant_cache.get(key)
    if cached is None:
        with ctx.workprec():
            if name == "pi":
                cached = +mp.pi
            elif name == "catalan":
                cached = +mp.catalan
            elif name == "zeta3":
                cached = mp.zeta(3)
            else:
                cached = mp.gamma(mp.mpf(1) / 4)
        _constant_cache[key] = cached
    return BigReal(cached, ctx.digits)


def gamma(x, ctx: PrecisionContext) -> BigReal:
    """Gamma(x) for real x away from the poles at 0, -1, -2, ..."""
    with ctx.workprec():
        xv = ctx.mpf(x)
        if xv <= 0 and xv == mpmath.floor(xv):
            raise DomainError(f"gamma pole at {xv}")
        return ctx.bigreal(mp.gamma(xv))


def gamma_mpf(x):
    """Gamma at ambient precision, for internal working-precision code."""
    if isinstance(x, Fraction):
        x = mp.mpf(x.numerator) / x.denominator
    if x <= 0 and x == mpmath.floor(x):
        raise DomainError(f"gamma pole at {x}")
    return mp.gamma(x)


def hurwitz_zeta_mpf(s, a, derivative=0):
    """Hurwitz zeta (optionally d/ds derivatives) at ambient precision."""
    return mp.zeta(s, a, derivative) if derivative else mp.zeta(s, a)
