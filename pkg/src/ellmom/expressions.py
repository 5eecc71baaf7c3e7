"""Small expression AST used as quadrature integrands and identity sides.

Expressions are JSON-compatible nested lists (the catalog file stores them
verbatim): a head symbol followed by arguments.  Atoms: integers, ["rat",p,q],
the named constants "pi" / "catalan" / "zeta3" / "gamma4", and -- inside an
integral -- the bound variables.

Integral nodes: ["int01", body] over x in (0,1) and ["int_t", body] over
t in (0,pi/2).  Inside int01 the atoms "x", "one_minus_x", "one_plus_x",
"xprime" are bound, with the two distance forms taken straight from the
quadrature node so endpoint cancellation never occurs; inside int_t the atoms
are "t", "s" (= sin t), "c" (= cos t), "sin4t", "cos4t", with s and c both
computed from the distance to pi/2.

Elliptic nodes K/E/Kc/Ec evaluate stably when applied to a bound variable;
for composed arguments the complement is formed directly, which is fine for
arguments that stay strictly inside (0,1).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from .elliptic import ke_pair_mpf
from .hyper import pfq_mpf
from .mpcore import BigReal, DomainError, PrecisionContext
from .quadrature import integrate, integrate_unit

__all__ = ["evaluate", "evaluate_mpf", "validate_expr", "free_of_variables", "rat"]

_CONSTS = ("pi", "catalan", "zeta3", "gamma4")
_X_VARS = ("x", "one_minus_x", "one_plus_x", "xprime")
_T_VARS = ("t", "s", "c", "sin4t", "cos4t")

_UNARY = ("neg", "sqrt", "log", "exp", "atan", "asin", "atanh", "sin", "cos")
_ELLIPTIC = ("K", "E", "Kc", "Ec", "K_imag", "E_imag", "KminusE")


def rat(p, q=1):
    """Shorthand for a rational literal node."""
    return ["rat", int(p), int(q)]


class _Env:
    """Per-point bindings plus magnitude tracking for the cancellation guard."""

    __slots__ = ("bindings", "max_mag")

    def __init__(self, bindings=None):
        self.bindings = bindings or {}
        self.max_mag = mp.mpf(0)

    def note(self, v):
        a = abs(v)
        if a > self.max_mag:
            self.max_mag = a
        return v


def _x_env(point):
    x = point.x
    bind = {
        "x": x,
        "one_minus_x": point.dhi,
        "one_plus_x": 1 + x,
        "xprime": mp.sqrt(point.dhi * (1 + x)),
        "__dists__": (x, point.dhi),
    }
    return _Env(bind)


def _t_env(point):
    s = mp.cos(point.dhi)  # sin t, to full relative precision near pi/2
    c = mp.sin(point.dhi)  # cos t, exact small value near pi/2
    bind = {
        "t": point.x,
        "s": s,
        "c": c,
        "sin4t": 4 * s * c * (c - s) * (c + s),
        "cos4t": 1 - 8 * s * s * c * c,
        "__dists__": (s, None),
    }
    return _Env(bind)


def _modulus_complement(e, env, val):
    """(modulus, complement) for an elliptic node argument."""
    if isinstance(e, str):
        b = env.bindings
        if e == "x" and "xprime" in b:
            return b["x"], b["xprime"]
        if e == "xprime" and "x" in b:
            return b["xprime"], b["x"]
        if e == "s" and "c" in b:
            return b["s"], b["c"]
        if e == "c" and "s" in b:
            return b["c"], b["s"]
    if not 0 <= val <= 1:
        raise DomainError(f"elliptic argument {val} outside [0,1]")
    return val, mp.sqrt((1 - val) * (1 + val))


def _hyp2f1_log_near_one(a, b, w, ctx):
    """2F1(a, b; a+b; 1-w), accurate for small positive w.

    Uses the standard connection series with the log(w) kernel; for w away
    from the endpoint (> 0.4) the direct Gauss series at 1-w is fine.
    """
    if w <= 0:
        raise DomainError("pfq_at_1m needs w > 0 (the series diverges at w = 0)")
    if w > mp.mpf("0.4"):
        return mpmath.hyp2f1(a, b, a + b, 1 - w)
    lw = mp.log(w)
    pref = mp.gamma(a + b) / (mp.gamma(a) * mp.gamma(b))
    psi_k = -mp.euler  # psi(1)
    psi_a = mpmath.digamma(a)
    psi_b = mpmath.digamma(b)
    term = mp.mpf(1)
    total = mp.mpf(0)
    eps = mp.mpf(10) ** (-(ctx.working + 5))
    for k in range(100000):
        total += term * (2 * psi_k - psi_a - psi_b - lw)
        nxt = term * (a + k) * (b + k) / ((k + 1) * (k + 1)) * w
        if abs(nxt) * (abs(lw) + 2 * k + 8) < eps * max(mp.mpf(1), abs(total)):
            break
        term = nxt
        psi_k += mp.mpf(1) / (k + 1)
        psi_a += 1 / (a + k)
        psi_b += 1 / (b + k)
    return pref * total


def _eval(e, env, ctx):
    if isinstance(e, bool):
        raise DomainError("booleans are not expressions")
    if isinstance(e, int):
        return mp.mpf(e)
    if isinstance(e, str):
        if e == "pi":
            return +mp.pi
        if e == "catalan":
            return +mp.catalan
        if e == "zeta3":
            return mp.zeta(3)
        if e == "gamma4":
            return mp.gamma(mp.mpf(1) / 4)
        if e in env.bindings:
            return env.bindings[e]
        if e in _X_VARS + _T_VARS:
            raise DomainError(f"variable {e!r} used outside its integral")
        raise DomainError(f"unknown symbol {e!r}")
    if not isinstance(e, (list, tuple)) or not e:
        raise DomainError(f"malformed expression node {e!r}")
    head, *args = e

    if head == "rat":
        p, q = args
        return mp.mpf(p) / q
    if head == "add":
        return env.note(sum((_eval(a, env, ctx) for a in args), start=mp.mpf(0)))
    if head == "sub":
        a, b = (_eval(a, env, ctx) for a in args)
        return env.note(a - b)
    if head == "mul":
        out = mp.mpf(1)
        for a in args:
            out *= _eval(a, env, ctx)
        return env.note(out)
    if head == "div":
        a, b = (_eval(a, env, ctx) for a in args)
        return env.note(a / b)
    if head == "pow":
        base = _eval(args[0], env, ctx)
        ex = args[1]
        if isinstance(ex, (list, tuple)) and ex and ex[0] == "rat":
            return env.note(base ** (mp.mpf(ex[1]) / ex[2]))
        if isinstance(ex, int):
            return env.note(base**ex)
        return env.note(base ** _eval(ex, env, ctx))
    if head in _UNARY:
        v = _eval(args[0], env, ctx)
        if head == "neg":
            return -v
        return env.note(getattr(mp, head if head != "atan" else "atan")(v))
    if head in _ELLIPTIC:
        v = _eval(args[0], env, ctx)
        if head == "K_imag":
            k = v * v
            K, _ = ke_pair_mpf(mp.sqrt(k / (k + 1)), 1 / mp.sqrt(k + 1))
            return env.note(K / mp.sqrt(k + 1))
        if head == "E_imag":
            k = v * v
            _, E = ke_pair_mpf(mp.sqrt(k / (k + 1)), 1 / mp.sqrt(k + 1))
            return env.note(mp.sqrt(k + 1) * E)
        if head == "KminusE":
            # stable near 0 via the series form (pi v^2/4) 2F1(1/2,3/2;2;v^2)
            if v < mp.mpf("0.5"):
                return env.note(mp.pi * v * v / 4 * mpmath.hyp2f1(mp.mpf(1) / 2, mp.mpf(3) / 2, 2, v * v))
            k, kc = _modulus_complement(args[0], env, v)
            K, E = ke_pair_mpf(k, kc)
            return env.note(K - E)
        k, kc = _modulus_complement(args[0], env, v)
        if head in ("K", "E"):
            K, E = ke_pair_mpf(k, kc)
            return env.note(K if head == "K" else E)
        K, E = ke_pair_mpf(kc, k)  # complementary kind: swap roles
        return env.note(K if head == "Kc" else E)
    if head == "pfq":
        upper, lower, zexpr = args
        ups = tuple(Fraction(u[1], u[2]) if isinstance(u, (list, tuple)) else Fraction(u) for u in upper)
        lows = tuple(Fraction(l[1], l[2]) if isinstance(l, (list, tuple)) else Fraction(l) for l in lower)
        if len(ups) == 2 and len(lows) == 1:
            z = _eval(zexpr, env, ctx)
            a, b = (mp.mpf(u.numerator) / u.denominator for u in ups)
            c = mp.mpf(lows[0].numerator) / lows[0].denominator
            return env.note(mpmath.hyp2f1(a, b, c, z))
        if isinstance(zexpr, int):
            z = Fraction(zexpr)
        elif isinstance(zexpr, (list, tuple)) and zexpr and zexpr[0] == "rat":
            z = Fraction(zexpr[1], zexpr[2])
        else:
            raise DomainError("pFq beyond 2F1 requires a rational constant argument")
        return env.note(pfq_mpf(ups, lows, z, ctx.working, ctx.digits + 5))
    if head == "pfq_at_1m":
        # 2F1(a, b; a+b; 1-w) for the logarithmic case, stable as w -> 0
        upper, lower, wexpr = args
        ups = tuple(Fraction(u[1], u[2]) if isinstance(u, (list, tuple)) else Fraction(u) for u in upper)
        lows = tuple(Fraction(l[1], l[2]) if isinstance(l, (list, tuple)) else Fraction(l) for l in lower)
        if len(ups) != 2 or len(lows) != 1 or ups[0] + ups[1] != lows[0]:
            raise DomainError("pfq_at_1m supports only 2F1(a,b;a+b;1-w)")
        w = _eval(wexpr, env, ctx)
        a, b = (mp.mpf(u.numerator) / u.denominator for u in ups)
        return env.note(_hyp2f1_log_near_one(a, b, w, ctx))
    if head == "int01":
        body = args[0]
        res = integrate_unit(lambda p: _eval(body, _x_env(p), ctx), ctx)
        return env.note(res.value.value)
    if head == "int_t":
        body = args[0]
        res = integrate(lambda p: _eval(body, _t_env(p), ctx), 0, mp.pi / 2, ctx)
        return env.note(res.value.value)
    raise DomainError(f"unknown expression head {head!r}")


def evaluate_mpf(expr, ctx: PrecisionContext):
    """Evaluate a closed expression to an mpf at ctx's working precision.

    Applies the cancellation guard: when the result is smaller than
    10^-guard times the largest intermediate, the whole evaluation is
    repeated once with doubled guard digits.
    """
    with ctx.workprec():
        env = _Env()
        value = _eval(expr, env, ctx)
        if value != 0 and env.max_mag > 0:
            if abs(value) < env.max_mag * mp.mpf(10) ** (-ctx.guard):
                wide = PrecisionContext(ctx.digits + ctx.guard, ctx.guard)
                with wide.workprec():
                    value = _eval(expr, _Env(), wide)
        return value


def evaluate(expr, ctx: PrecisionContext) -> BigReal:
    """Evaluate a closed expression to ctx.digits digits."""
    validate_expr(expr)
    with ctx.workprec():
        return ctx.bigreal(evaluate_mpf(expr, ctx))


def free_of_variables(expr, inside=None):
    """True when every bound variable occurs under its own integral node."""
    if isinstance(expr, str):
        if expr in _X_VARS and inside != "x":
            return False
        if expr in _T_VARS and inside != "t":
            return False
        return True
    if isinstance(expr, (list, tuple)) and expr:
        head = expr[0]
        if head == "int01":
            return all(free_of_variables(a, "x") for a in expr[1:])
        if head == "int_t":
            return all(free_of_variables(a, "t") for a in expr[1:])
        if head == "rat":
            return True
        return all(free_of_variables(a, inside) for a in expr[1:])
    return True


_KNOWN_HEADS = (
    ("rat", 2, 2),
    ("add", 2, 64),
    ("sub", 2, 2),
    ("mul", 2, 64),
    ("div", 2, 2),
    ("pow", 2, 2),
    ("neg", 1, 1),
    ("sqrt", 1, 1),
    ("log", 1, 1),
    ("exp", 1, 1),
    ("atan", 1, 1),
    ("asin", 1, 1),
    ("atanh", 1, 1),
    ("sin", 1, 1),
    ("cos", 1, 1),
    ("K", 1, 1),
    ("E", 1, 1),
    ("Kc", 1, 1),
    ("Ec", 1, 1),
    ("K_imag", 1, 1),
    ("E_imag", 1, 1),
    ("KminusE", 1, 1),
    ("pfq", 3, 3),
    ("pfq_at_1m", 3, 3),
    ("int01", 1, 1),
    ("int_t", 1, 1),
)
_ARITY = {h: (lo, hi) for h, lo, hi in _KNOWN_HEADS}


def validate_expr(expr, inside=None):
    """Raise DomainError on malformed nodes, unknown symbols or free variables."""
    if isinstance(expr, bool):
        raise DomainError("booleans are not expressions")
    if isinstance(expr, int):
        return
    if isinstance(expr, str):
        if expr in _CONSTS:
            return
        if expr in _X_VARS:
            if inside != "x":
                raise DomainError(f"variable {expr!r} outside an int01 node")
            return
        if expr in _T_VARS:
            if inside != "t":
                raise DomainError(f"variable {expr!r} outside an int_t node")
            return
        raise DomainError(f"unknown symbol {expr!r}")
    if not isinstance(expr, (list, tuple)) or not expr:
        raise DomainError(f"malformed expression {expr!r}")
    head, *args = expr
    if head not in _ARITY:
        raise DomainError(f"unknown expression head {head!r}")
    lo, hi = _ARITY[head]
    if not lo <= len(args) <= hi:
        raise DomainError(f"{head!r} expects {lo}..{hi} arguments, got {len(args)}")
    if head == "rat":
        if not all(isinstance(a, int) for a in args) or args[1] == 0:
            raise DomainError(f"bad rational literal {expr!r}")
        return
    if head == "int01":
        validate_expr(args[0], "x")
        return
    if head == "int_t":
        validate_expr(args[0], "t")
        return
    if head in ("pfq", "pfq_at_1m"):
        upper, lower, z = args
        for plist in (upper, lower):
            if not isinstance(plist, (list, tuple)):
                raise DomainError("pfq parameter lists must be lists")
            for p in plist:
                if isinstance(p, int):
                    continue
                if (
                    isinstance(p, (list, tuple))
                    and len(p) == 3
                    and p[0] == "rat"
                    and isinstance(p[1], int)
                    and isinstance(p[2], int)
                ):
                    continue
                raise DomainError(f"bad pfq parameter {p!r}")
        validate_expr(z, inside)
        return
    if head == "pow":
        validate_expr(args[0], inside)
        if isinstance(args[1], int):
            return
        validate_expr(args[1], inside)
        return
    for a in args:
        validate_expr(a, inside)
