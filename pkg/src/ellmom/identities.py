"""Declarative identity catalog and the verification engine.

The catalog is a JSON file (one record per identity: id, lhs/rhs expression
trees, status, ref, tolerance, suite tags) shipped as package data and
overridable through the ELLMOM_CATALOG environment variable.  Verification
evaluates both sides independently -- integrals through the tanh-sinh oracle,
closed forms through the elliptic/hypergeometric/constant modules -- and
compares at the identity's tolerance.

Status semantics: a failing "theorem" is an error (nonzero suite exit);
a "conjecture" is always just reported with its achieved |difference|;
an "informational" record has no local lhs and only evaluates its rhs.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from mpmath import mp

from .expressions import evaluate_mpf, validate_expr
from .mpcore import BigReal, DomainError, PrecisionContext

__all__ = [
    "Identity",
    "Report",
    "load_catalog",
    "default_catalog_path",
    "verify",
    "verify_suite",
    "suite_exit_code",
    "reports_to_json",
]

STATUSES = ("theorem", "conjecture", "informational")


@dataclass(frozen=True)
class Identity:
    id: str
    rhs: object
    lhs: object = None
    status: str = "theorem"
    ref: str = ""
    tol_digits: int = 40
    suites: tuple = ()

    def __post_init__(self):
        if self.status not in STATUSES:
            raise DomainError(f"{self.id}: unknown status {self.status!r}")
        if self.lhs is None and self.status != "informational":
            raise DomainError(f"{self.id}: only informational entries may omit lhs")
        if self.lhs is not None:
            validate_expr(self.lhs)
        validate_expr(self.rhs)


@dataclass
class Report:
    id: str
    status: str
    suites: tuple
    ref: str
    tol_digits: int
    lhs: BigReal | None = None
    rhs: BigReal | None = None
    absdiff: BigReal | None = None
    passed: bool | None = None
    seconds: float = 0.0
    error: str | None = None

    def to_dict(self):
        def fmt(v):
            return None if v is None else v.digits_str(min(v.precision, 30))

        return {
            "id": self.id,
            "status": self.status,
            "suites": list(self.suites),
            "ref": self.ref,
            "tol_digits": self.tol_digits,
            "lhs": fmt(self.lhs),
            "rhs": fmt(self.rhs),
            "absdiff": fmt(self.absdiff),
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "error": self.error,
        }


def default_catalog_path():
    override = os.environ.get("ELLMOM_CATALOG")
    if override:
        return override
    return str(resources.files("ellmom").joinpath("data/catalog.json"))


def load_catalog(path=None) -> list[Identity]:
    """Load and validate the identity catalog (default: packaged data file)."""
    path = path or default_catalog_path()
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    seen = set()
    out = []
    for rec in raw:
        ident = Identity(
            id=rec["id"],
            lhs=rec.get("lhs"),
            rhs=rec["rhs"],
            status=rec.get("status", "theorem"),
            ref=rec.get("ref", ""),
            tol_digits=int(rec.get("tol_digits", 40)),
            suites=tuple(rec.get("suites", ())),
        )
        if ident.id in seen:
            raise DomainError(f"duplicate identity id {ident.id!r}")
        seen.add(ident.id)
        out.append(ident)
    return out


def verify(ident: Identity, ctx: PrecisionContext) -> Report:
    """Evaluate both sides and compare at the identity's tolerance.

    Evaluation failures land in the report's error field (never raised);
    conjectures report pass/fail of the numeric comparison but are not
    counted as errors by suite_exit_code.
    """
    rep = Report(
        id=ident.id,
        status=ident.status,
        suites=ident.suites,
        ref=ident.ref,
        tol_digits=ident.tol_digits,
    )
    t0 = time.perf_counter()
    try:
        with ctx.workprec():
            rhs = evaluate_mpf(ident.rhs, ctx)
            rep.rhs = ctx.bigreal(rhs)
            if ident.lhs is None:
                rep.passed = None
            else:
                lhs = evaluate_mpf(ident.lhs, ctx)
                rep.lhs = ctx.bigreal(lhs)
                diff = abs(lhs - rhs)
                rep.absdiff = ctx.bigreal(diff)
                rep.passed = bool(diff < mp.mpf(10) ** (-ident.tol_digits))
    except Exception as exc:  # make failures reportable, not fatal
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.passed = False if ident.status != "informational" else None
    rep.seconds = time.perf_counter() - t0
    return rep


def _match(ident: Identity, selector: str) -> bool:
    if selector in ("all", "", None):
        return True
    return selector in ident.suites or selector == ident.id


def _verify_by_id(args):
    ident_id, digits, guard, path = args
    catalog = load_catalog(path)
    ident = next(i for i in catalog if i.id == ident_id)
    return verify(ident, PrecisionContext(digits, guard)).to_dict()


def verify_suite(
    selector="all",
    ctx: PrecisionContext | None = None,
    catalog=None,
    catalog_path=None,
    threads: int = 1,
) -> list[Report]:
    """Verify every catalog entry matching a suite tag (or id, or "all").

    threads > 1 runs entries in separate worker processes; the report order
    always follows catalog order, so output is deterministic either way.
    """
    ctx = ctx or PrecisionContext(50)
    if catalog is None:
        catalog = load_catalog(catalog_path)
    picked = [i for i in catalog if _match(i, selector)]
    if not picked:
        raise DomainError(f"no catalog entries match suite {selector!r}")
    if threads <= 1:
        return [verify(i, ctx) for i in picked]
    path = catalog_path or default_catalog_path()
    jobs = [(i.id, ctx.digits, ctx.guard, path) for i in picked]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        dicts = list(pool.map(_verify_by_id, jobs))
    out = []
    for ident, d in zip(picked, dicts):
        rep = Report(
            id=d["id"],
            status=d["status"],
            suites=tuple(d["suites"]),
            ref=d["ref"],
            tol_digits=d["tol_digits"],
            passed=d["passed"],
            seconds=d["seconds"],
            error=d["error"],
        )
        for name in ("lhs", "rhs", "absdiff"):
            v = d[name]
            if v is not None:
                rep.__setattr__(name, BigReal(v, max(15, min(30, ctx.digits))))
        out.append(rep)
    return out


def suite_exit_code(reports) -> int:
    """0 iff every theorem-status check passed (conjectures never count)."""
    for rep in reports:
        if rep.status == "theorem" and rep.passed is not True:
            return 1
    return 0


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)
