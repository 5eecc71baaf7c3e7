"""High-precision moments of products of complete elliptic integrals.

Closed forms (Gamma factors, 3F2/4F3/7F6 values, exact a + b*zeta(3)
rationals) evaluated against an independent tanh-sinh quadrature oracle,
plus a declarative identity catalog, Fourier-series operations, integer
relation search, and numeric probes of two open conjectures.
"""

from .mpcore import (
    BigReal,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    PrecisionError,
    constant,
    gamma,
)

__version__ = "0.1.0"

__all__ = [
    "BigReal",
    "ConvergenceError",
    "DomainError",
    "PrecisionContext",
    "PrecisionError",
    "constant",
    "gamma",
    "__version__",
]
