from fractions import Fraction

import pytest
from mpmath import mp

from ellmom.mpcore import PrecisionContext, workdps


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionContext(50)


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(30)


def _as_mpf(v):
    if hasattr(v, "value"):
        return v.value
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def mpf_close(a, b, eps_exp, scale=1):
    """|a - b| < 10^-eps_exp * scale, evaluated at generous precision."""
    with workdps(eps_exp + 40):
        return abs(_as_mpf(a) - _as_mpf(b)) < mp.mpf(10) ** (-eps_exp) * scale


def assert_close(a, b, eps_exp, label="", scale=1):
    with workdps(eps_exp + 40):
        av, bv = _as_mpf(a), _as_mpf(b)
        diff = abs(av - bv)
        assert diff < mp.mpf(10) ** (-eps_exp) * scale, (
            f"{label}: |{mp.nstr(av, 25)} - {mp.nstr(bv, 25)}| = "
            f"{mp.nstr(diff, 5)} >= 1e-{eps_exp}"
        )
