"""Tanh-sinh oracle: known integrals, stability, linearity, the 3D integrator."""

from fractions import Fraction

import pytest
from mpmath import mp

from ellmom.elliptic import ke_pair_mpf
from ellmom.mpcore import ConvergenceError, PrecisionContext, workdps
from ellmom.quadrature import integrate, integrate3d, integrate_unit

from conftest import assert_close

H = Fraction(1, 2)


def test_beta_integral(ctx50):
    res = integrate_unit(lambda p: 1 / mp.sqrt(p.x * p.dhi), ctx50)
    with ctx50.workprec():
        assert_close(res.value, +mp.pi, 49, "beta integral")
    assert res.error_estimate.value < mp.mpf(10) ** (-50)
    assert res.levels_used <= 8 and res.evaluations > 100


def test_x_kc_squared(ctx50):
    def f(p):
        K = ke_pair_mpf(kc=p.x)[0]
        return p.x * K * K

    res = integrate_unit(f, ctx50)
    with ctx50.workprec():
        assert_close(res.value, mp.mpf(7) / 4 * mp.zeta(3), 48, "x K'^2")


def test_k_over_one_plus_x(ctx50):
    def f(p):
        return ke_pair_mpf(p.x, mp.sqrt(p.dhi * (1 + p.x)))[0] / (1 + p.x)

    res = integrate_unit(f, ctx50)
    with ctx50.workprec():
        assert_close(res.value, mp.pi**2 / 8, 48, "K/(1+x)")


def test_kc_moment_zero(ctx50):
    def f(p):
        return ke_pair_mpf(kc=p.x)[0]

    res = integrate_unit(f, ctx50)
    with ctx50.workprec():
        assert_close(res.value, mp.pi**2 / 4, 48, "int K'")


def test_oracle_digit_stability():
    # doubling requested digits must not change previously reported digits
    def f(p):
        return ke_pair_mpf(kc=p.x)[0] ** 2

    lo = integrate_unit(f, PrecisionContext(30)).value
    hi = integrate_unit(f, PrecisionContext(60)).value
    assert lo.digits_str(25) == hi.digits_str(25)


def test_linearity(ctx30):
    def f(p):
        return ke_pair_mpf(p.x, mp.sqrt(p.dhi * (1 + p.x)))[0]

    def g(p):
        return mp.sqrt(p.x) / (1 + p.x * p.x)

    with ctx30.workprec():
        a, b = mp.mpf(3) / 7, -mp.mpf(2) / 5
        combo = integrate_unit(lambda p: a * f(p) + b * g(p), ctx30).value.value
        parts = a * integrate_unit(f, ctx30).value.value + b * integrate_unit(g, ctx30).value.value
        assert abs(combo - parts) < mp.mpf(10) ** (-29)


def test_substitution_consistency(ctx50):
    # int_0^1 K(x)^2 dx = int_0^(pi/2) K(sin t)^2 cos t dt
    def fx(p):
        return ke_pair_mpf(p.x, mp.sqrt(p.dhi * (1 + p.x)))[0] ** 2

    def ft(p):
        s, c = mp.cos(p.dhi), mp.sin(p.dhi)
        return ke_pair_mpf(s, c)[0] ** 2 * c

    with ctx50.workprec():
        a = integrate_unit(fx, ctx50).value.value
        b = integrate(ft, 0, mp.pi / 2, ctx50).value.value
        assert abs(a - b) < mp.mpf(10) ** (-47)


def test_error_estimate_bounds_level_difference(ctx30):
    res = integrate_unit(lambda p: mp.exp(p.x), ctx30)
    # converged: the reported estimate must be under the context tolerance
    assert res.error_estimate.value < mp.mpf(10) ** (-30)
    with ctx30.workprec():
        assert_close(res.value, mp.e - 1, 29, "exp integral")


def test_nonintegrable_raises_with_diagnostic(ctx30):
    with pytest.raises(ConvergenceError) as err:
        integrate_unit(lambda p: 1 / p.x, ctx30, max_level=8)
    assert "level" in str(err.value)


def test_reversed_interval_refused(ctx30):
    with pytest.raises(ConvergenceError):
        integrate(lambda p: p.x, 1, 0, ctx30)


# ---- 3D ---------------------------------------------------------------------


def test_integrate3d_constant_kernel():
    res = integrate3d((2, 0, 1, 1, 1, 1))
    assert abs(float(res.value.value) - 1.0) < 1e-9


def test_integrate3d_requires_six_params():
    with pytest.raises(ValueError):
        integrate3d((1, 2, 3))


def test_integrate3d_kc2_vs_oracle():
    res = integrate3d((H,) * 6, target=1e-6)
    ctx = PrecisionContext(25)

    def f(p):
        K = ke_pair_mpf(kc=p.x)[0]
        return K * K

    oracle = integrate_unit(f, ctx).value.value
    assert abs(float(res.value.value) / 8 - float(oracle)) < 1e-5
