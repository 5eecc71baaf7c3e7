"""Sine-series coefficients of K(sin t) and E(sin t) vs the Fourier integral."""

import pytest
from mpmath import mp

from ellmom.fourier import fourier_coeff, fourier_integral
from ellmom.mpcore import DomainError, PrecisionContext

from conftest import assert_close


def test_k_coefficients_closed_form(ctx50):
    with ctx50.workprec():
        assert_close(fourier_coeff("K", 0, ctx50), +mp.pi, 48, "K n=0")
        assert_close(fourier_coeff("K", 1, ctx50), mp.pi / 4, 48, "K n=1")


def test_e_coefficients_closed_form(ctx50):
    c1, c3 = fourier_coeff("E", 0, ctx50)
    with ctx50.workprec():
        assert_close(c1, mp.pi / 2, 48, "E n=0 first family")
        # quadrature-confirmed: pi/4 (the (n+1/2)/(2(n+1)) weight at n=0)
        assert_close(c3, mp.pi / 4, 48, "E n=0 second family")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_k_coefficients_match_integral(n, ctx50):
    closed = fourier_coeff("K", n, ctx50)
    numeric = fourier_integral("K", 4 * n + 1, ctx50)
    assert_close(closed, numeric, 35, f"K coefficient n={n}")


@pytest.mark.parametrize("n", [0, 1])
def test_e_coefficients_match_integral(n, ctx50):
    c1, c3 = fourier_coeff("E", n, ctx50)
    assert_close(c1, fourier_integral("E", 4 * n + 1, ctx50), 35, f"E 4n+1, n={n}")
    assert_close(c3, fourier_integral("E", 4 * n + 3, ctx50), 35, f"E 4n+3, n={n}")


def test_off_family_harmonics_vanish(ctx30):
    # even-index sine coefficients are zero for both kernels
    v = fourier_integral("K", 3, ctx30)
    assert abs(v.value) < mp.mpf(10) ** (-25)


def test_domain_errors(ctx30):
    with pytest.raises(DomainError):
        fourier_coeff("K", -1, ctx30)
    with pytest.raises(DomainError):
        fourier_coeff("X", 0, ctx30)
    with pytest.raises(DomainError):
        fourier_integral("K", 2, ctx30)
