"""Closed-form moments vs the quadrature oracle; the exact odd-moment engine."""

from fractions import Fraction

import pytest
from mpmath import mp

from ellmom.moments import (
    COMP_PAIRS,
    MIXED_PAIRS,
    REC_E2,
    REC_G,
    REC_K2,
    REC_KC2,
    ZETA3_PRODUCTS,
    MomentSpec,
    Pi3Rational,
    Zeta3Linear,
    conjecture2_sum_form,
    export_rows,
    gf_check,
    h_seq,
    moment_closed_form,
    moment_comp_pair,
    moment_mixed,
    moment_quadrature,
    moment_single,
    odd_moment_exact,
    parse_product,
    recurrence_residual,
)
from ellmom.mpcore import DomainError, PrecisionContext
from ellmom.relations import RelationQuery, pslq

from conftest import assert_close

H = Fraction(1, 2)


def test_parse_product():
    spec = parse_product("K Kc^2")
    assert (spec.aK, spec.aE, spec.aKc, spec.aEc) == (1, 0, 2, 0)
    assert str(spec) == "K Kc^2"
    assert parse_product("E*E").product_key() == "E2"
    with pytest.raises(DomainError):
        parse_product("K Q")
    with pytest.raises(DomainError):
        parse_product("K^0")
    with pytest.raises(DomainError):
        parse_product("K^5")


def test_moment_single_known_values(ctx50):
    with ctx50.workprec():
        assert_close(moment_single("Kc", 0, 0, ctx50), mp.pi**2 / 4, 48, "int K'")
        assert_close(moment_single("Ec", 1, 0, ctx50), mp.mpf(2) / 3, 48, "int x E'")
        g4 = mp.gamma(mp.mpf(1) / 4)
        assert_close(
            moment_single("K", 0, -1, ctx50), g4**4 / (16 * mp.pi), 47, "int K/x'"
        )


def test_moment_single_gauss_case_vs_quadrature(ctx50):
    # m = 1 collapses to a Gauss-summable 2F1
    closed = moment_single("E", 1, Fraction(3, 2), ctx50)
    quad = moment_quadrature(MomentSpec(aE=1, n=1, m=Fraction(3, 2)), ctx50)
    assert_close(closed, quad.value, 45, "x E x'^(3/2)")


def test_moment_single_refusals(ctx50):
    with pytest.raises(DomainError):
        moment_single("K", -1, 0, ctx50)
    with pytest.raises(DomainError):
        moment_single("E", 0, -2, ctx50)
    with pytest.raises(DomainError):
        moment_single("Q", 0, 0, ctx50)


def test_moment_mixed_paper_values(ctx50):
    with ctx50.workprec():
        assert_close(moment_mixed("KKc", 1, ctx50), mp.pi**3 / 16, 47, "x K K'")
        # n=3: pi^3 h(1)/16^2 = pi^3/32
        assert_close(moment_mixed("KKc", 3, ctx50), mp.pi**3 / 32, 47, "x^3 K K'")
        # quadrature-confirmed correction of the stated example: pi/8 + pi^3/32
        assert_close(
            moment_mixed("EKc", 1, ctx50), mp.pi / 8 + mp.pi**3 / 32, 47, "x E K'"
        )


@pytest.mark.parametrize("pair", MIXED_PAIRS)
def test_moment_mixed_vs_quadrature(pair, ctx50):
    combos = {"KKc": dict(aK=1, aKc=1), "EKc": dict(aE=1, aKc=1),
              "KEc": dict(aK=1, aEc=1), "EEc": dict(aE=1, aEc=1)}
    for n in (0, 2, 5):
        closed = moment_mixed(pair, n, ctx50)
        quad = moment_quadrature(MomentSpec(n=n, **combos[pair]), ctx50)
        assert_close(closed, quad.value, 40, f"{pair} n={n}")


def test_moment_mixed_refused(ctx50):
    with pytest.raises(DomainError):
        moment_mixed("KKc", -1, ctx50)
    with pytest.raises(DomainError):
        moment_mixed("KK", 1, ctx50)


def test_moment_comp_pair_values(ctx50):
    with ctx50.workprec():
        assert_close(
            moment_comp_pair("KcKc", 1, ctx50), mp.mpf(7) / 4 * mp.zeta(3), 47, "x K'^2"
        )
    a = moment_comp_pair("EcKc", 0, ctx50)
    b = moment_comp_pair("EcKc_alt", 0, ctx50)
    assert_close(a, b, 45, "the two E'K' builds")
    quad = moment_quadrature(MomentSpec(aEc=2, n=0), ctx50)
    assert_close(moment_comp_pair("EcEc", 0, ctx50), quad.value, 40, "E'^2 vs quadrature")


def test_moment_closed_form_dispatch(ctx30):
    assert moment_closed_form(parse_product("E^2"), ctx30) is None
    assert moment_closed_form(parse_product("K^3"), ctx30) is None
    v = moment_closed_form(MomentSpec(aKc=1, aEc=1, n=2), ctx30)
    q = moment_quadrature(MomentSpec(aKc=1, aEc=1, n=2), ctx30)
    assert_close(v, q.value, 25, "dispatch EcKc")


def test_h_seq_values_and_recurrence():
    assert [h_seq(n) for n in range(5)] == [1, 8, 88, 1088, 14296]
    # Lemma recurrence, exactly, for n <= 50 (values as rationals g(n) ~ h(n-1)/16^n)
    values = {i: Fraction(h_seq(i - 1), 16**i) for i in range(1, 53)}
    for n in range(2, 51):
        assert recurrence_residual(REC_G, values, n) == 0
    with pytest.raises(DomainError):
        h_seq(-1)


def test_odd_moment_exact_paper_values():
    assert odd_moment_exact("K2", 3) == Zeta3Linear(Fraction(1, 4), Fraction(7, 8))
    assert odd_moment_exact("Kc2", 1) == Zeta3Linear(Fraction(0), Fraction(7, 4))
    assert odd_moment_exact("K2", 1) == Zeta3Linear(Fraction(0), Fraction(7, 4))
    assert odd_moment_exact("KKc", 1) == Pi3Rational(Fraction(1, 16))
    assert odd_moment_exact("KKc", 3) == Pi3Rational(Fraction(1, 32))


def test_odd_moment_exact_refusals():
    with pytest.raises(DomainError):
        odd_moment_exact("K2", 2)
    with pytest.raises(DomainError):
        odd_moment_exact("K2", -1)
    with pytest.raises(DomainError):
        odd_moment_exact("K^3", 1)


def test_exact_recurrence_residuals():
    kv = {i: odd_moment_exact("K2", i) for i in (1, 3, 5, 7)}
    ev = {i: odd_moment_exact("E2", i) for i in (1, 3, 5, 7)}
    cv = {i: odd_moment_exact("Kc2", i) for i in (1, 3, 5, 7)}
    assert recurrence_residual(REC_K2, kv, 3) == 2
    assert recurrence_residual(REC_K2, kv, 5) == 2
    assert recurrence_residual(REC_E2, ev, 3) == 8
    assert recurrence_residual(REC_KC2, cv, 3) == 0
    assert recurrence_residual(REC_KC2, cv, 5) == 0
    with pytest.raises(DomainError):
        recurrence_residual(REC_K2, kv, 7)  # missing index 9


def test_numeric_recurrence_residual_from_quadrature(ctx50):
    gvals = {}
    for i in (1, 2, 3):
        gvals[i] = moment_quadrature(MomentSpec(aK=1, aKc=1, n=2 * i - 1), ctx50).value
    r = recurrence_residual(REC_G, gvals, 2)
    assert abs(r) < mp.mpf(10) ** (-30)


def test_rec1_linkage_exact():
    # (n+3) E_n - 2 (KE)_n = 1 for all odd n
    for n in range(1, 23, 2):
        e = odd_moment_exact("E2", n)
        ke = odd_moment_exact("KE", n)
        combo = Fraction(n + 3) * e - 2 * ke
        assert combo == Zeta3Linear(Fraction(1), Fraction(0)), f"rec1 linkage n={n}"


def test_swap_involution_exact():
    # expanding the complementary odd moments back through the binomial
    # modulus swap must return the plain ones, exactly
    from math import comb

    for plain, compl in (("K2", "Kc2"), ("E2", "Ec2"), ("KE", "KcEc")):
        for n in range(1, 23, 2):
            m = (n - 1) // 2
            total = Zeta3Linear(Fraction(0), Fraction(0))
            for j in range(m + 1):
                total = total + Fraction((-1) ** j * comb(m, j)) * odd_moment_exact(compl, 2 * j + 1)
            assert total == odd_moment_exact(plain, n), f"involution {plain} n={n}"


def test_odd_moments_match_quadrature_spot(ctx50):
    for prod, spec in (("E2", MomentSpec(aE=2, n=5)), ("KcEc", MomentSpec(aKc=1, aEc=1, n=7))):
        exact = odd_moment_exact(prod, int(spec.n))
        quad = moment_quadrature(spec, ctx50)
        assert_close(exact.to_real(ctx50), quad.value, 40, f"{prod} n={spec.n}")


def test_gf_check(ctx50):
    out = gf_check("0.5", ctx50)
    for name, (lhs, rhs) in out.items():
        assert_close(lhs, rhs, 40, f"gf {name}")
    with pytest.raises(DomainError):
        gf_check(0, ctx50)


def test_gf_limit_t_zero(ctx50):
    # as t -> 0 the generating function tends to int x K K' = (pi/4)(pi/2)^2
    out = gf_check("1e-25", ctx50)
    lhs, rhs = out["gf"]
    with ctx50.workprec():
        assert abs(rhs.value - mp.pi**3 / 16) < mp.mpf(10) ** (-45)
    assert_close(lhs, rhs, 40, "gf at tiny t")


def _ec_k_exact(j):
    # int x^(2j+1) E' K dx = pi/(8(j+1)) + (j+1)(g(j+1) - g(j+2)) exactly
    def g(i):
        return Fraction(h_seq(i - 1), 16**i)

    return Fraction(1, 8 * (j + 1)), Fraction(j + 1) * (g(j + 1) - g(j + 2))


def _binom_combo(base, n):
    # odd-moment modulus swap: sum_j (-1)^j C(m,j) base(2j+1), n = 2m+1
    from math import comb

    m = (n - 1) // 2
    cp, c3 = Fraction(0), Fraction(0)
    for j in range(m + 1):
        c = Fraction((-1) ** j * comb(m, j))
        bp, b3 = base(2 * j + 1)
        cp += c * bp
        c3 += c * b3
    return cp, c3


def _part2_exact(n):
    # int x^n E K' dx as (pi coeff, pi^3 coeff), n odd
    return _binom_combo(lambda i: _ec_k_exact((i - 1) // 2), n)


def test_prop1_pi_terms_parts_2_and_3(ctx50):
    # linear pi coefficient of the odd mixed moments is 1/(4(n+1)); the pi^3
    # part is assembled exactly from h(n) and the coupling-derived family
    for n in (1, 3, 5):
        for pair, exact in (
            ("EKc", _part2_exact(n)),
            ("KEc", _binom_combo(_part2_exact, n)),
        ):
            pi_coeff, pi3_coeff = exact
            assert pi_coeff == Fraction(1, 4 * (n + 1)), f"pi part {pair} n={n}"
            with ctx50.workprec():
                expected = (
                    mp.mpf(pi_coeff.numerator) / pi_coeff.denominator * mp.pi
                    + mp.mpf(pi3_coeff.numerator) / pi3_coeff.denominator * mp.pi**3
                )
                got = moment_mixed(pair, n, ctx50)
                assert abs(got.value - expected) < mp.mpf(10) ** (-40), f"{pair} n={n}"


def test_prop1_pi_term_part_4_via_pslq():
    # part 4 (E E'): numerically rediscover value = (pi-part) pi + r pi^3 and
    # check the pi coefficient equals 1/(4(n+1)); nothing assumed exactly
    n = 3
    ctx = PrecisionContext(80)
    val = moment_mixed("EEc", n, ctx)
    with ctx.workprec():
        values = [val.value, +mp.pi, mp.pi**3]
    res = pslq(RelationQuery(values, max_coeff_bits=11, precision=76))
    assert res is not None
    q, a, b = res.coefficients
    assert Fraction(-a, q) == Fraction(1, 4 * (n + 1))


def test_export_rows(ctx30):
    rows = export_rows(["K Kc", "E^2"], [0, 1], ctx30)
    assert len(rows) == 4
    kkc1 = next(r for r in rows if r["product"] == "K Kc" and r["n"] == 1)
    assert kkc1["b"] == "1/16*pi^3/zeta3"
    e20 = next(r for r in rows if r["product"] == "E^2" and r["n"] == 0)
    assert e20["a"] is None and "value" in e20


def test_conjecture2_sum_form(ctx30):
    val, conj = conjecture2_sum_form(ctx30, nterms=2500, fit_order=6)
    with ctx30.workprec():
        assert abs(val.value - conj.value) < mp.mpf(10) ** (-25)
