"""AGM oracles: K, E, theta3, the quarter constant, and the nome."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellseries import (DomainError, E_ref, K_ref, agm, b_quarter, make_context,
                       nome, solve_kr, theta3)

# Reference values, 60 digits (standard tables / lemniscatic constants).
AGM_1_SQRT2 = "1.19814023473559220743992249228032387822721266321565155826367"
K_LEMN = "1.85407467730137191843385034719526004621759882352176690558593"
E_LEMN = "1.35064388104767550252017473533872584134952236692435454532325"
THETA3_EPI = "1.08643481121330801457531612151022345707020570724521888592079"
GAMMA_QUARTER = "3.62560990822190831193068515586767200299516768288006546743338"
B_QUARTER_OVER_PI = "2.36068119803219245209067588111697717446743326976289459903173"
EXP_MINUS_PI = "0.0432139182637722497744177371717280112757281098106330829807197"


def test_agm_fixed_point(ctx50):
    assert agm(1, 1, ctx50) == 1


def test_agm_reference(ctx50):
    assert abs(agm(1, ctx50.sqrt(2), ctx50) - ctx50.mpf(AGM_1_SQRT2)) <= ctx50.tol(58)


def test_agm_rejects_nonpositive(ctx50):
    with pytest.raises(DomainError):
        agm(0, 1, ctx50)
    with pytest.raises(DomainError):
        agm(1, -2, ctx50)


@settings(deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
       st.floats(min_value=1e-3, max_value=1e3, allow_nan=False))
def test_agm_symmetry(a, b):
    ctx = make_context(30)
    x, y = ctx.mpf(a), ctx.mpf(b)
    assert abs(agm(x, y, ctx) - agm(y, x, ctx)) <= ctx.tol(32) * max(1, x, y)


@settings(deadline=None)
@given(st.floats(min_value=0.01, max_value=100, allow_nan=False))
def test_agm_homogeneity(lam):
    ctx = make_context(30)
    lam = ctx.mpf(lam)
    lhs = agm(lam, 2 * lam, ctx)
    rhs = lam * agm(1, 2, ctx)
    assert abs(lhs - rhs) <= ctx.tol(32) * rhs


def test_K_at_zero(ctx50):
    assert abs(K_ref(0, ctx50) - ctx50.pi / 2) <= ctx50.tol(55)


def test_K_lemniscatic(ctx50):
    assert abs(K_ref(ctx50.sqrt(2) / 2, ctx50) - ctx50.mpf(K_LEMN)) <= ctx50.tol(58)


def test_K_strictly_increasing(ctx50):
    grid = [K_ref(ctx50.mpf(i) / 10, ctx50) for i in range(1, 10)]
    assert all(a < b for a, b in zip(grid, grid[1:]))


def test_K_domain(ctx50):
    with pytest.raises(DomainError):
        K_ref(1, ctx50)
    with pytest.raises(DomainError):
        K_ref(-0.5, ctx50)


def test_E_endpoints(ctx50):
    assert abs(E_ref(0, ctx50) - ctx50.pi / 2) <= ctx50.tol(55)
    assert E_ref(1, ctx50) == 1


def test_E_reference(ctx50):
    assert abs(E_ref(ctx50.sqrt(2) / 2, ctx50) - ctx50.mpf(E_LEMN)) <= ctx50.tol(58)


def test_E_domain(ctx50):
    with pytest.raises(DomainError):
        E_ref(ctx50.mpf("1.0001"), ctx50)


def _simpson(f, a, b, n):
    h = (b - a) / n
    total = f(a) + f(b)
    for i in range(1, n):
        total += f(a + i * h) * (4 if i % 2 else 2)
    return total * h / 3


def test_K_E_against_quadrature(ctx30):
    # low-precision float quadrature of the defining integrals
    k = 0.37
    kk = K_ref(ctx30.mpf("0.37"), ctx30)
    ee = E_ref(ctx30.mpf("0.37"), ctx30)
    f_k = lambda t: 1.0 / math.sqrt(1 - k * k * math.sin(t) ** 2)
    f_e = lambda t: math.sqrt(1 - k * k * math.sin(t) ** 2)
    qk = _simpson(f_k, 0.0, math.pi / 2, 4096)
    qe = _simpson(f_e, 0.0, math.pi / 2, 4096)
    assert abs(float(kk) - qk) < 1e-10
    assert abs(float(ee) - qe) < 1e-10


def test_legendre_relation(ctx50):
    for i in range(1, 10):
        k = ctx50.mpf(i) / 10
        kp = ctx50.sqrt(1 - k * k)
        lhs = (E_ref(k, ctx50) * K_ref(kp, ctx50)
               + E_ref(kp, ctx50) * K_ref(k, ctx50)
               - K_ref(k, ctx50) * K_ref(kp, ctx50))
        assert abs(lhs - ctx50.pi / 2) <= ctx50.tol(45)


def test_theta3_trivial(ctx50):
    assert theta3(0, ctx50) == 1


def test_theta3_reference(ctx50):
    q = ctx50.exp(-ctx50.pi)
    t = theta3(q, ctx50)
    assert abs(t - ctx50.mpf(THETA3_EPI)) <= ctx50.tol(58)
    # theta3(e^-pi) = sqrt(2 K(1/sqrt2)/pi)
    assert abs(t - ctx50.sqrt(2 * K_ref(ctx50.sqrt(2) / 2, ctx50) / ctx50.pi)) \
        <= ctx50.tol(45)


def test_theta3_domain(ctx50):
    with pytest.raises(DomainError):
        theta3(1, ctx50)
    with pytest.raises(DomainError):
        theta3(-0.1, ctx50)


def test_theta3_nome_K_identity(ctx50):
    for r in (1, 2, 4):
        pair = solve_kr(r, ctx50)
        t = theta3(nome(r, ctx50).q, ctx50)
        assert abs(t * t * ctx50.pi / 2 - K_ref(pair.k, ctx50)) <= ctx50.tol(45)


def test_b_quarter_vs_gamma_table(ctx50):
    g2 = ctx50.mpf(GAMMA_QUARTER) ** 2
    assert abs(b_quarter(ctx50) * ctx50.sqrt(ctx50.pi) - g2) <= ctx50.tol(54)


def test_b_quarter_over_pi(ctx50):
    got = b_quarter(ctx50) / ctx50.pi
    assert abs(got - ctx50.mpf(B_QUARTER_OVER_PI)) <= ctx50.tol(55)
    assert abs(got - 2 / agm(1, ctx50.sqrt(2) / 2, ctx50)) <= ctx50.tol(55)


def test_b_quarter_is_four_K(ctx50):
    assert abs(K_ref(ctx50.sqrt(2) / 2, ctx50) - b_quarter(ctx50) / 4) <= ctx50.tol(45)


def test_nome_values(ctx50):
    q1 = nome(1, ctx50)
    assert q1.r == Fraction(1)
    assert abs(q1.q - ctx50.mpf(EXP_MINUS_PI)) <= ctx50.tol(55)
    assert 0 < q1.q < 1
    # strictly decreasing in r
    assert nome(2, ctx50).q < q1.q
    assert nome(Fraction(1, 2), ctx50).q > q1.q
    # magnitude at r = 6400: q = e^(-80 pi) ~ 1e-109.15
    mag = float(ctx50.log10(nome(6400, ctx50).q))
    assert -109.2 < mag < -109.1


def test_nome_domain(ctx50):
    with pytest.raises(DomainError):
        nome(0, ctx50)
    with pytest.raises(DomainError):
        nome(Fraction(-3, 2), ctx50)


def test_first_kind_theta_identity_via_solver(ctx50):
    # 2 K(k_r)/pi = theta3(q)^2 with k_r solved independently of theta
    for r in (1, 2, 3, 4):
        pair = solve_kr(r, ctx50)
        t = theta3(nome(r, ctx50).q, ctx50)
        assert abs(2 * K_ref(pair.k, ctx50) / ctx50.pi - t * t) <= ctx50.tol(45)
