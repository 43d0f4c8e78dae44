"""Singular moduli: solver, Landen ascent, closed forms, multipliers, scalings."""

from fractions import Fraction

import pytest

from ellseries import (DomainError, K_ref, K100_closed_value, ModulusPair,
                       Provenance, b_quarter, chain_printed_comparison,
                       chain_to_6400, eq2_residual, k100_closed_form,
                       k100_radical_coefficient, k_scale_16, k_scale_64,
                       landen_up, multiplier, solve_kr)

K4_EXACT = "0.171572875253809902396622551580603842860656249246103853646641"
K100_COEFF = "0.211803271198514012717044518877575870181432102329188841311477"
M2_1 = "0.85355339059327376220042218105242451964241796884423701829417"


def test_solve_r1_symmetry(ctx50):
    pair = solve_kr(1, ctx50)
    assert abs(pair.k - ctx50.sqrt(2) / 2) <= ctx50.tol(50)
    assert abs(pair.k - pair.k_prime) <= ctx50.tol(50)
    assert pair.provenance is Provenance.NUMERIC_SOLVE


def test_solve_r4(ctx50):
    pair = solve_kr(4, ctx50)
    assert abs(pair.k - ctx50.mpf(K4_EXACT)) <= ctx50.tol(50)


def test_solve_residuals(ctx50):
    for r in (2, 3, 5, Fraction(1, 2)):
        pair = solve_kr(r, ctx50)
        assert eq2_residual(pair, ctx50) <= ctx50.tol(ctx50.working_digits - 5)


def test_solve_inverse_parameter(ctx50):
    # k_{1/r} is the complementary modulus of k_r
    p4 = solve_kr(4, ctx50)
    pq = solve_kr(Fraction(1, 4), ctx50)
    assert abs(pq.k - p4.k_prime) <= ctx50.tol(45)


def test_solve_domain(ctx50):
    with pytest.raises(DomainError):
        solve_kr(0, ctx50)
    with pytest.raises(DomainError):
        solve_kr(-4, ctx50)


def test_pair_rejects_endpoints(ctx50):
    with pytest.raises(DomainError):
        ModulusPair(r=Fraction(1), k=ctx50.zero, k_prime=ctx50.one,
                    provenance=Provenance.NUMERIC_SOLVE)
    with pytest.raises(DomainError):
        ModulusPair(r=Fraction(1), k=ctx50.one, k_prime=ctx50.zero,
                    provenance=Provenance.NUMERIC_SOLVE)


def test_landen_from_r1(ctx50):
    up = landen_up(solve_kr(1, ctx50), ctx50)
    assert up.r == Fraction(4)
    assert abs(up.k - ctx50.mpf(K4_EXACT)) <= ctx50.tol(45)
    assert up.provenance is Provenance.LANDEN_CHAIN


def test_landen_matches_solver(ctx50):
    for r in (1, 2, 3):
        up = landen_up(solve_kr(r, ctx50), ctx50)
        direct = solve_kr(4 * Fraction(r), ctx50)
        assert abs(up.k - direct.k) <= ctx50.tol(45)


def test_landen_keeps_k_prime_near_one(ctx50):
    # ascending from a tiny-k pair: k' stays pinned at 1
    pair = chain_to_6400(ctx50)[3]
    up = landen_up(pair, ctx50)
    assert up.k_prime_gap < ctx50.tol(100)
    assert 0 < up.k_prime < 1


def test_k100_closed_form(ctx50):
    pair = k100_closed_form(ctx50)
    assert pair.provenance is Provenance.CLOSED_FORM
    # k_100 ~ 6.03e-7; 2 - sqrt(p) ~ 2.4e-6 (p just below 4)
    assert -6.3 < float(ctx50.log10(pair.k)) < -6.1
    assert abs(pair.k ** 2 + pair.k_prime ** 2 - 1) <= ctx50.tol(ctx50.working_digits - 8)
    assert abs(pair.k - solve_kr(100, ctx50).k) <= ctx50.tol(45)


def test_chain_stages(ctx50):
    pairs = chain_to_6400(ctx50)
    assert [p.r for p in pairs] == [Fraction(100), Fraction(400),
                                    Fraction(1600), Fraction(6400)]
    for p in pairs:
        assert eq2_residual(p, ctx50) <= ctx50.tol(ctx50.working_digits - 5)
    assert -54.1 < float(ctx50.log10(pairs[3].k)) < -53.9


def test_chain_printed_forms(ctx50):
    comps = {c.label: c for c in chain_printed_comparison(ctx50)}
    assert comps["k_400"].agreement_digits >= 45
    assert comps["k_1600"].agreement_digits >= 45
    assert comps["k_6400"].agreement_digits >= 45
    typo = comps["k'_400 (published coefficient 2^(7/3))"]
    assert typo.agreement_digits < 2
    ratio = typo.printed / typo.derived
    assert abs(ratio - ctx50.root(2 ** 7, 12)) <= ctx50.tol(40)
    fixed = comps["k'_400 (corrected coefficient 2^(7/4))"]
    assert fixed.agreement_digits >= 45


def test_multiplier_degree2(ctx50):
    res = multiplier(2, 1, ctx50)
    assert abs(res.value - ctx50.mpf(M2_1)) <= ctx50.tol(50)
    assert res.residual == 0
    # closed form against the AGM ratio
    assert abs(res.value - K_ref(solve_kr(4, ctx50).k, ctx50)
               / K_ref(solve_kr(1, ctx50).k, ctx50)) <= ctx50.tol(45)


def test_multiplier_degree5_m1_is_tangent_root(ctx50):
    # M_5(1) = (2 + sqrt(5))/5, a double root of the degree-6 equation:
    # the polynomial touches zero there without changing sign
    res = multiplier(5, 1, ctx50)
    assert abs(res.value - (2 + ctx50.sqrt(5)) / 5) <= ctx50.tol(45)
    assert abs(res.residual) <= ctx50.tol(ctx50.target_digits)


def test_multiplier_ratios(ctx50):
    for n in (2, 3, 5):
        for m in (1, 2):
            res = multiplier(n, m, ctx50)
            assert 0 < res.value < 1
            km = K_ref(solve_kr(m, ctx50).k, ctx50)
            kn = K_ref(solve_kr(n * n * m, ctx50).k, ctx50)
            assert abs(kn - res.value * km) <= ctx50.tol(42) * km
            assert abs(res.residual) <= ctx50.tol(ctx50.target_digits)


def test_multiplier_rejected_roots_recorded(ctx50):
    res = multiplier(5, 2, ctx50)
    assert len(res.rejected) >= 1
    for other in res.rejected:
        assert abs(other - res.value) > ctx50.tol(10)


def test_multiplier_bad_inputs(ctx50):
    with pytest.raises(ValueError):
        multiplier(4, 1, ctx50)
    with pytest.raises(DomainError):
        multiplier(3, -1, ctx50)


def test_scale16(ctx50):
    p1 = solve_kr(1, ctx50)
    factor = k_scale_16(p1, ctx50)
    assert abs(factor * K_ref(p1.k, ctx50)
               - K_ref(solve_kr(16, ctx50).k, ctx50)) <= ctx50.tol(45)
    # degenerate limit k -> 0: factor -> 1
    tiny = chain_to_6400(ctx50)[3]
    assert abs(k_scale_16(tiny, ctx50) - 1) <= ctx50.tol(50)


def test_scale16_twice_gives_256(ctx50):
    p1 = solve_kr(1, ctx50)
    p16 = solve_kr(16, ctx50)
    factor = k_scale_16(p1, ctx50) * k_scale_16(p16, ctx50)
    assert abs(factor * K_ref(p1.k, ctx50)
               - K_ref(solve_kr(256, ctx50).k, ctx50)) <= ctx50.tol(44)


def test_scale64(ctx50):
    p1 = solve_kr(1, ctx50)
    assert abs(k_scale_64(p1, ctx50) * K_ref(p1.k, ctx50)
               - K_ref(solve_kr(64, ctx50).k, ctx50)) <= ctx50.tol(45)
    pairs = chain_to_6400(ctx50)
    assert abs(k_scale_64(pairs[0], ctx50) * K_ref(pairs[0].k, ctx50)
               - K_ref(pairs[3].k, ctx50)) <= ctx50.tol(44)


def test_scale64_composes_with_scale16(ctx50):
    for pair in (solve_kr(1, ctx50), k100_closed_form(ctx50)):
        m2_16r = (1 + landen_up(landen_up(pair, ctx50), ctx50).k_prime) / 2
        assert abs(k_scale_64(pair, ctx50)
                   - k_scale_16(pair, ctx50) * m2_16r) <= ctx50.tol(45)


def test_K100_closed_value(ctx50):
    coeff = k100_radical_coefficient(ctx50)
    assert abs(coeff - ctx50.mpf(K100_COEFF)) <= ctx50.tol(48)
    value = K100_closed_value(ctx50)
    assert abs(value - K_ref(k100_closed_form(ctx50).k, ctx50)) <= ctx50.tol(45)
    assert abs(value / b_quarter(ctx50) - coeff) <= ctx50.tol(50)
