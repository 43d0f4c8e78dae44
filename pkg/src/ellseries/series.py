"""Legendre-series engine for K, E and the constant Gamma(1/4)^2/pi^(3/2).

The family summed here is

    sum_{n>=0} [(-mu)_n (1+mu)_n / ((1-nu)_n n!)] z^n (alpha*n + beta)

with Pochhammer coefficients updated incrementally.  Choosing

    alpha = 2(z-1) / (-1 - mu + nu + 2z(1+mu)),  beta = 1

makes the derivative contribution collapse against the base
hypergeometric term, leaving a single Legendre-type closed form; that
identity (validated term-by-term against an independently summed right
side) is the engine behind the fast series for 2K/pi, 4E/pi and the
headline constant.

At a singular modulus the sum converges geometrically in z = k_r^2, i.e.
-2*log10(k_r) decimal digits per term: ~12.4 at r = 100 and ~108 at
r = 6400, where a handful of terms give a thousand digits.  Every series
value is checked against the AGM oracles, which share no code with this
module beyond the arithmetic substrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from . import moduli
from .oracle import E_ref, K_ref, b_quarter, nome, theta3
from .precision import BigReal, DomainError, PrecisionContext


class SingularSeriesError(ValueError):
    """Series weight is singular for these parameters (e.g. r = 1)."""


class SeriesConvergenceError(RuntimeError):
    """Runaway-term guard tripped before the tail fell under tolerance."""


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of one weighted hypergeometric sum.

    ``alpha``/``beta`` weight each term as (alpha*n + beta); beta = 1 is
    the normalized form whose value is a single Legendre-type term.
    Construct through :func:`make_series_spec`, which checks that the
    Pochhammer denominator never vanishes and that the weight denominator
    D = -1 - mu + nu + 2z(1+mu) is bounded away from zero.
    """

    mu: Fraction
    nu: Fraction
    z: BigReal
    alpha: BigReal
    beta: BigReal


@dataclass
class ConvergenceReport:
    """Measured convergence of one summation.

    ``error_trace`` holds (n, -log10 |partial_n - final|); the slope of
    that trace (excluding n = 0, whose error reflects the constant's own
    magnitude) is ``digits_per_term``.  ``final_error_vs_oracle`` is the
    decimal agreement with the designated independent oracle.
    """

    terms_used: int
    error_trace: List[Tuple[int, float]]
    digits_per_term: Optional[float]
    final_error_vs_oracle: Optional[float] = None
    cross_checks: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    raise TypeError(f"expected a rational parameter, got {type(x).__name__}")


def make_series_spec(mu: Any, nu: Any, z: Any, alpha: Any, beta: Any,
                     ctx: PrecisionContext) -> SeriesSpec:
    mu = _as_fraction(mu)
    nu = _as_fraction(nu)
    one_minus_nu = 1 - nu
    if one_minus_nu.denominator == 1 and one_minus_nu <= 0:
        raise DomainError(
            f"(1 - nu) must not be zero or a negative integer, got nu={nu}"
        )
    z = ctx.mpf(z)
    if not (0 < z < 1):
        raise DomainError(f"series variable must satisfy 0 < z < 1, got {z}")
    d = -1 - ctx.mpf(mu) + ctx.mpf(nu) + 2 * z * (1 + ctx.mpf(mu))
    if abs(d) <= ctx.tol(ctx.working_digits // 2):
        raise SingularSeriesError(
            f"singular series configuration: weight denominator "
            f"-1 - mu + nu + 2z(1+mu) = {d} is numerically zero "
            f"(mu={mu}, nu={nu}, z={z})"
        )
    return SeriesSpec(mu=mu, nu=nu, z=z, alpha=ctx.mpf(alpha), beta=ctx.mpf(beta))


def next_coefficient(c: BigReal, n: int, mu: Any, nu: Any,
                     ctx: PrecisionContext) -> BigReal:
    """c_{n+1} = c_n (-mu+n)(1+mu+n) / ((1-nu+n)(n+1)); c_0 = 1.

    One multiply-divide per term instead of re-expanding Pochhammer
    products from scratch.
    """
    mu = ctx.mpf(mu)
    nu = ctx.mpf(nu)
    return c * (-mu + n) * (1 + mu + n) / ((1 - nu + n) * (n + 1))


def alpha_of(mu: Any, nu: Any, z: Any, ctx: PrecisionContext) -> BigReal:
    """Weight slope 2(z-1)/(-1 - mu + nu + 2z + 2 mu z).

    Raises when the denominator is numerically zero (for the 2K/pi
    parameters mu = -3/2, nu = 0 that happens exactly at z = 1/2, i.e.
    r = 1).
    """
    mu = ctx.mpf(mu)
    nu = ctx.mpf(nu)
    z = ctx.mpf(z)
    d = -1 - mu + nu + 2 * z + 2 * mu * z
    if abs(d) <= ctx.tol(ctx.working_digits // 2):
        raise SingularSeriesError(
            f"singular alpha configuration: denominator vanishes at "
            f"mu={mu}, nu={nu}, z={z}"
        )
    return 2 * (-1 + z) / d


# absolute ceiling on summed terms; a convergent run at sane parameters
# stays orders of magnitude below it
RUNAWAY_TERM_CEILING = 2_000_000


def _max_terms(z: BigReal, ctx: PrecisionContext) -> int:
    """Runaway guard: ~10x the term count the geometric ratio z predicts."""
    log10z = abs(float(ctx.log10(z)))
    if log10z <= 0:
        return RUNAWAY_TERM_CEILING
    cap = math.ceil(10 * ctx.working_digits / log10z) + 16
    return min(max(cap, 64), RUNAWAY_TERM_CEILING)


def eval_series(spec: SeriesSpec, ctx: PrecisionContext,
                n_terms: Optional[int] = None,
                oracle: Optional[BigReal] = None,
                term_cap: Optional[int] = None) -> Tuple[BigReal, ConvergenceReport]:
    """Sum the weighted series and instrument its convergence.

    Stops when the next term bound (including the (alpha*n + beta) growth
    factor) falls below 10^(-working_digits), or after exactly ``n_terms``
    terms when given.  ``term_cap`` overrides the runaway guard (exceeding
    it raises, signalling a bug or a pathologically slow z).  Partial sums
    are retained to build the error trace and the least-squares
    digits-per-term slope.
    """
    z = spec.z
    mu_f = ctx.mpf(spec.mu)
    nu_f = ctx.mpf(spec.nu)
    eps = ctx.tol(ctx.working_digits)
    cap = term_cap if term_cap is not None else _max_terms(z, ctx)

    s = ctx.zero
    c = ctx.one
    zp = ctx.one
    partials: List[BigReal] = []
    n = 0
    while True:
        s += c * zp * (spec.alpha * n + spec.beta)
        partials.append(s)
        n += 1
        if n_terms is not None:
            if n >= n_terms:
                break
        c = c * (-mu_f + (n - 1)) * (1 + mu_f + (n - 1)) / ((1 - nu_f + (n - 1)) * n)
        zp = zp * z
        if n_terms is None:
            bound = abs(c * zp) * (abs(spec.alpha) * (n + 2) + abs(spec.beta))
            if bound < eps:
                break
            if n >= cap:
                raise SeriesConvergenceError(
                    f"series did not converge within {cap} terms "
                    f"(z={z}, alpha={spec.alpha}, beta={spec.beta})"
                )

    final = s
    trace: List[Tuple[int, float]] = []
    for i, p in enumerate(partials[:-1]):
        diff = abs(p - final)
        if diff > 0:
            trace.append((i, float(-ctx.log10(diff))))
    report = ConvergenceReport(
        terms_used=len(partials),
        error_trace=trace,
        digits_per_term=_slope(trace),
        final_error_vs_oracle=(
            ctx.agreement_digits(final, oracle) if oracle is not None else None
        ),
    )
    return final, report


def _slope(trace: List[Tuple[int, float]]) -> Optional[float]:
    """Least-squares slope of digits vs term index, n = 0 excluded."""
    pts = [(n, d) for n, d in trace if n >= 1]
    if len(pts) < 2:
        return None
    m = len(pts)
    sx = sum(n for n, _ in pts)
    sy = sum(d for _, d in pts)
    sxx = sum(n * n for n, _ in pts)
    sxy = sum(n * d for n, d in pts)
    denom = m * sxx - sx * sx
    if denom == 0:
        return None
    return (m * sxy - sx * sy) / denom


# ---------------------------------------------------------------------
# Legendre-type functions in the convention used throughout this package
# ---------------------------------------------------------------------

def _gamma_one_minus(nu: Fraction, ctx: PrecisionContext) -> BigReal:
    """Gamma(1 - nu) for nu = 0 or 1 - nu a positive integer.

    All series in this package have nu = 0 (Gamma(1) = 1); other rational
    nu are supported only when 1 - nu is a positive integer, which keeps a
    general Gamma routine out of scope.
    """
    one_minus = 1 - nu
    if one_minus.denominator == 1:
        q = int(one_minus)
        if q <= 0:
            raise DomainError(f"Gamma pole at 1 - nu = {q}")
        return ctx.mpf(math.factorial(q - 1))
    raise DomainError(
        f"Gamma(1 - nu) supported only for integer 1 - nu >= 1, got nu={nu}"
    )


def _hyp2f1(a: BigReal, b: BigReal, c: BigReal, y: BigReal,
            ctx: PrecisionContext) -> BigReal:
    """2F1(a, b; c; y) by direct summation, |y| < 1."""
    eps = ctx.tol(ctx.working_digits)
    cap = _max_terms(abs(y), ctx) if 0 < abs(y) < 1 else 10 * ctx.working_digits
    s = ctx.zero
    t = ctx.one
    n = 0
    while True:
        s += t
        t = t * (a + n) * (b + n) / ((c + n) * (n + 1)) * y
        n += 1
        if abs(t) < eps:
            break
        if n >= cap:
            raise SeriesConvergenceError(
                f"hypergeometric sum did not converge within {cap} terms (y={y})"
            )
    return s


def legendre_P(mu: Any, nu: Any, x: Any, ctx: PrecisionContext) -> BigReal:
    """P^mu_nu(x) = ((x+1)/(1-x))^(nu/2) 2F1(-mu, mu+1; 1-nu; (1-x)/2) / Gamma(1-nu).

    This is the convention used by every identity in this package (note
    the roles of mu and nu relative to the hypergeometric parameters);
    no external Legendre routine follows it, so the function is summed
    directly.  Requires |1-x|/2 < 1.
    """
    nu = _as_fraction(nu)
    mu_f = ctx.mpf(mu)
    x = ctx.mpf(x)
    y = (1 - x) / 2
    if abs(y) >= 1:
        raise DomainError(f"argument outside the convergence disc: (1-x)/2 = {y}")
    gamma_factor = _gamma_one_minus(nu, ctx)
    nu_f = ctx.mpf(nu)
    f = _hyp2f1(-mu_f, mu_f + 1, 1 - nu_f, y, ctx)
    if nu == 0:
        pref = ctx.one
    else:
        base = (x + 1) / (1 - x)
        if base <= 0:
            raise DomainError(f"prefactor base (x+1)/(1-x) must be positive, got {base}")
        pref = ctx.power(base, nu_f / 2)
    return pref * f / gamma_factor


def phi_and_derivative(mu: Any, nu: Any, z: Any,
                       ctx: PrecisionContext) -> Tuple[BigReal, BigReal]:
    """(phi(z), phi'(z)) for phi(z) = 2F1(-mu, mu+1; 1-nu; z).

    The derivative uses the closed form

        phi'(z) = [(D0 + 2(1+mu)z) P^mu_nu(1-2z) + (1+mu-nu) P^(1+mu)_nu(1-2z)]
                  * (z/(1-z))^(nu/2) Gamma(1-nu) / (2 z (1-z))

    with D0 = -1 - mu + nu, rather than a term-by-term derivative; the
    two are compared against finite differences in the test suite.
    """
    nu = _as_fraction(nu)
    mu_f = ctx.mpf(mu)
    z = ctx.mpf(z)
    if z == 0 or z == 1:
        raise DomainError(f"derivative prefactor 1/(2 z (1-z)) singular at z={z}")
    nu_f = ctx.mpf(nu)
    phi = _hyp2f1(-mu_f, mu_f + 1, 1 - nu_f, z, ctx)
    gamma_factor = _gamma_one_minus(nu, ctx)
    if nu == 0:
        pref = ctx.one
    else:
        pref = ctx.power(z / (1 - z), nu_f / 2)
    bracket = ((-1 - mu_f + nu_f + 2 * (1 + mu_f) * z) * legendre_P(mu, nu, 1 - 2 * z, ctx)
               + (1 + mu_f - nu_f) * legendre_P(mu_f + 1, nu, 1 - 2 * z, ctx))
    phi_prime = pref * gamma_factor * bracket / (2 * (1 - z) * z)
    return phi, phi_prime


def closed_form(mu: Any, nu: Any, z: Any, ctx: PrecisionContext) -> BigReal:
    """Right side of the collapse identity: a single shifted Legendre term.

    (-1 - mu + nu) (z/(1-z))^(nu/2) Gamma(1-nu) P^(1+mu)_nu(1-2z)
        / (-1 - mu + nu + 2(mu+1) z)
    """
    nu = _as_fraction(nu)
    mu_f = ctx.mpf(mu)
    z = ctx.mpf(z)
    nu_f = ctx.mpf(nu)
    d = -1 - mu_f + nu_f + 2 * (mu_f + 1) * z
    if abs(d) <= ctx.tol(ctx.working_digits // 2):
        raise SingularSeriesError(f"singular configuration at mu={mu}, nu={nu}, z={z}")
    if nu == 0:
        pref = ctx.one
    else:
        pref = ctx.power(z / (1 - z), nu_f / 2)
    gamma_factor = _gamma_one_minus(nu, ctx)
    return (-1 - mu_f + nu_f) * pref * gamma_factor * legendre_P(mu_f + 1, nu, 1 - 2 * z, ctx) / d


def derivative_weighted_sum(mu: Any, nu: Any, z: Any,
                            ctx: PrecisionContext) -> Tuple[BigReal, ConvergenceReport]:
    """Sum c_n z^n (alpha n + 1) with the collapsing alpha; oracle is the closed form.

    The left side is summed term by term; the right side is evaluated
    through the shifted Legendre function, an independent code path.
    """
    alpha = alpha_of(mu, nu, z, ctx)
    spec = make_series_spec(mu, nu, z, alpha, 1, ctx)
    rhs = closed_form(mu, nu, z, ctx)
    return eval_series(spec, ctx, oracle=rhs)


# ---------------------------------------------------------------------
# specializations at singular moduli
# ---------------------------------------------------------------------

def two_K_over_pi(pair: moduli.ModulusPair,
                  ctx: PrecisionContext) -> Tuple[BigReal, ConvergenceReport]:
    """2 K(k_r)/pi as the weighted series in z = k_r^2 with mu = -3/2.

    Term weight: -4(1-z) n + (1 - 2z).  Singular at r = 1 (the weight
    normalization degenerates at z = 1/2); callers should use the AGM
    oracle there.  The report's oracle is 2 K_ref/pi, with the theta
    identity 2K/pi = theta3(q)^2 recorded as a second cross-check.
    """
    k = pair.k
    z = k * k
    if abs(1 - 2 * z) <= ctx.tol(ctx.working_digits // 2):
        raise SingularSeriesError(
            "series for 2K/pi is singular at r = 1 (k^2 = 1/2); "
            "use the AGM oracle instead"
        )
    spec = make_series_spec(Fraction(-3, 2), 0, z, -4 * (1 - z), 1 - 2 * z, ctx)
    oracle = 2 * K_ref(k, ctx) / ctx.pi
    value, report = eval_series(spec, ctx, oracle=oracle)
    theta_val = theta3(nome(pair.r, ctx).q, ctx) ** 2
    report.cross_checks["theta3_squared"] = ctx.agreement_digits(value, theta_val)
    return value, report


def four_E_over_pi(pair: moduli.ModulusPair,
                   ctx: PrecisionContext) -> Tuple[BigReal, ConvergenceReport]:
    """4 E(k_r)/pi = 2 K(k_r)/pi + sum with mu = -1/2 and weight 4(1-z) n + (1 - 2z).

    The 2K/pi addend comes from its own series; the r = 1 singularity
    propagates.  Oracle: 4 E_ref/pi from the AGM side sum.
    """
    k = pair.k
    z = k * k
    two_k, _ = two_K_over_pi(pair, ctx)
    spec = make_series_spec(Fraction(-1, 2), 0, z, 4 * (1 - z), 1 - 2 * z, ctx)
    sigma, report = eval_series(spec, ctx)
    value = two_k + sigma
    report.final_error_vs_oracle = ctx.agreement_digits(value, 4 * E_ref(k, ctx) / ctx.pi)
    return value, report


def gamma_quarter_series(ctx: PrecisionContext,
                         n_terms: Optional[int] = None) -> Tuple[BigReal, ConvergenceReport]:
    """Gamma(1/4)^2/pi^(3/2) from the w = k_6400 series, ~108 digits per term.

    The sum in w^2 with weight -2(1-w^2) n + (1/2 - w^2) equals
    K(k_6400)/pi.  Unwinding K[6400] -> K[100] through the r -> 64r
    scaling factor and the radical K[100] = coeff * Gamma(1/4)^2/sqrt(pi)
    gives the constant.  The normalization is carried exactly from that
    chain (overall scalar 640 against the bracketed radical); a published
    1/8 prefactor variant is inconsistent with the AGM oracle and is only
    reported by the verification suite, never used.  The result must match
    b_quarter/pi to working tolerance or this function raises.
    """
    chain = moduli.chain_to_6400(ctx)
    pair100, pair6400 = chain[0], chain[3]
    w = pair6400.k
    z = w * w
    spec = make_series_spec(Fraction(-3, 2), 0, z, -2 * (1 - z), ctx.mpf(1) / 2 - z, ctx)
    sigma, report = eval_series(spec, ctx, n_terms=n_terms)
    scale = moduli.k_scale_64(pair100, ctx)
    coeff = moduli.k100_radical_coefficient(ctx)
    value = sigma / (coeff * scale)
    oracle = b_quarter(ctx) / ctx.pi
    report.final_error_vs_oracle = ctx.agreement_digits(value, oracle)
    report.notes.append(
        "normalization derived from the modulus chain (scalar 640 = 8*80 against "
        "the bracketed radical); the published 1/8 prefactor fails the AGM oracle "
        "and is reported by `verify --selection chain`"
    )
    if n_terms is None and report.final_error_vs_oracle < ctx.target_digits - 5:
        raise RuntimeError(
            f"headline constant disagrees with the AGM oracle: "
            f"{report.final_error_vs_oracle:.1f} digits at target {ctx.target_digits}"
        )
    return value, report
