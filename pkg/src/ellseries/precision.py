"""Arbitrary-precision arithmetic substrate.

Every computation in this package runs inside a :class:`PrecisionContext`,
which fixes the decimal working precision: the caller's requested target
digits plus a guard allowance that absorbs rounding drift through nested
radicals and long summations.  Values are mpmath floats owned by the
context that created them ("BigReal" in the public API); arithmetic is
faithfully rounded at the working precision, which leaves several digits
of slack under every tolerance used by the verification suite.

Contexts are immutable after construction and operations are pure, so
independent computations may run concurrently as long as each thread uses
its own context (construction costs well under a millisecond).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from mpmath.ctx_mp import MPContext

# Context-bound mpmath float.  mpmath mints a distinct mpf class per
# context, so this alias is documentation rather than a checkable type.
BigReal = Any

Rational = Union[int, Fraction]

MIN_TARGET_DIGITS = 10
MIN_GUARD_DIGITS = 10


class PrecisionError(ValueError):
    """Requested precision violates the guard-digit policy."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class ZeroDivisorError(ZeroDivisionError):
    """Divisor indistinguishable from zero at working precision."""


def guard_digits_for(target_digits: int) -> int:
    """Guard policy: max(10, 2% of the target)."""
    return max(MIN_GUARD_DIGITS, math.ceil(0.02 * target_digits))


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal precision contract plus the elementary-function suite.

    ``working_digits = target_digits + guard_digits`` is the precision all
    arithmetic is carried at; results are trustworthy to roughly the
    target.  The context doubles as the elementary-function suite: sqrt,
    n-th root, exp, ln, powers, pi, sin/tan at rational multiples of pi,
    and tolerance-based comparison.  There is no exact equality on
    BigReal; use :meth:`agrees`.
    """

    target_digits: int
    guard_digits: int = field(default=-1)
    _mp: MPContext = field(init=False, repr=False, compare=False)
    _pi: Any = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.target_digits < MIN_TARGET_DIGITS:
            raise PrecisionError(
                "precision too low for guard policy: target_digits must be "
                f">= {MIN_TARGET_DIGITS}, got {self.target_digits}"
            )
        if self.guard_digits == -1:
            object.__setattr__(self, "guard_digits", guard_digits_for(self.target_digits))
        if self.guard_digits < MIN_GUARD_DIGITS:
            raise PrecisionError(
                f"guard_digits must be >= {MIN_GUARD_DIGITS}, got {self.guard_digits}"
            )
        if self.guard_digits < math.ceil(0.02 * self.target_digits):
            raise PrecisionError(
                "guard_digits must be at least 2% of target_digits"
            )
        mp = MPContext()
        mp.dps = self.working_digits
        object.__setattr__(self, "_mp", mp)
        # pi is evaluated once per context and reused read-only afterwards.
        object.__setattr__(self, "_pi", +mp.pi)

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    # ---- construction of values ------------------------------------

    def mpf(self, x: Any) -> BigReal:
        """Convert int/str/float/Fraction (or any mpf) to a BigReal."""
        if isinstance(x, Fraction):
            return self._mp.mpf(x.numerator) / x.denominator
        return self._mp.mpf(x)

    @property
    def zero(self) -> BigReal:
        return self._mp.mpf(0)

    @property
    def one(self) -> BigReal:
        return self._mp.mpf(1)

    @property
    def pi(self) -> BigReal:
        return self._pi

    def tol(self, digits: int) -> BigReal:
        """10^(-digits) as a BigReal."""
        return self._mp.mpf(10) ** (-digits)

    # ---- elementary functions ---------------------------------------

    def sqrt(self, x: Any) -> BigReal:
        x = self.mpf(x)
        if x < 0:
            raise DomainError(f"sqrt of negative value {x}")
        return self._mp.sqrt(x)

    def root(self, x: Any, n: int) -> BigReal:
        """Positive real n-th root of x >= 0."""
        x = self.mpf(x)
        if n <= 0:
            raise DomainError(f"root index must be a positive integer, got {n}")
        if x < 0:
            raise DomainError(f"root of negative value {x}")
        return self._mp.root(x, n)

    def exp(self, x: Any) -> BigReal:
        return self._mp.exp(self.mpf(x))

    def ln(self, x: Any) -> BigReal:
        x = self.mpf(x)
        if x <= 0:
            raise DomainError(f"ln of non-positive value {x}")
        return self._mp.ln(x)

    def log10(self, x: Any) -> BigReal:
        x = self.mpf(x)
        if x <= 0:
            raise DomainError(f"log10 of non-positive value {x}")
        return self._mp.log10(x)

    def power(self, x: Any, y: Any) -> BigReal:
        """x**y for x > 0 (or integer y)."""
        x = self.mpf(x)
        if isinstance(y, int):
            return x ** y
        if x < 0:
            raise DomainError(f"power of negative base {x} with non-integer exponent")
        return self._mp.power(x, self.mpf(y))

    def powi(self, x: Any, n: int) -> BigReal:
        """Integer power."""
        return self.mpf(x) ** int(n)

    def sinpi(self, x: Any) -> BigReal:
        """sin(pi*x); exact-angle accuracy at rational x."""
        return self._mp.sinpi(self.mpf(x))

    def tanpi(self, x: Any) -> BigReal:
        """tan(pi*x); raises at the poles x = 1/2 + n."""
        c = self._mp.cospi(self.mpf(x))
        if c == 0:
            raise DomainError(f"tan(pi*{x}) pole")
        return self._mp.sinpi(self.mpf(x)) / c

    def div(self, a: Any, b: Any) -> BigReal:
        """a/b, rejecting a divisor that is exactly zero at working precision."""
        b = self.mpf(b)
        if b == 0:
            raise ZeroDivisorError("numerically zero divisor")
        return self.mpf(a) / b

    # ---- comparison semantics ---------------------------------------

    def agreement_digits(self, a: Any, b: Any) -> float:
        """Decimal digits of relative agreement, capped at working_digits."""
        a = self.mpf(a)
        b = self.mpf(b)
        diff = abs(a - b)
        if diff == 0:
            return float(self.working_digits)
        scale = max(abs(a), abs(b))
        if scale == 0:
            return float(self.working_digits)
        d = float(-self._mp.log10(diff / scale))
        return min(d, float(self.working_digits))

    def abs_residual_digits(self, a: Any, b: Any = 0) -> float:
        """-log10(|a - b|), capped at working_digits."""
        diff = abs(self.mpf(a) - self.mpf(b))
        if diff == 0:
            return float(self.working_digits)
        return min(float(-self._mp.log10(diff)), float(self.working_digits))

    def agrees(self, a: Any, b: Any, digits: int | None = None) -> bool:
        """|a - b| <= 10^(-digits), defaulting to target_digits - 5."""
        if digits is None:
            digits = self.target_digits - 5
        return abs(self.mpf(a) - self.mpf(b)) <= self.tol(digits)


def make_context(target_digits: int) -> PrecisionContext:
    """Build a context with the default guard policy max(10, 2% of target)."""
    if not isinstance(target_digits, int) or target_digits < MIN_TARGET_DIGITS:
        raise PrecisionError(
            "precision too low for guard policy: target_digits must be an "
            f"integer >= {MIN_TARGET_DIGITS}, got {target_digits!r}"
        )
    return PrecisionContext(target_digits=target_digits)


def to_decimal_string(ctx: PrecisionContext, x: Any, digits: int) -> str:
    """Decimal expansion of x truncated (not rounded) to `digits` significant digits.

    Truncation keeps reported digits verifiable as a prefix of any
    higher-precision run.  Values with decimal exponent far from 0 are
    rendered in scientific notation.
    """
    x = ctx.mpf(x)
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if x == 0:
        return "0." + "0" * (digits - 1)
    sign = "-" if x < 0 else ""
    ax = abs(x)
    e = int(ctx._mp.floor(ctx.log10(ax)))
    # floor(log10) can be off by one at powers of ten; renormalize.
    for _ in range(3):
        scaled = int(ctx._mp.floor(ax * ctx._mp.mpf(10) ** (digits - 1 - e)))
        if scaled >= 10 ** digits:
            e += 1
        elif scaled < 10 ** (digits - 1):
            e -= 1
        else:
            break
    ds = str(scaled)
    if -6 <= e < digits:
        if e >= 0:
            int_part = ds[: e + 1]
            frac_part = ds[e + 1:]
            return f"{sign}{int_part}.{frac_part}" if frac_part else f"{sign}{int_part}."
        return f"{sign}0.{'0' * (-e - 1)}{ds}"
    return f"{sign}{ds[0]}.{ds[1:]}e{e}"
