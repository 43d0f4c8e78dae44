"""Measure digits-per-term for the modulus series against the geometric rate.

For the first-kind series at singular modulus k_r the per-term gain should
match -2*log10(k_r); for the headline constant the rate is set by
w = k_6400 (~108 digits/term).  Prints measured least-squares slopes next
to the geometric prediction.

Usage: python scripts/digits_per_term_study.py [target_digits]
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from ellseries import (chain_to_6400, gamma_quarter_series, make_context,
                       solve_kr, two_K_over_pi)


def main() -> None:
    target = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    ctx = make_context(target)
    print(f"target digits: {target} (working {ctx.working_digits})")
    print(f"{'series':>28} {'terms':>6} {'measured':>10} {'geometric':>10}")
    for r in (4, 16, 100):
        pair = solve_kr(r, ctx)
        _, report = two_K_over_pi(pair, ctx)
        geo = float(-2 * ctx.log10(pair.k))
        print(f"{f'2K/pi at r={r}':>28} {report.terms_used:>6} "
              f"{report.digits_per_term:>10.3f} {geo:>10.3f}")
    value, report = gamma_quarter_series(ctx)
    w = chain_to_6400(ctx)[3].k
    geo = float(-2 * ctx.log10(w))
    print(f"{'Gamma(1/4)^2/pi^(3/2)':>28} {report.terms_used:>6} "
          f"{report.digits_per_term:>10.3f} {geo:>10.3f}")
    print(f"\nconstant = {str(value)[:62]}...")
    print(f"oracle agreement: {report.final_error_vs_oracle:.1f} digits")


if __name__ == "__main__":
    main()
