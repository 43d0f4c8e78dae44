"""Wall-time scaling of the headline constant and its AGM oracle.

The series cost is dominated by the modulus chain radicals plus ~1 term
per 108 digits; the oracle is a single AGM.  Both should scale close to
the big-float multiplication cost.

Usage: python scripts/precision_scaling.py [digits digits ...]
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from ellseries import b_quarter, gamma_quarter_series, make_context


def main() -> None:
    targets = [int(a) for a in sys.argv[1:]] or [250, 500, 1000, 2000, 4000]
    print(f"{'digits':>7} {'terms':>6} {'series_s':>9} {'oracle_s':>9} {'agree':>7}")
    for d in targets:
        ctx = make_context(d)
        t0 = time.perf_counter()
        _, report = gamma_quarter_series(ctx)
        t_series = time.perf_counter() - t0
        t0 = time.perf_counter()
        b_quarter(ctx)
        t_oracle = time.perf_counter() - t0
        print(f"{d:>7} {report.terms_used:>6} {t_series:>9.4f} {t_oracle:>9.4f} "
              f"{report.final_error_vs_oracle:>7.0f}")


if __name__ == "__main__":
    main()
