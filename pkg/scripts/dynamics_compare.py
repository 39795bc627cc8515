#!/usr/bin/env python3
"""Polarization build-up at the magic points: exact channel vs closed form.

For each catalog row and repetition count this writes a CSV with the
exactly simulated series next to P_s (1 - lambda^(N-1)).
"""

import argparse
from pathlib import Path

from hyperpol.analytic import polarization_series_analytic, summarize
from hyperpol.catalog import magic_params
from hyperpol.engine import cycle_kraus, mixed_state, simulate
from hyperpol.params import SystemParams


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results/dynamics")
    parser.add_argument("--a-perp", type=float, default=0.05)
    parser.add_argument("--cycles", type=int, default=200)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sys_p = SystemParams(omega=1.0, a_perp=args.a_perp)
    for method in ("I", "II"):
        for sign in (+1, -1):
            for n_p in (1, 2):
                for n_r in (2, 4):
                    row = magic_params(method, sign, n_p)
                    seq = row.to_sequence_params(sys_p, n_r=n_r)
                    pair = cycle_kraus(sys_p, seq)
                    exact = simulate(pair, mixed_state(), args.cycles).values
                    lam = summarize(sys_p, seq).lam
                    closed = polarization_series_analytic(float(sign), lam, args.cycles)
                    name = f"dynamics_{method}_{'pos' if sign > 0 else 'neg'}_np{n_p}_nr{n_r}.csv"
                    with open(out_dir / name, "w") as fh:
                        fh.write("cycle,exact,analytic\n")
                        for i, (e, a) in enumerate(zip(exact, closed), start=1):
                            fh.write(f"{i},{e:.10g},{a:.10g}\n")
                    print(f"wrote {out_dir / name}")


if __name__ == "__main__":
    main()
