#!/usr/bin/env python3
"""Polarization rate as a function of the nuclear frequency.

Holds a magic row's timings fixed (designed for omega = 1) and detunes
the actual frequency, giving the central polarization window, whose
half-width follows 4/(n_r T), and the sideband comb at multiples of the
catalog fraction.
"""

import argparse
import numpy as np
from pathlib import Path

from hyperpol.analytic import summarize
from hyperpol.catalog import magic_params
from hyperpol.params import SystemParams


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results/frequency_profile")
    parser.add_argument("--a-perp", type=float, default=0.005)
    parser.add_argument("--lo", type=float, default=0.3)
    parser.add_argument("--hi", type=float, default=1.7)
    parser.add_argument("--points", type=int, default=4001)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    omegas = np.linspace(args.lo, args.hi, args.points)
    gamma0 = args.a_perp ** 2 / np.pi
    for method, sign, n_p, n_r in [("I", +1, 1, 4), ("I", +1, 4, 4),
                                   ("II", +1, 1, 4), ("II", -1, 2, 4),
                                   ("I", +1, 1, 1), ("I", +1, 4, 1)]:
        row = magic_params(method, sign, n_p)
        seq = row.to_sequence_params(SystemParams(omega=1.0, a_perp=args.a_perp),
                                     n_r=n_r)
        name = f"profile_{method}_{'pos' if sign > 0 else 'neg'}_np{n_p}_nr{n_r}.csv"
        with open(out_dir / name, "w") as fh:
            fh.write("omega,rate_over_gamma0,p_s\n")
            for w in omegas:
                s = summarize(SystemParams(omega=w, a_perp=args.a_perp), seq)
                fh.write(f"{w:.8g},{s.gamma / gamma0:.8g},{s.p_s:.6g}\n")
        print(f"wrote {out_dir / name}")


if __name__ == "__main__":
    main()
