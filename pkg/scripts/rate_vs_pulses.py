#!/usr/bin/env python3
"""Polarization rate versus pulse number at the magic working points.

Sweeps n_p for both methods and signs at n_r = 1 and several couplings,
reporting the measured rate in units of 2 A_perp/pi against the largest
achievable transfer strength 4 n_p A_perp/omega.  As the coupling
decreases the curves collapse onto the weak-coupling envelope, which
peaks near 0.27 at alpha_max ~ 1.84.
"""

import argparse
import math
from pathlib import Path

from hyperpol.analytic import alpha_max, gamma_opt_approx
from hyperpol.catalog import magic_params
from hyperpol.engine import evaluate_exact
from hyperpol.params import SystemParams


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results/rate_vs_pulses")
    parser.add_argument("--max-np", type=int, default=30)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for method in ("I", "II"):
        for sign in (+1, -1):
            name = f"rate_{method}_{'pos' if sign > 0 else 'neg'}.csv"
            with open(out_dir / name, "w") as fh:
                fh.write("a_perp,n_p,alpha_max,rate_scaled,rate_envelope\n")
                for a_perp in (0.1, 0.05, 0.025):
                    sys_p = SystemParams(omega=1.0, a_perp=a_perp)
                    unit = 2 * a_perp / math.pi
                    for n_p in range(1, args.max_np + 1):
                        row = magic_params(method, sign, n_p)
                        seq = row.to_sequence_params(sys_p, n_r=1)
                        res = evaluate_exact(sys_p, seq)
                        am = alpha_max(1, n_p, a_perp, 1.0)
                        envelope = gamma_opt_approx(am, a_perp) / unit
                        fh.write(f"{a_perp},{n_p},{am:.6g},"
                                 f"{res.gamma / unit:.6g},{envelope:.6g}\n")
            print(f"wrote {out_dir / name}")


if __name__ == "__main__":
    main()
