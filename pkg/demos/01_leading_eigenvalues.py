"""Leading eigenvalues of a random symmetric matrix, four ways.

Builds a scaled random symmetric matrix whose spectrum is bounded
independently of n, then races descent (gd), two momentum methods (nag-sc,
nag-c) and the Hebbian baseline (gha-rk4) toward its two largest
eigenvalues.  The momentum methods pull ahead once the transient has died
out; all group methods keep R^T R = I to roundoff the whole way.

Run:  python3 demos/01_leading_eigenvalues.py [--plot out.png]
"""

import argparse

import numpy as np

from lieopt.dataio import gen_goe
from lieopt.problems import ground_truth, leading_ev
from lieopt.run import run_trajectory

N, L, STEPS, H, SEED = 100, 2, 20_000, 0.0075, 197


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--plot", default=None, help="save a convergence plot to this path")
    args = parser.parse_args()

    matrix = gen_goe(N, SEED)
    problem = leading_ev(matrix, L)
    truth = ground_truth(problem)
    print(f"n = {N}: two largest eigenvalues are {truth.values.round(6)}")
    print(f"running {STEPS} steps at h = {H}\n")

    traces = {}
    for method in ("gd", "nag-sc", "nag-c", "gha-rk4"):
        result = run_trajectory(problem, method, STEPS, H, trace_every=1000, truth=truth)
        traces[method] = result.records
        drift = max(r.group_drift for r in result.records)
        print(f"{method:8s} final eig_err = {result.records[-1].eig_err:.3e}  "
              f"max constraint drift = {drift:.1e}")

    print("\neig_err by step:")
    marks = [0, 2000, 5000, 10_000, 20_000]
    header = "step".rjust(8) + "".join(m.rjust(12) for m in traces)
    print(header)
    for mark in marks:
        row = f"{mark:8d}"
        for method, records in traces.items():
            err = next(r.eig_err for r in records if r.step == mark)
            row += f"{err:12.2e}"
        print(row)

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        for method, records in traces.items():
            plt.semilogy([r.step for r in records], [max(r.eig_err, 1e-16) for r in records],
                         label=method)
        plt.xlabel("iteration")
        plt.ylabel("eigenvalue error")
        plt.legend()
        plt.tight_layout()
        plt.savefig(args.plot, dpi=120)
        print(f"\nplot saved to {args.plot}")


if __name__ == "__main__":
    main()
