"""Plot P2 from a `twolevel simulate` CSV, with the reference curve if present.

    twolevel simulate --ratio 10 --periods 1 --analytic -o traj.csv
    python docs/plot_trajectory.py traj.csv
"""
import csv
import sys

import matplotlib.pyplot as plt


def main(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    t = [float(r["t"]) for r in rows]
    plt.plot(t, [float(r["P2"]) for r in rows], label="RK4")
    if rows and "P2_analytic" in rows[0]:
        plt.plot(t, [float(r["P2_analytic"]) for r in rows], "--", label="degenerate limit")
    plt.xlabel("t (a.u.)")
    plt.ylabel("P2")
    plt.legend()
    plt.show()


if __name__ == "__main__":
    main(sys.argv[1])
