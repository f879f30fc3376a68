#!/usr/bin/env python3
"""Render convergence figures from `gne solve` CSV traces.

Reads one or more trace files (header: t,gamma_ref,F,x_dist,lambda_norm),
averages the gap across them, and draws gap and distance-to-reference
versus iteration on log-log axes.

Usage:
    python3 scripts/plot_convergence.py out/run_s*.csv -o convergence.png
"""
import argparse
import csv
import math


def read_trace(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                (
                    int(row["t"]),
                    float(row["F"]),
                    float(row["x_dist"]) if row["x_dist"] else None,
                )
            )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("traces", nargs="+", help="trace CSV files (one per seed)")
    ap.add_argument("-o", "--output", default="convergence.png")
    ap.add_argument("--title", default="Convergence")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    runs = [read_trace(p) for p in args.traces]
    ts = [r[0] for r in runs[0]]
    mean_gap = [
        sum(run[i][1] for run in runs) / len(runs) for i in range(len(ts))
    ]
    has_dist = runs[0][0][2] is not None
    fig, axes = plt.subplots(1, 2 if has_dist else 1, figsize=(9, 4))
    axes = axes if has_dist else [axes]

    axes[0].loglog(ts, mean_gap, label=f"mean gap ({len(runs)} runs)")
    for run in runs:
        axes[0].loglog(ts, [r[1] for r in run], alpha=0.15, color="gray")
    # 1/t guide through the first mean point.
    t0, f0 = next((t, f) for t, f in zip(ts, mean_gap) if f > 0)
    axes[0].loglog(ts, [f0 * t0 / t for t in ts], "--", label="O(1/t)")
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("gap F")
    axes[0].legend()

    if has_dist:
        mean_dist = [
            sum(run[i][2] for run in runs) / len(runs) for i in range(len(ts))
        ]
        axes[1].loglog(ts, mean_dist, color="tab:orange")
        axes[1].set_xlabel("t")
        axes[1].set_ylabel("‖x − x*‖")

    fig.suptitle(args.title)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    slope_pts = [(t, f) for t, f in zip(ts, mean_gap) if t >= max(ts) // 10 and f > 0]
    if len(slope_pts) >= 2:
        lx = [math.log(t) for t, _ in slope_pts]
        ly = [math.log(f) for _, f in slope_pts]
        mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
        num = sum((x - mx) * (y - my) for x, y in zip(lx, ly))
        den = sum((x - mx) ** 2 for x in lx)
        print(f"log-log slope over the last decade: {num / den:.3f}")


if __name__ == "__main__":
    main()
