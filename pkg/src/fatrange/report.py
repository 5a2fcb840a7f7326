"""CSV reports and the figures rendered alongside them.

The CSV column set is fixed: query_id, wall_time_ns, then every counter
field in declaration order (see counters.COUNTER_COLUMNS).  Figures are
optional companions written next to the delimited output; they never replace
it.
"""

import csv
import os

from .harness import BENCH_COLUMNS


def write_bench_csv(path, rows, summary=None):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        if summary is not None:
            writer.writerow(summary)
    return path


def write_scaling_csv(path, rows):
    cols = ["u_log2", "u", "median_candidates", "median_k"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_bench_figures(rows, outdir):
    """Scatter of candidate work against output size plus a latency
    histogram; returns the paths written."""
    plt = _pyplot()
    os.makedirs(outdir, exist_ok=True)
    paths = []

    ks = [r["reported_k"] for r in rows]
    cands = [r["candidates_examined"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(ks, cands, s=6, alpha=0.4, edgecolors="none")
    lim = max(max(ks, default=1), 1)
    ax.plot([0, lim], [0, lim], lw=0.8, color="gray", label="k")
    ax.set_xlabel("reported k")
    ax.set_ylabel("candidates examined")
    ax.legend(frameon=False)
    fig.tight_layout()
    p = os.path.join(outdir, "candidates_vs_k.png")
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)

    times = [r["wall_time_ns"] / 1000.0 for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.hist(times, bins=min(60, max(10, len(times) // 20 + 1)), color="#4878a8")
    ax.set_xlabel("query time (us)")
    ax.set_ylabel("queries")
    fig.tight_layout()
    p = os.path.join(outdir, "query_times.png")
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)
    return paths


def render_scaling_figure(rows, outdir):
    plt = _pyplot()
    os.makedirs(outdir, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5, 4))
    us = [r["u"] for r in rows]
    ax.plot(us, [r["median_candidates"] for r in rows], marker="o", label="candidates")
    ax.plot(us, [max(r["median_k"], 1) for r in rows], marker="s", label="k")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("universe side U")
    ax.set_ylabel("median per query")
    ax.legend(frameon=False)
    fig.tight_layout()
    p = os.path.join(outdir, "scaling_u.png")
    fig.savefig(p, dpi=150)
    plt.close(fig)
    return [p]
