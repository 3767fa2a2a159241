"""Scaling benchmark for the RES checker: timings, a log-log fit and a plot."""

from __future__ import annotations

import csv
import time
from pathlib import Path

import numpy as np

from .gen import random_machine
from .res import check_res

DEFAULT_SIZES = (100, 200, 400, 800)


def bench_res(sizes=DEFAULT_SIZES, seed: int = 0, reps: int = 3, n_h: int = 2, n_l: int = 2) -> list:
    """Best-of-``reps`` wall time of check_res on H-blind random machines.

    H-blind machines pass the reflexivity test, so the refinement loop runs to
    a fixpoint instead of stopping at the first state.
    """
    rows = []
    for n in sizes:
        m = random_machine(seed * 1_000_003 + n, n_states=n, n_h=n_h, n_l=n_l, h_blind=True)
        best = float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            v = check_res(m)
            best = min(best, time.perf_counter() - t0)
        rows.append({"states": n, "reachable": v.stats["states"], "blocks": v.stats["blocks"],
                     "splits": v.stats["splits"], "verdict": v.status.value, "seconds": best})
    return rows


def fit_exponent(rows) -> float:
    """Slope of log(seconds) against log(states)."""
    x = np.log([r["states"] for r in rows])
    y = np.log([max(r["seconds"], 1e-9) for r in rows])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def write_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return path


def plot_loglog(rows, path, exponent: float | None = None) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n = np.array([r["states"] for r in rows], dtype=float)
    t = np.array([r["seconds"] for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(n, t, "o-", label="check_res")
    ref = t[0] * (n / n[0]) ** 3
    ax.loglog(n, ref, "--", color="gray", label="|S|^3 reference")
    ax.set_xlabel("states")
    ax.set_ylabel("seconds")
    title = "RES refinement time"
    if exponent is not None:
        title += f" (fitted exponent {exponent:.2f})"
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
