"""Figure rendering for the experiment reports.

Every function writes one figure to the given path (format chosen by the
file extension) and returns the path.  The Agg backend is forced so the
CLI renders headlessly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .graph import DegreeStats
from .theory import ErResult, FpeReport, SweepResult


def plot_er_results(results, path: str) -> str:
    """Largest-community ratio vs p, one line per n, with standard errors."""
    fig, ax = plt.subplots(figsize=(6, 4))
    by_n: dict = {}
    for r in results:
        by_n.setdefault(r.n, []).append(r)
    for n, rows in sorted(by_n.items()):
        rows.sort(key=lambda r: r.p)
        ax.errorbar(
            [r.p for r in rows],
            [r.mean_ratio for r in rows],
            yerr=[r.std_error for r in rows],
            marker="o",
            capsize=2,
            label=f"n={n}",
        )
    ax.set_xlabel("edge probability p")
    ax.set_ylabel("relative size of largest community")
    ax.set_ylim(0, 1.05)
    ax.grid(True, linestyle="--", alpha=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_sweep(sweep: SweepResult, path: str) -> str:
    """F1 vs D with the degree-statistic markers as vertical lines."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sweep.d_values, sweep.f1_scores, marker="o", label="average F1")
    styles = {"avg": ":", "median": "--", "mode": "-."}
    for name, value in sweep.markers.items():
        if value is None:
            continue
        ax.axvline(value, linestyle=styles[name], alpha=0.7, label=f"d_{name}")
    ax.set_xlabel("threshold D")
    ax.set_ylabel("average F1")
    ax.grid(True, linestyle="--", alpha=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_degree_histogram(stats: DegreeStats, path: str) -> str:
    """Node count per degree on log-log axes, with the mode marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    degrees = sorted(stats.histogram)
    counts = [stats.histogram[d] for d in degrees]
    ax.plot(degrees, counts, marker=".", linestyle="none")
    if stats.d_mode is not None:
        ax.axvline(stats.d_mode, linestyle="--", alpha=0.7, label="d_mode")
        ax.legend()
    if stats.d_max > 50:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("degree")
    ax.set_ylabel("node count")
    ax.grid(True, linestyle="--", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_fpe_reports(reports, path: str) -> str:
    """Empirical boundary-merge means (with 3se bars) next to their bounds."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(reports))
    ax.bar(
        [x - 0.2 for x in xs],
        [r.empirical_mean for r in reports],
        width=0.4,
        yerr=[3 * r.std_error for r in reports],
        capsize=3,
        label="empirical mean",
    )
    ax.bar(
        [x + 0.2 for x in xs],
        [r.bound for r in reports],
        width=0.4,
        label="bound",
    )
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"D={r.threshold}" for r in reports])
    ax.set_ylabel("boundary merges per run")
    ax.grid(True, axis="y", linestyle="--", alpha=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
