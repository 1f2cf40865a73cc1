"""Matplotlib figure rendering for the CLI report paths.

Figures are rendered to files next to the delimited outputs; the CSV/JSON
files remain the authoritative data.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_width_histogram(widths, path):
    """Bucket-width frequency distribution (log-scale counts)."""
    widths = np.asarray(widths)
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.arange(widths.min(), widths.max() + 2) - 0.5
    ax.hist(widths, bins=bins, color="tab:blue", edgecolor="black")
    ax.set_yscale("log")
    ax.set_xlabel("bucket width")
    ax.set_ylabel("count")
    ax.set_title("Distribution of bucket width")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_time_by_width(agg, path, mean: bool):
    """agg: {backend: {width: (count, total_ns)}}; mean or total time per width."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for backend, per_width in sorted(agg.items()):
        ws = sorted(per_width)
        if mean:
            ys = [per_width[w][1] / per_width[w][0] for w in ws]
        else:
            ys = [per_width[w][1] for w in ws]
        ax.plot(ws, ys, marker="o", label=backend)
    ax.set_yscale("log")
    ax.set_xlabel("bucket width")
    ax.set_ylabel(("mean" if mean else "total") + " contraction time (ns)")
    ax.set_title(("Mean" if mean else "Total") + " time by bucket width")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_kernel_crossover(rows, path):
    """rows: (width, mean_ns_reference, mean_ns_fast)."""
    ws = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ws, [r[1] for r in rows], marker="o", label="reference")
    ax.plot(ws, [r[2] for r in rows], marker="s", label="fast")
    ax.set_yscale("log")
    ax.set_xlabel("bucket width")
    ax.set_ylabel("mean kernel time (ns)")
    ax.set_title("Kernel time crossover")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_distributions(sigma_approx, sigma_exact, path):
    x = np.arange(len(sigma_approx))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x - 0.2, sigma_approx, width=0.4, label="ensemble")
    if sigma_exact is not None:
        ax.bar(x + 0.2, sigma_exact, width=0.4, label="exact")
    ax.set_xlabel("basis state")
    ax.set_ylabel("probability")
    ax.set_title("Output distribution")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_sweep(records, fit_result, path):
    """Error vs ensemble size per qubit count, with fitted model curves."""
    from .error_model import model_error

    fig, ax = plt.subplots(figsize=(6, 4))
    by_n = {}
    for r in records:
        by_n.setdefault(r.n_qubits, []).append(r)
    for n, recs in sorted(by_n.items()):
        recs = sorted(recs, key=lambda r: r.K)
        ks = [r.K for r in recs]
        errs = [r.error for r in recs]
        (line,) = ax.plot(ks, errs, "o", label=f"n={n}")
        if fit_result is not None:
            grid = np.geomspace(min(ks), max(ks), 50)
            ax.plot(grid, [model_error(fit_result, n, k) for k in grid],
                    "-", color=line.get_color(), alpha=0.6)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("ensemble size K")
    ax.set_ylabel("error (1 - fidelity)")
    ax.set_title("Ensemble error vs size")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
