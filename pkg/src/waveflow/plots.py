"""Figure rendering for CLI runs. All figures are written to files; the
Agg backend is forced so runs work headless."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150
PAIR_COLORS = ("#c03028", "#2060b0", "#2e8b57", "#9932cc", "#b8860b")


def _pair_color(index: int) -> str:
    return PAIR_COLORS[index % len(PAIR_COLORS)]


def plot_distance_curves(curves_by_pair: dict, path) -> str:
    """Stacked D_S(t) and D_E(t) panels, one color per test pair."""
    fig, (ax_s, ax_e) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.4))
    for idx, (label, records) in enumerate(curves_by_pair.items()):
        ts = [r.t for r in records]
        color = _pair_color(idx)
        ax_s.plot(ts, [r.d_s for r in records], color=color, label=label)
        ax_e.plot(ts, [r.d_e for r in records], color=color, label=label)
    ax_s.set_ylabel("system trace distance")
    ax_e.set_ylabel("environment trace distance")
    ax_e.set_xlabel("propagation length")
    for ax in (ax_s, ax_e):
        ax.set_ylim(-0.02, 1.05)
        ax.grid(True, alpha=0.3)
    ax_s.legend(fontsize=9, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_intensity(ts, profile, pol: str, path) -> str:
    """Transverse guide populations as a propagation-length map."""
    profile = np.asarray(profile)
    fig, ax = plt.subplots(figsize=(7.0, 2.8))
    mesh = ax.imshow(
        profile.T,
        origin="lower",
        aspect="auto",
        extent=(float(ts[0]), float(ts[-1]), 0.5, profile.shape[1] + 0.5),
        cmap="inferno",
        vmin=0.0,
        vmax=1.0,
    )
    ax.set_xlabel("propagation length")
    ax.set_ylabel("guide")
    ax.set_yticks(np.arange(1, profile.shape[1] + 1))
    ax.set_title(f"{pol} input")
    fig.colorbar(mesh, ax=ax, label="population")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_blp(curves_by_pair: dict, results_by_pair: dict, path) -> str:
    """D_S curves with the trace-distance increase intervals shaded."""
    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    for idx, (label, records) in enumerate(curves_by_pair.items()):
        color = _pair_color(idx)
        result = results_by_pair[label]
        ax.plot(
            [r.t for r in records],
            [r.d_s for r in records],
            color=color,
            label=f"{label} (measure {result.measure:.3f})",
        )
        for t0, t1 in result.witness_intervals:
            ax.axvspan(t0, t1, color=color, alpha=0.12, lw=0)
    ax.set_xlabel("propagation length")
    ax.set_ylabel("system trace distance")
    ax.set_ylim(-0.02, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=9, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_extremal(curves, path, t_marker: float | None = None) -> str:
    """Best/worst-case bands for system and environment distinguishability."""
    fig, (ax_s, ax_e) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.4))
    for ax, best, worst, title in (
        (ax_s, curves.best_s, curves.worst_s, "system"),
        (ax_e, curves.best_e, curves.worst_e, "environment"),
    ):
        ax.fill_between(curves.t, worst, best, color="#c8d8ee", alpha=0.8)
        ax.plot(curves.t, best, color="#c03028", label="best case")
        ax.plot(curves.t, worst, color="#2060b0", label="worst case")
        if t_marker is not None:
            ax.axvline(t_marker, color="0.3", ls="--", lw=1)
        ax.set_ylabel(f"{title} trace distance")
        ax.set_ylim(-0.02, 1.05)
        ax.grid(True, alpha=0.3)
    ax_s.legend(fontsize=9, loc="best")
    ax_e.set_xlabel("propagation length")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)
