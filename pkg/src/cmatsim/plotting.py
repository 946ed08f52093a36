"""Figure rendering for CLI reports (headless Agg backend).

Turns sweep results and single-run trajectories into PNG files next to the
delimited data outputs.  Kept separate from the sweep module so that data
generation stays free of any rendering dependency in its call path.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import SimResult
from .sweep import SweepMode, SweepResult

__all__ = ["render_sweep_figure", "render_trajectory_figure"]

_OVERLAY_STYLES = {
    "tau_a": dict(color="0.4", ls=":", label=r"$\tilde\tau_a$"),
    "tau_c": dict(color="0.4", ls="-.", label=r"$\tilde\tau_c$"),
    "f_adi_tau0": dict(color="white", ls="-", label=r"$\tau = F_{adi}\,\tau_0$"),
    "f_cp_ratio": dict(color="cyan", ls="--", label=r"$\Omega_0/g = F_{cp}$"),
    "omega0_tau_2": dict(color="green", ls="--", label=r"$\Omega_0\tau = 2$"),
    "g_tau_2": dict(color="yellow", ls=":", label=r"$g\tau = 2$"),
}


def _cell_value(cell, mode: SweepMode) -> float:
    if mode is SweepMode.SUCCESS_MAP:
        v = cell.success_probability_normalized
        return v if v is not None else float("nan")
    return cell.fidelity


def render_sweep_figure(result: SweepResult, path: str) -> str:
    """Render a sweep result to ``path`` (PNG); returns the path written."""
    spec = result.spec
    if spec.mode is SweepMode.TRUNCATION_STUDY:
        xs = [c.x for c in result.grid]
        fids = [c.fidelity for c in result.grid]
        fig, ax = plt.subplots(figsize=(5, 3.4))
        ax.plot(xs, fids, "o-", ms=3)
        ax.set_xlabel(spec.x_axis.name)
        ax.set_ylabel("fidelity")
        ax.grid(alpha=0.3)
    else:
        xs = spec.x_axis.values()
        ys = spec.y_axis.values()
        z = np.full((len(ys), len(xs)), np.nan)
        for k, cell in enumerate(result.grid):
            z[k // len(xs), k % len(xs)] = _cell_value(cell, spec.mode)
        fig, ax = plt.subplots(figsize=(5.4, 4.2))
        mesh = ax.pcolormesh(xs, ys, z, shading="nearest", vmin=0.0, vmax=1.0)
        label = (
            "normalized success probability"
            if spec.mode is SweepMode.SUCCESS_MAP
            else "fidelity"
        )
        fig.colorbar(mesh, ax=ax, label=label)
        for name, pts in result.overlays.items():
            if not pts:
                continue
            px = [q[0] for q in pts]
            py = [q[1] for q in pts]
            ax.plot(px, py, **_OVERLAY_STYLES.get(name, dict(color="red")))
        if spec.x_axis.scale == "log":
            ax.set_xscale("log")
        if spec.y_axis.scale == "log":
            ax.set_yscale("log")
        ax.set_xlim(xs[0], xs[-1])
        ax.set_ylim(ys[0], ys[-1])
        ax.set_xlabel(spec.x_axis.name)
        ax.set_ylabel(spec.y_axis.name)
        ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_trajectory_figure(result: SimResult, path: str) -> str:
    """Plot basis populations and the total norm along one evolution."""
    t = result.samples.times
    pops = np.abs(result.samples.amps) ** 2
    labels = ["UG0", "GU0", "EG0", "GE0", "GG1"]
    fig, ax = plt.subplots(figsize=(5.4, 3.4))
    for k, lab in enumerate(labels):
        ax.plot(t, pops[:, k], label=lab, lw=1.1)
    ax.plot(t, result.samples.norms, "k--", label="norm", lw=1.4)
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7, ncol=3)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
