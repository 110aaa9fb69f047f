"""Optional figure rendering for integration output.

Kept separate from the verification path: figures are a convenience for eyes,
never an oracle.  The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from quadham.dynamics import Trajectory


def plot_trajectory(traj: Trajectory, path: str) -> str:
    """Coordinates over time, plus invariant drift when invariants were
    recorded.  Returns the written path."""
    n_panels = 2 if traj.invariants else 1
    fig, axes = plt.subplots(n_panels, 1, figsize=(8, 3.2 * n_panels), squeeze=False)
    ax = axes[0][0]
    for j, lab in enumerate(traj.labels):
        ax.plot(traj.times, traj.states[:, j], label=lab, lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("coordinates")
    ax.legend(loc="best", fontsize=8)
    if traj.meta.get("aborted"):
        ax.set_title(f"aborted: {traj.meta['aborted']}", fontsize=9)
    if traj.invariants:
        ax2 = axes[1][0]
        for name in sorted(traj.invariants):
            vals = traj.invariants[name]
            ax2.plot(traj.times, np.abs(vals - vals[0]), label=name, lw=1.0)
        ax2.set_yscale("symlog", linthresh=1e-16)
        ax2.set_xlabel("t")
        ax2.set_ylabel("|I(t) - I(0)|")
        ax2.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
