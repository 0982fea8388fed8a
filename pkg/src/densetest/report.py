"""Figure rendering for campaign outputs.

Kept separate from the simulation engine: the harness produces numbers, this
module turns a SimResult into PNG files next to the delimited output.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

def plot_power_curve(result, path, title=None):
    """Rejection rate against the offset h, with the nominal level marked."""
    h = np.array(result.h_grid)
    rates = np.array([result.rejection_rate[v] for v in result.h_grid])
    order = np.argsort(h)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(h[order], rates[order], "o-", color="tab:blue")
    ax.axhline(0.05, linestyle="--", color="grey", linewidth=1)
    ax.set_xlabel("offset h")
    ax.set_ylabel("rejection rate")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title or f"power curve ({result.method})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_null_distribution(result, path, title=None):
    """Histogram of null statistics against the N(0,1) density."""
    stats = result.null_stats[~np.isnan(result.null_stats)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(stats, bins=30, density=True, color="tab:blue", alpha=0.6)
    grid = np.linspace(-4, 4, 201)
    dens = np.exp(-0.5 * grid**2) / math.sqrt(2 * math.pi)
    ax.plot(grid, dens, color="tab:red")
    ax.set_xlabel("statistic under the null")
    ax.set_ylabel("density")
    ks = result.ks_p_value
    base = title or f"null distribution ({result.method})"
    if not math.isnan(ks):
        base += f", KS p = {ks:.3f}"
    ax.set_title(base)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_campaign_figures(result, stem):
    """Write the standard figure set for one result; returns the paths."""
    paths = [plot_power_curve(result, f"{stem}_power.png")]
    if not math.isnan(result.ks_p_value):
        paths.append(plot_null_distribution(result, f"{stem}_null.png"))
    return paths
