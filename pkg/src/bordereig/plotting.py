"""Spectrum figures rendered to files with the Agg backend."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_spectra", "plot_deflation", "plot_growth"]

_STYLES = [
    dict(marker="o", s=90, facecolors="none", edgecolors="tab:gray", linewidths=1.2),
    dict(marker="x", s=60, color="tab:red"),
    dict(marker="+", s=80, color="tab:blue"),
    dict(marker="D", s=25, color="tab:green"),
]


def _save(fig, path):
    fig.tight_layout()
    # no timestamp metadata so repeated runs write identical files
    meta = {"Software": None} if str(path).lower().endswith(".png") else {}
    fig.savefig(path, dpi=110, metadata=meta)
    plt.close(fig)


def plot_spectra(series, path, title=""):
    """Scatter several labelled eigenvalue sets in the complex plane."""
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    for (label, values), style in zip(series.items(), _STYLES * 2):
        z = np.asarray(list(values), dtype=np.complex128)
        if z.size:
            ax.scatter(z.real, z.imag, label=f"{label} ({z.size})", **style)
    ax.axhline(0, color="0.85", lw=0.8, zorder=0)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def plot_deflation(report, path, oracle_values=None):
    series = {}
    if oracle_values is not None:
        series["oracle"] = oracle_values
    series["shared"] = report.shared_values()
    series["residual roots"] = report.residual_roots
    series["eigenvalues of B"] = report.eig.values
    plot_spectra(series, path, title=f"deflation ({report.path} path)")


def plot_growth(trace, path):
    """New roots per step (left) and the final analytic spectrum (right)."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4), gridspec_kw={"width_ratios": [3, 2]})
    for n, step in enumerate(trace.steps, 1):
        r = np.real(np.asarray(step.roots, dtype=np.complex128))
        ax1.scatter(np.full(r.size, n), r, marker="_", s=120, color="tab:red")
        c = np.real(np.asarray(step.carried, dtype=np.complex128))
        ax1.scatter(np.full(c.size, n), c, marker=".", s=12, color="0.6")
    ax1.set_xlabel("step")
    ax1.set_ylabel("eigenvalue (real part)")
    ax1.set_title("new roots (red), carried (gray)")
    z = np.asarray(trace.analytic_spectrum, dtype=np.complex128)
    ax2.scatter(np.arange(1, z.size + 1), z.real, color="tab:blue", s=18)
    ax2.set_xlabel("index")
    ax2.set_title(f"final spectrum, order {trace.order}")
    _save(fig, path)
