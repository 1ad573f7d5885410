"""Matplotlib figure builders for the CLI report path.

Each builder returns a Figure; :func:`save_figure` writes it to disk with
volatile metadata stripped so repeated runs produce identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 10,
    "legend.frameon": False,
}

# Metadata keys that embed timestamps or tool versions, per format.
_VOLATILE_METADATA = {
    ".png": {"Software": None},
    ".pdf": {"Creator": None, "Producer": None, "CreationDate": None},
    ".svg": {"Date": None},
}


def save_figure(fig, path) -> Path:
    """Write a figure to `path`; the format follows the file extension."""
    path = Path(path)
    metadata = _VOLATILE_METADATA.get(path.suffix.lower())
    fig.savefig(path, bbox_inches="tight", metadata=metadata)
    plt.close(fig)
    return path


def _phi_axis(ax):
    ax.set_xlabel(r"polarizer offset $\phi$ [rad]")
    ax.set_ylabel(r"coincidence probability $P(\phi)$")
    ticks = np.arange(0.0, 1.01 * math.pi, math.pi / 4)
    ax.set_xticks(ticks)
    ax.set_xticklabels(["0", r"$\pi/4$", r"$\pi/2$", r"$3\pi/4$", r"$\pi$"][: len(ticks)])


def curve_figure(phi, means, std_errors, label: str):
    """One coincidence curve, with error bars where the estimator reports them."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        std_errors = np.asarray(std_errors)
        if np.any(std_errors > 0):
            ax.errorbar(phi, means, yerr=std_errors, fmt="o-", ms=3, capsize=2, label=label)
        else:
            ax.plot(phi, means, "o-", ms=3, label=label)
        _phi_axis(ax)
        ax.legend()
        fig.tight_layout()
    return fig


def comparison_figure(phi, furry, hbt, qm):
    """The factorized curve against the coherence-ratio and QM curves."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(phi, furry, "-", label=r"Furry $1/4 + \cos(2\phi)/8$")
        ax.plot(phi, hbt, "--", lw=2.2, label=r"HBT ratio $\sin^2(\phi)/2$")
        ax.plot(phi, qm, ":", lw=1.2, color="k", label="QM reference (orthogonal)")
        ax.axhline(0.125, color="gray", lw=0.8, ls="-.")
        ax.annotate("nonzero floor of the factorized model", (0.02, 0.131), fontsize=8, color="gray")
        _phi_axis(ax)
        ax.legend(loc="upper center")
        fig.tight_layout()
    return fig


def chsh_figure(result, settings):
    """The four CHSH correlations and |S| against the local bound."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        labels = ["E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"]
        values = [result.e_ab, result.e_ab_prime, result.e_a_prime_b, result.e_a_prime_b_prime]
        ax.bar(labels, values, color="steelblue")
        ax.axhline(0, color="k", lw=0.8)
        ax.set_ylim(-1.05, 1.05)
        ax.set_ylabel("correlation")
        ax.set_title(
            f"|S| = {result.abs_s:.4f}   (local deterministic bound {result.lhv_bound:.1f})"
        )
        fig.tight_layout()
    return fig


def decomposition_figure(decomposition):
    """Conditional P(b|a,λ) against the marginal P(b|λ) over the hidden variable."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        lam = decomposition.lambdas
        ax.plot(lam, decomposition.p_b_given_a_lambda, "-", label=r"$P(b\,|\,a,\lambda)$")
        ax.plot(lam, decomposition.p_b_given_lambda, "--", label=r"$P(b\,|\,\lambda)$")
        if np.any(decomposition.degenerate):
            lam_deg = lam[decomposition.degenerate]
            ax.plot(
                lam_deg,
                decomposition.p_b_given_a_lambda[decomposition.degenerate],
                "x",
                color="crimson",
                label="degenerate nodes",
            )
        ax.set_xlabel(r"hidden polarization angle $\lambda$ [rad]")
        ax.set_ylabel("pass probability")
        ax.legend()
        fig.tight_layout()
    return fig


def convergence_figure(samples, mean_abs_errors, mean_std_errors, slope: float):
    """Monte Carlo error decay per decade, with the fitted std-error slope."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.loglog(samples, mean_std_errors, "o-", label="mean std. error")
        ax.loglog(samples, mean_abs_errors, "s--", label="mean |error|")
        ref = mean_std_errors[0] * (np.asarray(samples, float) / samples[0]) ** -0.5
        ax.loglog(samples, ref, ":", color="gray", label=r"$\propto N^{-1/2}$")
        ax.set_xlabel("samples")
        ax.set_ylabel("error")
        ax.set_title(f"fitted std-error slope: {slope:.3f}")
        ax.legend()
        fig.tight_layout()
    return fig
