"""Figures written next to the CSV/JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def audit_figure(reports, path: str) -> None:
    """|Y| / C(n-1, d+1) against n, one line per d.

    The counting chain needs this ratio to be at least 1; every point sits
    below the dashed line.
    """
    by_d: dict[int, list] = {}
    for r in reports:
        by_d.setdefault(r.d, []).append(r)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for d, rows in sorted(by_d.items()):
        ns = [r.n for r in rows]
        ratio = [r.complement_size / r.required for r in rows]
        ax.plot(ns, ratio, marker="o", ms=3, lw=1, label=f"d={d}")
    ax.axhline(1.0, color="k", ls="--", lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel(r"$|\mathcal{Y}| \,/\, \binom{n-1}{d+1}$")
    ax.set_ylim(0, 1.05)
    ax.legend(ncol=2, fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

