"""Figure rendering for the report paths of the command line tool.

Uses the Agg backend unconditionally; the consumers are files, never a
display.  Figures go alongside the structured output so a failing CI run
can be triaged from the artifacts directory alone.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _finite(values):
    return [v for v in values if v is not None and math.isfinite(v)]


def render_verify_figure(report: dict, path: str) -> None:
    """Bar chart of every residual in a combined verify report against
    its tolerance, log scale, failures drawn in red."""
    names: list[str] = []
    values: list[float] = []
    for section in ("static", "dynamic"):
        block = report.get(section, {})
        for key, val in sorted(block.get("residuals", {}).items()):
            names.append(f"{section[:3]}:{key}")
            values.append(val if isinstance(val, (int, float)) else float("nan"))
    tolerance = report.get("tolerance", 1e-9)

    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(names)), 4.0))
    floor = 1e-18
    heights = [max(v, floor) if v == v else floor for v in values]
    colors = ["#b22222" if (v != v or v > tolerance) else "#2f6f4f"
              for v in values]
    ax.bar(range(len(names)), heights, color=colors)
    ax.axhline(tolerance, color="#444444", linestyle="--", linewidth=1,
               label=f"tolerance {tolerance:g}")
    ax.set_yscale("log")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("relative residual")
    ax.set_title("identity residuals")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_sweep_figure(rows: list[dict], path: str) -> None:
    """Two panels over the sweep grid: truncation length against the
    convergence margin, and the worst residual per row."""
    ok = [r for r in rows if not r.get("error")]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.0))

    margins = _finite([r.get("margin") for r in ok])
    lengths = [r.get("n_factors") for r in ok if r.get("margin") is not None]
    if margins and lengths:
        ax1.plot(margins, lengths, "o-", color="#2f6f4f", markersize=4)
    ax1.set_xlabel("convergence margin")
    ax1.set_ylabel("truncation length")
    ax1.set_title("product truncation vs margin")

    xs = [r.get("grid_value") for r in ok]
    worst = [r.get("worst_residual") for r in ok]
    pairs = [(x, w) for x, w in zip(xs, worst)
             if x is not None and w is not None and math.isfinite(w)]
    if pairs:
        ax2.semilogy([p[0] for p in pairs],
                     [max(p[1], 1e-18) for p in pairs],
                     "s-", color="#1f4e79", markersize=4)
    bad = [r.get("grid_value") for r in rows if r.get("error")]
    for x in bad:
        if x is not None:
            ax2.axvline(x, color="#b22222", alpha=0.4, linewidth=1)
    ax2.set_xlabel("grid value")
    ax2.set_ylabel("worst residual")
    ax2.set_title("residuals over the grid")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
