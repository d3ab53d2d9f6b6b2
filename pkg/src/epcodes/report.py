"""Key/value reports and the figures written next to them."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "savefig.dpi": 120,
}


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)


def kv_lines(pairs: Iterable[tuple[str, object]]) -> list[str]:
    return [f"{k} {fmt(v)}" for k, v in pairs]


def write_report(path: Path, lines: Sequence[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def edge_success_figure(successes: Sequence[Fraction], threshold: Fraction, path, title: str = "") -> Path:
    """Histogram of per-edge success with the acceptance threshold marked."""
    path = Path(path)
    values = sorted({s for s in successes})
    counts = [sum(1 for s in successes if s == v) for v in values]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.bar([float(v) for v in values], counts, width=0.02, color="tab:blue")
        ax.axvline(float(threshold), color="tab:red", linestyle="--", label=f"threshold {fmt(threshold)}")
        ax.set_xlabel("edge success probability")
        ax.set_ylabel("edges")
        ax.set_xlim(min(float(threshold), float(values[0]) if values else 1.0) - 0.05, 1.05)
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
        plt.close(fig)
    return path


def average_error_figure(rows: Sequence[tuple[int, int, Fraction, Fraction]], path) -> Path:
    """Average success against n, one curve per alphabet size p.

    rows: (p, n, exact average, closed-form lower bound).
    """
    path = Path(path)
    by_p: dict[int, list[tuple[int, Fraction, Fraction]]] = {}
    for p, n, avg, bound in rows:
        by_p.setdefault(p, []).append((n, avg, bound))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for i, (p, pts) in enumerate(sorted(by_p.items())):
            color = f"C{i}"
            ns = [n for n, _, _ in pts]
            ax.plot(ns, [float(a) for _, a, _ in pts], "o-", color=color, ms=3, label=f"p={p} exact")
            ax.plot(ns, [float(b) for _, _, b in pts], ":", color=color, label=f"p={p} bound")
            ax.axhline(1 - 1 / (p + 1), color=color, lw=0.8, alpha=0.6)
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("n (clique size)")
        ax.set_ylabel("average success")
        ax.legend(ncol=2, fontsize=8)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
        plt.close(fig)
    return path


def cover_figure(class_sizes: dict[str, Sequence[int]], path) -> Path:
    """Color class sizes of the cover-induced colorings."""
    path = Path(path)
    names = list(class_sizes)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(names), figsize=(3.2 * len(names), 3.2), squeeze=False)
        for ax, name in zip(axes[0], names):
            sizes = class_sizes[name]
            ax.bar(range(1, len(sizes) + 1), sizes, color="tab:green")
            ax.set_title(name, fontsize=9)
            ax.set_xlabel("color")
        axes[0][0].set_ylabel("vertices")
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
        plt.close(fig)
    return path
