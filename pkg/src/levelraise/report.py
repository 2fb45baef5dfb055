"""PNG figures written next to the delimited CLI output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# no timestamps or version strings, so reruns give identical files
_PNG_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return path


def brandt_figure(p: int, matrices: dict[int, Sequence[Sequence[int]]], out_dir: Path, limit: int = 9) -> Path:
    ns = sorted(matrices)[:limit]
    cols = min(3, len(ns)) or 1
    rows = (len(ns) + cols - 1) // cols or 1
    fig, axes = plt.subplots(rows, cols, figsize=(3 * cols, 3 * rows), squeeze=False)
    for ax in axes.flat:
        ax.axis("off")
    for ax, n in zip(axes.flat, ns):
        m = matrices[n]
        ax.axis("on")
        ax.imshow(m, cmap="viridis")
        ax.set_title(f"B({n})")
        for i, row in enumerate(m):
            for j, v in enumerate(row):
                ax.text(j, i, str(v), ha="center", va="center", color="white", fontsize=8)
        ax.set_xticks(range(len(m)))
        ax.set_yticks(range(len(m)))
    fig.suptitle(f"Brandt matrices, p = {p}")
    fig.tight_layout()
    return _save(fig, out_dir / f"brandt_p{p}.png")


def table_figure(group: str, columns: Sequence[str], rows: Sequence[tuple[str, Sequence[int]]], out_dir: Path) -> Path:
    data = [list(d) for _, d in rows]
    fig, ax = plt.subplots(figsize=(1 + 0.8 * len(columns), 0.5 + 0.35 * len(rows)))
    ax.imshow(data, cmap="Blues", aspect="auto")
    ax.set_xticks(range(len(columns)), list(columns))
    ax.set_yticks(range(len(rows)), [t for t, _ in rows])
    for i, row in enumerate(data):
        for j, v in enumerate(row):
            ax.text(j, i, str(v), ha="center", va="center", fontsize=8)
    ax.set_title(f"{group}: fixed-space dimensions")
    fig.tight_layout()
    return _save(fig, out_dir / f"table_{group.lower()}.png")


def grid_figure(results: Sequence[dict], out_dir: Path) -> Path:
    labels = [f"({r['instance']['p']},{r['instance']['q']})" for r in results]
    dim_j = [r["instance"]["dim_J"] for r in results]
    dim_new = [r["instance"]["dim_new"] for r in results]
    eligible = [sum(1 for row in r["rows"] if row["eligible"]) for r in results]
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(labels)), 4))
    x = range(len(labels))
    ax.bar([i - 0.2 for i in x], dim_j, width=0.4, label="dim level J")
    ax.bar([i + 0.2 for i in x], dim_new, width=0.4, label="dim new space")
    for i, e in enumerate(eligible):
        if e:
            ax.annotate(f"{e} raised", (i, dim_j[i]), ha="center", va="bottom", fontsize=7)
    ax.set_xticks(list(x), labels, rotation=60, fontsize=7)
    ax.set_xlabel("(p, q)")
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_dir / "grid_search.png")
