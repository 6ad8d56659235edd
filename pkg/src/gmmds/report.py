"""Report rendering for verification runs: machine-readable JSON and CSV
plus a matplotlib summary figure, written side by side in one directory.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .verify import VerificationReport  # noqa: E402


def dumps_stable(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2) + "\n"


def write_cells_csv(report: VerificationReport, path: Path) -> None:
    fields = [
        "m",
        "k",
        "mode",
        "enumerated",
        "condition_ok",
        "nonzero",
        "exact_resolved",
        "inconclusive",
        "counterexamples",
    ]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for cell in report.cells:
            writer.writerow(
                [
                    cell.m,
                    cell.k,
                    cell.mode,
                    cell.enumerated,
                    cell.condition_ok,
                    cell.nonzero,
                    cell.exact_resolved,
                    len(cell.inconclusive),
                    len(cell.counterexamples),
                ]
            )


def render_grid_figure(report: VerificationReport, path: Path) -> None:
    """Heatmap of verified families per (m, k) cell; sampled cells hatched."""
    ms = sorted({c.m for c in report.cells})
    ks = sorted({c.k for c in report.cells})
    grid = [[float("nan")] * len(ks) for _ in ms]
    for cell in report.cells:
        grid[ms.index(cell.m)][ks.index(cell.k)] = cell.nonzero
    fig, ax = plt.subplots(figsize=(1.2 * len(ks) + 2, 1.0 * len(ms) + 2))
    im = ax.imshow(grid, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(ks)), [str(k) for k in ks])
    ax.set_yticks(range(len(ms)), [str(m) for m in ms])
    ax.set_xlabel("k")
    ax.set_ylabel("m")
    bad = len(report.counterexamples())
    ax.set_title(
        f"verified nonzero families per cell (seed {report.seed}, "
        f"{bad} counterexamples)"
    )
    for cell in report.cells:
        i, j = ms.index(cell.m), ks.index(cell.k)
        tag = f"{cell.nonzero}" + ("*" if cell.mode == "sampled" else "")
        ax.text(j, i, tag, ha="center", va="center", color="white", fontsize=9)
    fig.colorbar(im, ax=ax, label="families nonzero")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report_files(report: VerificationReport, out_dir) -> list[Path]:
    """Write report.json, cells.csv and grid.png into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    json_path = out / "report.json"
    json_path.write_text(dumps_stable(report.to_json()))
    paths.append(json_path)
    csv_path = out / "cells.csv"
    write_cells_csv(report, csv_path)
    paths.append(csv_path)
    fig_path = out / "grid.png"
    render_grid_figure(report, fig_path)
    paths.append(fig_path)
    return paths


def render_cells_table(report: VerificationReport) -> str:
    header = f"{'m':>3} {'k':>3} {'mode':>10} {'enum':>8} {'cond':>8} {'nonzero':>8} {'exact':>6} {'inconcl':>8} {'cex':>4}"
    lines = [header, "-" * len(header)]
    for c in report.cells:
        lines.append(
            f"{c.m:>3} {c.k:>3} {c.mode:>10} {c.enumerated:>8} {c.condition_ok:>8} "
            f"{c.nonzero:>8} {c.exact_resolved:>6} {len(c.inconclusive):>8} "
            f"{len(c.counterexamples):>4}"
        )
    return "\n".join(lines)
