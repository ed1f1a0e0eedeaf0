"""Figures and their CSV twins for scenario reports."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (6.0, 3.8)
PASS_COLOR = "#3a7d44"
FAIL_COLOR = "#b23a48"


def _csv(path: Path, header: list[str], rows) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def hilbert_figure(profile, out: Path) -> list[Path]:
    degrees = sorted(profile.values)
    values = [profile.values[d] for d in degrees]
    fitted = [float(profile.polynomial_value(d)) for d in degrees]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(degrees, values, "o", color="black", label="measured")
    ax.plot(degrees, fitted, "-", color=PASS_COLOR, label="fitted polynomial")
    ax.axvline(profile.stabilization_degree, color="grey", ls=":", lw=1)
    ax.set_xlabel("degree d")
    ax.set_ylabel("dim (R/I)_d")
    ax.legend(frameon=False)
    rows = [(d, v, str(profile.polynomial_value(d))) for d, v in zip(degrees, values)]
    return [
        _save(fig, out / "hilbert_function.png"),
        _csv(out / "hilbert_function.csv", ["degree", "hilbert_value", "fitted_value"], rows),
    ]


def jacobian_figure(histogram: dict[int, int], out: Path) -> list[Path]:
    ranks = sorted(histogram)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar([str(r) for r in ranks], [histogram[r] for r in ranks], color=PASS_COLOR)
    ax.set_xlabel("Jacobian rank")
    ax.set_ylabel("points")
    return [
        _save(fig, out / "jacobian_ranks.png"),
        _csv(out / "jacobian_ranks.csv", ["rank", "points"], [(r, histogram[r]) for r in ranks]),
    ]


def criteria_figure(results, out: Path) -> list[Path]:
    labels = [f"{r.number}" for r in results]
    ratio = [r.elapsed / r.budget for r in results]
    colors = [PASS_COLOR if r.passed else FAIL_COLOR for r in results]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.barh(labels, ratio, color=colors)
    ax.axvline(1.0, color="black", lw=1)
    ax.invert_yaxis()
    ax.set_xlabel("runtime / budget")
    ax.set_ylabel("criterion")
    rows = [(r.number, r.tag, r.passed, f"{r.elapsed:.4f}", r.budget) for r in results]
    return [
        _save(fig, out / "criteria.png"),
        _csv(out / "criteria.csv", ["criterion", "tag", "passed", "elapsed_seconds", "budget_seconds"], rows),
    ]


def graded_ranks_figure(rows: list[dict[str, int]], out: Path) -> list[Path]:
    degrees = [r["degree"] for r in rows]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    width = 0.38
    ax.bar([d - width / 2 for d in degrees], [r["constructed"] for r in rows], width, label="constructed", color=PASS_COLOR)
    ax.bar([d + width / 2 for d in degrees], [r["target"] for r in rows], width, label="target", color="grey")
    ax.set_xlabel("degree d")
    ax.set_ylabel("rank of I_d")
    ax.legend(frameon=False)
    table = [(r["degree"], r["constructed"], r["target"], r["union"]) for r in rows]
    return [
        _save(fig, out / "graded_ranks.png"),
        _csv(out / "graded_ranks.csv", ["degree", "constructed", "target", "union"], table),
    ]


def write_figures(figures: dict[str, Any], directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "hilbert" in figures:
        written += hilbert_figure(figures["hilbert"], out)
    if figures.get("jacobian_ranks"):
        written += jacobian_figure(figures["jacobian_ranks"], out)
    if figures.get("criteria"):
        written += criteria_figure(figures["criteria"], out)
    if figures.get("graded_ranks"):
        written += graded_ranks_figure(figures["graded_ranks"], out)
    return written
