"""Figure rendering from sweep CSVs: heatmaps, class maps and curve plots."""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch

from .csvdata import InputError, RecipeError, load_sweep

KINDS = ("heatmap", "classmap", "curves")

# fixed class palette: C1 (strongest entanglement) through C5 plus undecided
CLASS_COLORS = {
    "C1": "#7b0e6e",
    "C2": "#c23b80",
    "C3": "#ee7550",
    "C4": "#f7b93c",
    "C5": "#f2ef8e",
    "C4or5-undecided": "#b0b0b0",
}
CLASS_ORDER = ["C1", "C2", "C3", "C4", "C5", "C4or5-undecided"]


@dataclass
class FigureRecipe:
    """What to draw: input CSV, figure kind, column mapping, output path."""

    csv_path: str
    kind: str
    x: str
    out_path: str
    y: list = field(default_factory=list)
    z: str | None = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise RecipeError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "heatmap" and (len(self.y) != 1 or not self.z):
            raise RecipeError("heatmap needs one --y column and a --z column")
        if self.kind == "classmap" and len(self.y) != 1:
            raise RecipeError("classmap needs one --y column")
        if self.kind == "curves" and not self.y:
            raise RecipeError("curves need at least one --y column")


@dataclass
class RenderResult:
    out_path: str
    legend_labels: list
    x_limits: tuple
    y_limits: tuple


def _pivot(xs, ys, values):
    """Arrange scattered (x, y, value) triples on their rectangular grid.

    Missing cells stay masked; duplicate cells keep the last value.
    """
    x_levels = sorted(set(xs))
    y_levels = sorted(set(ys))
    xi = {v: i for i, v in enumerate(x_levels)}
    yi = {v: i for i, v in enumerate(y_levels)}
    grid = np.full((len(y_levels), len(x_levels)), np.nan, dtype=object)
    for x, y, v in zip(xs, ys, values):
        grid[yi[y], xi[x]] = v
    return np.array(x_levels), np.array(y_levels), grid


def _edges(levels):
    """Cell edges around possibly non-uniform grid centers."""
    levels = np.asarray(levels, dtype=float)
    if len(levels) == 1:
        return np.array([levels[0] - 0.5, levels[0] + 0.5])
    mid = 0.5 * (levels[1:] + levels[:-1])
    first = levels[0] - (mid[0] - levels[0])
    last = levels[-1] + (levels[-1] - mid[-1])
    return np.concatenate([[first], mid, [last]])


def render(recipe: FigureRecipe) -> RenderResult:
    """Draw one figure; deterministic for identical inputs."""
    recipe.validate()
    table = load_sweep(recipe.csv_path)
    if table.n_rows == 0:
        raise InputError(f"{recipe.csv_path}: no rows")

    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    legend_labels: list = []

    if recipe.kind == "heatmap":
        xs = table.floats(recipe.x)
        ys = table.floats(recipe.y[0])
        zs = table.floats(recipe.z)
        x_levels, y_levels, grid = _pivot(xs, ys, zs)
        values = np.ma.masked_invalid(grid.astype(float))
        mesh = ax.pcolormesh(_edges(x_levels), _edges(y_levels), values,
                             cmap="viridis", shading="flat")
        fig.colorbar(mesh, ax=ax, label=recipe.z)
        ax.set_xlabel(recipe.x)
        ax.set_ylabel(recipe.y[0])

    elif recipe.kind == "classmap":
        xs = table.floats(recipe.x)
        ys = table.floats(recipe.y[0])
        zs = table.column(recipe.z or "class")
        unknown = sorted(set(zs) - set(CLASS_ORDER) - {""})
        if unknown:
            raise RecipeError(f"unknown class labels in CSV: {unknown}")
        x_levels, y_levels, grid = _pivot(xs, ys, zs)
        coded = np.full(grid.shape, np.nan)
        for k, name in enumerate(CLASS_ORDER):
            coded[grid == name] = k
        cmap = ListedColormap([CLASS_COLORS[name] for name in CLASS_ORDER])
        ax.pcolormesh(_edges(x_levels), _edges(y_levels),
                      np.ma.masked_invalid(coded), cmap=cmap,
                      vmin=-0.5, vmax=len(CLASS_ORDER) - 0.5, shading="flat")
        present = [name for name in CLASS_ORDER if np.any(grid == name)]
        handles = [Patch(facecolor=CLASS_COLORS[name], label=name) for name in present]
        ax.legend(handles=handles, loc="upper right", fontsize=8, framealpha=0.9)
        legend_labels = present
        ax.set_xlabel(recipe.x)
        ax.set_ylabel(recipe.y[0])

    else:  # curves
        xs = np.array(table.floats(recipe.x))
        order = np.argsort(xs, kind="stable")
        for name in recipe.y:
            ys = np.array(table.floats(name))
            ax.plot(xs[order], ys[order], label=name)
        ax.legend(fontsize=8)
        legend_labels = list(recipe.y)
        ax.set_xlabel(recipe.x)
        ax.set_ylabel(", ".join(recipe.y))

    fig.tight_layout()
    fig.savefig(recipe.out_path, metadata={"Software": "sweepfigs"})
    x_limits, y_limits = ax.get_xlim(), ax.get_ylim()
    plt.close(fig)
    return RenderResult(out_path=recipe.out_path, legend_labels=legend_labels,
                        x_limits=tuple(x_limits), y_limits=tuple(y_limits))
