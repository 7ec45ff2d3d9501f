"""Batch rendering of oscillator-bath sweep CSVs into publication-style figures."""

__version__ = "0.1.0"

from .csvdata import InputError, RecipeError, SweepTable, load_sweep  # noqa: F401
from .render import CLASS_COLORS, CLASS_ORDER, FigureRecipe, RenderResult, render  # noqa: F401
