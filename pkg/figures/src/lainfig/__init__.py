from .render import render, render_all
from .spec import FAMILIES, PlotSpec, load_spec

__all__ = ["render", "render_all", "FAMILIES", "PlotSpec", "load_spec"]
