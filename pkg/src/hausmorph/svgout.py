"""SVG frame rendering: one even-odd filled path element per polygon."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ShapeError
from .shapes import Shape

DEFAULT_FILLS = {
    "dilation": "#4c72b0",
    "voronoi": "#55a868",
    "mixed": "#c44e52",
}


@dataclass(frozen=True)
class RenderOptions:
    canvas: tuple[int, int] = (800, 600)
    margin: float = 0.05
    fill_colors: dict = field(default_factory=lambda: dict(DEFAULT_FILLS))
    frame_alphas: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)

    def __post_init__(self):
        w, h = self.canvas
        if w <= 0 or h <= 0:
            raise ShapeError("canvas dimensions must be positive")
        alphas = tuple(self.frame_alphas)
        if any(not 0.0 <= a <= 1.0 for a in alphas):
            raise ShapeError("frame alphas must lie in [0, 1]")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ShapeError("frame alphas must be strictly increasing")
        object.__setattr__(self, "frame_alphas", alphas)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def shared_viewbox(shapes, margin: float) -> tuple[float, float, float, float]:
    """One viewBox covering every frame, expanded by a margin fraction."""
    bounds = [s.bounds() for s in shapes if not s.is_empty]
    if not bounds:
        return (0.0, 0.0, 1.0, 1.0)
    minx = min(b[0] for b in bounds)
    miny = min(b[1] for b in bounds)
    maxx = max(b[2] for b in bounds)
    maxy = max(b[3] for b in bounds)
    pad = margin * max(maxx - minx, maxy - miny, 1e-9)
    return (minx - pad, miny - pad, (maxx - minx) + 2 * pad, (maxy - miny) + 2 * pad)


def _path_data(poly) -> str:
    parts = []
    for ring in poly.rings():
        # y is negated so the model's y-up coordinates render upright
        coords = " L ".join(f"{_fmt(p.x)} {_fmt(-p.y)}" for p in ring.vertices)
        parts.append(f"M {coords} Z")
    return " ".join(parts)


def render_svg(shape: Shape, viewbox, options: RenderOptions, fill: str) -> str:
    """A complete SVG document; empty shapes yield a document with no paths."""
    minx, miny, width, height = viewbox
    w, h = options.canvas
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="{_fmt(minx)} {_fmt(-(miny + height))} {_fmt(width)} {_fmt(height)}">'
    ]
    for poly in shape.polygons:
        lines.append(
            f'  <path fill-rule="evenodd" fill="{fill}" stroke="none" d="{_path_data(poly)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
