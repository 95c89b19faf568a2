"""Radial SVG drawings of tree configurations.

The root sits at the centre; level ``l`` is a ring of radius ``l * radius_step``
and the node at breadth position ``q`` on that ring is drawn at angle
``2*pi*(q + 0.5) / d**l``.  Output uses only ``svg`` and ``circle`` elements
and is byte-identical for identical inputs.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import PaletteMismatch
from .rules import Configuration

_BASE_COLORS = ("#000000", "#0000ff", "#ff0000")
_GOLDEN = 0.6180339887498949


@dataclass(frozen=True)
class Palette:
    colors: tuple[str, ...]

    @classmethod
    def default(cls, m: int) -> Palette:
        """Black, blue, red, then golden-ratio hue steps for symbols >= 3."""
        colors = list(_BASE_COLORS[:m])
        for k in range(3, m):
            r, g, b = colorsys.hsv_to_rgb(((k - 3) * _GOLDEN + 0.12) % 1.0, 0.75, 0.9)
            colors.append(f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}")
        return cls(tuple(colors))

    def __len__(self):
        return len(self.colors)


@dataclass(frozen=True)
class Geometry:
    radius_step: float = 40.0
    node_radius: float | None = None  # None: fit the outermost ring
    margin: float = 10.0


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def node_positions(t: Configuration, geometry: Geometry) -> list[tuple[int, float, float]]:
    """``(level, x, y)`` offsets from the centre for every node in BFS order."""
    shape = t.shape
    out = []
    for level in range(shape.n):
        count = shape.level_size(level)
        radius = level * geometry.radius_step
        for q in range(count):
            theta = 2 * math.pi * (q + 0.5) / count
            out.append((level, radius * math.cos(theta), -radius * math.sin(theta)))
    return out


def _node_radius(t: Configuration, geometry: Geometry) -> float:
    if geometry.node_radius is not None:
        return geometry.node_radius
    shape = t.shape
    outer = shape.n - 1
    spacing = 2 * math.pi * outer * geometry.radius_step / shape.level_size(outer)
    return min(0.4 * geometry.radius_step, 0.45 * spacing)


def _circles(t, palette, geometry, cx, cy) -> list[str]:
    r = _fmt(_node_radius(t, geometry))
    lines = []
    for (_, x, y), sym in zip(node_positions(t, geometry), t.tolist()):
        lines.append(
            f'<circle cx="{_fmt(cx + x)}" cy="{_fmt(cy + y)}" r="{r}" fill="{palette.colors[sym]}"/>'
        )
    return lines


def _frame_size(t: Configuration, geometry: Geometry) -> float:
    return 2 * ((t.shape.n - 1) * geometry.radius_step + _node_radius(t, geometry) + geometry.margin)


def _check_palette(t: Configuration, palette: Palette):
    if len(palette) < t.m:
        raise PaletteMismatch(f"palette has {len(palette)} colors, need {t.m}")


def render_svg(
    t: Configuration, palette: Palette | None = None, geometry: Geometry = Geometry()
) -> str:
    palette = palette or Palette.default(t.m)
    _check_palette(t, palette)
    size = _fmt(_frame_size(t, geometry))
    centre = _frame_size(t, geometry) / 2
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    )
    return "\n".join([head, *_circles(t, palette, geometry, centre, centre), "</svg>"]) + "\n"


def render_strip(
    frames: Sequence[Configuration],
    palette: Palette | None = None,
    geometry: Geometry = Geometry(),
    columns: int | None = None,
) -> str:
    """Several frames (e.g. consecutive time steps) in a grid, left to right."""
    if not frames:
        raise ValueError("need at least one frame")
    palette = palette or Palette.default(frames[0].m)
    columns = columns or len(frames)
    size = max(_frame_size(f, geometry) for f in frames)
    rows = math.ceil(len(frames) / columns)
    width, height = _fmt(size * columns), _fmt(size * rows)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    ]
    for k, frame in enumerate(frames):
        _check_palette(frame, palette)
        row, col = divmod(k, columns)
        parts.append(
            f'<svg x="{_fmt(col * size)}" y="{_fmt(row * size)}" '
            f'width="{_fmt(size)}" height="{_fmt(size)}">'
        )
        parts += _circles(frame, palette, geometry, size / 2, size / 2)
        parts.append("</svg>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
