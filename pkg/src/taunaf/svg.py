"""Minimal SVG output for filled polygons."""

from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def polygons_svg(
    polygons: Iterable[tuple[Sequence[complex], str]],
    size: int = 800,
    margin: float = 0.05,
    title: str | None = None,
) -> str:
    """SVG document drawing (vertices, fill colour) pairs; the y axis points up."""
    polys = [(list(vs), colour) for vs, colour in polygons]
    pts = [z for vs, _ in polys for z in vs] or [0j]
    xmin = min(z.real for z in pts)
    xmax = max(z.real for z in pts)
    ymin = min(z.imag for z in pts)
    ymax = max(z.imag for z in pts)
    span = max(xmax - xmin, ymax - ymin) or 1.0
    pad = span * margin
    vb = (xmin - pad, -(ymax + pad), span + 2 * pad, span + 2 * pad)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{" ".join(_fmt(v) for v in vb)}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    for vs, colour in polys:
        coords = " ".join(f"{_fmt(z.real)},{_fmt(-z.imag)}" for z in vs)
        out.append(f'<polygon points="{coords}" fill="{colour}" stroke="none"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
