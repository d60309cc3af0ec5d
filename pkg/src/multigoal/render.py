"""SVG rendering of scenarios, prior masks, and planned paths."""
from __future__ import annotations

import base64
import io
from pathlib import Path

import numpy as np
from PIL import Image

from .grid import Scenario
from .sampling import Mask

REGION_RGBA = (139, 0, 0, 90)  # translucent dark red
GUIDELINE_RGBA = (255, 40, 40, 230)  # bright red
LEG_COLORS = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


def _png_data_uri(image: Image.Image) -> str:
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return "data:image/png;base64," + base64.b64encode(buf.getvalue()).decode("ascii")


def _map_image(scenario: Scenario) -> Image.Image:
    pixels = np.where(scenario.map.occupancy, 0, 255).astype(np.uint8)
    return Image.fromarray(pixels, mode="L").convert("RGB")


def _mask_image(mask: Mask, rgba: tuple[int, int, int, int]) -> Image.Image:
    h, w = mask.bits.shape
    out = np.zeros((h, w, 4), dtype=np.uint8)
    out[mask.bits] = rgba
    return Image.fromarray(out, mode="RGBA")


def render_svg(scenario: Scenario, result, out_path: str | Path, priors=None) -> Path:
    """Write an SVG: map raster, optional mask overlays, leg polylines, vertices.

    `priors` is an iterable of PriorKnowledge for the legs being drawn;
    empty masks produce no overlay layers.
    """
    if not result.legs:
        raise ValueError("nothing to render: result has no legs")
    w, h = scenario.map.width, scenario.map.height
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * 3}" height="{h * 3}" '
        f'viewBox="0 0 {w} {h}">',
        f'<image href="{_png_data_uri(_map_image(scenario))}" x="0" y="0" '
        f'width="{w}" height="{h}" image-rendering="pixelated"/>',
    ]
    if priors:
        region_union = np.zeros((h, w), dtype=bool)
        guide_union = np.zeros((h, w), dtype=bool)
        for pk in priors:
            region_union |= pk.region.bits
            guide_union |= pk.guideline.bits
        for bits, rgba in ((region_union, REGION_RGBA), (guide_union, GUIDELINE_RGBA)):
            if bits.any():
                uri = _png_data_uri(_mask_image(Mask(bits), rgba))
                parts.append(
                    f'<image href="{uri}" x="0" y="0" width="{w}" height="{h}" '
                    f'image-rendering="pixelated"/>'
                )
    for i, leg in enumerate(result.legs):
        color = LEG_COLORS[i % len(LEG_COLORS)]
        points = " ".join(f"{s.x:.3f},{s.y:.3f}" for s in leg)
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="{max(w / 256, 0.5):.2f}"/>'
        )
    for idx, v in enumerate(scenario.vertices):
        fill = "#d62728" if idx == 0 else "#1f3fbf"
        radius = max(w / 128, 1.0)
        parts.append(f'<circle cx="{v.x:.3f}" cy="{v.y:.3f}" r="{radius:.2f}" fill="{fill}"/>')
        parts.append(
            f'<text x="{v.x + radius + 1:.3f}" y="{v.y:.3f}" font-size="{3 * radius:.1f}" '
            f'fill="#111">{idx}</text>'
        )
    parts.append("</svg>")
    out = Path(out_path)
    out.write_text("\n".join(parts) + "\n")
    return out


def scatter_svg(points_by_series: dict, x_label: str, y_label: str, out_path: str | Path) -> Path:
    """Minimal scatter plot for per-trial (x, y) metric pairs, one color per series."""
    width, height, margin = 480, 360, 48
    xs = [p[0] for pts in points_by_series.values() for p in pts]
    ys = [p[1] for pts in points_by_series.values() for p in pts]
    if not xs:
        raise ValueError("no points to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    colors = ("#d62728", "#111111", "#1f77b4", "#2ca02c", "#9467bd")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#333"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="#333"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" font-size="12" text-anchor="middle">'
        f"{x_label}</text>",
        f'<text x="14" y="{height / 2:.0f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {height / 2:.0f})">{y_label}</text>',
    ]
    for i, (name, pts) in enumerate(sorted(points_by_series.items())):
        color = colors[i % len(colors)]
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.4" fill="{color}" fill-opacity="0.7"/>')
        parts.append(
            f'<text x="{width - margin:.0f}" y="{margin + 14 * i:.0f}" font-size="11" '
            f'text-anchor="end" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    out = Path(out_path)
    out.write_text("\n".join(parts) + "\n")
    return out
