"""Render the V/A/D trajectory chart and word clouds as standalone SVG.

Everything here is deterministic: cloud placement uses a per-layout seeded
generator, text boxes use a fixed 0.6-em average glyph width (so no font
metrics are needed), and coordinates are formatted with a fixed precision.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .analytics import FrequencyTable, top_n
from .errors import PipelineError
from .lexicon import AGGREGATE_INDEX, DIMENSIONS, ChapterScore

log = logging.getLogger(__name__)

SERIES_PALETTE = {"valence": "#1b9e77", "arousal": "#d95f02", "dominance": "#7570b3"}

CLOUD_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

# Candidate box estimate, in px, for a word at a given font size.
GLYPH_WIDTH_EM = 0.6
BOX_HEIGHT_EM = 1.2

_SPIRAL_GROWTH = 3.0  # px of radius per radian
_SPIRAL_STEP = 0.35  # radians per candidate


def _fmt(value: float) -> str:
    return f"{value:.2f}"


@dataclass(frozen=True)
class ChartSpec:
    width: float
    height: float
    margin: float
    series: dict[str, list[tuple[int, float]]]
    ticks: list[int]
    palette: Mapping[str, str] = field(default_factory=lambda: dict(SERIES_PALETTE))
    title: str = "Dialogue V/A/D trajectory"
    x_label: str = "chapter"
    y_label: str = "mean score"


@dataclass(frozen=True)
class CloudLayout:
    """Collision-free word boxes. x/y are box top-left corners; every box
    lies fully inside the canvas."""

    canvas_width: float
    canvas_height: float
    placed: list[tuple[str, float, float, float, float, float]]
    seed: int


def build_chart_spec(
    scores: Sequence[ChapterScore],
    width: float = 900.0,
    height: float = 420.0,
    margin: float = 55.0,
    **labels,
) -> ChartSpec:
    """Derive series and ticks from per-chapter scores (aggregate excluded)."""
    chapters = sorted(
        (s for s in scores if s.chapter_index != AGGREGATE_INDEX),
        key=lambda s: s.chapter_index,
    )
    series = {
        dim: [(s.chapter_index, s.mean(dim)) for s in chapters if s.mean(dim) is not None]
        for dim in DIMENSIONS
    }
    if not any(series.values()):
        raise PipelineError("no scored chapters")
    ticks = [s.chapter_index for s in chapters]
    return ChartSpec(
        width=width, height=height, margin=margin, series=series, ticks=ticks, **labels
    )


def render_trajectory_chart(scores: Sequence[ChapterScore], **spec_overrides) -> str:
    """Line chart of per-chapter mean V/A/D; unscored chapters break the lines.

    Every scored chapter contributes one marker circle per series; runs of
    two or more consecutive scored chapters are joined by a polyline.
    """
    spec = build_chart_spec(scores, **spec_overrides)
    left = spec.margin
    top = spec.margin
    right = spec.width - spec.margin
    bottom = spec.height - spec.margin
    inner_w = right - left
    inner_h = bottom - top

    lo, hi = spec.ticks[0], spec.ticks[-1]

    def x_pos(index: int) -> float:
        if hi == lo:
            return left + inner_w / 2
        return left + (index - lo) / (hi - lo) * inner_w

    def y_pos(value: float) -> float:
        return top + (1.0 - value) * inner_h

    parts = []
    # y grid and labels at 0.0 .. 1.0
    for i in range(6):
        v = i / 5
        y = y_pos(v)
        parts.append(
            f'<line x1="{_fmt(left)}" y1="{_fmt(y)}" x2="{_fmt(right)}" y2="{_fmt(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(left - 8)}" y="{_fmt(y + 4)}" font-size="12" '
            f'text-anchor="end">{v:.1f}</text>'
        )
    # x ticks at every chapter index
    for index in spec.ticks:
        x = x_pos(index)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(bottom)}" x2="{_fmt(x)}" y2="{_fmt(bottom + 5)}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(bottom + 20)}" font-size="12" '
            f'text-anchor="middle">{index}</text>'
        )
    # axes
    parts.append(
        f'<line x1="{_fmt(left)}" y1="{_fmt(top)}" x2="{_fmt(left)}" y2="{_fmt(bottom)}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_fmt(left)}" y1="{_fmt(bottom)}" x2="{_fmt(right)}" y2="{_fmt(bottom)}" '
        f'stroke="#333333" stroke-width="1"/>'
    )

    scored = {dim: dict(points) for dim, points in spec.series.items()}
    for dim in DIMENSIONS:
        color = spec.palette[dim]
        elems = []
        run: list[tuple[float, float]] = []

        def flush(run: list[tuple[float, float]]) -> None:
            if len(run) >= 2:
                pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in run)
                elems.append(
                    f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>'
                )

        for index in spec.ticks:
            if index in scored[dim]:
                run.append((x_pos(index), y_pos(scored[dim][index])))
            else:
                flush(run)
                run = []
        flush(run)
        for index, value in spec.series[dim]:
            elems.append(
                f'<circle cx="{_fmt(x_pos(index))}" cy="{_fmt(y_pos(value))}" r="3" '
                f'fill="{color}"/>'
            )
        parts.append(f'<g class="series-{dim}">' + "".join(elems) + "</g>")

    # legend, title, axis labels
    legend_x = right - 120
    for i, dim in enumerate(DIMENSIONS):
        ly = top + 12 + i * 18
        parts.append(
            f'<line x1="{_fmt(legend_x)}" y1="{_fmt(ly)}" x2="{_fmt(legend_x + 24)}" '
            f'y2="{_fmt(ly)}" stroke="{spec.palette[dim]}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt(legend_x + 30)}" y="{_fmt(ly + 4)}" font-size="12">{dim}</text>'
        )
    parts.append(
        f'<text x="{_fmt(spec.width / 2)}" y="{_fmt(top - 20)}" font-size="16" '
        f'text-anchor="middle">{escape(spec.title)}</text>'
    )
    parts.append(
        f'<text x="{_fmt((left + right) / 2)}" y="{_fmt(spec.height - 10)}" font-size="13" '
        f'text-anchor="middle">{escape(spec.x_label)}</text>'
    )
    parts.append(
        f'<text x="16" y="{_fmt((top + bottom) / 2)}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt((top + bottom) / 2)})">{escape(spec.y_label)}</text>'
    )
    return _svg_document(spec.width, spec.height, parts)


def _svg_document(width: float, height: float, elements: Sequence[str]) -> str:
    width = max(width, 1.0)
    height = max(height, 1.0)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        f'font-family="Helvetica, Arial, sans-serif">\n'
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>\n'
        + "\n".join(elements)
        + "\n</svg>\n"
    )


def _font_sizes(
    ranked: Sequence[tuple[str, int]], min_font: float, max_font: float
) -> list[float]:
    counts = [count for _, count in ranked]
    lo, hi = math.sqrt(min(counts)), math.sqrt(max(counts))
    if hi == lo:
        return [max_font] * len(ranked)
    return [
        min_font + (max_font - min_font) * (math.sqrt(c) - lo) / (hi - lo) for c in counts
    ]


def _boxes_overlap(
    ax: float, ay: float, aw: float, ah: float, bx: float, by: float, bw: float, bh: float
) -> bool:
    return ax < bx + bw and bx < ax + aw and ay < by + bh and by < ay + ah


def layout_word_cloud(
    freq: FrequencyTable,
    max_words: int = 50,
    canvas_width: float = 600.0,
    canvas_height: float = 400.0,
    seed: int = 0,
    min_font: float = 10.0,
    max_font: float = 48.0,
) -> CloudLayout:
    """Place the top max_words on an Archimedean spiral from the canvas
    center, largest first, until each candidate box is collision-free.

    Font size scales linearly with sqrt(count) between the batch extremes.
    Each word draws a random start angle from a generator seeded per layout,
    then walks outward; a word that exhausts the spiral is skipped with a
    warning. Identical inputs and seed give an identical layout.
    """
    if not freq.counts:
        raise PipelineError("empty frequency table")
    if max_words < 1:
        raise ValueError("max_words must be >= 1")
    ranked = top_n(freq, max_words)
    sizes = _font_sizes(ranked, min_font, max_font)

    rng = random.Random(seed)
    cx, cy = canvas_width / 2, canvas_height / 2
    r_limit = math.hypot(canvas_width, canvas_height) / 2
    theta_max = r_limit / _SPIRAL_GROWTH

    placed: list[tuple[str, float, float, float, float, float]] = []
    boxes: list[tuple[float, float, float, float]] = []
    for i, ((word, _), font_size) in enumerate(zip(ranked, sizes)):
        bw = GLYPH_WIDTH_EM * font_size * len(word)
        bh = BOX_HEIGHT_EM * font_size
        if bw > canvas_width or bh > canvas_height:
            if i == 0:
                raise PipelineError(
                    f"canvas too small: {canvas_width:g}x{canvas_height:g} cannot fit "
                    f"{word!r} at font size {font_size:g}"
                )
            log.warning("word cloud: %r does not fit the canvas; skipped", word)
            continue
        jitter = rng.uniform(0.0, 2.0 * math.pi)
        theta = 0.0
        spot = None
        while theta <= theta_max:
            r = _SPIRAL_GROWTH * theta
            x = cx + r * math.cos(jitter + theta) - bw / 2
            y = cy + r * math.sin(jitter + theta) - bh / 2
            if 0.0 <= x and 0.0 <= y and x + bw <= canvas_width and y + bh <= canvas_height:
                if not any(_boxes_overlap(x, y, bw, bh, *box) for box in boxes):
                    spot = (x, y)
                    break
            theta += _SPIRAL_STEP
        if spot is None:
            log.warning("word cloud: no room for %r within the spiral; skipped", word)
            continue
        placed.append((word, font_size, spot[0], spot[1], bw, bh))
        boxes.append((spot[0], spot[1], bw, bh))
    return CloudLayout(
        canvas_width=canvas_width, canvas_height=canvas_height, placed=placed, seed=seed
    )


def _cloud_elements(layout: CloudLayout) -> list[str]:
    elems = []
    for i, (word, font_size, x, y, bw, bh) in enumerate(layout.placed):
        color = CLOUD_PALETTE[i % len(CLOUD_PALETTE)]
        tx = x + bw / 2
        ty = y + 0.75 * bh
        elems.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(ty)}" font-size="{_fmt(font_size)}" '
            f'fill="{color}" text-anchor="middle">{escape(word)}</text>'
        )
    return elems


def render_word_cloud(layout: CloudLayout) -> str:
    """One text element per placed word."""
    return _svg_document(layout.canvas_width, layout.canvas_height, _cloud_elements(layout))


def render_cloud_grid(
    layouts: Sequence[CloudLayout],
    columns: int = 4,
    captions: Sequence[str] | None = None,
) -> str:
    """Tile per-chapter clouds row-major with a caption strip under each cell."""
    if columns < 1:
        raise ValueError("columns must be >= 1")
    if captions is not None and len(captions) != len(layouts):
        raise ValueError("captions must match layouts")
    if not layouts:
        return _svg_document(1.0, 1.0, [])
    cell_w = max(l.canvas_width for l in layouts)
    caption_h = 26.0
    cell_h = max(l.canvas_height for l in layouts) + caption_h
    rows = math.ceil(len(layouts) / columns)
    elements = []
    for i, layout in enumerate(layouts):
        ox = (i % columns) * cell_w
        oy = (i // columns) * cell_h
        inner = [
            f'<rect x="0.5" y="0.5" width="{_fmt(cell_w - 1)}" height="{_fmt(cell_h - 1)}" '
            f'fill="none" stroke="#cccccc" stroke-width="1"/>'
        ]
        inner.extend(_cloud_elements(layout))
        caption = captions[i] if captions is not None else f"Cloud {i + 1}"
        inner.append(
            f'<text x="{_fmt(cell_w / 2)}" y="{_fmt(cell_h - 8)}" font-size="14" '
            f'text-anchor="middle">{escape(caption)}</text>'
        )
        elements.append(
            f'<g transform="translate({_fmt(ox)} {_fmt(oy)})">' + "".join(inner) + "</g>"
        )
    return _svg_document(columns * cell_w, rows * cell_h, elements)
