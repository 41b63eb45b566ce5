"""Word-frequency tables, top-N extraction, and emotional peak/trough chapters."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import PipelineError
from .lexicon import AGGREGATE_INDEX, DIMENSIONS, ChapterScore
from .preprocess import flatten_tokens


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, int]
    total: int


@dataclass(frozen=True)
class ExtremeReport:
    """Top/bottom chapters for one dimension. top descends by value, bottom
    ascends; ties go to the lower chapter index."""

    dimension: str
    top: list[tuple[int, float]]
    bottom: list[tuple[int, float]]


def frequency_table(tokens: Iterable) -> FrequencyTable:
    """Exact occurrence counts over TokenLists and/or plain token strings."""
    counts = Counter(flatten_tokens(tokens))
    return FrequencyTable(counts=dict(counts), total=sum(counts.values()))


def merge_tables(tables: Iterable[FrequencyTable]) -> FrequencyTable:
    merged: Counter = Counter()
    for table in tables:
        merged.update(table.counts)
    return FrequencyTable(counts=dict(merged), total=sum(merged.values()))


def top_n(table: FrequencyTable, n: int) -> list[tuple[str, int]]:
    """Descending by count; ties break lexicographically for determinism."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ranked = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


def find_extremes(
    scores: Sequence[ChapterScore], dimension: str, k: int = 3
) -> ExtremeReport:
    """Top-k and bottom-k chapters by mean value for one dimension.

    Chapters with absent means (and the aggregate row) are excluded.
    """
    if dimension not in DIMENSIONS:
        raise ValueError(f"unknown dimension: {dimension!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    present = [
        (s.chapter_index, s.mean(dimension))
        for s in scores
        if s.chapter_index != AGGREGATE_INDEX and s.mean(dimension) is not None
    ]
    if not present:
        raise PipelineError("no scored chapters")
    top = sorted(present, key=lambda cv: (-cv[1], cv[0]))[:k]
    bottom = sorted(present, key=lambda cv: (cv[1], cv[0]))[:k]
    return ExtremeReport(dimension=dimension, top=top, bottom=bottom)


def write_freq_csv(table: FrequencyTable, path: str | Path) -> Path:
    """freq.csv: the whole table, descending, header token,count."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["token", "count"])
        if table.counts:
            for token, count in top_n(table, len(table.counts)):
                writer.writerow([token, count])
    return path


def format_extremes(
    reports: Sequence[ExtremeReport], headings: Mapping[int, str] | None = None
) -> str:
    """Human-readable peaks-and-lows report, one block per dimension."""

    def describe(index: int, value: float) -> str:
        if headings and index in headings:
            return f"chapter {index} ({headings[index]}): {value:.4f}"
        return f"chapter {index}: {value:.4f}"

    lines = []
    for report in reports:
        lines.append(report.dimension)
        lines.append("  high: " + "; ".join(describe(i, v) for i, v in report.top))
        lines.append("  low:  " + "; ".join(describe(i, v) for i, v in report.bottom))
        lines.append("")
    return "\n".join(lines)
