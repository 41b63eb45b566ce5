"""Extract quoted dialogue spans from chapters and persist them as CSV.

The scanner walks each paragraph left to right. An opening mark of any
configured style starts a span; only the matching closer ends it. Spans may
cross line breaks inside a paragraph, but an opener still unclosed at the
paragraph end is dropped with a warning (continuation quotes are never
stitched across paragraphs).
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Chapter
from .errors import PipelineError

log = logging.getLogger(__name__)

# (opener, closer) pairs; straight quotes open and close with the same mark.
STRAIGHT = ('"', '"')
CURLY = ("“", "”")

NAMED_STYLES = {
    "straight": STRAIGHT,
    "curly": CURLY,
    "typographic": CURLY,
    "guillemet": ("«", "»"),
    "single-curly": ("‘", "’"),
}

DEFAULT_QUOTE_STYLES = (STRAIGHT, CURLY)

CSV_HEADER = ["chapter", "seq", "utterance"]

_PARAGRAPH_BREAK = re.compile(r"\n[ \t]*\n")


@dataclass(frozen=True)
class Utterance:
    """One quoted span, exclusive of the quote marks.

    Offsets index into the chapter body, so body[start_offset:end_offset]
    equals text.
    """

    chapter_index: int
    seq: int
    text: str
    start_offset: int
    end_offset: int


def resolve_quote_style(style: str) -> tuple[str, str]:
    """Turn a style name ('straight', 'curly', ...) or a 2-char pair like
    '«»' into an (opener, closer) tuple."""
    if style in NAMED_STYLES:
        return NAMED_STYLES[style]
    if len(style) == 2:
        return (style[0], style[1])
    raise PipelineError(
        f"unknown quote style {style!r}; use a name "
        f"({', '.join(sorted(NAMED_STYLES))}) or a two-character open/close pair"
    )


def _scan_paragraph(
    text: str, base: int, styles: Sequence[tuple[str, str]]
) -> tuple[list[tuple[int, int]], list[int]]:
    """Scan one paragraph; return (content spans, offsets of unclosed openers)."""
    openers = {open_mark: close_mark for open_mark, close_mark in styles}
    spans: list[tuple[int, int]] = []
    unclosed: list[int] = []
    closer = None
    content_start = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if closer is None:
            if ch in openers:
                closer = openers[ch]
                content_start = i + 1
        elif ch == closer:
            spans.append((base + content_start, base + i))
            closer = None
        i += 1
    if closer is not None:
        unclosed.append(base + content_start - 1)
    return spans, unclosed


def extract_utterances(
    chapter: Chapter,
    quote_styles: Sequence[tuple[str, str]] = DEFAULT_QUOTE_STYLES,
) -> list[Utterance]:
    """All properly paired quote spans in the chapter body, in offset order.

    Whitespace-only spans are ignored. Each unclosed opener logs one warning.
    """
    body = chapter.body
    spans: list[tuple[int, int]] = []
    pos = 0
    for m in _PARAGRAPH_BREAK.finditer(body):
        para_spans, unclosed = _scan_paragraph(body[pos : m.start()], pos, quote_styles)
        spans.extend(para_spans)
        _warn_unclosed(chapter, unclosed)
        pos = m.end()
    para_spans, unclosed = _scan_paragraph(body[pos:], pos, quote_styles)
    spans.extend(para_spans)
    _warn_unclosed(chapter, unclosed)

    utterances = []
    for start, end in spans:
        text = body[start:end]
        if not text.strip():
            continue
        utterances.append(
            Utterance(
                chapter_index=chapter.index,
                seq=len(utterances) + 1,
                text=text,
                start_offset=start,
                end_offset=end,
            )
        )
    return utterances


def _warn_unclosed(chapter: Chapter, offsets: Iterable[int]) -> None:
    for offset in offsets:
        log.warning(
            "chapter %d: unclosed quote at offset %d; span dropped",
            chapter.index,
            offset,
        )


def write_utterances_csv(utterances: Sequence[Utterance], path: str | Path) -> Path:
    """RFC-4180 CSV with header chapter,seq,utterance."""
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for u in utterances:
                writer.writerow([u.chapter_index, u.seq, u.text])
    except OSError as exc:
        raise PipelineError(f"cannot write utterance CSV: {path} ({exc})") from exc
    return path


def read_utterances_csv(path: str | Path) -> list[tuple[int, int, str]]:
    """Parse a chapter dialogue CSV back into (chapter, seq, text) rows."""
    path = Path(path)
    rows = []
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != CSV_HEADER:
                raise PipelineError(f"{path}: line 1: expected header {','.join(CSV_HEADER)}")
            for row in reader:
                if len(row) != 3:
                    raise PipelineError(f"{path}: line {reader.line_num}: expected 3 fields")
                try:
                    rows.append((int(row[0]), int(row[1]), row[2]))
                except ValueError:
                    raise PipelineError(
                        f"{path}: line {reader.line_num}: chapter and seq must be integers"
                    ) from None
    except OSError as exc:
        raise PipelineError(f"cannot read utterance CSV: {path} ({exc})") from exc
    return rows


def compile_full_dialogue(
    per_chapter_csv_paths: Sequence[str | Path], out_path: str | Path
) -> Path:
    """Concatenate chapter CSVs into one text file, one utterance per line,
    in (chapter, seq) order. Line breaks inside an utterance become spaces."""
    rows: list[tuple[int, int, str]] = []
    for csv_path in per_chapter_csv_paths:
        rows.extend(read_utterances_csv(csv_path))
    rows.sort(key=lambda r: (r[0], r[1]))
    out_path = Path(out_path)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        for _, _, text in rows:
            fh.write(text.replace("\n", " ") + "\n")
    return out_path
