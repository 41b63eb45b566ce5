"""NRC-VAD-format lexicon loading and per-chapter mean V/A/D scoring.

Scoring is occurrence-weighted: every matched token usage contributes once.
Sums use math.fsum, so a chapter's means do not depend on token order.
"""

from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import PipelineError
from .preprocess import flatten_tokens

log = logging.getLogger(__name__)

DIMENSIONS = ("valence", "arousal", "dominance")

# chapter_index 0 marks the whole-corpus aggregate; it serializes as "all".
AGGREGATE_INDEX = 0

SCORES_HEADER = ["chapter", "valence", "arousal", "dominance", "tokens_total", "tokens_matched"]

_WHITESPACE = re.compile(r"\s")


@dataclass(frozen=True)
class VadEntry:
    term: str
    valence: float
    arousal: float
    dominance: float


@dataclass(frozen=True)
class VadLexicon:
    """term -> VadEntry table; multi-word lexicon entries are not loaded."""

    entries: dict[str, VadEntry]
    skipped_phrases: int
    source_name: str

    def lookup(self, token: str) -> tuple[float, float, float] | None:
        """Exact-match scores for a lowercase token, or None. No case folding
        here: the preprocessing pipeline guarantees lowercase input."""
        entry = self.entries.get(token)
        if entry is None:
            return None
        return (entry.valence, entry.arousal, entry.dominance)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ChapterScore:
    """Mean V/A/D over matched token occurrences; means are None when the
    chapter matched nothing (0 is a meaningful extreme on these scales)."""

    chapter_index: int
    mean_valence: float | None
    mean_arousal: float | None
    mean_dominance: float | None
    tokens_total: int
    tokens_matched: int

    def mean(self, dimension: str) -> float | None:
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension: {dimension!r}")
        return getattr(self, f"mean_{dimension}")


def _parse_score(field: str, path: Path, line_num: int, rescale: bool) -> float:
    try:
        value = float(field)
    except ValueError:
        raise PipelineError(
            f"{path}: line {line_num}: cannot parse score {field!r}"
        ) from None
    if rescale:
        if not -1.0 <= value <= 1.0:
            raise PipelineError(
                f"{path}: line {line_num}: score out of range [-1,1]: {field}"
            )
        return (value + 1.0) / 2.0
    if not 0.0 <= value <= 1.0:
        raise PipelineError(
            f"{path}: line {line_num}: score out of range [0,1]: {field} "
            "(pass --rescale for lexicons scored in [-1,1])"
        )
    return value


def load_vad_lexicon(path: str | Path, rescale: bool = False) -> VadLexicon:
    """Load a tab-separated term/valence/arousal/dominance file.

    A header row is detected when the first row's numeric fields do not
    parse. Entries with internal whitespace are counted and skipped (matching
    is unigram-only); duplicate terms keep the last occurrence.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise PipelineError(f"cannot read lexicon: {path} ({exc})") from exc

    entries: dict[str, VadEntry] = {}
    skipped_phrases = 0
    first_data_row = True
    for line_num, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if first_data_row:
            first_data_row = False
            if len(fields) < 4 or not _all_numeric(fields[1:4]):
                continue  # header row
        if len(fields) < 4:
            raise PipelineError(f"{path}: line {line_num}: expected 4 tab-separated columns")
        term = fields[0].strip().lower()
        if _WHITESPACE.search(term):
            skipped_phrases += 1
            continue
        v, a, d = (_parse_score(f, path, line_num, rescale) for f in fields[1:4])
        if term in entries:
            log.warning("%s: line %d: duplicate term %r; keeping last", path, line_num, term)
        entries[term] = VadEntry(term=term, valence=v, arousal=a, dominance=d)
    return VadLexicon(entries=entries, skipped_phrases=skipped_phrases, source_name=path.name)


def _all_numeric(fields: Sequence[str]) -> bool:
    try:
        for f in fields:
            float(f)
    except ValueError:
        return False
    return True


def score_tokens(tokens: Iterable, lexicon: VadLexicon, chapter_index: int = 0) -> ChapterScore:
    """Occurrence-weighted arithmetic mean per dimension over matched tokens."""
    flat = flatten_tokens(tokens)
    valences, arousals, dominances = [], [], []
    for token in flat:
        triple = lexicon.lookup(token)
        if triple is not None:
            valences.append(triple[0])
            arousals.append(triple[1])
            dominances.append(triple[2])
    matched = len(valences)
    if matched:
        means = (
            math.fsum(valences) / matched,
            math.fsum(arousals) / matched,
            math.fsum(dominances) / matched,
        )
    else:
        means = (None, None, None)
    return ChapterScore(
        chapter_index=chapter_index,
        mean_valence=means[0],
        mean_arousal=means[1],
        mean_dominance=means[2],
        tokens_total=len(flat),
        tokens_matched=matched,
    )


def score_corpus(
    per_chapter_tokens: Sequence,
    lexicon: VadLexicon,
    chapter_indices: Sequence[int] | None = None,
) -> list[ChapterScore]:
    """One ChapterScore per chapter plus a corpus-level aggregate, last.

    Each element of per_chapter_tokens is one chapter's tokens (TokenLists
    or plain strings). chapter_indices defaults to 1..n. The aggregate is the
    occurrence-weighted mean over the pooled tokens, not a mean of means.
    """
    if chapter_indices is None:
        chapter_indices = range(1, len(per_chapter_tokens) + 1)
    scores = []
    pooled: list[str] = []
    for index, tokens in zip(chapter_indices, per_chapter_tokens):
        flat = flatten_tokens(tokens)
        scores.append(score_tokens(flat, lexicon, chapter_index=index))
        pooled.extend(flat)
    scores.append(score_tokens(pooled, lexicon, chapter_index=AGGREGATE_INDEX))
    return scores


def _format_mean(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def write_scores_csv(scores: Sequence[ChapterScore], path: str | Path) -> Path:
    """scores.csv: absent means serialize as empty fields; the aggregate row
    (chapter_index 0) is labeled 'all' and written last."""
    path = Path(path)
    ordered = [s for s in scores if s.chapter_index != AGGREGATE_INDEX] + [
        s for s in scores if s.chapter_index == AGGREGATE_INDEX
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCORES_HEADER)
        for s in ordered:
            label = "all" if s.chapter_index == AGGREGATE_INDEX else s.chapter_index
            writer.writerow(
                [
                    label,
                    _format_mean(s.mean_valence),
                    _format_mean(s.mean_arousal),
                    _format_mean(s.mean_dominance),
                    s.tokens_total,
                    s.tokens_matched,
                ]
            )
    return path


def read_scores_csv(path: str | Path) -> list[ChapterScore]:
    """Inverse of write_scores_csv (means round-tripped at 6 decimals)."""
    path = Path(path)
    if not path.is_file():
        raise PipelineError(f"scores file not found: {path}")
    scores = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SCORES_HEADER:
            raise PipelineError(f"{path}: line 1: expected header {','.join(SCORES_HEADER)}")
        for row in reader:
            if len(row) != 6:
                raise PipelineError(f"{path}: line {reader.line_num}: expected 6 fields")
            index = AGGREGATE_INDEX if row[0] == "all" else int(row[0])
            means = [float(f) if f else None for f in row[1:4]]
            scores.append(
                ChapterScore(
                    chapter_index=index,
                    mean_valence=means[0],
                    mean_arousal=means[1],
                    mean_dominance=means[2],
                    tokens_total=int(row[4]),
                    tokens_matched=int(row[5]),
                )
            )
    return scores
