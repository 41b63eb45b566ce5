"""Load a plain-text novel and segment it into chapters by heading pattern.

Offsets throughout are code-point offsets into the normalized corpus text,
so ``corpus.text[start:end]`` always reproduces ``heading + body`` exactly.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import PipelineError

log = logging.getLogger(__name__)

# Default heading: line starts with the word "chapter", then whitespace, then
# a decimal or roman number, optionally followed by punctuation and a title.
DEFAULT_HEADING_PATTERN = r"[ \t]*chapter[ \t]+([0-9]+|[ivxlcdm]+)\b"

_ROMAN_VALUES = {"i": 1, "v": 5, "x": 10, "l": 50, "c": 100, "d": 500, "m": 1000}


@dataclass(frozen=True)
class RawCorpus:
    """Full document text (LF line endings, no BOM) plus a source label."""

    text: str
    source_name: str


@dataclass(frozen=True)
class Chapter:
    """One chapter slice of the normalized corpus.

    ``heading`` is the matched heading line without its terminator; ``body``
    is everything from the character after the heading content up to the next
    heading (so it usually starts with a newline). ``heading + body`` equals
    ``corpus.text[start_offset:end_offset]``.
    """

    index: int
    heading: str
    body: str
    start_offset: int
    end_offset: int


def normalize_corpus(raw_bytes: bytes, source_name: str = "<memory>") -> RawCorpus:
    """Decode UTF-8 (optional BOM), normalize CRLF and lone CR to LF."""
    try:
        text = raw_bytes.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise PipelineError(
            f"{source_name}: invalid encoding at byte {exc.start}: {exc.reason}"
        ) from exc
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return RawCorpus(text=text, source_name=source_name)


def load_corpus(path: str | Path) -> RawCorpus:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise PipelineError(f"cannot read input file: {path} ({exc})") from exc
    return normalize_corpus(raw, source_name=path.name)


def roman_to_int(numeral: str) -> int:
    """Value of a roman numeral (case-insensitive, plain subtractive rules)."""
    total = 0
    prev = 0
    for ch in reversed(numeral.lower()):
        value = _ROMAN_VALUES[ch]
        if value < prev:
            total -= value
        else:
            total += value
            prev = value
    return total


def _parse_chapter_number(token: str | None) -> int | None:
    if not token:
        return None
    if token.isdigit():
        return int(token)
    if all(ch in _ROMAN_VALUES for ch in token.lower()):
        return roman_to_int(token)
    return None


def segment_chapters(corpus: RawCorpus, pattern: str | None = None) -> list[Chapter]:
    """Split the corpus at heading lines; front matter is dropped.

    ``pattern`` overrides the default heading regex; it is matched at the
    start of each line, case-insensitively. If it captures a group, that
    group is parsed as the chapter number (decimal or roman); otherwise
    chapters are numbered sequentially.
    """
    regex = re.compile(pattern or DEFAULT_HEADING_PATTERN, re.IGNORECASE)
    text = corpus.text

    matches: list[tuple[int, str, int | None]] = []  # (line_start, heading, parsed number)
    offset = 0
    for line in text.splitlines(keepends=True):
        content = line[:-1] if line.endswith("\n") else line
        m = regex.match(content)
        if m:
            token = m.group(1) if regex.groups else None
            matches.append((offset, content, _parse_chapter_number(token)))
        offset += len(line)

    if not matches:
        raise PipelineError(
            f"{corpus.source_name}: no chapters found; "
            "override the heading pattern (--heading-pattern) if this corpus "
            "does not use 'Chapter <number>' headings"
        )

    numbers = [num for _, _, num in matches]
    if any(n is None for n in numbers) or any(
        b <= a for a, b in zip(numbers, numbers[1:])
    ):
        if all(n is not None for n in numbers):
            log.warning(
                "%s: chapter numbers are duplicated or non-monotonic; "
                "keeping document order and renumbering sequentially",
                corpus.source_name,
            )
        numbers = list(range(1, len(matches) + 1))

    chapters = []
    for i, (start, heading, _) in enumerate(matches):
        end = matches[i + 1][0] if i + 1 < len(matches) else len(text)
        body = text[start + len(heading) : end]
        chapters.append(
            Chapter(
                index=numbers[i],
                heading=heading,
                body=body,
                start_offset=start,
                end_offset=end,
            )
        )
    return chapters


def write_chapter_files(chapters: list[Chapter], out_dir: str | Path) -> list[Path]:
    """Write chapter_<index>.txt per chapter; returns paths in index order."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineError(f"cannot create output directory: {out_dir} ({exc})") from exc
    paths = []
    for chapter in sorted(chapters, key=lambda c: c.index):
        path = out_dir / f"chapter_{chapter.index}.txt"
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(chapter.heading + chapter.body)
        except OSError as exc:
            raise PipelineError(f"cannot write chapter file: {path} ({exc})") from exc
        paths.append(path)
    return paths
