"""Command-line pipeline: split, extract, clean, score, freq, chart, cloud, all.

Stages communicate through files under the output directory (chapters/,
dialogues/, dialogues_filtered/, ...), so `vadarc all` is exactly the seven
stage commands run in sequence. Warnings go to stderr via logging; the
per-stage summary lines go to stdout.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import analytics, dialogue, lexicon, preprocess, viz
from .corpus import Chapter, load_corpus, segment_chapters, write_chapter_files
from .errors import PipelineError

log = logging.getLogger(__name__)

STAGES = ("split", "extract", "clean", "score", "freq", "chart", "cloud")

_CHAPTER_FILE = re.compile(r"chapter_(\d+)\.txt$")
_DIALOGUE_FILE = re.compile(r"chapter_(\d+)_dialogues\.csv$")
_FILTERED_FILE = re.compile(r"chapter_(\d+)_filtered\.txt$")


def default_stopword_paths() -> list[Path]:
    """The bundled standard + extended English stoplists."""
    data = resources.files("vadarc").joinpath("data")
    return [Path(str(data.joinpath(name))) for name in ("stopwords_basic.txt", "stopwords_extended.txt")]


@dataclass
class RunConfig:
    input_path: Path | None = None
    out_dir: Path = Path("out")
    heading_pattern: str | None = None
    quote_styles: list[tuple[str, str]] = field(
        default_factory=lambda: list(dialogue.DEFAULT_QUOTE_STYLES)
    )
    stopword_paths: list[Path] = field(default_factory=default_stopword_paths)
    lexicon_path: Path | None = None
    rescale: bool = False
    max_words: int = 50
    cloud_width: float = 600.0
    cloud_height: float = 400.0
    columns: int = 4
    seed: int = 0
    extremes_k: int = 3


@dataclass
class RunReport:
    """Counts and timings accumulated across stages; serialized as report.txt."""

    source: str = ""
    chapters: int = 0
    utterances: int = 0
    dropped_quote_spans: int = 0
    tokens_before_filtering: int = 0
    tokens_after_filtering: int = 0
    stopword_sources: list[str] = field(default_factory=list)
    lexicon_entries: int = 0
    lexicon_phrases_skipped: int = 0
    match_rates: dict[int, float | None] = field(default_factory=dict)
    stage_seconds: dict[str, float] = field(default_factory=dict)

    def render(self) -> str:
        lines = [
            f"input: {self.source}",
            f"chapters: {self.chapters}",
            f"utterances: {self.utterances} "
            f"(unbalanced quote spans dropped: {self.dropped_quote_spans})",
            f"tokens: {self.tokens_before_filtering} before stopword filtering, "
            f"{self.tokens_after_filtering} after",
            f"stopword lists: {', '.join(self.stopword_sources) or '(none)'}",
            f"lexicon entries: {self.lexicon_entries} "
            f"(multi-word entries skipped: {self.lexicon_phrases_skipped})",
            "match rate per chapter:",
        ]
        for index in sorted(self.match_rates):
            rate = self.match_rates[index]
            shown = "n/a" if rate is None else f"{rate:.1%}"
            lines.append(f"  chapter {index}: {shown}")
        lines.append("stage times:")
        for stage, seconds in self.stage_seconds.items():
            lines.append(f"  {stage}: {seconds:.3f}s")
        return "\n".join(lines) + "\n"


class _WarningCounter(logging.Handler):
    def __init__(self) -> None:
        super().__init__(level=logging.WARNING)
        self.count = 0

    def emit(self, record: logging.LogRecord) -> None:
        self.count += 1


def _numbered_files(directory: Path, pattern: re.Pattern, prior_command: str) -> list[tuple[int, Path]]:
    if not directory.is_dir():
        raise PipelineError(f"{directory} not found; run `vadarc {prior_command}` first")
    found = []
    for path in directory.iterdir():
        m = pattern.match(path.name)
        if m:
            found.append((int(m.group(1)), path))
    if not found:
        raise PipelineError(f"no stage outputs in {directory}; run `vadarc {prior_command}` first")
    return sorted(found)


def _read_chapter_files(out_dir: Path) -> list[Chapter]:
    chapters = []
    for index, path in _numbered_files(out_dir / "chapters", _CHAPTER_FILE, "split"):
        content = path.read_text(encoding="utf-8")
        heading, _, _ = content.partition("\n")
        chapters.append(
            Chapter(
                index=index,
                heading=heading,
                body=content[len(heading) :],
                start_offset=0,
                end_offset=len(content),
            )
        )
    return chapters


def _read_filtered_tokens(out_dir: Path) -> list[tuple[int, list[str]]]:
    per_chapter = []
    for index, path in _numbered_files(
        out_dir / "dialogues_filtered", _FILTERED_FILE, "clean"
    ):
        tokens: list[str] = []
        for line in path.read_text(encoding="utf-8").splitlines():
            tokens.extend(line.split())
        per_chapter.append((index, tokens))
    return per_chapter


def cmd_split(cfg: RunConfig, report: RunReport) -> None:
    if cfg.input_path is None:
        raise PipelineError("no input file given (--input)")
    corpus = load_corpus(cfg.input_path)
    report.source = str(cfg.input_path)
    chapters = segment_chapters(corpus, cfg.heading_pattern)
    write_chapter_files(chapters, cfg.out_dir / "chapters")
    report.chapters = len(chapters)
    print(f"chapters: {len(chapters)}")


def cmd_extract(cfg: RunConfig, report: RunReport) -> None:
    chapters = _read_chapter_files(cfg.out_dir)
    dialogues_dir = cfg.out_dir / "dialogues"
    dialogues_dir.mkdir(parents=True, exist_ok=True)
    counter = _WarningCounter()
    dialogue.log.addHandler(counter)
    try:
        csv_paths = []
        total = 0
        for chapter in chapters:
            utterances = dialogue.extract_utterances(chapter, cfg.quote_styles)
            total += len(utterances)
            csv_paths.append(
                dialogue.write_utterances_csv(
                    utterances, dialogues_dir / f"chapter_{chapter.index}_dialogues.csv"
                )
            )
        dialogue.compile_full_dialogue(csv_paths, cfg.out_dir / "full_dialogue.txt")
    finally:
        dialogue.log.removeHandler(counter)
    report.utterances = total
    report.dropped_quote_spans = counter.count
    print(f"utterances: {total} (unbalanced quote spans dropped: {counter.count})")


def cmd_clean(cfg: RunConfig, report: RunReport) -> None:
    stops = preprocess.load_stopwords(cfg.stopword_paths)
    report.stopword_sources = list(stops.sources)
    filtered_dir = cfg.out_dir / "dialogues_filtered"
    filtered_dir.mkdir(parents=True, exist_ok=True)
    before = after = 0
    for index, csv_path in _numbered_files(cfg.out_dir / "dialogues", _DIALOGUE_FILE, "extract"):
        rows = sorted(dialogue.read_utterances_csv(csv_path), key=lambda r: (r[0], r[1]))
        lines = []
        for chapter_index, seq, text in rows:
            tokens = preprocess.tokenize(preprocess.normalize_text(text))
            tokens = preprocess.expand_contractions(tokens)
            tokens = preprocess.strip_punctuation(tokens)
            kept = preprocess.remove_stopwords(tokens, stops)
            before += len(tokens.tokens)
            after += len(kept.tokens)
            lines.append(" ".join(kept.tokens))
        out_path = filtered_dir / f"chapter_{index}_filtered.txt"
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.writelines(line + "\n" for line in lines)
    report.tokens_before_filtering = before
    report.tokens_after_filtering = after
    print(f"tokens: {before} before stopword filtering, {after} after")


def cmd_score(cfg: RunConfig, report: RunReport) -> None:
    if cfg.lexicon_path is None:
        raise PipelineError("no lexicon file given (--lexicon)")
    lex = lexicon.load_vad_lexicon(cfg.lexicon_path, rescale=cfg.rescale)
    report.lexicon_entries = len(lex)
    report.lexicon_phrases_skipped = lex.skipped_phrases
    per_chapter = _read_filtered_tokens(cfg.out_dir)
    scores = lexicon.score_corpus(
        [tokens for _, tokens in per_chapter],
        lex,
        chapter_indices=[index for index, _ in per_chapter],
    )
    lexicon.write_scores_csv(scores, cfg.out_dir / "scores.csv")
    for s in scores:
        if s.chapter_index != lexicon.AGGREGATE_INDEX:
            rate = s.tokens_matched / s.tokens_total if s.tokens_total else None
            report.match_rates[s.chapter_index] = rate

    extremes_path = cfg.out_dir / "extremes.txt"
    try:
        reports = [
            analytics.find_extremes(scores, dim, cfg.extremes_k)
            for dim in lexicon.DIMENSIONS
        ]
        extremes_path.write_text(analytics.format_extremes(reports), encoding="utf-8")
    except PipelineError as exc:
        log.warning("extremes: %s", exc)
        extremes_path.write_text("no scored chapters\n", encoding="utf-8")
    scored = sum(
        1
        for s in scores
        if s.chapter_index != lexicon.AGGREGATE_INDEX and s.tokens_matched > 0
    )
    print(
        f"scored chapters: {scored}/{len(per_chapter)}; "
        f"lexicon entries: {len(lex)} (multi-word skipped: {lex.skipped_phrases})"
    )


def cmd_freq(cfg: RunConfig, report: RunReport) -> None:
    per_chapter = _read_filtered_tokens(cfg.out_dir)
    table = analytics.frequency_table(
        [token for _, tokens in per_chapter for token in tokens]
    )
    analytics.write_freq_csv(table, cfg.out_dir / "freq.csv")
    print(f"distinct tokens: {len(table.counts)} (total occurrences: {table.total})")


def cmd_chart(cfg: RunConfig, report: RunReport) -> None:
    scores = lexicon.read_scores_csv(cfg.out_dir / "scores.csv")
    try:
        svg = viz.render_trajectory_chart(scores)
    except PipelineError as exc:
        log.warning("chart: %s; trajectory.svg not written", exc)
        print("trajectory: skipped (no scored chapters)")
        return
    path = cfg.out_dir / "trajectory.svg"
    path.write_text(svg, encoding="utf-8", newline="")
    print(f"trajectory: {path}")


def _layout_or_empty(
    table: analytics.FrequencyTable, cfg: RunConfig, seed: int
) -> viz.CloudLayout:
    if not table.counts:
        return viz.CloudLayout(
            canvas_width=cfg.cloud_width,
            canvas_height=cfg.cloud_height,
            placed=[],
            seed=seed,
        )
    return viz.layout_word_cloud(
        table,
        max_words=cfg.max_words,
        canvas_width=cfg.cloud_width,
        canvas_height=cfg.cloud_height,
        seed=seed,
    )


def cmd_cloud(cfg: RunConfig, report: RunReport) -> None:
    per_chapter = _read_filtered_tokens(cfg.out_dir)
    layouts = []
    captions = []
    written = 0
    for index, tokens in per_chapter:
        table = analytics.frequency_table(tokens)
        # seeding contract (see README): full cloud uses seed, chapter n uses seed + n
        layout = _layout_or_empty(table, cfg, seed=cfg.seed + index)
        layouts.append(layout)
        captions.append(f"Chapter {index}")
        path = cfg.out_dir / f"cloud_chapter_{index}.svg"
        path.write_text(viz.render_word_cloud(layout), encoding="utf-8", newline="")
        written += 1
    grid = viz.render_cloud_grid(layouts, columns=cfg.columns, captions=captions)
    (cfg.out_dir / "cloud_grid.svg").write_text(grid, encoding="utf-8", newline="")
    all_tokens = [token for _, tokens in per_chapter for token in tokens]
    full_layout = _layout_or_empty(
        analytics.frequency_table(all_tokens), cfg, seed=cfg.seed
    )
    (cfg.out_dir / "cloud_full.svg").write_text(
        viz.render_word_cloud(full_layout), encoding="utf-8", newline=""
    )
    print(f"clouds: {written} chapter clouds + grid + full cloud")


def cmd_all(cfg: RunConfig, report: RunReport) -> None:
    for stage in STAGES:
        started = time.perf_counter()
        COMMANDS[stage](cfg, report)
        report.stage_seconds[stage] = time.perf_counter() - started
    (cfg.out_dir / "report.txt").write_text(report.render(), encoding="utf-8")
    print(f"report: {cfg.out_dir / 'report.txt'}")


COMMANDS = {
    "split": cmd_split,
    "extract": cmd_extract,
    "clean": cmd_clean,
    "score": cmd_score,
    "freq": cmd_freq,
    "chart": cmd_chart,
    "cloud": cmd_cloud,
    "all": cmd_all,
}

_BOOL_VALUES = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_config_file(path: Path) -> dict[str, str]:
    """key = value lines; '#' starts a comment."""
    if not path.is_file():
        raise PipelineError(f"config file not found: {path}")
    values = {}
    for line_num, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise PipelineError(f"{path}: line {line_num}: expected key = value")
        key, _, value = stripped.partition("=")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, per contract
        self.print_usage(sys.stderr)
        raise PipelineError(message)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", type=Path, help="key = value config file; flags override it")
    shared.add_argument("--input", type=Path, help="plain-text UTF-8 novel")
    shared.add_argument("--out", type=Path, help="output directory (default: out)")
    shared.add_argument("--heading-pattern", help="override the chapter heading regex")
    shared.add_argument(
        "--quote-style",
        action="append",
        dest="quote_styles",
        metavar="STYLE",
        help="quote style name (straight, curly, guillemet, single-curly) or a "
        "two-character open/close pair; repeatable (default: straight + curly)",
    )
    shared.add_argument(
        "--stopwords",
        action="append",
        type=Path,
        dest="stopwords",
        metavar="FILE",
        help="stopword list file; repeatable (default: the bundled lists)",
    )
    shared.add_argument("--lexicon", type=Path, help="tab-separated VAD lexicon")
    shared.add_argument(
        "--rescale",
        action="store_const",
        const=True,
        help="map lexicon scores from [-1,1] to [0,1]",
    )
    shared.add_argument("--seed", type=int, help="word-cloud layout seed (default: 0)")
    shared.add_argument("--max-words", type=int, help="words per cloud (default: 50)")
    shared.add_argument("--cloud-width", type=float, help="cloud canvas width px")
    shared.add_argument("--cloud-height", type=float, help="cloud canvas height px")
    shared.add_argument("--columns", type=int, help="cloud grid columns (default: 4)")
    shared.add_argument("--k", type=int, help="extreme chapters per direction (default: 3)")

    parser = _Parser(prog="vadarc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "split": "segment the novel into chapters/",
        "extract": "extract quoted dialogue into dialogues/ and full_dialogue.txt",
        "clean": "preprocess dialogue into dialogues_filtered/",
        "score": "compute V/A/D means into scores.csv and extremes.txt",
        "freq": "write the word-frequency table freq.csv",
        "chart": "render trajectory.svg from scores.csv",
        "cloud": "render per-chapter, grid, and full word clouds",
        "all": "run every stage in order and write report.txt",
    }
    for name, description in descriptions.items():
        sub.add_parser(name, parents=[shared], help=description, description=description)
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = _parse_config_file(args.config) if args.config else {}
    cfg = RunConfig()

    def pick(flag_value, key: str, convert):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return convert(file_values[key])
        return None

    def as_bool(raw: str) -> bool:
        try:
            return _BOOL_VALUES[raw.lower()]
        except KeyError:
            raise PipelineError(f"config: expected true/false for rescale, got {raw!r}") from None

    value = pick(args.input, "input", Path)
    if value is not None:
        cfg.input_path = value
    value = pick(args.out, "out", Path)
    if value is not None:
        cfg.out_dir = value
    value = pick(args.heading_pattern, "heading_pattern", str)
    if value is not None:
        cfg.heading_pattern = value
    raw_styles = pick(
        args.quote_styles, "quote_styles", lambda v: [s.strip() for s in v.split(",") if s.strip()]
    )
    if raw_styles is not None:
        cfg.quote_styles = [dialogue.resolve_quote_style(s) for s in raw_styles]
    paths = pick(
        args.stopwords, "stopwords", lambda v: [Path(s.strip()) for s in v.split(",") if s.strip()]
    )
    if paths is not None:
        cfg.stopword_paths = list(paths)
    value = pick(args.lexicon, "lexicon", Path)
    if value is not None:
        cfg.lexicon_path = value
    value = pick(args.rescale, "rescale", as_bool)
    if value is not None:
        cfg.rescale = value
    for attr, arg_name, convert in [
        ("seed", "seed", int),
        ("max_words", "max_words", int),
        ("columns", "columns", int),
        ("extremes_k", "k", int),
        ("cloud_width", "cloud_width", float),
        ("cloud_height", "cloud_height", float),
    ]:
        value = pick(getattr(args, arg_name), arg_name, convert)
        if value is not None:
            setattr(cfg, attr, value)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="warning: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve_config(args)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, RunReport())
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant violation, not a user error
        log.exception("internal error: %s", exc)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
