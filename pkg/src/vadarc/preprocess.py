"""Turn utterance text into clean, lowercase, stopword-free tokens.

Pipeline order: normalize -> tokenize -> expand_contractions ->
strip_punctuation -> remove_stopwords. Negation survives the whole pipeline:
n't contractions are split into (auxiliary, "not") and "not" is never
removed by stopword filtering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import PipelineError

# Maximal runs of letters/digits, with apostrophes kept only between them.
_TOKEN = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")
_NON_ALNUM = re.compile(r"[\W_]+")

# n't stems with irregular bases; "ai" (ain't) yields "not" alone.
_IRREGULAR_STEMS = {"wo": "will", "ca": "can", "sha": "shall"}
_PLAIN_SUFFIXES = ("'s", "'re", "'ve", "'ll", "'d", "'m")


@dataclass(frozen=True)
class TokenList:
    """Ordered tokens with optional (chapter_index, seq) provenance."""

    tokens: list[str]
    origin: tuple[int, int] | None = None


@dataclass(frozen=True)
class StopwordSet:
    """Lowercase stopwords plus the labels of the files they came from."""

    words: frozenset[str]
    sources: tuple[str, ...] = ()

    def __contains__(self, token: str) -> bool:
        return token in self.words


def normalize_text(text: str) -> str:
    """Lowercase and collapse whitespace runs to single spaces."""
    return " ".join(text.lower().split())


def tokenize(text: str, origin: tuple[int, int] | None = None) -> TokenList:
    """Split into word tokens. Internal apostrophes survive (contraction
    handling needs them); hyphens and other punctuation split tokens."""
    return TokenList(tokens=_TOKEN.findall(text), origin=origin)


def _expand_token(token: str) -> list[str]:
    t = token.replace("’", "'")
    stripped_suffix = False
    while True:
        if t == "cannot":
            return ["can", "not"]
        if t.endswith("n't"):
            stem = t[:-3]
            if not stem or stem == "ai":
                return ["not"]
            return [_IRREGULAR_STEMS.get(stem, stem), "not"]
        for suffix in _PLAIN_SUFFIXES:
            if t.endswith(suffix) and len(t) > len(suffix):
                t = t[: -len(suffix)]
                stripped_suffix = True
                break
        else:
            break
    return [t] if stripped_suffix else [token]


def expand_contractions(tokens: TokenList) -> TokenList:
    """Split n't forms into (base, "not"); drop 's/'re/'ve/'ll/'d/'m suffixes."""
    out: list[str] = []
    for token in tokens.tokens:
        out.extend(_expand_token(token))
    return TokenList(tokens=out, origin=tokens.origin)


def strip_punctuation(tokens: TokenList) -> TokenList:
    """Remove every non-letter, non-digit character; drop emptied tokens."""
    out = []
    for token in tokens.tokens:
        cleaned = _NON_ALNUM.sub("", token)
        if cleaned:
            out.append(cleaned)
    return TokenList(tokens=out, origin=tokens.origin)


def load_stopwords(paths: Sequence[str | Path]) -> StopwordSet:
    """Union of one-word-per-line files; '#' lines are comments."""
    words = set()
    sources = []
    for path in paths:
        path = Path(path)
        if not path.is_file():
            raise PipelineError(f"stopword file not found: {path}")
        for line in path.read_text(encoding="utf-8").splitlines():
            word = line.strip()
            if not word or word.startswith("#"):
                continue
            words.add(word.lower())
        sources.append(str(path))
    return StopwordSet(words=frozenset(words), sources=tuple(sources))


def remove_stopwords(tokens: TokenList, stops: StopwordSet) -> TokenList:
    """Drop stopwords, preserving order. "not" is always kept: it carries the
    negation signal the contraction handling worked to make explicit."""
    kept = [t for t in tokens.tokens if t == "not" or t not in stops]
    return TokenList(tokens=kept, origin=tokens.origin)


def preprocess_pipeline(
    text: str, stops: StopwordSet, origin: tuple[int, int] | None = None
) -> TokenList:
    """The five stages composed in order."""
    tokens = tokenize(normalize_text(text), origin=origin)
    tokens = expand_contractions(tokens)
    tokens = strip_punctuation(tokens)
    return remove_stopwords(tokens, stops)


def flatten_tokens(items: Iterable | TokenList) -> list[str]:
    """Flatten TokenLists and/or plain token strings into one token list."""
    if isinstance(items, TokenList):
        return list(items.tokens)
    flat: list[str] = []
    for item in items:
        if isinstance(item, TokenList):
            flat.extend(item.tokens)
        elif isinstance(item, str):
            flat.append(item)
        else:
            flat.extend(flatten_tokens(item))
    return flat
