import random

import pytest

from vadarc.cli import default_stopword_paths
from vadarc.errors import PipelineError
from vadarc.preprocess import (
    StopwordSet,
    TokenList,
    expand_contractions,
    flatten_tokens,
    load_stopwords,
    normalize_text,
    preprocess_pipeline,
    remove_stopwords,
    strip_punctuation,
    tokenize,
)

STOPS = StopwordSet(words=frozenset({"i", "do", "like", "the"}))


def test_normalize_case_and_spaces():
    assert normalize_text("Good  Morning ") == "good morning"
    assert normalize_text("HAPPY") == "happy"
    assert normalize_text("Happy") == normalize_text("hAPPY") == "happy"
    assert normalize_text("") == ""
    assert normalize_text("tabs\tand\nnewlines") == "tabs and newlines"


def test_tokenize():
    assert tokenize("don't stop").tokens == ["don't", "stop"]
    assert tokenize("frying-pan").tokens == ["frying", "pan"]
    assert tokenize("well... yes!").tokens == ["well", "yes"]
    assert tokenize("it’s 3 o’clock").tokens == ["it’s", "3", "o’clock"]
    assert tokenize("'quoted'").tokens == ["quoted"]


@pytest.mark.parametrize(
    "token,expected",
    [
        ("don't", ["do", "not"]),
        ("won't", ["will", "not"]),
        ("can't", ["can", "not"]),
        ("cannot", ["can", "not"]),
        ("shan't", ["shall", "not"]),
        ("ain't", ["not"]),
        ("couldn’t", ["could", "not"]),
        ("bilbo's", ["bilbo"]),
        ("we're", ["we"]),
        ("i've", ["i"]),
        ("he'll", ["he"]),
        ("i'd", ["i"]),
        ("i'm", ["i"]),
        ("shouldn't've", ["should", "not"]),
        ("plain", ["plain"]),
        ("o'clock", ["o'clock"]),
    ],
)
def test_expand_contractions(token, expected):
    assert expand_contractions(TokenList([token])).tokens == expected


def test_strip_punctuation():
    assert strip_punctuation(TokenList(["o'clock"])).tokens == ["oclock"]
    assert strip_punctuation(TokenList(["—"])).tokens == []
    assert strip_punctuation(TokenList(["under_score", "a.b"])).tokens == ["underscore", "ab"]


def test_possessive_precedence():
    # expand_contractions drops 's before punctuation stripping can fuse it
    out = preprocess_pipeline("Bilbo's", StopwordSet(words=frozenset()))
    assert out.tokens == ["bilbo"]


def test_load_stopwords_union(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("the\nand\n", encoding="utf-8")
    b.write_text("# comment\nand\nWould\n", encoding="utf-8")
    stops = load_stopwords([a, b])
    assert stops.words == {"the", "and", "would"}
    assert stops.sources == (str(a), str(b))


def test_load_stopwords_empty_file(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("", encoding="utf-8")
    assert load_stopwords([empty]).words == frozenset()


def test_load_stopwords_missing_file(tmp_path):
    missing = tmp_path / "nope.txt"
    with pytest.raises(PipelineError, match="nope.txt"):
        load_stopwords([missing])


def test_bundled_extended_list_members():
    stops = load_stopwords(default_stopword_paths())
    for word in ("would", "could", "may"):
        assert word in stops


def test_remove_stopwords():
    stops = StopwordSet(words=frozenset({"the", "and"}))
    tl = TokenList(["the", "good", "and", "time"])
    assert remove_stopwords(tl, stops).tokens == ["good", "time"]


def test_not_survives_stoplist():
    stops = StopwordSet(words=frozenset({"not"}))
    assert remove_stopwords(TokenList(["not", "lost"]), stops).tokens == ["not", "lost"]


def test_remove_stopwords_empty():
    assert remove_stopwords(TokenList([]), STOPS).tokens == []


def test_pipeline_golden():
    assert preprocess_pipeline('"I don\'t like the dark!"', STOPS).tokens == ["not", "dark"]


def test_pipeline_empty_and_duplicates():
    assert preprocess_pipeline("", STOPS).tokens == []
    assert preprocess_pipeline("GOOD good Good", STOPS).tokens == ["good", "good", "good"]


def test_pipeline_carries_origin():
    out = preprocess_pipeline("hello world", STOPS, origin=(3, 7))
    assert out.origin == (3, 7)


def test_output_alphabet_property():
    rng = random.Random(11)
    words = ["don't", "Frying-Pan", "the", "O'CLOCK", "stop...", "it's", "&", "42nd"]
    for _ in range(100):
        text = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 12)))
        out = preprocess_pipeline(text, STOPS)
        for token in out.tokens:
            assert token.isalnum()
            assert token == token.lower()
            assert token == "not" or token not in STOPS


def test_negation_preservation_property():
    rng = random.Random(23)
    negations = ["don't", "can't", "won't", "didn’t", "shan't", "ain't", "mustn't"]
    fillers = ["we", "really", "go", "there", "today"]
    for _ in range(100):
        words = [rng.choice(fillers) for _ in range(rng.randrange(0, 6))]
        words.insert(rng.randrange(0, len(words) + 1), rng.choice(negations))
        out = preprocess_pipeline(" ".join(words), STOPS)
        assert "not" in out.tokens


def test_pipeline_idempotent():
    rng = random.Random(5)
    samples = [
        '"I don\'t like the dark!" she said... TWICE; o’clock won’t-wait',
        "Frying-pan fire! We can't stop, CANNOT stop.",
        "",
    ]
    for text in samples:
        once = preprocess_pipeline(text, STOPS).tokens
        twice = preprocess_pipeline(" ".join(once), STOPS).tokens
        assert once == twice


def test_stage_character_monotonicity():
    text = "The WON'T of it all -- frying-pan, o'clock!"
    normalized = normalize_text(text)
    assert len(normalized) <= len(text)
    toks = tokenize(normalized)
    assert sum(map(len, toks.tokens)) <= len(normalized)
    expanded = expand_contractions(toks)  # may grow: won't -> will + not
    stripped = strip_punctuation(expanded)
    assert sum(map(len, stripped.tokens)) <= sum(map(len, expanded.tokens))
    removed = remove_stopwords(stripped, STOPS)
    assert sum(map(len, removed.tokens)) <= sum(map(len, stripped.tokens))


def test_flatten_tokens():
    tl = TokenList(["a", "b"])
    assert flatten_tokens(tl) == ["a", "b"]
    assert flatten_tokens([tl, "c", [tl]]) == ["a", "b", "c", "a", "b"]
