import json
import random

import pytest

from vadarc.corpus import Chapter, normalize_corpus, segment_chapters
from vadarc.dialogue import (
    compile_full_dialogue,
    extract_utterances,
    read_utterances_csv,
    resolve_quote_style,
    write_utterances_csv,
)
from vadarc.errors import PipelineError


def make_chapter(body, index=1):
    return Chapter(index=index, heading="Chapter 1", body=body, start_offset=0, end_offset=0)


def test_single_pair():
    us = extract_utterances(make_chapter('He said "Good morning!" and left.'))
    assert [u.text for u in us] == ["Good morning!"]


def test_two_pairs():
    us = extract_utterances(make_chapter('"Yes," she said, "go on."'))
    assert [u.text for u in us] == ["Yes,", "go on."]


def test_typographic_quotes():
    us = extract_utterances(make_chapter("“Don’t be a fool” he cried"))
    assert [u.text for u in us] == ["Don’t be a fool"]


def test_span_crosses_line_break_within_paragraph():
    us = extract_utterances(make_chapter('"over the\nline" he said'))
    assert [u.text for u in us] == ["over the\nline"]


def test_unbalanced_opener_dropped_with_warning(caplog):
    with caplog.at_level("WARNING", logger="vadarc.dialogue"):
        us = extract_utterances(make_chapter('"never closed, alas'))
    assert us == []
    assert sum("unclosed quote" in r.message for r in caplog.records) == 1


def test_no_stitching_across_paragraphs(caplog):
    body = '“first paragraph speech\n\n“second paragraph speech”'
    with caplog.at_level("WARNING", logger="vadarc.dialogue"):
        us = extract_utterances(make_chapter(body))
    assert [u.text for u in us] == ["second paragraph speech"]
    assert sum("unclosed quote" in r.message for r in caplog.records) == 1


def test_no_merging_across_chapter_boundary(caplog):
    text = "Chapter 1\nHe opened “and never closed\n\nChapter 2\nclosing” mark alone"
    chapters = segment_chapters(normalize_corpus(text.encode("utf-8")))
    with caplog.at_level("WARNING", logger="vadarc.dialogue"):
        all_utterances = [u for c in chapters for u in extract_utterances(c)]
    assert all_utterances == []


def test_empty_span_ignored():
    us = extract_utterances(make_chapter('"" and " " but "real"'))
    assert [u.text for u in us] == ["real"]


def test_offsets_and_seq():
    body = '\nnoise "one" noise “two” end'
    chapter = make_chapter(body, index=7)
    us = extract_utterances(chapter)
    assert [u.seq for u in us] == [1, 2]
    assert all(u.chapter_index == 7 for u in us)
    for u in us:
        assert body[u.start_offset : u.end_offset] == u.text


def test_extraction_is_deterministic(data_dir):
    raw = (data_dir / "dialogue_fixture.txt").read_bytes()
    (chapter,) = segment_chapters(normalize_corpus(raw))
    assert extract_utterances(chapter) == extract_utterances(chapter)


def test_hand_annotated_fixture(data_dir, caplog):
    raw = (data_dir / "dialogue_fixture.txt").read_bytes()
    (chapter,) = segment_chapters(normalize_corpus(raw))
    expected = json.loads((data_dir / "dialogue_fixture_expected.json").read_text())
    with caplog.at_level("WARNING", logger="vadarc.dialogue"):
        us = extract_utterances(chapter)
    assert [u.text for u in us] == expected["utterances"]
    warnings = sum("unclosed quote" in r.message for r in caplog.records)
    assert warnings == expected["expected_warnings"]


def test_pairing_soundness_on_random_quote_soup():
    rng = random.Random(4)
    alphabet = 'ab "“” \n'
    for _ in range(200):
        body = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 120)))
        us = extract_utterances(make_chapter(body))
        marks = sum(body.count(ch) for ch in '"“”')
        assert len(us) <= marks // 2


def test_custom_quote_style():
    us = extract_utterances(make_chapter("«bonjour» dit-il"), [("«", "»")])
    assert [u.text for u in us] == ["bonjour"]
    assert resolve_quote_style("guillemet") == ("«", "»")
    assert resolve_quote_style("«»") == ("«", "»")
    with pytest.raises(PipelineError, match="unknown quote style"):
        resolve_quote_style("nope")


def test_csv_rfc4180_quoting(tmp_path):
    from vadarc.dialogue import Utterance

    u = Utterance(chapter_index=1, seq=1, text='Yes, "now"', start_offset=0, end_offset=10)
    path = write_utterances_csv([u], tmp_path / "d.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "chapter,seq,utterance"
    assert lines[1] == '1,1,"Yes, ""now"""'


def test_csv_empty_and_row_count(tmp_path):
    path = write_utterances_csv([], tmp_path / "empty.csv")
    assert path.read_text(encoding="utf-8").splitlines() == ["chapter,seq,utterance"]
    us = extract_utterances(make_chapter('"a" and "b"'))
    path = write_utterances_csv(us, tmp_path / "two.csv")
    assert len(path.read_text(encoding="utf-8").splitlines()) == 3


def test_csv_round_trip(tmp_path):
    us = extract_utterances(make_chapter('"multi\nline, with ""marks""" tail'))
    path = write_utterances_csv(us, tmp_path / "d.csv")
    rows = read_utterances_csv(path)
    assert rows == [(u.chapter_index, u.seq, u.text) for u in us]


def test_malformed_csv_names_file_and_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("chapter,seq,utterance\n1,notanint,hello\n", encoding="utf-8")
    with pytest.raises(PipelineError, match=r"bad\.csv: line 2"):
        read_utterances_csv(path)
    path.write_text("wrong,header\n", encoding="utf-8")
    with pytest.raises(PipelineError, match="expected header"):
        read_utterances_csv(path)


def test_compile_full_dialogue(tmp_path):
    c1 = extract_utterances(make_chapter('"a1" and "a2"', index=1))
    c2 = extract_utterances(make_chapter('"b1"', index=2))
    p1 = write_utterances_csv(c1, tmp_path / "chapter_1_dialogues.csv")
    p2 = write_utterances_csv(c2, tmp_path / "chapter_2_dialogues.csv")
    out = compile_full_dialogue([p1, p2], tmp_path / "full_dialogue.txt")
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines == ["a1", "a2", "b1"]


def test_compile_order_and_multiline(tmp_path):
    c2 = extract_utterances(make_chapter('"late"', index=2))
    c1 = extract_utterances(make_chapter('"first\nhalf"', index=1))
    p2 = write_utterances_csv(c2, tmp_path / "chapter_2_dialogues.csv")
    p1 = write_utterances_csv(c1, tmp_path / "chapter_1_dialogues.csv")
    out = compile_full_dialogue([p2, p1], tmp_path / "full_dialogue.txt")
    assert out.read_text(encoding="utf-8").splitlines() == ["first half", "late"]


def test_compile_empty(tmp_path):
    p = write_utterances_csv([], tmp_path / "chapter_1_dialogues.csv")
    out = compile_full_dialogue([p], tmp_path / "full_dialogue.txt")
    assert out.read_text(encoding="utf-8") == ""
