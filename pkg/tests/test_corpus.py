import copy
import json
from fractions import Fraction

import pytest

from scicredit.corpus import (
    CorpusError,
    EmptyCorpusError,
    GenderLabel,
    contributor_counts,
    load_corpus,
    load_scholars,
    validate,
    write_corpus,
)

from conftest import ack, author, paper_dict, write_jsonl


def test_load_counts_papers(corpus_file):
    records = [
        paper_dict(f"10.1/{i}", [author("A", f"F{i}", ["investigation"])]) for i in range(3)
    ]
    corpus = load_corpus(corpus_file(records))
    assert len(corpus.papers) == 3
    assert corpus.load_report.malformed == ()


def test_partial_load_reports_line_numbers(tmp_path):
    good = paper_dict("10.1/a", [author("A", "B", ["investigation"])])
    good2 = paper_dict("10.1/b", [author("C", "D", ["software"])])
    path = tmp_path / "corpus.jsonl"
    with open(path, "w") as fh:
        fh.write(json.dumps(good) + "\n")
        fh.write(json.dumps(good2) + "\n")
        fh.write("{not json}\n")
    corpus = load_corpus(path)
    assert len(corpus.papers) == 2
    assert [issue.line_no for issue in corpus.load_report.malformed] == [3]


def test_duplicate_doi_is_fatal(corpus_file):
    records = [
        paper_dict("10.1/dup", [author("A", "B", ["investigation"])]),
        paper_dict("10.1/dup", [author("C", "D", ["software"])]),
    ]
    with pytest.raises(CorpusError, match="10.1/dup"):
        load_corpus(corpus_file(records))


def test_missing_file_and_empty_corpus(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "absent.jsonl")
    empty = tmp_path / "empty.jsonl"
    empty.write_text("{broken\n")
    with pytest.raises(EmptyCorpusError):
        load_corpus(empty)


def test_malformed_variants_skipped(corpus_file):
    records = [
        paper_dict("10.1/ok", [author("A", "B", ["investigation"])]),
        {"doi": "", "year": 2018, "authors": [author("A", "B", [])]},
        {"doi": "10.1/noauthors", "year": 2018, "authors": []},
        {"doi": "10.1/badyear", "year": "x", "authors": [author("A", "B", [])]},
    ]
    corpus = load_corpus(corpus_file(records))
    assert len(corpus.papers) == 1
    assert len(corpus.load_report.malformed) == 3


def test_duplicate_author_kept_once_with_warning(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            [
                author("A", "B", ["investigation"], person_id="P1"),
                author("A", "B", ["software"], person_id="P1"),
            ],
        )
    ]
    corpus = load_corpus(corpus_file(records))
    assert len(corpus.papers[0].authors) == 1
    assert len(corpus.load_report.warnings) == 1


def test_loading_is_deterministic(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            [author("Alice", "Fab", ["investigation"], "woman", "P1")],
            [ack("Boris", "Fac", "man", "P2")],
            ack_text="We thank Boris Fac for help.",
        )
    ]
    path = corpus_file(records)
    first = load_corpus(path)
    second = load_corpus(path)
    assert first.papers == second.papers


def test_totals_additive_over_concatenation(tmp_path):
    a = [paper_dict("10.1/a", [author("A", "B", ["investigation"])],
                    [ack("C", "D")], ack_text="We thank C D.")]
    b = [paper_dict("10.1/b", [author("E", "F", ["software"]), author("G", "H", ["resources"])])]
    pa = write_jsonl(tmp_path / "a.jsonl", a)
    pb = write_jsonl(tmp_path / "b.jsonl", b)
    both = tmp_path / "ab.jsonl"
    both.write_text(pa.read_text() + pb.read_text())
    ca, cb, cab = load_corpus(pa), load_corpus(pb), load_corpus(both)
    for attr in ("n_papers", "n_author_mentions", "n_acknowledgee_mentions"):
        assert getattr(contributor_counts(cab), attr) == (
            getattr(contributor_counts(ca), attr) + getattr(contributor_counts(cb), attr)
        )


def test_validate_reports_defined_checks(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            [
                author("A", "B", ["dark arts"], person_id="P1"),
                author("C", "D", []),
            ],
            [ack("John", "Smith", person_id="P9")],
            ack_text="We thank nobody in particular.",
        )
    ]
    scholars = [{"person_id": "P1", "total_citations": 5, "gender": "man", "disciplines": []}]
    corpus = load_corpus(corpus_file(records), corpus_file(scholars, "scholars.jsonl"))
    report = validate(corpus)
    counts = report.counts
    assert counts["ack-name-not-in-text"] == 1
    assert counts["unknown-credit-role"] == 1
    assert counts["author-without-roles"] == 1
    assert counts["missing-scholar-profile"] == 1


def test_validate_clean_corpus_is_empty(tiny_corpus):
    assert validate(tiny_corpus).is_empty


def test_validate_is_pure(tiny_corpus):
    before = copy.deepcopy(tiny_corpus.papers)
    validate(tiny_corpus)
    assert tiny_corpus.papers == before


def test_contributor_counts_direct(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            [author("A", "B", ["investigation"], "woman"), author("C", "D", ["software"], "man")],
            [ack("E", "F", "woman", person_id="P5"), ack("G", "H"), ack("I", "J")],
            ack_text="We thank E F, G H, and I J.",
        )
    ]
    counts = contributor_counts(load_corpus(corpus_file(records)))
    assert counts.n_papers == 1
    assert counts.n_author_mentions == 2
    assert counts.n_acknowledgee_mentions == 3
    assert counts.identified_fraction == Fraction(1, 3)


def test_identified_fraction_boundary(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            [author("A", "B", ["investigation"])],
            [ack("C", "D", person_id="P1"), ack("E", "F", person_id="P2")],
            ack_text="We thank C D and E F.",
        )
    ]
    counts = contributor_counts(load_corpus(corpus_file(records)))
    assert counts.identified_fraction == Fraction(1)


def test_identified_fraction_reproduces_reported_share():
    # shape check on the published ratio: 18754 of 63343 is 29.6%
    assert round(100 * 18754 / 63343, 1) == 29.6


def test_scholar_table_unique_ids(tmp_path):
    rows = [
        {"person_id": "P1", "total_citations": 2, "gender": "man", "disciplines": []},
        {"person_id": "P1", "total_citations": 3, "gender": "man", "disciplines": []},
    ]
    path = write_jsonl(tmp_path / "s.jsonl", rows)
    with pytest.raises(CorpusError, match="P1"):
        load_scholars(path)


def test_write_then_load_round_trip(tiny_corpus, tmp_path):
    out = tmp_path / "round.jsonl"
    write_corpus(tiny_corpus, out)
    again = load_corpus(out)
    assert again.papers == tiny_corpus.papers


def test_unknown_gender_label_line_is_malformed(tmp_path):
    good = paper_dict("10.1/ok", [author("A", "B", ["investigation"])])
    bad = paper_dict("10.1/bad", [author("A", "B", ["investigation"], gender="banana")])
    path = write_jsonl(tmp_path / "c.jsonl", [good, bad])
    corpus = load_corpus(path)
    assert [p.doi for p in corpus.papers] == ["10.1/ok"]
    assert len(corpus.load_report.malformed) == 1
