"""Domain model and line-delimited corpus I/O.

A corpus file holds one JSON object per line with fields ``doi``, ``year``,
``disciplines``, ``authors``, ``acknowledgees``, ``ack_text``; a scholar
profile file holds one JSON object per line with ``person_id``,
``total_citations``, ``gender``, ``disciplines``. Loading is strict about
duplicate identifiers and collects malformed lines into a report instead of
aborting.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional

from . import text


class CorpusError(Exception):
    """Fatal problem with a corpus or profile file."""


class EmptyCorpusError(CorpusError):
    """File contained no valid paper record."""


class GenderLabel(Enum):
    WOMAN = "woman"
    MAN = "man"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, value: Optional[str]) -> "GenderLabel":
        if value is None or value == "":
            return cls.UNKNOWN
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown gender label: {value!r}") from None


@dataclass(frozen=True)
class AuthorEntry:
    given_name: str
    family_name: str
    credit_roles: tuple[str, ...]
    gender: GenderLabel = GenderLabel.UNKNOWN
    person_id: Optional[str] = None

    @property
    def name_key(self) -> str:
        return f"{self.given_name.casefold()}|{self.family_name.casefold()}"

    @property
    def person_key(self) -> str:
        return self.person_id if self.person_id else f"name:{self.name_key}"


@dataclass(frozen=True)
class AckEntry:
    given_name: str
    family_name: str
    gender: GenderLabel = GenderLabel.UNKNOWN
    person_id: Optional[str] = None

    @property
    def name_key(self) -> str:
        return f"{self.given_name.casefold()}|{self.family_name.casefold()}"

    @property
    def person_key(self) -> str:
        return self.person_id if self.person_id else f"name:{self.name_key}"


@dataclass(frozen=True)
class PaperRecord:
    doi: str
    year: int
    disciplines: tuple[str, ...]
    authors: tuple[AuthorEntry, ...]
    acknowledgees: tuple[AckEntry, ...]
    ack_text: str = ""


@dataclass(frozen=True)
class ScholarProfile:
    person_id: str
    total_citations: int
    gender: GenderLabel = GenderLabel.UNKNOWN
    disciplines: tuple[str, ...] = ()


@dataclass(frozen=True)
class LoadIssue:
    line_no: int
    message: str


@dataclass(frozen=True)
class LoadReport:
    malformed: tuple[LoadIssue, ...] = ()
    warnings: tuple[LoadIssue, ...] = ()


@dataclass(frozen=True)
class Provenance:
    papers_path: str
    scholars_path: Optional[str]
    loaded_at: str


@dataclass(frozen=True)
class Corpus:
    papers: tuple[PaperRecord, ...]
    scholars: Mapping[str, ScholarProfile]
    provenance: Provenance
    load_report: LoadReport = field(default_factory=LoadReport)

    def paper_by_doi(self, doi: str) -> PaperRecord:
        for paper in self.papers:
            if paper.doi == doi:
                return paper
        raise KeyError(doi)


def _require(record: dict, key: str, kind: type) -> object:
    if key not in record:
        raise ValueError(f"missing field {key!r}")
    value = record[key]
    if kind is int and isinstance(value, bool):
        raise ValueError(f"field {key!r} must be {kind.__name__}")
    if not isinstance(value, kind):
        raise ValueError(f"field {key!r} must be {kind.__name__}")
    return value


def _parse_author(item: dict) -> AuthorEntry:
    roles = item.get("credit_roles", [])
    if not isinstance(roles, list) or not all(isinstance(r, str) for r in roles):
        raise ValueError("credit_roles must be a list of strings")
    return AuthorEntry(
        given_name=str(item.get("given_name", "")),
        family_name=str(item.get("family_name", "")),
        credit_roles=tuple(roles),
        gender=GenderLabel.parse(item.get("gender")),
        person_id=item.get("person_id") or None,
    )


def _parse_ack(item: dict) -> AckEntry:
    return AckEntry(
        given_name=str(item.get("given_name", "")),
        family_name=str(item.get("family_name", "")),
        gender=GenderLabel.parse(item.get("gender")),
        person_id=item.get("person_id") or None,
    )


def _parse_paper(record: dict, warnings: list[LoadIssue], line_no: int) -> PaperRecord:
    doi = _require(record, "doi", str)
    if not doi:
        raise ValueError("doi is empty")
    year = _require(record, "year", int)
    disciplines = record.get("disciplines", [])
    if not isinstance(disciplines, list):
        raise ValueError("disciplines must be a list")
    raw_authors = _require(record, "authors", list)
    if not raw_authors:
        raise ValueError("authors is empty")
    authors: list[AuthorEntry] = []
    seen: set[str] = set()
    for item in raw_authors:
        author = _parse_author(item)
        if author.person_key in seen:
            warnings.append(
                LoadIssue(line_no, f"{doi}: duplicate author {author.person_key!r} dropped")
            )
            continue
        seen.add(author.person_key)
        authors.append(author)
    acks = tuple(_parse_ack(item) for item in record.get("acknowledgees", []))
    return PaperRecord(
        doi=str(doi),
        year=int(year),
        disciplines=tuple(str(d) for d in disciplines),
        authors=tuple(authors),
        acknowledgees=acks,
        ack_text=str(record.get("ack_text", "")),
    )


def load_scholars(path: str | Path) -> dict[str, ScholarProfile]:
    """Read a scholar profile file into a person_id-keyed table."""
    table: dict[str, ScholarProfile] = {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read scholar file {path}: {exc}") from exc
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            person_id = str(_require(record, "person_id", str))
            citations = int(_require(record, "total_citations", int))
            if citations < 0:
                raise ValueError("total_citations is negative")
        except (ValueError, json.JSONDecodeError) as exc:
            raise CorpusError(f"scholar file line {line_no}: {exc}") from exc
        if person_id in table:
            raise CorpusError(f"duplicate person_id in scholar file: {person_id}")
        table[person_id] = ScholarProfile(
            person_id=person_id,
            total_citations=citations,
            gender=GenderLabel.parse(record.get("gender")),
            disciplines=tuple(str(d) for d in record.get("disciplines", [])),
        )
    return table


def load_corpus(path: str | Path, scholars_path: str | Path | None = None) -> Corpus:
    """Load a line-delimited corpus file, skipping malformed lines.

    Raises :class:`CorpusError` on unreadable files or duplicate DOIs and
    :class:`EmptyCorpusError` when no line parses.
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    papers: list[PaperRecord] = []
    seen_dois: set[str] = set()
    malformed: list[LoadIssue] = []
    warnings: list[LoadIssue] = []
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            paper = _parse_paper(record, warnings, line_no)
        except (ValueError, json.JSONDecodeError) as exc:
            malformed.append(LoadIssue(line_no, str(exc)))
            continue
        if paper.doi in seen_dois:
            raise CorpusError(f"duplicate doi: {paper.doi}")
        seen_dois.add(paper.doi)
        papers.append(paper)
    if not papers:
        raise EmptyCorpusError(f"no valid paper records in {path}")
    scholars = load_scholars(scholars_path) if scholars_path is not None else {}
    provenance = Provenance(
        papers_path=str(path),
        scholars_path=str(scholars_path) if scholars_path is not None else None,
        loaded_at=datetime.now(timezone.utc).isoformat(),
    )
    return Corpus(
        papers=tuple(papers),
        scholars=scholars,
        provenance=provenance,
        load_report=LoadReport(tuple(malformed), tuple(warnings)),
    )


def paper_to_dict(paper: PaperRecord) -> dict:
    return {
        "doi": paper.doi,
        "year": paper.year,
        "disciplines": list(paper.disciplines),
        "authors": [
            {
                "person_id": a.person_id,
                "given_name": a.given_name,
                "family_name": a.family_name,
                "credit_roles": list(a.credit_roles),
                "gender": a.gender.value,
            }
            for a in paper.authors
        ],
        "acknowledgees": [
            {
                "person_id": a.person_id,
                "given_name": a.given_name,
                "family_name": a.family_name,
                "gender": a.gender.value,
            }
            for a in paper.acknowledgees
        ],
        "ack_text": paper.ack_text,
    }


def write_corpus(
    corpus: Corpus, path: str | Path, scholars_path: str | Path | None = None
) -> None:
    """Serialize papers (and optionally scholar profiles) as JSON lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for paper in corpus.papers:
            fh.write(json.dumps(paper_to_dict(paper), sort_keys=True))
            fh.write("\n")
    if scholars_path is not None:
        with open(scholars_path, "w", encoding="utf-8") as fh:
            for person_id in sorted(corpus.scholars):
                profile = corpus.scholars[person_id]
                fh.write(
                    json.dumps(
                        {
                            "person_id": profile.person_id,
                            "total_citations": profile.total_citations,
                            "gender": profile.gender.value,
                            "disciplines": list(profile.disciplines),
                        },
                        sort_keys=True,
                    )
                )
                fh.write("\n")


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    doi: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def counts(self) -> dict[str, int]:
        return dict(Counter(issue.kind for issue in self.issues))

    @property
    def is_empty(self) -> bool:
        return not self.issues


def validate(corpus: Corpus, mapping=None) -> ValidationReport:
    """Report-only consistency checks; never mutates the corpus.

    Flags acknowledgees whose names cannot be located in the statement text,
    authors with unrecognized or missing credit roles, and paper-referenced
    scholar IDs absent from the profile table (when a table is present).
    """
    from .credit import CreditMapping

    if mapping is None:
        mapping = CreditMapping.default()
    issues: list[ValidationIssue] = []
    check_profiles = bool(corpus.scholars)
    for paper in corpus.papers:
        tokens = text.tokenize(paper.ack_text)
        for ack in paper.acknowledgees:
            if not text.name_mentioned(tokens, ack.given_name, ack.family_name):
                issues.append(
                    ValidationIssue(
                        "ack-name-not-in-text",
                        paper.doi,
                        f"{ack.given_name} {ack.family_name}".strip(),
                    )
                )
        for author in paper.authors:
            if not author.credit_roles:
                issues.append(
                    ValidationIssue(
                        "author-without-roles",
                        paper.doi,
                        f"{author.given_name} {author.family_name}".strip(),
                    )
                )
            for role in author.credit_roles:
                if not mapping.knows(role):
                    issues.append(ValidationIssue("unknown-credit-role", paper.doi, role))
        if check_profiles:
            for person in list(paper.authors) + list(paper.acknowledgees):
                if person.person_id and person.person_id not in corpus.scholars:
                    issues.append(
                        ValidationIssue("missing-scholar-profile", paper.doi, person.person_id)
                    )
    return ValidationReport(tuple(issues))


@dataclass(frozen=True)
class CountsSummary:
    n_papers: int
    n_author_mentions: int
    n_acknowledgee_mentions: int
    n_acknowledgees_identified: int
    authors_by_gender: Mapping[str, int]
    acknowledgees_by_gender: Mapping[str, int]
    contributors_by_discipline: Mapping[tuple[str, str], int]

    @property
    def identified_fraction(self) -> Fraction:
        if self.n_acknowledgee_mentions == 0:
            return Fraction(0)
        return Fraction(self.n_acknowledgees_identified, self.n_acknowledgee_mentions)


def contributor_counts(corpus: Corpus) -> CountsSummary:
    """Descriptive totals: mentions, identification share, and the
    per-discipline gender breakdown."""
    authors_by_gender: Counter[str] = Counter()
    acks_by_gender: Counter[str] = Counter()
    by_discipline: Counter[tuple[str, str]] = Counter()
    n_authors = 0
    n_acks = 0
    n_identified = 0
    for paper in corpus.papers:
        for author in paper.authors:
            n_authors += 1
            authors_by_gender[author.gender.value] += 1
            for disc in paper.disciplines:
                by_discipline[(disc, author.gender.value)] += 1
        for ack in paper.acknowledgees:
            n_acks += 1
            acks_by_gender[ack.gender.value] += 1
            if ack.person_id:
                n_identified += 1
            for disc in paper.disciplines:
                by_discipline[(disc, ack.gender.value)] += 1
    return CountsSummary(
        n_papers=len(corpus.papers),
        n_author_mentions=n_authors,
        n_acknowledgee_mentions=n_acks,
        n_acknowledgees_identified=n_identified,
        authors_by_gender=dict(authors_by_gender),
        acknowledgees_by_gender=dict(acks_by_gender),
        contributors_by_discipline=dict(by_discipline),
    )


def annotate_genders(
    corpus: Corpus,
    author_labels: Iterable[tuple[str, int, GenderLabel]] = (),
) -> Corpus:
    """Return a copy of the corpus with selected author genders replaced.

    Used by tests; bulk annotation lives in :mod:`scicredit.gender`.
    """
    updates = {(doi, idx): label for doi, idx, label in author_labels}
    papers = []
    for paper in corpus.papers:
        authors = tuple(
            replace(a, gender=updates.get((paper.doi, i), a.gender))
            for i, a in enumerate(paper.authors)
        )
        papers.append(replace(paper, authors=authors))
    return replace(corpus, papers=tuple(papers))
