"""Keyword classification of acknowledgment statements.

A statement is segmented into sentences; each sentence's noun lemmas are
matched against a keyword taxonomy with per-keyword co-occurrence rules
(suppressors cancel a label, promoters switch its category). Every person
named in a sentence receives every role that sentence classifies to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

from .corpus import AckEntry, GenderLabel, PaperRecord
from .credit import ACK_ROLES, Role
from .text import extract_lemmas, name_mentioned, segment_sentences, tokenize

__all__ = [
    "AckTaxonomy",
    "DisambiguationRule",
    "RoleAssignment",
    "AckDiagnostic",
    "TaxonomyError",
    "classify_sentence",
    "assign_roles",
    "segment_sentences",
    "extract_lemmas",
]


class TaxonomyError(Exception):
    """Inconsistent taxonomy configuration."""


@dataclass(frozen=True)
class DisambiguationRule:
    """Single-sentence co-occurrence rule for one keyword.

    Suppressors match on lemmas and cancel the label outright; promoters
    match on exact surface forms and switch the label to
    ``switched_category``. Without either trigger the keyword labels
    ``default_category``.
    """

    keyword: str
    suppressors: frozenset[str] = frozenset()
    promoters: frozenset[str] = frozenset()
    default_category: Role = Role.INVESTIGATION_ANALYSIS
    switched_category: Optional[Role] = None


@dataclass(frozen=True)
class AckTaxonomy:
    categories: Mapping[Role, frozenset[str]]
    rules: tuple[DisambiguationRule, ...] = ()
    _rule_index: Mapping[str, DisambiguationRule] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        index = {rule.keyword: rule for rule in self.rules}
        object.__setattr__(self, "_rule_index", index)
        for role in self.categories:
            if role not in ACK_ROLES:
                raise TaxonomyError(f"{role.value} is not an acknowledgment category")
        seen: dict[str, Role] = {}
        for role, keywords in self.categories.items():
            for kw in keywords:
                if kw in seen and seen[kw] is not role and kw not in index:
                    raise TaxonomyError(
                        f"keyword {kw!r} is in two categories but has no rule"
                    )
                seen[kw] = role

    def rule_for(self, keyword: str) -> Optional[DisambiguationRule]:
        return self._rule_index.get(keyword)

    def keyword_categories(self) -> dict[str, Role]:
        """Keyword -> category for keywords not governed by a rule."""
        out: dict[str, Role] = {}
        for role, keywords in self.categories.items():
            for kw in keywords:
                if kw not in self._rule_index:
                    out[kw] = role
        return out

    @classmethod
    def from_config(cls, config: dict) -> "AckTaxonomy":
        categories = {
            Role(name): frozenset(words)
            for name, words in config["categories"].items()
            if not name.startswith("_")
        }
        rules = tuple(
            DisambiguationRule(
                keyword=item["keyword"],
                suppressors=frozenset(item.get("suppressors", [])),
                promoters=frozenset(item.get("promoters", [])),
                default_category=Role(item["default_category"]),
                switched_category=(
                    Role(item["switched_category"]) if item.get("switched_category") else None
                ),
            )
            for item in config.get("disambiguation", [])
        )
        return cls(categories=categories, rules=rules)

    @classmethod
    def from_file(cls, path: str | Path) -> "AckTaxonomy":
        with open(path, encoding="utf-8") as fh:
            return cls.from_config(json.load(fh))

    @classmethod
    def default(cls) -> "AckTaxonomy":
        data = resources.files("scicredit.data").joinpath("ack_taxonomy.json").read_text("utf-8")
        return cls.from_config(json.loads(data))


@dataclass(frozen=True)
class RoleAssignment:
    doi: str
    person_id: Optional[str]
    given_name: str
    family_name: str
    gender: GenderLabel
    role: Role
    sentence_index: int
    keyword: str

    @property
    def person_key(self) -> str:
        if self.person_id:
            return self.person_id
        return f"name:{self.given_name.casefold()}|{self.family_name.casefold()}"


@dataclass(frozen=True)
class AckDiagnostic:
    kind: str  # "unlocated-name" | "author-precedence"
    doi: str
    detail: str


def _classify(sentence: str, taxonomy: AckTaxonomy) -> dict[Role, str]:
    """Roles triggered by one sentence, each with its earliest keyword."""
    lemmas = set(extract_lemmas(sentence))
    surface = {tok.lower() for tok in tokenize(sentence)}
    hits: dict[Role, str] = {}

    def add(role: Role, keyword: str) -> None:
        if role not in hits or keyword < hits[role]:
            hits[role] = keyword

    for keyword, role in taxonomy.keyword_categories().items():
        if keyword in lemmas:
            add(role, keyword)
    for rule in taxonomy.rules:
        if rule.keyword not in lemmas:
            continue
        if rule.suppressors and rule.suppressors & lemmas:
            continue
        if rule.promoters and rule.promoters & surface and rule.switched_category:
            add(rule.switched_category, rule.keyword)
        else:
            add(rule.default_category, rule.keyword)
    return hits


def classify_sentence(sentence: str, taxonomy: AckTaxonomy | None = None) -> set[Role]:
    """Category set for one sentence after disambiguation."""
    if taxonomy is None:
        taxonomy = AckTaxonomy.default()
    return set(_classify(sentence, taxonomy))


def assign_roles(
    paper: PaperRecord,
    taxonomy: AckTaxonomy | None = None,
    diagnostics: Optional[list[AckDiagnostic]] = None,
) -> list[RoleAssignment]:
    """Attach classified roles to the acknowledgees named in each sentence.

    Acknowledgees who are also authors of the same paper are dropped (each
    contributor must be counted once, and authorship wins); acknowledgees
    never located in any sentence produce a diagnostic instead of
    assignments.
    """
    if taxonomy is None:
        taxonomy = AckTaxonomy.default()
    author_ids = {a.person_id for a in paper.authors if a.person_id}
    author_names = {a.name_key for a in paper.authors}

    candidates: list[AckEntry] = []
    for ack in paper.acknowledgees:
        if (ack.person_id and ack.person_id in author_ids) or ack.name_key in author_names:
            if diagnostics is not None:
                diagnostics.append(
                    AckDiagnostic(
                        "author-precedence",
                        paper.doi,
                        f"{ack.given_name} {ack.family_name}".strip(),
                    )
                )
            continue
        candidates.append(ack)

    assignments: list[RoleAssignment] = []
    seen: set[tuple[str, Role]] = set()
    located: set[int] = set()
    for s_idx, sentence in enumerate(segment_sentences(paper.ack_text)):
        tokens = tokenize(sentence)
        mentioned = [
            (a_idx, ack)
            for a_idx, ack in enumerate(candidates)
            if name_mentioned(tokens, ack.given_name, ack.family_name)
        ]
        if not mentioned:
            continue
        roles = _classify(sentence, taxonomy)
        for a_idx, ack in mentioned:
            located.add(a_idx)
            for role in sorted(roles, key=lambda r: r.value):
                key = (ack.person_key, role)
                if key in seen:
                    continue
                seen.add(key)
                assignments.append(
                    RoleAssignment(
                        doi=paper.doi,
                        person_id=ack.person_id,
                        given_name=ack.given_name,
                        family_name=ack.family_name,
                        gender=ack.gender,
                        role=role,
                        sentence_index=s_idx,
                        keyword=roles[role],
                    )
                )
    if diagnostics is not None:
        for a_idx, ack in enumerate(candidates):
            if a_idx not in located:
                diagnostics.append(
                    AckDiagnostic(
                        "unlocated-name",
                        paper.doi,
                        f"{ack.given_name} {ack.family_name}".strip(),
                    )
                )
    return assignments
