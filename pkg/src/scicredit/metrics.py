"""Authorship Rate samples and descriptive aggregations.

Authorship Rate for a gender within a role is the fraction of that
gender's contributors (authors plus acknowledgees) who are credited as
authors. Paper-level observations require both genders to contribute to
the role within one paper; collaboration-level observations compare the
two members of an identified man-woman pair across their shared papers.
All rates are exact rationals until they are written out.
"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .ack import AckDiagnostic, AckTaxonomy, assign_roles
from .corpus import Corpus, GenderLabel
from .credit import ACK_ROLES, AUTHORSHIP_ROLES, CreditMapping, Role, author_roles
from .stats import normal_quantile

AUTHOR = "author"
ACKNOWLEDGEE = "acknowledgee"


class MetricsError(Exception):
    pass


class UndefinedRelativeDifferenceError(MetricsError):
    """Relative difference needs a nonzero men's mean."""


@dataclass(frozen=True)
class ContributionEvent:
    doi: str
    person_key: str
    person_id: Optional[str]
    role: Role
    credit_type: str  # AUTHOR or ACKNOWLEDGEE
    gender: GenderLabel


def build_events(
    corpus: Corpus,
    mapping: CreditMapping | None = None,
    taxonomy: AckTaxonomy | None = None,
    diagnostics: Optional[list[AckDiagnostic]] = None,
    workers: int = 1,
) -> list[ContributionEvent]:
    """Normalized union of author categories and acknowledgment assignments.

    One event per (paper, person, role); acknowledgment mentions of a
    paper's own authors were already dropped upstream, so authorship takes
    precedence. Unknown-gender persons keep their events and are filtered
    out later by the gendered samples.
    """
    if mapping is None:
        mapping = CreditMapping.default()
    if taxonomy is None:
        taxonomy = AckTaxonomy.default()

    def classify(paper):
        local: list[AckDiagnostic] = []
        result = assign_roles(paper, taxonomy, local) if paper.ack_text else []
        return result, local

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            classified = list(pool.map(classify, corpus.papers))
    else:
        classified = [classify(paper) for paper in corpus.papers]

    events: list[ContributionEvent] = []
    for paper, (assignments, local_diags) in zip(corpus.papers, classified):
        if diagnostics is not None:
            diagnostics.extend(local_diags)
        seen: set[tuple[str, Role]] = set()
        for author in paper.authors:
            for role in sorted(author_roles(author, mapping), key=lambda r: r.value):
                key = (author.person_key, role)
                if key in seen:
                    continue
                seen.add(key)
                events.append(
                    ContributionEvent(
                        doi=paper.doi,
                        person_key=author.person_key,
                        person_id=author.person_id,
                        role=role,
                        credit_type=AUTHOR,
                        gender=author.gender,
                    )
                )
        for item in assignments:
            key = (item.person_key, item.role)
            if key in seen:
                continue
            seen.add(key)
            events.append(
                ContributionEvent(
                    doi=paper.doi,
                    person_key=item.person_key,
                    person_id=item.person_id,
                    role=item.role,
                    credit_type=ACKNOWLEDGEE,
                    gender=item.gender,
                )
            )
    return events


@dataclass(frozen=True)
class ArObservation:
    doi: str
    role: Role
    gender: GenderLabel
    authors_count: int
    contributors_count: int

    @property
    def ar(self) -> Fraction:
        return Fraction(self.authors_count, self.contributors_count)


@dataclass(frozen=True)
class PaperLevelResult:
    observations: tuple[ArObservation, ...]
    skipped_single_gender: int

    def sample(self, gender: GenderLabel) -> list[Fraction]:
        return [obs.ar for obs in self.observations if obs.gender is gender]


def paper_level_ar(events: Iterable[ContributionEvent], role: Role) -> PaperLevelResult:
    """Per-paper AR for each gender, for papers where both genders
    contribute to the role; single-gender papers are counted and skipped."""
    contributors: dict[str, dict[GenderLabel, set[str]]] = defaultdict(
        lambda: {GenderLabel.WOMAN: set(), GenderLabel.MAN: set()}
    )
    authors: dict[str, dict[GenderLabel, set[str]]] = defaultdict(
        lambda: {GenderLabel.WOMAN: set(), GenderLabel.MAN: set()}
    )
    for event in events:
        if event.role is not role or event.gender is GenderLabel.UNKNOWN:
            continue
        contributors[event.doi][event.gender].add(event.person_key)
        if event.credit_type == AUTHOR:
            authors[event.doi][event.gender].add(event.person_key)
    observations: list[ArObservation] = []
    skipped = 0
    for doi in sorted(contributors):
        women = contributors[doi][GenderLabel.WOMAN]
        men = contributors[doi][GenderLabel.MAN]
        if not women or not men:
            skipped += 1
            continue
        for gender, members in ((GenderLabel.MAN, men), (GenderLabel.WOMAN, women)):
            observations.append(
                ArObservation(
                    doi=doi,
                    role=role,
                    gender=gender,
                    authors_count=len(authors[doi][gender]),
                    contributors_count=len(members),
                )
            )
    return PaperLevelResult(tuple(observations), skipped)


@dataclass(frozen=True)
class PairObservation:
    man_id: str
    woman_id: str
    role: Role
    n_shared: int
    man_author_count: int
    woman_author_count: int

    @property
    def man_ar(self) -> Fraction:
        return Fraction(self.man_author_count, self.n_shared)

    @property
    def woman_ar(self) -> Fraction:
        return Fraction(self.woman_author_count, self.n_shared)


def collaboration_ar(
    events: Iterable[ContributionEvent], role: Role, min_shared: int = 1
) -> list[PairObservation]:
    """AR per identified man-woman pair across their shared-role papers.

    A paper is shared when both members contributed to the role on it
    through either credit type; the author counts tally the shared papers
    where each member's role contribution was authorship. Persons without
    an identifier never enter a pair.
    """
    per_paper: dict[str, dict[GenderLabel, dict[str, bool]]] = defaultdict(
        lambda: {GenderLabel.WOMAN: {}, GenderLabel.MAN: {}}
    )
    for event in events:
        if event.role is not role or event.person_id is None:
            continue
        if event.gender is GenderLabel.UNKNOWN:
            continue
        per_paper[event.doi][event.gender][event.person_id] = event.credit_type == AUTHOR
    tallies: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0, 0])
    for doi in sorted(per_paper):
        men = per_paper[doi][GenderLabel.MAN]
        women = per_paper[doi][GenderLabel.WOMAN]
        for man_id, man_is_author in men.items():
            for woman_id, woman_is_author in women.items():
                tally = tallies[(man_id, woman_id)]
                tally[0] += 1
                tally[1] += int(man_is_author)
                tally[2] += int(woman_is_author)
    observations = []
    for (man_id, woman_id), (n, j, k) in sorted(tallies.items()):
        if n < min_shared:
            continue
        observations.append(
            PairObservation(
                man_id=man_id,
                woman_id=woman_id,
                role=role,
                n_shared=n,
                man_author_count=j,
                woman_author_count=k,
            )
        )
    return observations


def relative_difference(women_ars: Sequence, men_ars: Sequence):
    """(mean(women) - mean(men)) / mean(men); exact with rational inputs."""
    if not women_ars or not men_ars:
        raise MetricsError("relative difference needs non-empty samples")
    mean_women = sum(women_ars) / len(women_ars)
    mean_men = sum(men_ars) / len(men_ars)
    if mean_men == 0:
        raise UndefinedRelativeDifferenceError("men's mean AR is zero")
    return (mean_women - mean_men) / mean_men


@dataclass(frozen=True)
class AckCountRow:
    author_count: int
    mean_acknowledgees: Fraction
    ci_low: Optional[float]
    ci_high: Optional[float]
    n_papers: int


def ack_by_author_count(corpus: Corpus, level: float = 0.95) -> list[AckCountRow]:
    """Mean acknowledgee count per author-count bucket with a
    normal-approximation confidence interval; all acknowledged names count,
    identified or not."""
    buckets: dict[int, list[int]] = defaultdict(list)
    for paper in corpus.papers:
        buckets[len(paper.authors)].append(len(paper.acknowledgees))
    z = normal_quantile(0.5 + level / 2.0)
    rows = []
    for author_count in sorted(buckets):
        counts = buckets[author_count]
        n = len(counts)
        mean = Fraction(sum(counts), n)
        if n >= 2:
            var = Fraction(sum((c - mean) ** 2 for c in counts), n - 1)
            half = z * math.sqrt(float(var)) / math.sqrt(n)
            ci = (float(mean) - half, float(mean) + half)
        else:
            ci = (None, None)
        rows.append(AckCountRow(author_count, mean, ci[0], ci[1], n))
    return rows


@dataclass(frozen=True)
class RoleDistribution:
    credit_type: str
    counts: Mapping[GenderLabel, Mapping[Role, int]]
    roles: tuple[Role, ...]

    def proportions(self) -> dict[GenderLabel, dict[Role, Fraction]]:
        out: dict[GenderLabel, dict[Role, Fraction]] = {}
        for gender, by_role in self.counts.items():
            total = sum(by_role.values())
            if total == 0:
                continue
            out[gender] = {role: Fraction(by_role[role], total) for role in self.roles}
        return out

    def contingency_table(self) -> tuple[list[list[int]], list[GenderLabel], list[Role]]:
        """Gender x role counts with all-zero columns dropped."""
        genders = [g for g in (GenderLabel.WOMAN, GenderLabel.MAN) if g in self.counts]
        cols = [
            role
            for role in self.roles
            if any(self.counts[g][role] > 0 for g in genders)
        ]
        table = [[self.counts[g][role] for role in cols] for g in genders]
        return table, genders, cols


def role_proportions(events: Iterable[ContributionEvent], credit_type: str) -> RoleDistribution:
    """Per-gender role counts for one credit route (author or acknowledgee)."""
    roles = AUTHORSHIP_ROLES if credit_type == AUTHOR else ACK_ROLES
    counts: dict[GenderLabel, dict[Role, int]] = {
        GenderLabel.WOMAN: {role: 0 for role in roles},
        GenderLabel.MAN: {role: 0 for role in roles},
    }
    for event in events:
        if event.credit_type != credit_type or event.gender is GenderLabel.UNKNOWN:
            continue
        counts[event.gender][event.role] += 1
    return RoleDistribution(credit_type=credit_type, counts=counts, roles=roles)


def mean_or_none(values: Sequence) -> Optional[float]:
    if not values:
        return None
    return float(statistics.mean([Fraction(v) for v in values]))
