"""Synthetic corpora with planted effects for pipeline validation.

The generative model, per paper: one "anchor" author carrying only
authorship-specific categories (funding/administration/conceptualization)
guarantees a non-empty byline without touching the shared roles; a roster
of contributors each draws one shared role and is realized as author with
probability ``base_author_prob`` plus the planted gender gap (added for
men) and status boost (added for high-tier scholars), clipped to
[0.01, 0.99]; realized acknowledgees get one unambiguous template sentence,
so the classifier recovers every planted assignment exactly. Extra
peer-communication acknowledgees are appended from ``ack_count_dist``.

Randomness comes from counter-based Philox streams keyed by (seed, paper
index), so any parallel split over papers reproduces the sequential output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .corpus import (
    AckEntry,
    AuthorEntry,
    Corpus,
    GenderLabel,
    LoadReport,
    PaperRecord,
    Provenance,
    ScholarProfile,
)
from .credit import Role, SHARED_ROLES
from .strata import StatusTier, stratify


class SynthConfigError(Exception):
    pass


@dataclass(frozen=True)
class IntDist:
    """Bounded integer distribution ("uniform" over [low, high] or "fixed")."""

    kind: str = "uniform"
    low: int = 1
    high: int = 1

    def validate(self, name: str) -> None:
        if self.kind not in ("uniform", "fixed"):
            raise SynthConfigError(f"{name}: unknown kind {self.kind!r}")
        if self.low < 0 or self.high < self.low:
            raise SynthConfigError(f"{name}: bad bounds [{self.low}, {self.high}]")

    def draw(self, rng: np.random.Generator) -> int:
        if self.kind == "fixed":
            return self.low
        return int(rng.integers(self.low, self.high + 1))

    @property
    def max(self) -> int:
        return self.low if self.kind == "fixed" else self.high


@dataclass(frozen=True)
class CitationDist:
    """Long-tail citation counts; "pareto" (Lomax) by default."""

    kind: str = "pareto"
    alpha: float = 1.3
    scale: float = 200.0
    low: int = 0
    high: int = 1000

    def validate(self) -> None:
        if self.kind not in ("pareto", "uniform"):
            raise SynthConfigError(f"citation_dist: unknown kind {self.kind!r}")
        if self.kind == "pareto" and (self.alpha <= 0 or self.scale <= 0):
            raise SynthConfigError("citation_dist: alpha and scale must be positive")

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            return rng.integers(self.low, self.high + 1, size=size)
        u = rng.random(size)
        return (self.scale * ((1.0 - u) ** (-1.0 / self.alpha) - 1.0)).astype(np.int64)


_DEFAULT_ROLE_PROBS = {
    Role.INVESTIGATION_ANALYSIS.value: 0.6,
    Role.MATERIAL_RESOURCES.value: 0.2,
    Role.WRITING.value: 0.2,
}

_DEFAULT_DISCIPLINES = ("medicine", "biology", "computer science")


@dataclass(frozen=True)
class SynthConfig:
    n_papers: int = 1000
    seed: int = 0
    gender_ratio: float = 0.5
    role_probs: Mapping[str, float] = field(default_factory=lambda: dict(_DEFAULT_ROLE_PROBS))
    base_author_prob: float = 0.7
    gender_gap: Mapping[str, float] = field(default_factory=dict)
    status_effect: float = 0.0
    team_size_dist: IntDist = IntDist("uniform", 2, 6)
    ack_count_dist: IntDist = IntDist("uniform", 0, 3)
    scholar_pool_size: int = 400
    citation_dist: CitationDist = CitationDist()
    disciplines: tuple[str, ...] = _DEFAULT_DISCIPLINES
    funding_sentence_prob: float = 0.3

    def validate(self) -> None:
        if self.n_papers <= 0:
            raise SynthConfigError("n_papers must be positive")
        if not 0.0 <= self.gender_ratio <= 1.0:
            raise SynthConfigError("gender_ratio must be in [0, 1]")
        if not 0.0 < self.base_author_prob < 1.0:
            raise SynthConfigError("base_author_prob must be in (0, 1)")
        total = sum(self.role_probs.values())
        if abs(total - 1.0) > 1e-9 or any(p < 0 for p in self.role_probs.values()):
            raise SynthConfigError("role_probs must be a distribution")
        for name in self.role_probs:
            if Role(name) not in SHARED_ROLES:
                raise SynthConfigError(f"role_probs: {name} is not a shared role")
        self.team_size_dist.validate("team_size_dist")
        if self.team_size_dist.low < 1:
            raise SynthConfigError("team_size_dist: team size must be >= 1")
        self.ack_count_dist.validate("ack_count_dist")
        self.citation_dist.validate()
        needed = self.team_size_dist.max + self.ack_count_dist.max + 1
        if self.scholar_pool_size < needed:
            raise SynthConfigError(
                f"scholar_pool_size {self.scholar_pool_size} < max roster {needed}"
            )
        if not self.disciplines:
            raise SynthConfigError("disciplines must be non-empty")

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        kwargs = dict(data)
        for key in ("team_size_dist", "ack_count_dist"):
            if key in kwargs and isinstance(kwargs[key], dict):
                kwargs[key] = IntDist(**kwargs[key])
        if isinstance(kwargs.get("citation_dist"), dict):
            kwargs["citation_dist"] = CitationDist(**kwargs["citation_dist"])
        if "disciplines" in kwargs:
            kwargs["disciplines"] = tuple(kwargs["disciplines"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# Sentence templates whose classification is exactly the keyed role.
ACK_TEMPLATES: dict[Role, tuple[str, ...]] = {
    Role.INVESTIGATION_ANALYSIS: (
        "We thank {name} for assistance with the experiments.",
        "We thank {name} for help with the measurements.",
        "We thank {name} for the statistical analysis.",
    ),
    Role.MATERIAL_RESOURCES: (
        "We thank {name} for providing data.",
        "We thank {name} for access to the instruments.",
    ),
    Role.WRITING: (
        "We thank {name} for writing support.",
        "We are grateful to {name} for writing suggestions.",
    ),
    Role.PEER_COMMUNICATION: (
        "We thank {name} for helpful discussion.",
        "We thank {name} for critical review of the manuscript.",
    ),
}

# Ambiguity stress variants for classifier unit tests only; generate()
# never uses these.
ADVERSARIAL_TEMPLATES: tuple[tuple[str, frozenset[Role]], ...] = (
    ("We thank {name} for help with this work, which was funded by grant 123.",
     frozenset({Role.INVESTIGATION_ANALYSIS})),
    ("We thank {name} for the sequence data from the database.",
     frozenset({Role.MATERIAL_RESOURCES})),
    ("We thank {name} for data analysis.", frozenset({Role.INVESTIGATION_ANALYSIS})),
    ("This work was supported by a grant; we also thank {name}.", frozenset()),
)

_FUNDING_SENTENCE = "This study was supported by grant {number} from the national science foundation."

_ANCHOR_CREDITS = (
    "funding acquisition",
    "project administration",
    "supervision",
    "conceptualization",
)

_AUTHOR_CREDITS: dict[Role, tuple[str, ...]] = {
    Role.INVESTIGATION_ANALYSIS: (
        "investigation",
        "formal analysis",
        "data curation",
        "methodology",
        "software",
    ),
    Role.MATERIAL_RESOURCES: ("resources",),
    Role.WRITING: (
        "writing – original draft preparation",
        "writing – review & editing",
    ),
}

_WOMEN_GIVEN = (
    "Alice", "Beatriz", "Carla", "Diana", "Elena", "Fatima", "Grace", "Hana",
    "Ingrid", "Julia", "Keiko", "Laura", "Mei", "Nadia", "Olga", "Priya",
    "Qiana", "Rosa", "Sofia", "Tara",
)
_MEN_GIVEN = (
    "Arjun", "Boris", "Carlos", "David", "Emil", "Felix", "Giorgio", "Hiro",
    "Ivan", "Jorge", "Kofi", "Lukas", "Marco", "Nikolai", "Omar", "Pedro",
    "Quentin", "Rafael", "Stefan", "Tomas",
)


def _letters(index: int) -> str:
    out = ""
    index += 1
    while index > 0:
        index, rem = divmod(index - 1, 26)
        out = chr(ord("a") + rem) + out
    return out


@dataclass(frozen=True)
class PlantedEvent:
    doi: str
    person_id: str
    role: Role
    credit_type: str  # "author" | "acknowledgee"


@dataclass(frozen=True)
class GroundTruth:
    """What the generator actually planted; the analysis never reads this."""

    seed: int
    base_author_prob: float
    gender_gap: Mapping[str, float]
    status_effect: float
    role_probs: Mapping[str, float]
    scholar_author_probs: Mapping[str, Mapping[str, float]]
    tiers: Mapping[str, str]
    planted: tuple[PlantedEvent, ...]

    def pair_prob(self, man_id: str, woman_id: str, role: Role) -> tuple[float, float]:
        return (
            self.scholar_author_probs[man_id][role.value],
            self.scholar_author_probs[woman_id][role.value],
        )

    def expected_rel_diff(self, role: Role) -> float:
        """Closed-form paper-level expectation: per-paper AR means equal the
        authorship probabilities, so the relative difference is
        (p_woman - p_man) / p_man for middle-tier members."""
        base = self.base_author_prob
        p_man = _clip(base + self.gender_gap.get(role.value, 0.0))
        p_woman = _clip(base)
        return (p_woman - p_man) / p_man

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "base_author_prob": self.base_author_prob,
            "gender_gap": dict(self.gender_gap),
            "status_effect": self.status_effect,
            "role_probs": dict(self.role_probs),
            "scholar_author_probs": {k: dict(v) for k, v in self.scholar_author_probs.items()},
            "tiers": dict(self.tiers),
            "planted": [
                {
                    "doi": e.doi,
                    "person_id": e.person_id,
                    "role": e.role.value,
                    "credit_type": e.credit_type,
                }
                for e in self.planted
            ],
        }

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def _clip(p: float) -> float:
    return min(0.99, max(0.01, p))


def _stream(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream]))


def _sample_distinct(rng: np.random.Generator, n: int, k: int) -> list[int]:
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < k:
        for idx in rng.integers(0, n, size=k - len(chosen)):
            value = int(idx)
            if value not in seen:
                seen.add(value)
                chosen.append(value)
    return chosen


def template_ack_sentence(name: str, role: Role, variant: int = 0) -> str:
    """One unambiguous acknowledgment sentence classifying to exactly ``role``."""
    templates = ACK_TEMPLATES[role]
    return templates[variant % len(templates)].format(name=name)


def _build_pool(config: SynthConfig) -> tuple[list[ScholarProfile], list[str], list[str]]:
    rng = _stream(config.seed, 0)
    genders = [
        GenderLabel.WOMAN if u < config.gender_ratio else GenderLabel.MAN
        for u in rng.random(config.scholar_pool_size)
    ]
    citations = config.citation_dist.draw(rng, config.scholar_pool_size)
    disc_idx = rng.integers(0, len(config.disciplines), size=config.scholar_pool_size)
    profiles = []
    given_names = []
    family_names = []
    for i in range(config.scholar_pool_size):
        gender = genders[i]
        pool = _WOMEN_GIVEN if gender is GenderLabel.WOMAN else _MEN_GIVEN
        given = pool[int(rng.integers(0, len(pool)))]
        family = "F" + _letters(i).capitalize()
        given_names.append(given)
        family_names.append(family)
        profiles.append(
            ScholarProfile(
                person_id=f"S{i:06d}",
                total_citations=int(citations[i]),
                gender=gender,
                disciplines=(config.disciplines[int(disc_idx[i])],),
            )
        )
    return profiles, given_names, family_names


def generate(config: SynthConfig) -> tuple[Corpus, GroundTruth]:
    """Deterministically generate a corpus and its ground truth."""
    config.validate()
    profiles, given_names, family_names = _build_pool(config)
    tiers = stratify(profiles, q=Fraction(1, 10), group_by=("gender",))

    roles = [Role(name) for name in sorted(config.role_probs)]
    role_cum = np.cumsum([config.role_probs[r.value] for r in roles])

    scholar_probs: dict[str, dict[str, float]] = {}
    for profile in profiles:
        p_by_role = {}
        for role in SHARED_ROLES:
            p = config.base_author_prob
            if profile.gender is GenderLabel.MAN:
                p += config.gender_gap.get(role.value, 0.0)
            if tiers.get(profile.person_id) is StatusTier.HIGH:
                p += config.status_effect
            p_by_role[role.value] = _clip(p)
        scholar_probs[profile.person_id] = p_by_role

    papers: list[PaperRecord] = []
    planted: list[PlantedEvent] = []
    for paper_idx in range(config.n_papers):
        rng = _stream(config.seed, paper_idx + 1)
        doi = f"10.9999/synth.{config.seed}.{paper_idx:06d}"
        team_size = config.team_size_dist.draw(rng)
        ack_count = config.ack_count_dist.draw(rng)
        members = _sample_distinct(rng, config.scholar_pool_size, team_size + ack_count + 1)
        anchor, roster, peer_acks = members[0], members[1:1 + team_size], members[1 + team_size:]

        n_credits = 1 + int(rng.integers(0, 2))
        start = int(rng.integers(0, len(_ANCHOR_CREDITS)))
        anchor_credits = tuple(
            _ANCHOR_CREDITS[(start + j) % len(_ANCHOR_CREDITS)] for j in range(n_credits)
        )
        authors = [
            AuthorEntry(
                given_name=given_names[anchor],
                family_name=family_names[anchor],
                credit_roles=anchor_credits,
                gender=profiles[anchor].gender,
                person_id=profiles[anchor].person_id,
            )
        ]
        sentences: list[str] = []
        acknowledgees: list[AckEntry] = []

        for idx in roster:
            profile = profiles[idx]
            u_role = rng.random()
            role = roles[int(np.searchsorted(role_cum, u_role, side="right"))]
            p_author = scholar_probs[profile.person_id][role.value]
            if rng.random() < p_author:
                credit_pool = _AUTHOR_CREDITS[role]
                n_roles = 1 + int(rng.integers(0, 2))
                start = int(rng.integers(0, len(credit_pool)))
                credits = tuple(
                    credit_pool[(start + j) % len(credit_pool)]
                    for j in range(min(n_roles, len(credit_pool)))
                )
                authors.append(
                    AuthorEntry(
                        given_name=given_names[idx],
                        family_name=family_names[idx],
                        credit_roles=credits,
                        gender=profile.gender,
                        person_id=profile.person_id,
                    )
                )
                planted.append(PlantedEvent(doi, profile.person_id, role, "author"))
            else:
                name = f"{given_names[idx]} {family_names[idx]}"
                variant = int(rng.integers(0, len(ACK_TEMPLATES[role])))
                sentences.append(template_ack_sentence(name, role, variant))
                acknowledgees.append(
                    AckEntry(
                        given_name=given_names[idx],
                        family_name=family_names[idx],
                        gender=profile.gender,
                        person_id=profile.person_id,
                    )
                )
                planted.append(PlantedEvent(doi, profile.person_id, role, "acknowledgee"))
        for idx in peer_acks:
            profile = profiles[idx]
            name = f"{given_names[idx]} {family_names[idx]}"
            variant = int(rng.integers(0, len(ACK_TEMPLATES[Role.PEER_COMMUNICATION])))
            sentences.append(template_ack_sentence(name, Role.PEER_COMMUNICATION, variant))
            acknowledgees.append(
                AckEntry(
                    given_name=given_names[idx],
                    family_name=family_names[idx],
                    gender=profile.gender,
                    person_id=profile.person_id,
                )
            )
            planted.append(
                PlantedEvent(doi, profile.person_id, Role.PEER_COMMUNICATION, "acknowledgee")
            )
        if rng.random() < config.funding_sentence_prob:
            sentences.append(_FUNDING_SENTENCE.format(number=int(rng.integers(10000, 99999))))
        papers.append(
            PaperRecord(
                doi=doi,
                year=2016 + paper_idx % 6,
                disciplines=(config.disciplines[int(rng.integers(0, len(config.disciplines)))],),
                authors=tuple(authors),
                acknowledgees=tuple(acknowledgees),
                ack_text=" ".join(sentences),
            )
        )

    corpus = Corpus(
        papers=tuple(papers),
        scholars={p.person_id: p for p in profiles},
        provenance=Provenance(
            papers_path=f"synth:seed={config.seed}", scholars_path=None, loaded_at=""
        ),
        load_report=LoadReport(),
    )
    truth = GroundTruth(
        seed=config.seed,
        base_author_prob=config.base_author_prob,
        gender_gap=dict(config.gender_gap),
        status_effect=config.status_effect,
        role_probs=dict(config.role_probs),
        scholar_author_probs=scholar_probs,
        tiers={pid: tier.value for pid, tier in tiers.items()},
        planted=tuple(planted),
    )
    return corpus, truth
