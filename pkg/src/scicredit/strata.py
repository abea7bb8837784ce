"""Citation-based status tiers and status-pair analysis.

Tiers are nearest-rank percentile cuts computed independently within each
stratification group (gender, optionally gender x primary discipline):
"high" above the (1-q) percentile value, "less" below the value one rank
above the q percentile, everyone else "middle". Scholars tied with the
cutoff value land on the middle side, so a group with all-equal citation
counts has no extremes.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import Corpus, GenderLabel, ScholarProfile
from .credit import Role
from .metrics import PairObservation, relative_difference
from .stats import DegenerateVarianceError, StatsError, TestResult, t_test_paired


class StatusTier(Enum):
    HIGH = "high"
    MIDDLE = "middle"
    LESS = "less"


class PairType(Enum):
    HIGH_MAN_HIGH_WOMAN = "high_man_high_woman"
    HIGH_MAN_LESS_WOMAN = "high_man_less_woman"
    LESS_MAN_HIGH_WOMAN = "less_man_high_woman"
    LESS_MAN_LESS_WOMAN = "less_man_less_woman"


_PAIR_TYPES = {
    (StatusTier.HIGH, StatusTier.HIGH): PairType.HIGH_MAN_HIGH_WOMAN,
    (StatusTier.HIGH, StatusTier.LESS): PairType.HIGH_MAN_LESS_WOMAN,
    (StatusTier.LESS, StatusTier.HIGH): PairType.LESS_MAN_HIGH_WOMAN,
    (StatusTier.LESS, StatusTier.LESS): PairType.LESS_MAN_LESS_WOMAN,
}


def eligible_scholars(corpus: Corpus) -> set[str]:
    """IDs that appear at least once as author and once as acknowledgee."""
    as_author: set[str] = set()
    as_ack: set[str] = set()
    for paper in corpus.papers:
        for author in paper.authors:
            if author.person_id:
                as_author.add(author.person_id)
        for ack in paper.acknowledgees:
            if ack.person_id:
                as_ack.add(ack.person_id)
    return as_author & as_ack


def _group_key(profile: ScholarProfile, by_discipline: bool):
    if by_discipline:
        primary = profile.disciplines[0] if profile.disciplines else ""
        return (profile.gender, primary)
    return (profile.gender,)


def stratify(
    scholars: Iterable[ScholarProfile],
    q: float | Fraction = Fraction(1, 10),
    group_by: Sequence[str] = ("gender",),
    warnings: Optional[list[str]] = None,
) -> dict[str, StatusTier]:
    """Assign a tier to every scholar whose group is large enough.

    Thresholds are computed per group, so one gender's counts never move
    another's cutoffs. Groups smaller than ceil(1/q) are skipped with a
    warning. Unknown-gender scholars are not tiered.
    """
    q = Fraction(str(q)) if not isinstance(q, Fraction) else q
    if not 0 < q < Fraction(1, 2):
        raise ValueError("q must be in (0, 0.5)")
    by_discipline = "discipline" in group_by
    groups: dict[tuple, list[ScholarProfile]] = defaultdict(list)
    for profile in scholars:
        if profile.gender is GenderLabel.UNKNOWN:
            continue
        groups[_group_key(profile, by_discipline)].append(profile)
    tiers: dict[str, StatusTier] = {}
    min_size = math.ceil(1 / q)
    for key in sorted(groups, key=str):
        members = groups[key]
        m = len(members)
        if m < min_size:
            if warnings is not None:
                warnings.append(f"group {key} has {m} scholars (< {min_size}); skipped")
            continue
        citations = sorted(p.total_citations for p in members)
        high_cut = citations[math.ceil((1 - q) * m) - 1]
        less_cut = citations[math.ceil(q * m)]
        for profile in members:
            if profile.total_citations > high_cut:
                tier = StatusTier.HIGH
            elif profile.total_citations < less_cut:
                tier = StatusTier.LESS
            else:
                tier = StatusTier.MIDDLE
            tiers[profile.person_id] = tier
    return tiers


def classify_pairs(
    pairs: Iterable[PairObservation], tiers: Mapping[str, StatusTier]
) -> dict[tuple[str, str], PairType]:
    """Pair type per (man, woman) when both members are tiered high or less."""
    out: dict[tuple[str, str], PairType] = {}
    for pair in pairs:
        key = (pair.man_id, pair.woman_id)
        if key in out:
            continue
        man_tier = tiers.get(pair.man_id)
        woman_tier = tiers.get(pair.woman_id)
        if man_tier is None or woman_tier is None:
            continue
        pair_type = _PAIR_TYPES.get((man_tier, woman_tier))
        if pair_type is not None:
            out[key] = pair_type
    return out


@dataclass(frozen=True)
class PairTypeRow:
    pair_type: PairType
    role: Role
    n_pairs: int
    mean_woman_ar: Optional[Fraction]
    mean_man_ar: Optional[Fraction]
    rel_diff: Optional[Fraction]
    test: Optional[TestResult]


def ar_by_pair_type(
    pairs: Sequence[PairObservation],
    tiers: Mapping[str, StatusTier],
    role: Role,
) -> list[PairTypeRow]:
    """Paired AR comparison per status pair type for one role.

    Always emits one row per pair type; types with fewer than two pairs or
    a degenerate paired sample carry no test result.
    """
    typed = classify_pairs(pairs, tiers)
    grouped: dict[PairType, list[PairObservation]] = defaultdict(list)
    for pair in pairs:
        if pair.role is not role:
            continue
        pair_type = typed.get((pair.man_id, pair.woman_id))
        if pair_type is not None:
            grouped[pair_type].append(pair)
    rows = []
    for pair_type in PairType:
        members = grouped.get(pair_type, [])
        n = len(members)
        if n == 0:
            rows.append(PairTypeRow(pair_type, role, 0, None, None, None, None))
            continue
        woman_ars = [p.woman_ar for p in members]
        man_ars = [p.man_ar for p in members]
        mean_woman = sum(woman_ars) / n
        mean_man = sum(man_ars) / n
        rel = (mean_woman - mean_man) / mean_man if mean_man != 0 else None
        test = None
        if n >= 2:
            try:
                test = t_test_paired([(float(w), float(m)) for w, m in zip(woman_ars, man_ars)])
            except (DegenerateVarianceError, StatsError):
                test = None
        rows.append(PairTypeRow(pair_type, role, n, mean_woman, mean_man, rel, test))
    return rows
