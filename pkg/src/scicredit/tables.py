"""CSV emission with fixed, contract-tested column sets.

Every writer takes already-computed values, renders numbers with
round-trip ``repr`` (p-values at four significant digits plus an asterisk
flag at alpha = 0.05), and sorts rows by natural keys, so identical inputs
always produce identical bytes.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .corpus import CountsSummary
from .metrics import AckCountRow, ArObservation, PairObservation, RoleDistribution
from .stats import TestResult, format_p
from .strata import PairTypeRow, StatusTier

COLUMNS = {
    "ar_paper_level.csv": ["doi", "role", "gender", "authors", "contributors", "ar"],
    "ar_pairs.csv": ["man_id", "woman_id", "role", "n", "j", "k", "man_ar", "woman_ar"],
    "fig2a.csv": ["author_count", "mean_acknowledgees", "ci_low", "ci_high", "n_papers"],
    "fig2b.csv": ["discipline", "gender", "contributors"],
    "fig2c.csv": ["credit_type", "gender", "role", "count", "proportion"],
    "chi_square.csv": ["credit_type", "statistic", "df", "p", "significant"],
    "fig3_paper.csv": ["role", "n_women", "n_men", "rel_diff", "t", "df", "p", "significant"],
    "fig3_collab.csv": ["role", "n_pairs", "rel_diff", "t", "df", "p", "significant"],
    "fig4.csv": [
        "pair_type", "role", "n_pairs", "mean_woman_ar", "mean_men_ar", "rel_diff", "t", "df", "p",
    ],
    "tiers.csv": ["person_id", "gender", "citations", "tier"],
    "tiers_by_discipline.csv": ["person_id", "gender", "discipline", "citations", "tier"],
    "fig3_paper_by_discipline.csv": [
        "discipline", "role", "n_women", "n_men", "rel_diff", "t", "df", "p", "significant",
    ],
    "fig3_collab_by_discipline.csv": [
        "discipline", "role", "n_pairs", "rel_diff", "t", "df", "p", "significant",
    ],
}


def _num(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sig(p: Optional[float]) -> str:
    if p is None:
        return ""
    return "*" if p <= 0.05 else ""


def _write(path: Path, name: str, rows: list[list[str]]) -> None:
    with open(path / name, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS[name])
        writer.writerows(rows)


def write_ar_paper_level(out: Path, observations: Sequence[ArObservation]) -> None:
    rows = [
        [o.doi, o.role.value, o.gender.value, str(o.authors_count),
         str(o.contributors_count), _num(o.ar)]
        for o in sorted(observations, key=lambda o: (o.doi, o.role.value, o.gender.value))
    ]
    _write(out, "ar_paper_level.csv", rows)


def write_ar_pairs(out: Path, pairs: Sequence[PairObservation]) -> None:
    rows = [
        [p.man_id, p.woman_id, p.role.value, str(p.n_shared), str(p.man_author_count),
         str(p.woman_author_count), _num(p.man_ar), _num(p.woman_ar)]
        for p in sorted(pairs, key=lambda p: (p.man_id, p.woman_id, p.role.value))
    ]
    _write(out, "ar_pairs.csv", rows)


def write_fig2a(out: Path, rows_in: Sequence[AckCountRow]) -> None:
    rows = [
        [str(r.author_count), _num(r.mean_acknowledgees), _num(r.ci_low), _num(r.ci_high),
         str(r.n_papers)]
        for r in rows_in
    ]
    _write(out, "fig2a.csv", rows)


def write_fig2b(out: Path, counts: CountsSummary) -> None:
    rows = [
        [disc, gender, str(n)]
        for (disc, gender), n in sorted(counts.contributors_by_discipline.items())
    ]
    _write(out, "fig2b.csv", rows)


def write_fig2c(out: Path, distributions: Sequence[RoleDistribution]) -> None:
    rows = []
    for dist in distributions:
        props = dist.proportions()
        for gender in sorted(props, key=lambda g: g.value):
            for role in dist.roles:
                rows.append(
                    [dist.credit_type, gender.value, role.value,
                     str(dist.counts[gender][role]), _num(props[gender][role])]
                )
    _write(out, "fig2c.csv", rows)


def write_chi_square(out: Path, results: Sequence[tuple[str, Optional[TestResult]]]) -> None:
    rows = []
    for credit_type, result in results:
        if result is None:
            rows.append([credit_type, "", "", "", ""])
        else:
            rows.append(
                [credit_type, _num(result.statistic), _num(result.df),
                 format_p(result.p_value), _sig(result.p_value)]
            )
    _write(out, "chi_square.csv", rows)


def write_fig3_paper(
    out: Path,
    rows_in: Sequence[tuple[str, int, int, Optional[Fraction], Optional[TestResult]]],
    discipline_rows: Optional[Sequence[tuple[str, str, int, int, Optional[Fraction], Optional[TestResult]]]] = None,
) -> None:
    def render(role, n_women, n_men, rel, test):
        return [
            role, str(n_women), str(n_men), _num(rel),
            _num(test.statistic) if test else "",
            _num(test.df) if test else "",
            format_p(test.p_value) if test else "",
            _sig(test.p_value) if test else "",
        ]

    _write(out, "fig3_paper.csv", [render(*row) for row in rows_in])
    if discipline_rows is not None:
        _write(
            out,
            "fig3_paper_by_discipline.csv",
            [[row[0]] + render(*row[1:]) for row in discipline_rows],
        )


def write_fig3_collab(
    out: Path,
    rows_in: Sequence[tuple[str, int, Optional[Fraction], Optional[TestResult]]],
    discipline_rows: Optional[Sequence[tuple[str, str, int, Optional[Fraction], Optional[TestResult]]]] = None,
) -> None:
    def render(role, n_pairs, rel, test):
        return [
            role, str(n_pairs), _num(rel),
            _num(test.statistic) if test else "",
            _num(test.df) if test else "",
            format_p(test.p_value) if test else "",
            _sig(test.p_value) if test else "",
        ]

    _write(out, "fig3_collab.csv", [render(*row) for row in rows_in])
    if discipline_rows is not None:
        _write(
            out,
            "fig3_collab_by_discipline.csv",
            [[row[0]] + render(*row[1:]) for row in discipline_rows],
        )


def write_fig4(out: Path, rows_in: Sequence[PairTypeRow]) -> None:
    rows = []
    for r in rows_in:
        rows.append(
            [
                r.pair_type.value,
                r.role.value,
                str(r.n_pairs),
                _num(r.mean_woman_ar),
                _num(r.mean_man_ar),
                _num(r.rel_diff),
                _num(r.test.statistic) if r.test else "",
                _num(r.test.df) if r.test else "",
                format_p(r.test.p_value) if r.test else "",
            ]
        )
    _write(out, "fig4.csv", rows)


def write_tiers(
    out: Path,
    tiers: dict[str, StatusTier],
    scholars,
    by_discipline: bool = False,
) -> None:
    name = "tiers_by_discipline.csv" if by_discipline else "tiers.csv"
    rows = []
    for person_id in sorted(tiers):
        profile = scholars[person_id]
        row = [person_id, profile.gender.value]
        if by_discipline:
            row.append(profile.disciplines[0] if profile.disciplines else "")
        row.extend([str(profile.total_citations), tiers[person_id].value])
        rows.append(row)
    _write(out, name, rows)
