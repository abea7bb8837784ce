"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Tolerances and runtime budgets are asserted inside the tests.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from scicredit.ack import assign_roles, classify_sentence
from scicredit.cli import main
from scicredit.corpus import GenderLabel, load_corpus
from scicredit.credit import CreditMapping, Role, author_roles, map_credit
from scicredit.metrics import (
    ack_by_author_count,
    build_events,
    collaboration_ar,
    paper_level_ar,
    relative_difference,
    role_proportions,
)
from scicredit.stats import (
    chi_square_tail,
    normal_quantile,
    t_tail_two_sided,
    t_test_independent,
)
from scicredit.strata import PairType, ar_by_pair_type, eligible_scholars, stratify
from scicredit.synth import SynthConfig, generate

from conftest import ack, author, paper_dict, write_jsonl
from golden_sentences import GOLDEN
from oracles import (
    naive_ack_by_author_count,
    naive_collaboration,
    naive_paper_level,
    naive_role_proportions,
    naive_stratify,
    perm_pvalue_independent,
    perm_pvalue_paired,
)
from test_stats import (
    PAIRED_FIXTURES,
    PAIRED_FIXTURES_TINY,
    PERM_FIXTURES,
    PERM_FIXTURES_TINY,
    chi2_tail_by_quadrature,
    t_density,
)

IA = Role.INVESTIGATION_ANALYSIS
MR = Role.MATERIAL_RESOURCES


def _report(n, text):
    print(f"\nPASS criterion {n}: {text}")


def test_criterion_1_fig1_worked_examples(tmp_path):
    started = time.perf_counter()
    # paper-level scenario: one man author + one man acknowledgee,
    # one woman author + two women acknowledgees, all on I&A
    paper_a = paper_dict(
        "10.9/a",
        [
            author("Marco", "Fab", ["investigation"], "man", "M1"),
            author("Alice", "Fac", ["formal analysis"], "woman", "W1"),
        ],
        [
            ack("Boris", "Fad", "man", "M2"),
            ack("Carla", "Fae", "woman", "W2"),
            ack("Diana", "Faf", "woman", "W3"),
        ],
        ack_text=(
            "We thank Boris Fad for help with the experiments. "
            "We thank Carla Fae for the statistical analysis. "
            "We thank Diana Faf for assistance with the measurements."
        ),
    )
    corpus = load_corpus(write_jsonl(tmp_path / "fig1a.jsonl", [paper_a]))
    events = build_events(corpus)
    result = paper_level_ar(events, IA)
    ars = {obs.gender: obs.ar for obs in result.observations}
    assert ars[GenderLabel.MAN] == Fraction(1, 2)
    assert ars[GenderLabel.WOMAN] == Fraction(1, 3)

    # collaboration scenario: three shared I&A papers, man author in two,
    # woman in one
    papers_b = [
        paper_dict(
            "10.9/b1",
            [
                author("Marco", "Fab", ["investigation"], "man", "M1"),
                author("Alice", "Fac", ["data curation"], "woman", "W1"),
            ],
        ),
        paper_dict(
            "10.9/b2",
            [author("Marco", "Fab", ["methodology"], "man", "M1")],
            [ack("Alice", "Fac", "woman", "W1")],
            ack_text="We thank Alice Fac for the statistical analysis.",
        ),
        paper_dict(
            "10.9/b3",
            [author("Elena", "Fag", ["funding acquisition"], "woman", "A9")],
            [ack("Marco", "Fab", "man", "M1"), ack("Alice", "Fac", "woman", "W1")],
            ack_text=(
                "We thank Marco Fab for help with the experiments. "
                "We thank Alice Fac for sample collection."
            ),
        ),
    ]
    corpus_b = load_corpus(write_jsonl(tmp_path / "fig1b.jsonl", papers_b))
    pairs = collaboration_ar(build_events(corpus_b), IA)
    assert len(pairs) == 1
    pair = pairs[0]
    assert (pair.man_id, pair.woman_id) == ("M1", "W1")
    assert pair.man_ar == Fraction(2, 3)
    assert pair.woman_ar == Fraction(1, 3)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report(1, f"worked examples exact (man 1/2, woman 1/3; pair 2/3, 1/3) in {elapsed:.2f}s")


def test_criterion_2_classifier_golden_suite():
    started = time.perf_counter()
    assert len(GOLDEN) >= 40
    mistakes = [
        (sentence, expected, {r.value for r in classify_sentence(sentence)})
        for sentence, expected in GOLDEN
        if {r.value for r in classify_sentence(sentence)} != expected
    ]
    assert mistakes == []
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report(2, f"{len(GOLDEN)} golden sentences, 100% agreement in {elapsed:.2f}s")


def test_criterion_3_credit_mapping_totality():
    mapping = CreditMapping.default()
    expected = {
        "co-investigator": Role.INVESTIGATION_ANALYSIS,
        "data curation": Role.INVESTIGATION_ANALYSIS,
        "formal analysis": Role.INVESTIGATION_ANALYSIS,
        "investigation": Role.INVESTIGATION_ANALYSIS,
        "principal investigators": Role.INVESTIGATION_ANALYSIS,
        "research assistants": Role.INVESTIGATION_ANALYSIS,
        "software": Role.INVESTIGATION_ANALYSIS,
        "methodology": Role.INVESTIGATION_ANALYSIS,
        "validation": Role.INVESTIGATION_ANALYSIS,
        "visualization": Role.INVESTIGATION_ANALYSIS,
        "resources": Role.MATERIAL_RESOURCES,
        "writing – original draft preparation": Role.WRITING,
        "writing – review & editing": Role.WRITING,
        "funding acquisition": Role.FUNDING,
        "project administration": Role.ADMINISTRATION,
        "supervision": Role.ADMINISTRATION,
        "conceptualization": Role.CONCEPTUALIZATION,
    }
    for raw, role in expected.items():
        assert map_credit(raw, mapping) is role, raw
    assert len(mapping.table) == len(expected)  # total over the vocabulary

    from scicredit.corpus import AuthorEntry

    worked = AuthorEntry(
        given_name="A",
        family_name="B",
        credit_roles=("writing – original draft preparation", "data curation"),
    )
    assert author_roles(worked, mapping) == {Role.WRITING, Role.INVESTIGATION_ANALYSIS}
    _report(3, f"all {len(expected)} role strings map to their stated categories")


def test_criterion_4_statistics_correctness():
    started = time.perf_counter()
    # tail accuracy versus direct numerical integration of the densities
    for df in (1, 2, 5, 30, 1000, 10**6):
        for t in (0.3, 1.0, 2.5, 5.0):
            expected, _ = integrate.quad(
                t_density, t, math.inf, args=(df,), epsabs=1e-13, epsrel=1e-13, limit=800
            )
            assert t_tail_two_sided(t, df) / 2 == pytest.approx(expected, abs=1e-9)
        for frac in (0.4, 1.0, 1.8):
            x = df * frac
            assert chi_square_tail(x, df) == pytest.approx(
                chi2_tail_by_quadrature(x, df), abs=1e-9
            )

    # identical samples
    result = t_test_independent([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert (result.statistic, result.p_value) == (0.0, 1.0)

    # permutation-oracle order agreement on every bundled fixture
    rows = []
    for xs, ys in PERM_FIXTURES + PERM_FIXTURES_TINY:
        rows.append(
            (t_test_independent(list(xs), list(ys)).p_value,
             perm_pvalue_independent(list(xs), list(ys)))
        )
    for i in range(len(rows)):
        for j in range(len(rows)):
            para, perm = rows[i][0] - rows[j][0], rows[i][1] - rows[j][1]
            if abs(para) > 1e-9 and abs(perm) > 1e-9:
                assert (para > 0) == (perm > 0)
    for xs, ys in PERM_FIXTURES:
        assert t_test_independent(list(xs), list(ys)).p_value == pytest.approx(
            perm_pvalue_independent(list(xs), list(ys)), abs=0.1
        )
    from scicredit.stats import t_test_paired

    paired_rows = []
    for pairs in PAIRED_FIXTURES + PAIRED_FIXTURES_TINY:
        paired_rows.append(
            (t_test_paired([(float(x), float(y)) for x, y in pairs]).p_value,
             perm_pvalue_paired(pairs))
        )
    for i in range(len(paired_rows)):
        for j in range(len(paired_rows)):
            para = paired_rows[i][0] - paired_rows[j][0]
            perm = paired_rows[i][1] - paired_rows[j][1]
            if abs(para) > 1e-9 and abs(perm) > 1e-9:
                assert (para > 0) == (perm > 0)

    # null simulation: rejection rate near the nominal level
    rng = np.random.default_rng(20240817)
    trials = 2000
    rejections = 0
    for _ in range(trials):
        xs = rng.normal(size=20).tolist()
        ys = rng.normal(size=20).tolist()
        if t_test_independent(xs, ys).p_value < 0.05:
            rejections += 1
    fraction = rejections / trials
    assert 0.03 <= fraction <= 0.07

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    _report(4, f"tails ≤1e-9 of quadrature; null rejection {fraction:.3f}; {elapsed:.1f}s")


def test_criterion_5_synthetic_gap_recovery():
    started = time.perf_counter()
    seeds = range(1, 21)
    rel_ok = ia_rejects = mr_non_rejects = 0
    rel_values = []
    expected = None
    for seed in seeds:
        config = SynthConfig(
            n_papers=10_000, seed=seed, gender_gap={IA.value: 0.05}, status_effect=0.0
        )
        corpus, truth = generate(config)
        events = build_events(corpus)
        expected = truth.expected_rel_diff(IA)

        result = paper_level_ar(events, IA)
        women = result.sample(GenderLabel.WOMAN)
        men = result.sample(GenderLabel.MAN)
        rel = float(relative_difference(women, men))
        rel_values.append(rel)
        rel_ok += abs(rel - expected) <= 0.02
        ia_test = t_test_independent([float(x) for x in women], [float(x) for x in men])
        ia_rejects += ia_test.p_value <= 0.05

        mr_result = paper_level_ar(events, MR)
        mr_test = t_test_independent(
            [float(x) for x in mr_result.sample(GenderLabel.WOMAN)],
            [float(x) for x in mr_result.sample(GenderLabel.MAN)],
        )
        mr_non_rejects += mr_test.p_value > 0.05

    assert rel_ok >= 18, f"rel diff within tolerance only {rel_ok}/20"
    assert ia_rejects >= 18, f"I&A test rejected only {ia_rejects}/20"
    assert mr_non_rejects >= 18, f"M&R test non-rejected only {mr_non_rejects}/20"
    ensemble = sum(rel_values) / len(rel_values)
    assert abs(ensemble - expected) <= 0.02
    elapsed = time.perf_counter() - started
    assert elapsed < 120.0
    _report(
        5,
        f"gap recovery: rel {rel_ok}/20 within ±0.02 (ensemble {ensemble:+.4f} vs "
        f"{expected:+.4f}), I&A rejects {ia_rejects}/20, M&R non-rejects "
        f"{mr_non_rejects}/20, {elapsed:.1f}s",
    )


def test_criterion_6_status_effect_recovery():
    started = time.perf_counter()
    opposite = 0
    for seed in range(1, 21):
        config = SynthConfig(n_papers=20_000, seed=seed, status_effect=0.10)
        corpus, _ = generate(config)
        events = build_events(corpus)
        pairs = collaboration_ar(events, IA)
        profiles = [corpus.scholars[pid] for pid in sorted(eligible_scholars(corpus))]
        tiers = stratify(profiles, q=Fraction(1, 10))
        rows = {row.pair_type: row for row in ar_by_pair_type(pairs, tiers, IA)}
        hl = rows[PairType.HIGH_MAN_LESS_WOMAN]
        lh = rows[PairType.LESS_MAN_HIGH_WOMAN]
        if (
            hl.rel_diff is not None
            and lh.rel_diff is not None
            and hl.rel_diff < 0 < lh.rel_diff
        ):
            opposite += 1
    assert opposite >= 18, f"opposite-signed pair types only {opposite}/20"
    elapsed = time.perf_counter() - started
    _report(6, f"status pattern: opposite signs in {opposite}/20 seeds, {elapsed:.1f}s")


def test_criterion_7_round_trip_fidelity():
    configs = [
        SynthConfig(n_papers=150, seed=41),
        SynthConfig(n_papers=150, seed=42, gender_gap={IA.value: 0.08}, status_effect=0.1),
        SynthConfig(n_papers=150, seed=43, scholar_pool_size=120,
                    gender_gap={"writing": -0.05}),
    ]
    total = 0
    for config in configs:
        corpus, truth = generate(config)
        planted = {
            (e.doi, e.person_id, e.role)
            for e in truth.planted
            if e.credit_type == "acknowledgee"
        }
        recovered = set()
        for paper in corpus.papers:
            for item in assign_roles(paper):
                recovered.add((item.doi, item.person_id, item.role))
        assert recovered == planted
        total += len(planted)
    _report(7, f"classifier recovered {total} planted assignments across 3 corpora exactly")


def test_criterion_8_brute_force_equivalence():
    z = normal_quantile(0.975)
    checked = 0
    for seed, n_papers, pool in ((61, 200, 90), (62, 120, 60), (63, 200, 150)):
        config = SynthConfig(
            n_papers=n_papers,
            seed=seed,
            scholar_pool_size=pool,
            gender_gap={IA.value: 0.05},
            status_effect=0.05,
        )
        corpus, _ = generate(config)
        events = build_events(corpus)

        for role in (IA, MR, Role.WRITING):
            expected = naive_paper_level(events, role)
            got = {
                (obs.doi, obs.gender): (obs.authors_count, obs.contributors_count, obs.ar)
                for obs in paper_level_ar(events, role).observations
            }
            assert got == expected

            expected_pairs = naive_collaboration(events, role)
            got_pairs = {
                (p.man_id, p.woman_id): (p.n_shared, p.man_author_count, p.woman_author_count)
                for p in collaboration_ar(events, role)
            }
            assert got_pairs == expected_pairs

        expected_buckets = naive_ack_by_author_count(corpus, z)
        got_buckets = {
            row.author_count: (row.mean_acknowledgees, row.ci_low, row.ci_high, row.n_papers)
            for row in ack_by_author_count(corpus)
        }
        assert got_buckets == expected_buckets

        for credit_type in ("author", "acknowledgee"):
            dist = role_proportions(events, credit_type)
            expected_rp = naive_role_proportions(events, credit_type, dist.roles)
            for gender in (GenderLabel.WOMAN, GenderLabel.MAN):
                counts, props = expected_rp[gender]
                assert dict(dist.counts[gender]) == counts
                if props is not None:
                    assert dist.proportions()[gender] == props

        profiles = list(corpus.scholars.values())
        assert stratify(profiles, q=0.1) == naive_stratify(profiles, 0.1)
        checked += 1
    _report(8, f"5 aggregations equal naive recomputation on {checked} corpora ≤200 papers")


def test_criterion_9_determinism_across_runs_and_workers(tmp_path):
    synth_out = tmp_path / "synth"
    assert main(["synth", "--out", str(synth_out), "--n-papers", "80", "--seed", "77"]) == 0
    corpus = synth_out / "corpus.jsonl"
    scholars = synth_out / "scholars.jsonl"

    bundles = []
    for name, workers in (("r1", "1"), ("r2", "1"), ("r4", "4")):
        out = tmp_path / name
        code = main([
            "analyze", "--corpus", str(corpus), "--scholars", str(scholars),
            "--out", str(out), "--workers", workers, "--by-discipline",
        ])
        assert code == 0
        bundles.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert bundles[0] == bundles[1], "rerun changed output bytes"
    assert bundles[0] == bundles[2], "worker count changed output bytes"
    assert "fig3_paper.csv" in bundles[0] and "fig4.csv" in bundles[0]
    _report(9, f"{len(bundles[0])} output files byte-identical across reruns and workers 1/4")
