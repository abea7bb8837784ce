"""Command-line pipeline: validate, infer-gender, classify, analyze, synth.

Each stage reads and writes plain files so intermediate results can be
cached and inspected. Exit codes: 0 success, 1 fatal input error, 2
configuration error. Output bundles contain no timestamps and all rows are
sorted, so identical inputs and configuration give byte-identical outputs
at any worker count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .ack import AckDiagnostic, AckTaxonomy, assign_roles
from .corpus import Corpus, CorpusError, contributor_counts, load_corpus, validate, write_corpus
from .credit import CreditMapping, Role, SHARED_ROLES
from .gender import GenderCache, GenderDictionary, GenderServiceClient, annotate_corpus
from .metrics import (
    ACKNOWLEDGEE,
    AUTHOR,
    ack_by_author_count,
    build_events,
    collaboration_ar,
    paper_level_ar,
    relative_difference,
    role_proportions,
)
from .stats import (
    DegenerateTableError,
    DegenerateVarianceError,
    StatsError,
    chi_square,
    t_test_independent,
    t_test_paired,
)
from .strata import ar_by_pair_type, eligible_scholars, stratify
from .synth import IntDist, SynthConfig, SynthConfigError, generate
from . import tables
from .corpus import GenderLabel

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args) -> Corpus:
    return load_corpus(args.corpus, getattr(args, "scholars", None))


def _taxonomy(args) -> AckTaxonomy:
    if getattr(args, "taxonomy", None):
        return AckTaxonomy.from_file(args.taxonomy)
    return AckTaxonomy.default()


def _mapping(args) -> CreditMapping:
    if getattr(args, "credit_map", None):
        return CreditMapping.from_file(args.credit_map)
    return CreditMapping.default()


def _maybe_annotate(corpus: Corpus, args) -> Corpus:
    if not getattr(args, "gender_dict", None):
        return corpus
    dictionary = GenderDictionary.from_file(args.gender_dict)
    client = None
    if getattr(args, "gender_service_url", None):
        cache = GenderCache(Path(args.corpus).with_suffix(".gender-cache.jsonl"))
        client = GenderServiceClient(args.gender_service_url, cache=cache)
    return annotate_corpus(corpus, dictionary, client, args.gender_threshold).corpus


def cmd_validate(args) -> int:
    corpus = _load(args)
    report = validate(corpus, _mapping(args))
    out = _out_dir(args)
    with open(out / "validation_report.jsonl", "w", encoding="utf-8") as fh:
        for issue in report.issues:
            fh.write(json.dumps(
                {"kind": issue.kind, "doi": issue.doi, "detail": issue.detail}, sort_keys=True
            ))
            fh.write("\n")
    for issue in corpus.load_report.malformed:
        print(f"malformed line {issue.line_no}: {issue.message}", file=sys.stderr)
    counts = report.counts
    print(f"papers: {len(corpus.papers)}")
    print(f"issues: {sum(counts.values())} {counts if counts else ''}".rstrip())
    return EXIT_OK


def cmd_infer_gender(args) -> int:
    if not args.gender_dict:
        print("infer-gender requires --gender-dict", file=sys.stderr)
        return EXIT_CONFIG
    corpus = _load(args)
    dictionary = GenderDictionary.from_file(args.gender_dict)
    client = None
    if args.gender_service_url:
        cache = GenderCache(Path(args.corpus).with_suffix(".gender-cache.jsonl"))
        client = GenderServiceClient(args.gender_service_url, cache=cache)
    result = annotate_corpus(corpus, dictionary, client, args.gender_threshold)
    out = _out_dir(args)
    write_corpus(result.corpus, out / "annotated_corpus.jsonl")
    with open(out / "gender_counts.json", "w", encoding="utf-8") as fh:
        json.dump(result.label_counts, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"labels: {dict(sorted(result.label_counts.items()))}")
    return EXIT_OK


def _classified(corpus: Corpus, taxonomy: AckTaxonomy, workers: int):
    def one(paper):
        diags: list[AckDiagnostic] = []
        result = assign_roles(paper, taxonomy, diags) if paper.ack_text else []
        return result, diags

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, corpus.papers))
    return [one(paper) for paper in corpus.papers]


def cmd_classify(args) -> int:
    corpus = _maybe_annotate(_load(args), args)
    taxonomy = _taxonomy(args)
    out = _out_dir(args)
    assignments = []
    diagnostics = []
    for result, diags in _classified(corpus, taxonomy, args.workers):
        assignments.extend(result)
        diagnostics.extend(diags)
    assignments.sort(
        key=lambda a: (a.doi, a.sentence_index, a.family_name, a.given_name, a.role.value)
    )
    with open(out / "assignments.jsonl", "w", encoding="utf-8") as fh:
        for a in assignments:
            fh.write(json.dumps(
                {
                    "doi": a.doi,
                    "person_id": a.person_id,
                    "given_name": a.given_name,
                    "family_name": a.family_name,
                    "gender": a.gender.value,
                    "role": a.role.value,
                    "sentence_index": a.sentence_index,
                    "keyword": a.keyword,
                },
                sort_keys=True,
            ))
            fh.write("\n")
    _write_diagnostics(out, diagnostics)
    print(f"assignments: {len(assignments)}  diagnostics: {len(diagnostics)}")
    return EXIT_OK


def _write_diagnostics(out: Path, diagnostics: list[AckDiagnostic]) -> None:
    ordered = sorted(diagnostics, key=lambda d: (d.doi, d.kind, d.detail))
    with open(out / "ack_diagnostics.jsonl", "w", encoding="utf-8") as fh:
        for d in ordered:
            fh.write(json.dumps({"kind": d.kind, "doi": d.doi, "detail": d.detail}, sort_keys=True))
            fh.write("\n")


def _fig3_paper_rows(events, variant):
    rows = []
    for role in SHARED_ROLES:
        result = paper_level_ar(events, role)
        women = result.sample(GenderLabel.WOMAN)
        men = result.sample(GenderLabel.MAN)
        rel = None
        test = None
        if women and men:
            try:
                rel = relative_difference(women, men)
            except StatsError:
                rel = None
            except Exception:
                rel = None
            try:
                test = t_test_independent(
                    [float(x) for x in women], [float(x) for x in men], variant
                )
            except (StatsError, DegenerateVarianceError):
                test = None
        rows.append((role.value, len(women), len(men), rel, test))
    return rows


def _fig3_collab_rows(events, min_shared):
    rows = []
    pairs_by_role = {}
    for role in SHARED_ROLES:
        pairs = collaboration_ar(events, role, min_shared)
        pairs_by_role[role] = pairs
        rel = None
        test = None
        if pairs:
            woman_ars = [p.woman_ar for p in pairs]
            man_ars = [p.man_ar for p in pairs]
            try:
                rel = relative_difference(woman_ars, man_ars)
            except Exception:
                rel = None
            try:
                test = t_test_paired(
                    [(float(w), float(m)) for w, m in zip(woman_ars, man_ars)]
                )
            except (StatsError, DegenerateVarianceError):
                test = None
        rows.append((role.value, len(pairs), rel, test))
    return rows, pairs_by_role


def cmd_analyze(args) -> int:
    corpus = _maybe_annotate(_load(args), args)
    taxonomy = _taxonomy(args)
    mapping = _mapping(args)
    out = _out_dir(args)
    q = Fraction(args.q)

    diagnostics: list[AckDiagnostic] = []
    events = build_events(corpus, mapping, taxonomy, diagnostics, workers=args.workers)
    _write_diagnostics(out, diagnostics)

    # descriptive tables
    counts = contributor_counts(corpus)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "papers": counts.n_papers,
                "author_mentions": counts.n_author_mentions,
                "acknowledgee_mentions": counts.n_acknowledgee_mentions,
                "acknowledgees_identified": counts.n_acknowledgees_identified,
                "identified_fraction": (
                    float(counts.identified_fraction) if counts.n_acknowledgee_mentions else None
                ),
                "authors_by_gender": dict(sorted(counts.authors_by_gender.items())),
                "acknowledgees_by_gender": dict(sorted(counts.acknowledgees_by_gender.items())),
            },
            fh,
            sort_keys=True,
            indent=2,
        )
        fh.write("\n")
    tables.write_fig2a(out, ack_by_author_count(corpus))
    tables.write_fig2b(out, counts)
    author_dist = role_proportions(events, AUTHOR)
    ack_dist = role_proportions(events, ACKNOWLEDGEE)
    tables.write_fig2c(out, [author_dist, ack_dist])
    chi_results = []
    for dist in (author_dist, ack_dist):
        table, genders, cols = dist.contingency_table()
        try:
            chi_results.append((dist.credit_type, chi_square(table)))
        except (DegenerateTableError, ValueError):
            chi_results.append((dist.credit_type, None))
    tables.write_chi_square(out, chi_results)

    # paper-level AR
    all_paper_obs = []
    for role in SHARED_ROLES:
        all_paper_obs.extend(paper_level_ar(events, role).observations)
    tables.write_ar_paper_level(out, all_paper_obs)
    fig3_paper = _fig3_paper_rows(events, args.ttest)

    # collaboration-level AR
    fig3_collab, pairs_by_role = _fig3_collab_rows(events, args.min_shared_papers)
    all_pairs = [p for pairs in pairs_by_role.values() for p in pairs]
    tables.write_ar_pairs(out, all_pairs)

    # per-discipline breakdowns
    disc_paper_rows = None
    disc_collab_rows = None
    if args.by_discipline:
        doi_disciplines = {p.doi: p.disciplines for p in corpus.papers}
        disciplines = sorted({d for discs in doi_disciplines.values() for d in discs})
        disc_paper_rows = []
        disc_collab_rows = []
        for disc in disciplines:
            subset = [e for e in events if disc in doi_disciplines[e.doi]]
            for row in _fig3_paper_rows(subset, args.ttest):
                disc_paper_rows.append((disc, *row))
            rows, _ = _fig3_collab_rows(subset, args.min_shared_papers)
            for row in rows:
                disc_collab_rows.append((disc, *row))
    tables.write_fig3_paper(out, fig3_paper, disc_paper_rows)
    tables.write_fig3_collab(out, fig3_collab, disc_collab_rows)

    # status stratification
    strata_warnings: list[str] = []
    eligible = eligible_scholars(corpus)
    profiles = [corpus.scholars[pid] for pid in sorted(eligible) if pid in corpus.scholars]
    group_by = ("gender", "discipline") if args.by_discipline else ("gender",)
    tiers = stratify(profiles, q, group_by, strata_warnings)
    tables.write_tiers(out, tiers, corpus.scholars, by_discipline=args.by_discipline)
    fig4_rows = []
    for role in SHARED_ROLES:
        fig4_rows.extend(ar_by_pair_type(pairs_by_role[role], tiers, role))
    tables.write_fig4(out, fig4_rows)

    manifest = {
        "package_version": __version__,
        "inputs": {
            "corpus": {"path": str(args.corpus), "sha256": _sha256(Path(args.corpus))},
            "scholars": (
                {"path": str(args.scholars), "sha256": _sha256(Path(args.scholars))}
                if args.scholars
                else None
            ),
        },
        "config": {
            "q": str(q),
            "ttest": args.ttest,
            "min_shared_papers": args.min_shared_papers,
            "by_discipline": args.by_discipline,
            "gender_threshold": args.gender_threshold,
            "gender_dict": bool(args.gender_dict),
            "taxonomy_sha256": _sha256(Path(args.taxonomy)) if args.taxonomy else "default",
            "credit_map_sha256": _sha256(Path(args.credit_map)) if args.credit_map else "default",
        },
        "strata_warnings": strata_warnings,
    }
    manifest["config_hash"] = hashlib.sha256(
        json.dumps(manifest["config"], sort_keys=True).encode()
    ).hexdigest()
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"analysis written to {out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.config:
        config = SynthConfig.from_file(args.config)
    else:
        gap = {}
        for item in args.gender_gap or []:
            role, _, value = item.partition("=")
            gap[Role(role).value] = float(value)
        config = SynthConfig(
            n_papers=args.n_papers,
            seed=args.seed,
            gender_ratio=args.gender_ratio,
            base_author_prob=args.base_author_prob,
            gender_gap=gap,
            status_effect=args.status_effect,
            scholar_pool_size=args.pool_size,
        )
    corpus, truth = generate(config)
    out = _out_dir(args)
    corpus_path = out / "corpus.jsonl"
    scholars_path = out / "scholars.jsonl"
    write_corpus(corpus, corpus_path, scholars_path)
    truth.write(out / "ground_truth.json")
    print(corpus_path)
    print(scholars_path)
    print(out / "ground_truth.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scicredit",
        description="Authorship vs. acknowledgment credit analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        if corpus:
            p.add_argument("--corpus", required=True, help="paper corpus (JSON lines)")
            p.add_argument("--scholars", default=None, help="scholar profiles (JSON lines)")
        p.add_argument("--taxonomy", default=None, help="acknowledgment taxonomy JSON")
        p.add_argument("--credit-map", default=None, help="credit role mapping JSON")
        p.add_argument("--gender-dict", default=None, help="name-to-gender dictionary")
        p.add_argument("--gender-service-url", default=None,
                       help="name-to-gender HTTP service (key via GENDER_API_KEY)")
        p.add_argument("--gender-threshold", type=float, default=0.8)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--workers", type=int, default=1)

    p_validate = sub.add_parser("validate", help="load a corpus and report inconsistencies")
    common(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_gender = sub.add_parser("infer-gender", help="fill missing gender labels")
    common(p_gender)
    p_gender.set_defaults(func=cmd_infer_gender)

    p_classify = sub.add_parser("classify", help="extract acknowledgment role assignments")
    common(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_analyze = sub.add_parser("analyze", help="run the full analysis bundle")
    common(p_analyze)
    p_analyze.add_argument("--q", default="0.1", help="extreme-tier fraction (decimal string)")
    p_analyze.add_argument("--ttest", choices=("welch", "pooled"), default="welch")
    p_analyze.add_argument("--by-discipline", action="store_true")
    p_analyze.add_argument("--min-shared-papers", type=int, default=1)
    p_analyze.set_defaults(func=cmd_analyze)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--config", default=None, help="generator config JSON")
    p_synth.add_argument("--n-papers", type=int, default=1000)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--gender-ratio", type=float, default=0.5)
    p_synth.add_argument("--base-author-prob", type=float, default=0.7)
    p_synth.add_argument("--status-effect", type=float, default=0.0)
    p_synth.add_argument("--pool-size", type=int, default=400)
    p_synth.add_argument("--gender-gap", action="append", default=None,
                         metavar="ROLE=DELTA",
                         help="authorship-probability delta added for men, e.g. "
                              "investigation_analysis=0.05")
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_CONFIG
    try:
        return args.func(args)
    except SynthConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CorpusError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
