"""Batch entry points: corpus generation, indexing, querying, evaluation,
tuning, and serving.

Exit codes: 0 on success, 2 for usage or input-validation problems, 1 for
runtime failures. Every report is one header line plus tab-separated rows
so scripts (and the acceptance suite) can parse the output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import index as index_mod
from . import query as query_mod
from . import recognizer as rec_mod
from . import tuning as tuning_mod
from .errors import DoodleSearchError
from .scoring import Hyperparams, score_screens
from .tuning import EvalPair, GridSpec, grid_search

VALIDATION_ERRORS = (query_mod.UnknownClass, query_mod.InvalidBBox,
                     rec_mod.UnknownLabel, ValueError)


def _run(fn):
    """Run a command body, translating failures into exit codes."""
    try:
        fn()
    except VALIDATION_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (DoodleSearchError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _load_pairs(path: str) -> list[EvalPair]:
    pairs = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                pairs.append(EvalPair(
                    sketch=query_mod.parse_sketch_obj(obj["sketch"]),
                    target_id=str(obj["target_id"])))
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise ValueError(f"bad pair on line {line_no}: {exc}")
    if not pairs:
        raise ValueError(f"no pairs in {path}")
    return pairs


def _parse_hp(text: str) -> Hyperparams:
    try:
        return Hyperparams.parse(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--hp")


@click.group()
@click.version_option()
def main():
    """Sketch-based screen search tools."""


@main.command("gen-corpus")
@click.option("--n", type=int, required=True, help="Number of screens.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--profile", type=click.Path(exists=True), default=None,
              help="JSON profile: class weights, element counts, forced df.")
@click.option("--bundle", is_flag=True,
              help="Write one corpus.jsonl instead of one file per screen.")
def cmd_gen_corpus(n, seed, out, profile, bundle):
    """Generate a synthetic screen corpus plus its ground-truth manifest."""
    if n < 1:
        raise click.BadParameter("need --n >= 1", param_hint="--n")

    def body():
        prof = corpus_mod.CorpusProfile()
        if profile:
            raw = json.loads(Path(profile).read_text())
            prof = corpus_mod.CorpusProfile(
                weights=raw.get("weights", dict(corpus_mod.DEFAULT_WEIGHTS)),
                min_elements=raw.get("min_elements", prof.min_elements),
                max_elements=raw.get("max_elements", prof.max_elements),
                disguise_rate=raw.get("disguise_rate", prof.disguise_rate),
                forced_df=raw.get("forced_df", {}),
            )
        docs, manifest = corpus_mod.generate_synthetic_corpus(seed, n, prof)
        corpus_mod.write_corpus(docs, manifest, out, bundle=bundle)
        click.echo("screens_written\tout")
        click.echo(f"{len(docs)}\t{out}")

    _run(body)


@main.command("index")
@click.option("--corpus", type=click.Path(exists=True), required=True)
@click.option("--rules", type=click.Path(exists=True), default=None,
              help="Label-fix rules file; defaults to the bundled rules.")
@click.option("--out", type=click.Path(), required=True)
def cmd_index(corpus, rules, out):
    """Build and save the inverted tile index for a corpus directory."""

    def body():
        rule_list = (index_mod.load_fix_rules(rules) if rules
                     else index_mod.default_fix_rules())
        corpus_path = Path(corpus)
        bundle = corpus_path / "corpus.jsonl"
        if bundle.exists():
            docs = [index_mod.parse_screen_obj(json.loads(line))
                    for line in bundle.read_text().splitlines() if line.strip()]
        else:
            docs = index_mod.load_corpus_dir(corpus_path)
        built = index_mod.build_index(docs, rule_list)
        index_mod.save_index(built, out)
        click.echo(f"screen_count\t{built.screen_count}")
        click.echo("class\tdf\tidf")
        for klass in built.classes():
            click.echo(f"{klass}\t{built.df(klass)}\t{built.idf[klass]:.6f}")

    _run(body)


@main.command("query")
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--sketch", type=click.Path(exists=True), required=True)
@click.option("--top", type=int, default=10, show_default=True)
@click.option("--hp", default="39,8,9,0.4,11", show_default=True)
def cmd_query(index_path, sketch, top, hp):
    """Rank indexed screens against a sketch file."""
    if top < 1:
        raise click.BadParameter("need --top >= 1", param_hint="--top")
    weights = _parse_hp(hp)

    def body():
        idx = index_mod.load_index(index_path)
        sk = query_mod.load_sketch(sketch)
        results = score_screens(sk, idx, weights, top)
        click.echo("rank\tscreen_id\tscore")
        for pos, scored in enumerate(results, 1):
            click.echo(f"{pos}\t{scored.screen_id}\t{scored.score:.6f}")

    _run(body)


@main.command("eval-search")
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--pairs", type=click.Path(exists=True), required=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--hp", default="39,8,9,0.4,11", show_default=True)
def cmd_eval_search(index_path, pairs, k, hp):
    """Top-k retrieval accuracy of target screens over evaluation pairs."""
    if k < 1:
        raise click.BadParameter("need --k >= 1", param_hint="--k")
    weights = _parse_hp(hp)

    def body():
        idx = index_mod.load_index(index_path)
        pair_list = _load_pairs(pairs)
        click.echo("pair\ttarget_id\trank")
        hits = 0
        for i, pair in enumerate(pair_list):
            if not idx.has_screen(pair.target_id):
                raise tuning_mod.TargetMissing(pair.target_id)
            rank = tuning_mod.target_rank(pair.sketch, idx, weights,
                                          pair.target_id)
            if rank is not None and rank <= k:
                hits += 1
            click.echo(f"{i}\t{pair.target_id}\t{rank if rank else 'inf'}")
        click.echo("")
        click.echo("k\thits\ttotal\taccuracy")
        click.echo(f"{k}\t{hits}\t{len(pair_list)}\t{hits / len(pair_list):.6f}")

    _run(body)


@main.command("eval-recognizer")
@click.option("--templates", type=click.Path(exists=True), default=None,
              help="Template file; defaults to the bundled set.")
@click.option("--dataset", type=click.Path(exists=True), required=True)
def cmd_eval_recognizer(templates, dataset):
    """Per-class partial-recognition statistics over a labeled dataset."""

    def body():
        tset = (rec_mod.load_templates(templates) if templates
                else rec_mod.default_templates())
        records = rec_mod.load_labeled_dataset(dataset)
        if not records:
            raise ValueError(f"no records in {dataset}")
        reports = rec_mod.eval_recognizer(records, tset)
        cols = ["class", "count",
                "strokes_avg", "strokes_med", "strokes_min", "strokes_max",
                "strokes_sd",
                "top1_first_avg", "top1_first_med", "top1_first_min",
                "top1_first_max", "top1_first_sd", "top1_w_last", "top1_w_all",
                "top3_first_avg", "top3_first_med", "top3_first_min",
                "top3_first_max", "top3_first_sd", "top3_w_last", "top3_w_all"]
        click.echo("\t".join(cols))

        def stat_cols(stat):
            if stat is None:
                return ["-"] * 5
            return [f"{stat.avg:.2f}", f"{stat.median:g}", f"{stat.min:g}",
                    f"{stat.max:g}", f"{stat.sd:.2f}"]

        for klass, rep in reports.items():
            row = [klass, str(rep.count)]
            row += stat_cols(rep.strokes)
            row += stat_cols(rep.top1_first)
            row += [f"{rep.top1_wrong_last_pct:.1f}",
                    f"{rep.top1_wrong_all_pct:.1f}"]
            row += stat_cols(rep.top3_first)
            row += [f"{rep.top3_wrong_last_pct:.1f}",
                    f"{rep.top3_wrong_all_pct:.1f}"]
            click.echo("\t".join(row))

    _run(body)


@main.command("tune")
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--pairs", type=click.Path(exists=True), required=True)
@click.option("--grid", type=click.Path(exists=True), required=True)
@click.option("--report", type=click.Path(), default="tune_report.tsv",
              show_default=True)
def cmd_tune(index_path, pairs, grid, report):
    """Exhaustive grid search of the scoring weights."""

    def body():
        idx = index_mod.load_index(index_path)
        pair_list = _load_pairs(pairs)
        spec = GridSpec.from_obj(json.loads(Path(grid).read_text()))
        best, result = grid_search(pair_list, idx, spec)
        Path(report).write_text(tuning_mod.format_report(result))
        best_row = next(r for r in result.rows if r.hp == best)
        click.echo("p1\tp2\tp3\tdelta_w\tc_w\tmrr\ttop10_hits")
        p1, p2, p3, dw, cw = best.as_tuple()
        click.echo(f"{p1:g}\t{p2:g}\t{p3:g}\t{dw:g}\t{cw:g}"
                   f"\t{best_row.mrr:.6f}\t{best_row.top10_hits}")

    _run(body)


@main.command("serve")
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--templates", type=click.Path(exists=True), default=None)
@click.option("--hp", default="39,8,9,0.4,11", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(index_path, templates, hp, host, port):
    """Run the interactive search service."""
    weights = _parse_hp(hp)

    def body():
        import uvicorn

        from .service import create_app

        idx = index_mod.load_index(index_path)
        tset = (rec_mod.load_templates(templates) if templates
                else rec_mod.default_templates())
        app = create_app(idx, tset, weights)
        uvicorn.run(app, host=host, port=port, log_level="warning")

    _run(body)


if __name__ == "__main__":
    main()
