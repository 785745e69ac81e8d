"""Command-line entry point.

Subcommands: tokenize, annotate, mask, stats, lossgap, probe,
eval-detect. Everything streams JSONL; mask plans are deterministic for
a fixed (config, inputs, seed) regardless of worker count.
"""

import json
import multiprocessing
import sys
from pathlib import Path

import click

from . import annotate as ann_mod
from . import corpus, lossgap as lg_mod, promptprobe, stats as stats_mod
from .masking import (
    STRATEGY_KINDS,
    ConfigError,
    StrategyConfig,
    build_plan,
    plan_to_dict,
)
from .wordpiece import pretokenize, wordpiece_tokenize


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _load_config(path):
    if path is None:
        return {}
    with Path(path).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_policy(text):
    try:
        parts = tuple(float(x) for x in text.split(":"))
    except ValueError:
        raise click.BadParameter(f"expected m:r:k floats, got {text!r}")
    if len(parts) != 3:
        raise click.BadParameter("replacement policy needs exactly three parts")
    return parts


def _strategy_config(config, strategy, p, policy, seed, restricted_class):
    base = dict(config.get("strategy", {}))
    if strategy is not None:
        base["kind"] = strategy
    if p is not None:
        base["mask_probability"] = p
    if policy is not None:
        base["replacement_policy"] = _parse_policy(policy)
    if seed is not None:
        base["seed"] = seed
    if restricted_class is not None:
        base["restricted_class"] = restricted_class
    if "kind" not in base:
        raise click.UsageError("no strategy given (flag --strategy or config)")
    try:
        return StrategyConfig.from_dict(base)
    except ConfigError as exc:
        raise click.UsageError(str(exc))


def _load_resources(config, vocab, objects, attributes, relationships,
                    concreteness, stopwords, punctuation):
    res = dict(config.get("resources", {}))
    paths = {
        "vocab": vocab or res.get("vocab"),
        "objects_lexicon": objects or res.get("objects_lexicon"),
        "attributes_lexicon": attributes or res.get("attributes_lexicon"),
        "relationships_lexicon": relationships or res.get("relationships_lexicon"),
        "concreteness": concreteness or res.get("concreteness"),
        "stopwords": stopwords or res.get("stopwords"),
        "punctuation": punctuation or res.get("punctuation"),
    }
    loaded = {}
    loaded["vocab"] = (
        corpus.load_vocab(paths["vocab"]) if paths["vocab"] else None
    )
    if paths["objects_lexicon"]:
        loaded["lexicons"] = corpus.load_lexicons(
            paths["objects_lexicon"],
            paths["attributes_lexicon"],
            paths["relationships_lexicon"],
        )
    else:
        loaded["lexicons"] = corpus.LexiconSet(
            frozenset(), frozenset(), frozenset()
        )
    loaded["concreteness"] = (
        corpus.load_concreteness(paths["concreteness"])
        if paths["concreteness"]
        else None
    )
    loaded["stops"] = corpus.load_stopwords(paths["stopwords"], paths["punctuation"])
    return loaded


_RES_OPTIONS = [
    click.option("--vocab", type=click.Path(), envvar="XMODMASK_VOCAB"),
    click.option("--objects-lexicon", "objects_lexicon", type=click.Path()),
    click.option("--attributes-lexicon", "attributes_lexicon", type=click.Path()),
    click.option("--relationships-lexicon", "relationships_lexicon", type=click.Path()),
    click.option("--concreteness", type=click.Path()),
    click.option("--stopwords", type=click.Path(), envvar="XMODMASK_STOPWORDS"),
    click.option("--punctuation", type=click.Path()),
    click.option("--config", "config_path", type=click.Path(exists=True)),
]


def _with_resource_options(fn):
    for opt in reversed(_RES_OPTIONS):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Masking-strategy and evaluation toolkit for cross-modal MLM data."""


@main.command("tokenize")
@click.option("--captions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_CAPTIONS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@_with_resource_options
def tokenize_cmd(captions, out, config_path, **res_flags):
    """Emit pieces + word spans per caption as JSONL (debug aid)."""
    config = _load_config(config_path)
    res = _load_resources(config, **_res_kwargs(res_flags))
    if res["vocab"] is None:
        raise click.UsageError("tokenize requires a vocabulary")
    with open(out, "w", encoding="utf-8") as fh:
        for rec in corpus.load_captions(captions):
            ts = wordpiece_tokenize(rec.text, res["vocab"])
            fh.write(_dump({
                "id": rec.id,
                "words": list(ts.words),
                "pieces": list(ts.pieces),
                "spans": [list(s) for s in ts.spans],
            }) + "\n")


def _res_kwargs(flags):
    return {
        "vocab": flags.get("vocab"),
        "objects": flags.get("objects_lexicon"),
        "attributes": flags.get("attributes_lexicon"),
        "relationships": flags.get("relationships_lexicon"),
        "concreteness": flags.get("concreteness"),
        "stopwords": flags.get("stopwords"),
        "punctuation": flags.get("punctuation"),
    }


def _annotate_record(rec, res, graphs):
    if rec.words is not None:
        words = rec.words
    elif res["vocab"] is not None:
        words = list(wordpiece_tokenize(rec.text, res["vocab"]).words)
    else:
        words = pretokenize(rec.text)
    graph = graphs.get(rec.image_id) if graphs is not None else None
    anns = ann_mod.annotate_sentence(
        words,
        lexicons=res["lexicons"],
        stops=res["stops"],
        concreteness=res["concreteness"],
        graph=graph,
        supplied_tags=rec.pos,
    )
    return words, anns


def _annotation_record_dict(rec_id, words, anns):
    d = {"id": rec_id, "words": list(words)}
    keys = (
        "pos", "is_stopword", "is_punct", "is_content", "is_object",
        "is_attribute", "is_relationship", "concreteness",
        "grounded_object", "grounded_attribute", "grounded_relationship",
    )
    for key in keys:
        d[key] = [getattr(a, key) for a in anns]
    return d


def _annotations_from_dict(d):
    n = len(d["words"])
    return [
        ann_mod.TokenAnnotation(
            pos=d["pos"][i],
            is_stopword=d["is_stopword"][i],
            is_punct=d["is_punct"][i],
            is_content=d["is_content"][i],
            is_object=d["is_object"][i],
            is_attribute=d["is_attribute"][i],
            is_relationship=d["is_relationship"][i],
            concreteness=d["concreteness"][i],
            grounded_object=d["grounded_object"][i],
            grounded_attribute=d["grounded_attribute"][i],
            grounded_relationship=d["grounded_relationship"][i],
        )
        for i in range(n)
    ]


@main.command("annotate")
@click.option("--captions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_CAPTIONS")
@click.option("--scene-graphs", "scene_graphs", type=click.Path(exists=True),
              envvar="XMODMASK_SCENE_GRAPHS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@click.option("--lenient", is_flag=True, help="skip malformed records instead of aborting")
@_with_resource_options
def annotate_cmd(captions, scene_graphs, out, lenient, config_path, **res_flags):
    """Write per-word annotation arrays as annotations.jsonl."""
    config = _load_config(config_path)
    res = _load_resources(config, **_res_kwargs(res_flags))
    graphs = corpus.load_scene_graphs(scene_graphs) if scene_graphs else None
    skipped = []
    with open(out, "w", encoding="utf-8") as fh:
        for rec in corpus.load_captions(captions, strict=not lenient,
                                        skipped_counter=skipped):
            words, anns = _annotate_record(rec, res, graphs)
            fh.write(_dump(_annotation_record_dict(rec.id, words, anns)) + "\n")
    if skipped:
        click.echo(f"skipped {len(skipped)} malformed lines", err=True)


_WORKER_STATE = {}


def _mask_init(vocab_path, cfg_dict):
    _WORKER_STATE["vocab"] = corpus.load_vocab(vocab_path)
    _WORKER_STATE["cfg"] = StrategyConfig.from_dict(cfg_dict)


def _mask_worker(job):
    vocab = _WORKER_STATE["vocab"]
    cfg = _WORKER_STATE["cfg"]
    ts = wordpiece_tokenize(job["text"], vocab)
    anns = _annotations_from_dict(job["annotation"])
    if len(anns) != len(ts.words):
        raise ValueError(
            f"caption {job['id']!r}: annotation arrays ({len(anns)}) do not "
            f"match tokenized words ({len(ts.words)})"
        )
    plan = build_plan(job["id"], ts, anns, cfg, vocab)
    return _dump(plan_to_dict(plan, ts))


def _mask_jobs(captions, annotations_path, res, graphs):
    ann_by_id = {}
    if annotations_path:
        with Path(annotations_path).open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    d = json.loads(line)
                    ann_by_id[d["id"]] = d
    for rec in corpus.load_captions(captions):
        if annotations_path:
            if rec.id not in ann_by_id:
                raise click.ClickException(f"no annotation for caption {rec.id!r}")
            ann = ann_by_id[rec.id]
        else:
            words, anns = _annotate_record(rec, res, graphs)
            ann = _annotation_record_dict(rec.id, words, anns)
        yield {"id": rec.id, "text": rec.text, "annotation": ann}


@main.command("mask")
@click.option("--captions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_CAPTIONS")
@click.option("--annotations", "annotations_path", type=click.Path(exists=True),
              envvar="XMODMASK_ANNOTATIONS")
@click.option("--scene-graphs", "scene_graphs", type=click.Path(exists=True),
              envvar="XMODMASK_SCENE_GRAPHS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@click.option("--strategy", type=click.Choice(list(STRATEGY_KINDS)))
@click.option("--p", type=float)
@click.option("--policy", type=str, help="replacement proportions m:r:k")
@click.option("--seed", type=int)
@click.option("--class", "restricted_class",
              type=click.Choice(["stopword_punct", "content"]))
@click.option("--jobs", type=int, default=1, show_default=True)
@_with_resource_options
def mask_cmd(captions, annotations_path, scene_graphs, out, strategy, p, policy,
             seed, restricted_class, jobs, config_path, **res_flags):
    """Write deterministic mask plans as plans.jsonl."""
    if jobs < 1:
        raise click.UsageError("--jobs must be >= 1")
    config = _load_config(config_path)
    cfg = _strategy_config(config, strategy, p, policy, seed, restricted_class)
    res = _load_resources(config, **_res_kwargs(res_flags))
    if res["vocab"] is None:
        raise click.UsageError("mask requires a vocabulary")
    graphs = corpus.load_scene_graphs(scene_graphs) if scene_graphs else None
    vocab_path = res_flags.get("vocab") or config.get("resources", {}).get("vocab")
    jobs_iter = _mask_jobs(captions, annotations_path, res, graphs)
    cfg_dict = {
        "kind": cfg.kind,
        "mask_probability": cfg.mask_probability,
        "restricted_class": cfg.restricted_class,
        "replacement_policy": list(cfg.replacement_policy),
        "seed": cfg.seed,
    }
    with open(out, "w", encoding="utf-8") as fh:
        if jobs == 1:
            _mask_init(vocab_path, cfg_dict)
            for job in jobs_iter:
                fh.write(_mask_worker(job) + "\n")
        else:
            with multiprocessing.Pool(
                jobs, initializer=_mask_init, initargs=(vocab_path, cfg_dict)
            ) as pool:
                for line in pool.imap(_mask_worker, jobs_iter, chunksize=64):
                    fh.write(line + "\n")


@main.command("stats")
@click.option("--captions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_CAPTIONS")
@click.option("--annotations", "annotations_path", type=click.Path(exists=True))
@click.option("--scene-graphs", "scene_graphs", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@click.option("--histogram-out", type=click.Path())
@click.option("--strategy", type=str)
@click.option("--p", type=float)
@click.option("--policy", type=str)
@click.option("--seed", type=int)
@click.option("--class", "restricted_class",
              type=click.Choice(["stopword_punct", "content"]))
@click.option("--trials", type=int, default=1, show_default=True)
@_with_resource_options
def stats_cmd(captions, annotations_path, scene_graphs, out, histogram_out,
              strategy, p, policy, seed, restricted_class, trials,
              config_path, **res_flags):
    """Masked-class share report plus an optional length histogram."""
    config = _load_config(config_path)
    cfg = _strategy_config(config, strategy, p, policy, seed, restricted_class)
    res = _load_resources(config, **_res_kwargs(res_flags))
    if res["vocab"] is None:
        raise click.UsageError("stats requires a vocabulary")
    graphs = corpus.load_scene_graphs(scene_graphs) if scene_graphs else None
    ann_by_id = {}
    if annotations_path:
        with Path(annotations_path).open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    d = json.loads(line)
                    ann_by_id[d["id"]] = d
    sentences = []
    tokenized = []
    for rec in corpus.load_captions(captions):
        ts = wordpiece_tokenize(rec.text, res["vocab"])
        tokenized.append(ts)
        if annotations_path:
            anns = _annotations_from_dict(ann_by_id[rec.id])
        else:
            _, anns = _annotate_record(rec, res, graphs)
        sentences.append((rec.id, ts, anns))
    report = stats_mod.masking_report(sentences, cfg, trials=trials)
    hist = stats_mod.length_histogram(tokenized)
    payload = report.to_dict()
    payload["length"] = {"mean_words": hist.mean_words,
                         "mean_pieces": hist.mean_pieces}
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_dump(payload) + "\n")
    if histogram_out:
        with open(histogram_out, "w", encoding="utf-8") as fh:
            fh.write("length\tsentences\n")
            for length, count in sorted(hist.word_counts.items()):
                fh.write(f"{length}\t{count}\n")


def _classes_for_word(d, i, group_by):
    classes = []
    if group_by in ("semantic", "all"):
        if d["is_object"][i]:
            classes.append("objects")
        if d["is_attribute"][i]:
            classes.append("attributes")
        if d["is_relationship"][i]:
            classes.append("relationships")
    if group_by in ("stopword", "all"):
        if d["is_stopword"][i] or d["is_punct"][i]:
            classes.append("stopwords_punctuation")
        else:
            classes.append("content_words")
    if group_by in ("grounded", "all"):
        if d["is_object"][i]:
            if d["grounded_object"][i]:
                classes.append("grounded_objects")
            elif d["grounded_object"][i] is False:
                classes.append("non_grounded_objects")
    return classes


@main.command("lossgap")
@click.option("--predictions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_PREDICTIONS")
@click.option("--annotations", "annotations_path", required=True,
              type=click.Path(exists=True), envvar="XMODMASK_ANNOTATIONS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@click.option("--tsv-out", type=click.Path())
@click.option("--k", type=int, default=5, show_default=True)
@click.option("--group-by", type=click.Choice(["grounded", "semantic", "stopword", "all"]),
              default="all", show_default=True)
@click.option("--mean-of-exp", is_flag=True,
              help="aggregate mean(exp loss) instead of exp(mean loss)")
def lossgap_cmd(predictions, annotations_path, out, tsv_out, k, group_by,
                mean_of_exp):
    """Per-class image-necessity reports from model prediction logs."""
    records = lg_mod.load_predictions(predictions)
    class_of = {}
    with Path(annotations_path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                d = json.loads(line)
                for i in range(len(d["words"])):
                    class_of[(d["id"], i)] = _classes_for_word(d, i, group_by)
    try:
        reports = lg_mod.class_report(records, class_of, k=k,
                                      mean_of_exp=mean_of_exp)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_dump([r.to_dict() for r in reports]) + "\n")
    columns = ["name", "count", "mean_loss_gap", "exp_loss_with",
               "exp_loss_without", "exp_loss_gap", "acc_at_k_with",
               "acc_at_k_without", "acc_gap"]
    lines = ["\t".join(columns)]
    for r in reports:
        lines.append("\t".join(str(getattr(r, c)) for c in columns))
    text = "\n".join(lines) + "\n"
    if tsv_out:
        with open(tsv_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command("probe")
@click.option("--probe", "probe_path", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_PROBE")
@click.option("--scene-graphs", "scene_graphs", required=True,
              type=click.Path(exists=True), envvar="XMODMASK_SCENE_GRAPHS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@click.option("--k-max", type=int, default=5, show_default=True)
@click.option("--plural-fold", is_flag=True)
@click.option("--micro", is_flag=True, help="pool predictions instead of macro-averaging")
def probe_cmd(probe_path, scene_graphs, out, k_max, plural_fold, micro):
    """Prompt-probe precision/recall curves as TSV."""
    records = promptprobe.load_probe_records(probe_path)
    graphs = corpus.load_scene_graphs(scene_graphs)
    try:
        results = promptprobe.evaluate_probe(
            records, graphs, k_max, plural_fold=plural_fold, micro=micro
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("prompt\tk\tprecision\trecall\n")
        for result in results:
            for k, prec, rec in result.curve():
                fh.write(f"{result.prompt}\t{k}\t{prec}\t{rec}\n")


@main.command("eval-detect")
@click.option("--captions", required=True, type=click.Path(exists=True),
              envvar="XMODMASK_CAPTIONS")
@click.option("--scene-graphs", "scene_graphs", required=True,
              type=click.Path(exists=True), envvar="XMODMASK_SCENE_GRAPHS")
@click.option("--out", required=True, type=click.Path(), envvar="XMODMASK_OUT")
@_with_resource_options
def eval_detect_cmd(captions, scene_graphs, out, config_path, **res_flags):
    """Evaluate the class-detection heuristics against scene graphs."""
    config = _load_config(config_path)
    res = _load_resources(config, **_res_kwargs(res_flags))
    graphs = corpus.load_scene_graphs(scene_graphs)
    annotated = []
    for rec in corpus.load_captions(captions):
        _, anns = _annotate_record(rec, res, graphs)
        annotated.append(anns)
    report = ann_mod.evaluate_detection(annotated)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("class\ttp\tpredicted\tgrounded\tprecision\trecall\n")
        for name in ann_mod.CLASS_NAMES:
            c = report[name]
            fh.write(
                f"{name}\t{c['tp']}\t{c['predicted']}\t{c['grounded']}\t"
                f"{c['precision']}\t{c['recall']}\n"
            )


if __name__ == "__main__":
    sys.exit(main())
