"""Command-line pipeline: composable subcommands driven by a JSON config.

Every subcommand writes its declared artifacts plus a deterministic
``run_<name>.json`` summary (inputs, config hash, outputs, stats), so two
runs with identical inputs and config produce byte-identical output trees.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import adaptation, bpe, corpus, squad_data, squad_eval, tokenizer
from .config import PipelineConfig, load_config

CORPUS_FILE = "corpus.txt"
STATS_FILE = "cleaning_stats.json"
CUSTOM_VOCAB_FILE = "custom_vocab.txt"
CUSTOM_FREQ_FILE = "custom_vocab_freq.tsv"
WORD_FREQ_FILE = "word_freq.tsv"
FRAGMENTATION_FILE = "fragmentation.csv"
ANALYSIS_FILE = "analysis.json"
GROUPS_FILE = "root_groups.tsv"
SELECTED_FILE = "selected_words.txt"
ADAPTED_VOCAB_FILE = "adapted_vocab.txt"
ADAPTED_EMB_FILE = "adapted_embeddings.txt"

PIPELINE_STAGES = ("preprocess", "build-vocab", "analyze", "classify",
                   "club", "select", "surgery")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_run_summary(out_dir: Path, name: str, cfg: PipelineConfig | None,
                       inputs: list[str], outputs: list[str],
                       stats: dict) -> None:
    summary = {
        "subcommand": name,
        "config_hash": cfg.hash() if cfg else None,
        "config": cfg.to_dict() if cfg else None,
        "inputs": inputs,
        "outputs": outputs,
        "stats": stats,
    }
    _write_json(out_dir / f"run_{name.replace('-', '_')}.json", summary)


def _require_path(value: str | None, what: str) -> Path:
    if not value:
        raise ValueError(f"config does not provide {what}")
    path = Path(value)
    if not path.exists():
        raise FileNotFoundError(f"{what} not found: {path}")
    return path


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.paths.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_corpus_sentences(out: Path) -> list[str]:
    path = out / CORPUS_FILE
    if not path.exists():
        raise FileNotFoundError(
            f"{path} not found: run the preprocess subcommand first")
    return [line for line in path.read_text(encoding="utf-8").split("\n")
            if line]


# ---------------------------------------------------------------------------
# pipeline stages
# ---------------------------------------------------------------------------

def _stage_preprocess(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    corpus_dir = _require_path(cfg.paths.corpus_dir, "paths.corpus_dir")
    raw_docs = corpus.read_raw_documents(corpus_dir)
    docs, stats = corpus.preprocess_corpus(raw_docs, cfg.cleaning_config())
    (out / CORPUS_FILE).write_text(corpus.render_pretrain_corpus(docs),
                                   encoding="utf-8")
    _write_json(out / STATS_FILE, stats.to_dict())
    summary_stats = {
        "documents": len(docs),
        "documents_empty": sum(1 for d in docs if not d.sentences),
        "sentences": sum(len(d.sentences) for d in docs),
        **{k: v for k, v in stats.to_dict().items() if k != "warnings"},
    }
    _write_run_summary(out, "preprocess", cfg, [str(corpus_dir)],
                       [CORPUS_FILE, STATS_FILE], summary_stats)
    return summary_stats


def _stage_build_vocab(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    sentences = _read_corpus_sentences(out)
    custom = bpe.train_bpe(
        sentences,
        target_size=cfg.sizes.custom_vocab_target,
        min_pair_freq=cfg.thresholds.min_pair_freq,
    )
    bpe.write_custom_vocab(custom, out / CUSTOM_VOCAB_FILE,
                           out / CUSTOM_FREQ_FILE)
    freqs = bpe.word_frequencies(sentences)
    lines = [f"{w}\t{c}" for w, c in
             sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))]
    (out / WORD_FREQ_FILE).write_text("\n".join(lines) + "\n",
                                      encoding="utf-8")
    stats = {"vocab_size": len(custom), "distinct_words": len(freqs)}
    _write_run_summary(out, "build-vocab", cfg, [CORPUS_FILE],
                       [CUSTOM_VOCAB_FILE, CUSTOM_FREQ_FILE, WORD_FREQ_FILE],
                       stats)
    return stats


def _load_base_vocab(cfg: PipelineConfig) -> tokenizer.Vocab:
    return tokenizer.load_vocab(
        _require_path(cfg.paths.base_vocab, "paths.base_vocab"))


def _stage_analyze(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    base = _load_base_vocab(cfg)
    custom = bpe.read_custom_vocab(out / CUSTOM_FREQ_FILE)
    report = adaptation.fragmentation_report(custom, base)
    adaptation.write_fragmentation_csv(report, out / FRAGMENTATION_FILE)
    overlap = adaptation.overlap_stat(report)
    stats = {
        "n_words": len(report),
        "n_whole": sum(1 for r in report if r.is_whole),
        "n_fragmented": sum(1 for r in report if not r.is_whole),
        "overlap": overlap,
    }
    _write_json(out / ANALYSIS_FILE, stats)
    _write_run_summary(out, "analyze", cfg,
                       [CUSTOM_FREQ_FILE, str(cfg.paths.base_vocab)],
                       [FRAGMENTATION_FILE, ANALYSIS_FILE], stats)
    return stats


def _stage_classify(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    report = adaptation.read_fragmentation_csv(out / FRAGMENTATION_FILE)
    overrides = {}
    inputs = [FRAGMENTATION_FILE]
    if cfg.paths.classification_overrides:
        path = _require_path(cfg.paths.classification_overrides,
                             "paths.classification_overrides")
        overrides = adaptation.read_classification_overrides(path)
        inputs.append(str(path))
    labeled = adaptation.classify_words(report, overrides)
    adaptation.write_fragmentation_csv(labeled, out / FRAGMENTATION_FILE)
    stats = {
        "n_good": sum(1 for r in labeled
                      if r.classification == adaptation.GOOD),
        "n_bad": sum(1 for r in labeled if r.classification == adaptation.BAD),
        "n_whole": sum(1 for r in labeled
                       if r.classification == adaptation.WHOLE),
        "n_overrides": len(overrides),
    }
    _write_run_summary(out, "classify", cfg, inputs, [FRAGMENTATION_FILE],
                       stats)
    return stats


def _stage_club(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    report = adaptation.read_fragmentation_csv(out / FRAGMENTATION_FILE)
    bad_words = [r.word for r in report if r.classification == adaptation.BAD]
    overrides = {}
    inputs = [FRAGMENTATION_FILE]
    if cfg.paths.club_overrides:
        path = _require_path(cfg.paths.club_overrides, "paths.club_overrides")
        overrides = adaptation.read_club_overrides(path)
        inputs.append(str(path))
    groups = adaptation.club_roots(
        bad_words, min_prefix_len=cfg.thresholds.min_prefix_len,
        overrides=overrides)
    adaptation.write_root_groups(groups, out / GROUPS_FILE)
    stats = {
        "n_bad_words": len(bad_words),
        "n_groups": len(groups),
        "n_multiword_groups": sum(1 for g in groups if len(g.members) > 1),
    }
    _write_run_summary(out, "club", cfg, inputs, [GROUPS_FILE], stats)
    return stats


def _stage_select(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    groups = adaptation.read_root_groups(out / GROUPS_FILE)
    frequencies: dict[str, int] = {}
    for line in (out / WORD_FREQ_FILE).read_text(
            encoding="utf-8").splitlines():
        if line:
            word, count = line.split("\t")
            frequencies[word] = int(count)
    base = _load_base_vocab(cfg)
    selected = adaptation.select_candidates(
        groups, frequencies, cfg.sizes.slot_budget, base=base)
    (out / SELECTED_FILE).write_text(
        "\n".join(selected) + ("\n" if selected else ""), encoding="utf-8")
    stats = {"n_groups": len(groups), "n_selected": len(selected),
             "slot_budget": cfg.sizes.slot_budget}
    _write_run_summary(out, "select", cfg,
                       [GROUPS_FILE, WORD_FREQ_FILE,
                        str(cfg.paths.base_vocab)],
                       [SELECTED_FILE], stats)
    return stats


def _stage_surgery(cfg: PipelineConfig) -> dict:
    out = _out_dir(cfg)
    base = _load_base_vocab(cfg)
    selected = [line for line in (out / SELECTED_FILE).read_text(
        encoding="utf-8").splitlines() if line]
    adapted = adaptation.apply_vocab_surgery(base, selected)
    tokenizer.write_vocab(adapted, out / ADAPTED_VOCAB_FILE)
    stats = {
        "n_replaced": len(selected),
        "n_unused_before": len(base.unused_slot_ids()),
        "n_unused_after": len(adapted.unused_slot_ids()),
        "vocab_size": len(adapted),
    }
    _write_run_summary(out, "surgery", cfg,
                       [SELECTED_FILE, str(cfg.paths.base_vocab)],
                       [ADAPTED_VOCAB_FILE], stats)
    return stats


_STAGE_FUNCS = {
    "preprocess": _stage_preprocess,
    "build-vocab": _stage_build_vocab,
    "analyze": _stage_analyze,
    "classify": _stage_classify,
    "club": _stage_club,
    "select": _stage_select,
    "surgery": _stage_surgery,
}


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_stage(name: str, args: argparse.Namespace,
               overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=True)
    _STAGE_FUNCS[name](cfg)
    return 0


def _cmd_pipeline(args: argparse.Namespace, overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=True)
    stage_stats = {name: _STAGE_FUNCS[name](cfg) for name in PIPELINE_STAGES}
    out = _out_dir(cfg)
    _write_run_summary(out, "pipeline", cfg, [str(cfg.paths.corpus_dir)],
                       [CORPUS_FILE, CUSTOM_VOCAB_FILE, FRAGMENTATION_FILE,
                        ADAPTED_VOCAB_FILE],
                       {"stages": stage_stats})
    return 0


def _cmd_embed_surgery(args: argparse.Namespace,
                       overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=True)
    out = _out_dir(cfg)
    base = _load_base_vocab(cfg)
    adapted_path = Path(args.adapted_vocab) if args.adapted_vocab \
        else out / ADAPTED_VOCAB_FILE
    adapted = tokenizer.load_vocab(_require_path(str(adapted_path),
                                                 "adapted vocabulary"))
    emb = adaptation.read_embedding_matrix(
        _require_path(args.embeddings, "embedding matrix"))
    new_emb = adaptation.embedding_surgery(emb, base, adapted)
    adaptation.write_embedding_matrix(new_emb, out / ADAPTED_EMB_FILE)
    changed = sum(1 for b, a in zip(base.tokens, adapted.tokens) if b != a)
    _write_run_summary(out, "embed-surgery", cfg,
                       [args.embeddings, str(adapted_path),
                        str(cfg.paths.base_vocab)],
                       [ADAPTED_EMB_FILE],
                       {"rows": int(new_emb.shape[0]),
                        "dim": int(new_emb.shape[1]),
                        "rows_rebuilt": changed})
    return 0


def _cmd_qa_convert(args: argparse.Namespace,
                    overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=False)
    out = _qa_out_dir(args, cfg)
    rows = squad_data.read_qa_table_csv(
        _require_path(args.table, "QA table CSV"))
    dataset, rejections = squad_data.from_table(
        rows, version=args.version, title=args.title)
    (out / "qa_dataset.json").write_bytes(squad_data.serialize(dataset))
    _write_json(out / "qa_rejections.json",
                [r.to_dict() for r in rejections])
    _write_run_summary(out, "qa-convert", cfg, [args.table],
                       ["qa_dataset.json", "qa_rejections.json"],
                       {"rows": len(rows),
                        "paragraphs": dataset.n_paragraphs,
                        "questions": dataset.n_questions,
                        "rejections": len(rejections)})
    return 0


def _cmd_qa_validate(args: argparse.Namespace,
                     overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=False)
    out = _qa_out_dir(args, cfg)
    dataset = squad_data.parse(
        _require_path(args.dataset, "dataset").read_bytes())
    report = squad_data.validate(dataset)
    _write_json(out / "validation_report.json",
                [f.to_dict() for f in report.findings])
    _write_run_summary(out, "qa-validate", cfg, [args.dataset],
                       ["validation_report.json"],
                       {"violations": len(report.violations),
                        "warnings": len(report.warnings)})
    print(f"{len(report.violations)} violation(s), "
          f"{len(report.warnings)} warning(s)")
    return 0


def _cmd_qa_split(args: argparse.Namespace, overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=False)
    out = _qa_out_dir(args, cfg)
    dataset = squad_data.parse(
        _require_path(args.dataset, "dataset").read_bytes())
    dev_fraction = args.dev_fraction if args.dev_fraction is not None \
        else (cfg.split.dev_fraction if cfg else 0.1)
    seed = args.seed if args.seed is not None \
        else (cfg.split.seed if cfg else 0)
    train, dev = squad_data.split(dataset, dev_fraction, seed)
    (out / "train.json").write_bytes(squad_data.serialize(train))
    (out / "dev.json").write_bytes(squad_data.serialize(dev))
    _write_run_summary(out, "qa-split", cfg, [args.dataset],
                       ["train.json", "dev.json"],
                       {"dev_fraction": dev_fraction, "seed": seed,
                        "train_paragraphs": train.n_paragraphs,
                        "dev_paragraphs": dev.n_paragraphs,
                        "train_questions": train.n_questions,
                        "dev_questions": dev.n_questions})
    return 0


def _cmd_qa_merge_answers(args: argparse.Namespace,
                          overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=False)
    out = _qa_out_dir(args, cfg)
    dataset = squad_data.parse(
        _require_path(args.dataset, "dataset").read_bytes())
    extra = squad_data.read_extra_answers_csv(
        _require_path(args.answers, "extra answers CSV"))
    merged, rejections = squad_data.merge_dev_answers(dataset, extra)
    (out / "dev_merged.json").write_bytes(squad_data.serialize(merged))
    _write_json(out / "merge_rejections.json",
                [r.to_dict() for r in rejections])
    _write_run_summary(out, "qa-merge-answers", cfg,
                       [args.dataset, args.answers],
                       ["dev_merged.json", "merge_rejections.json"],
                       {"extra_answers": len(extra),
                        "rejections": len(rejections)})
    return 0


def _cmd_qa_eval(args: argparse.Namespace, overrides: dict[str, str]) -> int:
    cfg = _resolve_config(args, overrides, required=False)
    out = _qa_out_dir(args, cfg)
    dataset = squad_data.parse(
        _require_path(args.dataset, "dataset").read_bytes())
    predictions = squad_eval.read_predictions(
        _require_path(args.predictions, "predictions"))
    report = squad_eval.evaluate(dataset, predictions)
    _write_json(out / "eval_report.json", report.to_dict())
    _write_run_summary(out, "qa-eval", cfg,
                       [args.dataset, args.predictions],
                       ["eval_report.json"], report.to_dict())
    print(f"exact_match {report.exact_match:.2f} f1 {report.f1:.2f} "
          f"({report.n_evaluated} questions, "
          f"{len(report.missing_ids)} missing)")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _resolve_config(args: argparse.Namespace, overrides: dict[str, str],
                    required: bool) -> PipelineConfig | None:
    if args.config is None:
        if required:
            raise ValueError("this subcommand requires --config")
        if overrides:
            raise ValueError("dotted overrides require --config")
        return None
    cfg = load_config(args.config, overrides)
    if getattr(args, "seed", None) is not None:
        cfg.split.seed = args.seed
    if args.out:
        cfg.paths.output_dir = args.out
    return cfg


def _qa_out_dir(args: argparse.Namespace,
                cfg: PipelineConfig | None) -> Path:
    if cfg is not None:
        return _out_dir(cfg)
    out = Path(args.out or "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_dotted_overrides(extra: list[str]) -> dict[str, str]:
    overrides: dict[str, str] = {}
    i = 0
    while i < len(extra):
        arg = extra[i]
        if not (arg.startswith("--") and "." in arg):
            raise ValueError(f"unrecognized argument: {arg}")
        if "=" in arg:
            name, value = arg[2:].split("=", 1)
        else:
            if i + 1 >= len(extra):
                raise ValueError(f"override {arg} is missing a value")
            name, value = arg[2:], extra[i + 1]
            i += 1
        overrides[name] = value
        i += 1
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domainprep",
        description="Corpus cleaning, vocabulary induction and surgery, and "
                    "SQuAD-format QA dataset tooling.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON pipeline config file")
    common.add_argument("--seed", type=int, help="override split.seed")
    common.add_argument("--out", help="override the output directory")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name in PIPELINE_STAGES:
        p = sub.add_parser(name, parents=[common],
                           help=f"run the {name} stage")
        p.set_defaults(
            func=lambda a, o, _name=name: _cmd_stage(_name, a, o))

    p = sub.add_parser("pipeline", parents=[common],
                       help="run preprocess through surgery end to end")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("embed-surgery", parents=[common],
                       help="rebuild embedding rows for replaced slots")
    p.add_argument("--embeddings", required=True,
                   help="embedding matrix file for the base vocabulary")
    p.add_argument("--adapted-vocab",
                   help="adapted vocabulary (default: <out>/adapted_vocab.txt)")
    p.set_defaults(func=_cmd_embed_surgery)

    p = sub.add_parser("qa-convert", parents=[common],
                       help="build a SQuAD-format dataset from a CSV table")
    p.add_argument("--table", required=True,
                   help="CSV with header paragraph,question,answer")
    p.add_argument("--title", default="", help="article title to record")
    p.add_argument("--version", default="1.0", help="dataset version string")
    p.set_defaults(func=_cmd_qa_convert)

    p = sub.add_parser("qa-validate", parents=[common],
                       help="check dataset invariants")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON file")
    p.set_defaults(func=_cmd_qa_validate)

    p = sub.add_parser("qa-split", parents=[common],
                       help="seeded paragraph-level train/dev split")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON file")
    p.add_argument("--dev-fraction", type=float,
                   help="dev paragraph fraction (default from config)")
    p.set_defaults(func=_cmd_qa_split)

    p = sub.add_parser("qa-merge-answers", parents=[common],
                       help="append extra gold answers to dev questions")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON file")
    p.add_argument("--answers", required=True,
                   help="CSV with header qa_id,answer")
    p.set_defaults(func=_cmd_qa_merge_answers)

    p = sub.add_parser("qa-eval", parents=[common],
                       help="score predictions with exact match and F1")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON file")
    p.add_argument("--predictions", required=True,
                   help="JSON object mapping qa_id to answer text")
    p.set_defaults(func=_cmd_qa_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = _parse_dotted_overrides(extra)
        return args.func(args, overrides)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
