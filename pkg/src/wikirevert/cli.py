"""Command-line driver wiring the pipeline end to end.

Subcommands mirror the pipeline stages: `preprocess` (events -> daily records
+ vocabulary), `analyze` (correlation screening + importance-based feature
selection), `balance` (synthetic revert generation + chronological merge),
`stream` (prequential evaluation of an online model), and `explain`
(natural-language and DOT explanations from a stream checkpoint).

Configuration comes from an optional JSON file; command-line flags win over
file values. All randomness is derived from the single --seed, so rerunning
any stage with identical inputs reproduces its artifacts byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from datetime import date

import numpy as np

from .aggregate import aggregate_daily
from .bayes import IncrementalNaiveBayes
from .ensemble import OnlineBaggingForest, OnlineForestConfig
from .explain import FeatureSpace, decision_path, export_dot, render_nl, shortest_ensemble_path
from .hoeffding import HoeffdingConfig, HoeffdingTree
from .offline import select_features, selection_subset, spearman
from .prequential import prequential_run
from .profiles import ProfileStore
from .records import (
    DENSE_FEATURE_NAMES,
    N_DENSE,
    load_daily_records,
    load_events,
    save_daily_records,
    write_daily_csv,
)
from .seeds import derive_seed
from .synthesis import SynthConfig, fidelity_report, generate_reverts, merge_balance, write_fidelity_csv
from .textfeatures import (
    Lexicon,
    NgramConfig,
    NgramVocabulary,
    WordList,
    count_wordlist,
    fit_ngram_vocabulary,
    normalize_text,
    polarity,
)
from .trees import feature_importance, train_forest


class FatalError(Exception):
    """Pipeline cannot continue; message goes to stderr, exit status 1."""


@dataclass
class PipelineConfig:
    seed: int = 0
    out_dir: str = "out"
    quiet: bool = False
    # inputs
    events: str | None = None
    stopwords: str | None = None
    bad_words: str | None = None
    reverted_words: str | None = None
    lexicon: str | None = None
    daily: str | None = None
    vocabulary: str | None = None
    balanced: str | None = None
    checkpoint: str | None = None
    # n-gram fitting
    word_range: tuple[int, int] = (1, 4)
    char_range: tuple[int, int] = (1, 4)
    min_df: float = 0.001
    max_df: float = 0.7
    max_features: int | None = None
    # synthesis
    synth_count: int = 40000
    synth_k: int = 2
    date_start: str | None = None
    date_end: str | None = None
    # feature selection
    selection_estimators: int = 500
    selection_max_depth: int | None = None
    selection_threshold: float | None = None
    nonrevert_cap: int = 4000
    selection_include_ngrams: bool = True
    # streaming
    model: str = "arf"
    warmup: int = 1
    eval_window: str = "all"
    n_trees: int = 10
    poisson_lambda: float = 6.0
    grace_period: int = 200
    split_confidence: float = 1e-7
    tie_threshold: float = 0.05
    write_checkpoint: bool = False

    def path(self, name: str, default_basename: str) -> str:
        override = getattr(self, name)
        return override if override else os.path.join(self.out_dir, default_basename)

    def say(self, message: str) -> None:
        if not self.quiet:
            print(message)


_SECTIONS = {
    "paths": (
        "events", "stopwords", "bad_words", "reverted_words", "lexicon",
        "daily", "vocabulary", "balanced", "checkpoint",
    ),
    "ngrams": ("word_range", "char_range", "min_df", "max_df", "max_features"),
    "synth": ("synth_count", "synth_k", "date_start", "date_end"),
    "selection": (
        "selection_estimators", "selection_max_depth", "selection_threshold",
        "nonrevert_cap", "selection_include_ngrams",
    ),
    "stream": (
        "model", "warmup", "eval_window", "n_trees", "poisson_lambda",
        "grace_period", "split_confidence", "tie_threshold", "write_checkpoint",
    ),
}


def load_config(path: str) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FatalError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FatalError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = PipelineConfig()
    known_top = {"seed", "out_dir", "quiet"}
    for key, value in raw.items():
        if key in known_top:
            setattr(cfg, key, value)
        elif key in _SECTIONS:
            for sub_key, sub_value in value.items():
                if sub_key not in _SECTIONS[key]:
                    raise FatalError(f"config: unknown key {key}.{sub_key}")
                if sub_key in ("word_range", "char_range") and sub_value is not None:
                    sub_value = tuple(sub_value)
                setattr(cfg, sub_key, sub_value)
        else:
            raise FatalError(f"config: unknown section '{key}'")
    return cfg


def _ensure_out_dir(cfg: PipelineConfig) -> None:
    os.makedirs(cfg.out_dir, exist_ok=True)


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_wordlist(path: str | None) -> WordList | None:
    if path is None:
        return None
    try:
        return WordList.from_file(path)
    except OSError as exc:
        raise FatalError(f"cannot read word list {path}: {exc}") from exc


# -- preprocess ---------------------------------------------------------------

def cmd_preprocess(cfg: PipelineConfig) -> int:
    if cfg.events is None:
        raise FatalError("preprocess needs an events file (--events or paths.events)")
    try:
        events, errors = load_events(cfg.events)
    except OSError as exc:
        raise FatalError(f"cannot read events {cfg.events}: {exc}") from exc
    if errors:
        cfg.say(f"skipped {len(errors)} malformed record(s):")
        for err in errors[:5]:
            cfg.say(f"  {err}")
        if len(errors) > 5:
            cfg.say(f"  ... and {len(errors) - 5} more")

    _ensure_out_dir(cfg)
    daily_path = cfg.path("daily", "daily.jsonl")
    csv_path = os.path.splitext(daily_path)[0] + ".csv"
    vocab_path = cfg.path("vocabulary", "vocabulary.json")

    if not events:
        save_daily_records([], daily_path)
        with open(csv_path, "w", encoding="utf-8") as fh:
            write_daily_csv([], fh)
        cfg.say("warning: no valid events; wrote empty outputs and no vocabulary")
        return 0

    stopwords = _load_wordlist(cfg.stopwords)
    bad_words = _load_wordlist(cfg.bad_words)
    reverted_words = _load_wordlist(cfg.reverted_words)
    lexicon = Lexicon.from_file(cfg.lexicon) if cfg.lexicon else None
    if bad_words or reverted_words or lexicon:
        # Recompute the text-derived counts/polarities from the shipped texts
        # instead of trusting the collector's values.
        for event in events:
            inserted = normalize_text(event.inserted_text, stopwords)
            deleted = normalize_text(event.deleted_text, stopwords)
            if bad_words:
                event.n_bad_words = count_wordlist(inserted, bad_words)
            if reverted_words:
                event.n_reverted_words = count_wordlist(inserted, reverted_words)
            if lexicon:
                event.polarity_inserted = polarity(inserted, lexicon)
                event.polarity_deleted = polarity(deleted, lexicon)

    documents = []
    for event in events:
        documents.append(normalize_text(event.inserted_text, stopwords))
        documents.append(normalize_text(event.deleted_text, stopwords))
    vocab = fit_ngram_vocabulary(
        documents,
        NgramConfig(
            word_range=cfg.word_range,
            char_range=cfg.char_range,
            min_df=cfg.min_df,
            max_df=cfg.max_df,
            max_features=cfg.max_features,
        ),
    )
    vocab.save(vocab_path)

    records = aggregate_daily(events, vocab, stopwords)
    save_daily_records(records, daily_path)
    with open(csv_path, "w", encoding="utf-8") as fh:
        write_daily_csv(records, fh)

    n_reverts = sum(r.revert_label for r in records)
    cfg.say(
        f"preprocess: {len(events)} events -> {len(records)} daily records "
        f"({n_reverts} revert-labeled); vocabulary "
        f"{len(vocab.word_ngrams)} word + {len(vocab.char_ngrams)} char n-grams"
    )
    cfg.say(f"wrote {daily_path}, {csv_path}, {vocab_path}")
    return 0


# -- analyze ---------------------------------------------------------------------

def _load_daily(cfg: PipelineConfig, which: str = "daily") -> list:
    path = cfg.path(which, f"{which}.jsonl")
    try:
        return load_daily_records(path)
    except OSError as exc:
        raise FatalError(f"cannot read {path}: {exc}") from exc


def _load_vocab_width(cfg: PipelineConfig, records) -> tuple[NgramVocabulary | None, int]:
    vocab_path = cfg.path("vocabulary", "vocabulary.json")
    if os.path.exists(vocab_path):
        vocab = NgramVocabulary.load(vocab_path)
        return vocab, vocab.width
    width = 0
    for record in records:
        for counts in (record.inserted_ngrams, record.deleted_ngrams):
            if counts:
                width = max(width, max(counts) + 1)
    return None, width


def _design_matrix(records, width: int, include_ngrams: bool) -> np.ndarray:
    n_cols = N_DENSE + (2 * width if include_ngrams else 0)
    X = np.zeros((len(records), n_cols))
    for i, record in enumerate(records):
        X[i, :N_DENSE] = record.dense_vector()
        if include_ngrams:
            for key, value in record.inserted_ngrams.items():
                if key < width:
                    X[i, N_DENSE + key] = value
            for key, value in record.deleted_ngrams.items():
                if key < width:
                    X[i, N_DENSE + width + key] = value
    return X


def cmd_analyze(cfg: PipelineConfig) -> int:
    records = _load_daily(cfg)
    if not records:
        raise FatalError("no daily records to analyze")
    _ensure_out_dir(cfg)
    vocab, width = _load_vocab_width(cfg, records)

    y = np.array([int(r.revert_label) for r in records])
    dense = np.stack([r.dense_vector() for r in records])

    spearman_path = os.path.join(cfg.out_dir, "spearman.csv")
    n_constant = 0
    with open(spearman_path, "w", encoding="utf-8") as fh:
        fh.write("feature,coefficient,n\n")
        for f, name in enumerate(DENSE_FEATURE_NAMES):
            try:
                result = spearman(dense[:, f], y.astype(float))
                fh.write(f'"{name}",{result.coefficient!r},{result.n}\n')
            except ValueError:
                n_constant += 1
                fh.write(f'"{name}",nan,{len(y)}\n')
    if n_constant:
        cfg.say(f"analyze: {n_constant} constant feature(s) have no defined correlation")

    X = _design_matrix(records, width, cfg.selection_include_ngrams)
    subset = selection_subset(y, cfg.nonrevert_cap, seed=cfg.seed)
    forest = train_forest(
        X[subset],
        y[subset],
        n_estimators=cfg.selection_estimators,
        seed=derive_seed(cfg.seed, "selection-forest"),
        max_depth=cfg.selection_max_depth,
    )
    importances = feature_importance(forest)
    mask = select_features(importances, cfg.selection_threshold)

    space = FeatureSpace(vocab)
    names = [space.name(i) for i in range(X.shape[1])]
    threshold = (
        cfg.selection_threshold
        if cfg.selection_threshold is not None
        else float(importances.mean())
    )
    mask_path = os.path.join(cfg.out_dir, "feature_mask.json")
    _write_json(
        mask_path,
        {
            "format": "wikirevert-feature-mask/1",
            "threshold": threshold,
            "n_selected": int(mask.sum()),
            "features": [
                {"name": names[i], "importance": float(importances[i]), "selected": bool(mask[i])}
                for i in range(len(names))
            ],
        },
    )
    cfg.say(f"analyze: kept {int(mask.sum())}/{len(mask)} features (threshold {threshold:.6g})")
    cfg.say(f"wrote {spearman_path}, {mask_path}")
    return 0


# -- balance ---------------------------------------------------------------------

def cmd_balance(cfg: PipelineConfig) -> int:
    records = _load_daily(cfg)
    reverts = [r for r in records if r.revert_label]
    if not reverts:
        raise FatalError("no revert-labeled records: nothing to synthesize from")
    _ensure_out_dir(cfg)
    balanced_path = cfg.path("balanced", "balanced.jsonl")
    fidelity_path = os.path.join(cfg.out_dir, "fidelity.csv")

    if cfg.synth_count == 0:
        merged = merge_balance(records, [])
        save_daily_records(merged, balanced_path)
        cfg.say(f"balance: no synthesis requested; wrote sorted copy ({len(merged)} records)")
        cfg.say(f"wrote {balanced_path}")
        return 0

    date_range = None
    if cfg.date_start and cfg.date_end:
        date_range = (date.fromisoformat(cfg.date_start), date.fromisoformat(cfg.date_end))
    notes: list[str] = []
    synthetic = generate_reverts(
        reverts,
        SynthConfig(
            count=cfg.synth_count,
            seed=derive_seed(cfg.seed, "synth"),
            k=cfg.synth_k,
            date_range=date_range,
        ),
        notes=notes,
    )
    for note in notes:
        cfg.say(f"balance: {note}")
    merged = merge_balance(records, synthetic)
    save_daily_records(merged, balanced_path)
    with open(fidelity_path, "w", encoding="utf-8") as fh:
        write_fidelity_csv(fidelity_report(reverts, synthetic), fh)

    n_revert = sum(r.revert_label for r in merged)
    cfg.say(
        f"balance: {len(records)} original + {len(synthetic)} synthetic = "
        f"{len(merged)} records ({n_revert} revert / {len(merged) - n_revert} non-revert)"
    )
    cfg.say(f"wrote {balanced_path}, {fidelity_path}")
    return 0


# -- stream ---------------------------------------------------------------------

def _build_model(cfg: PipelineConfig):
    tree_cfg = HoeffdingConfig(
        grace_period=cfg.grace_period,
        split_confidence=cfg.split_confidence,
        tie_threshold=cfg.tie_threshold,
    )
    if cfg.model == "nb":
        return IncrementalNaiveBayes(dense_dim=N_DENSE)
    if cfg.model == "ht":
        return HoeffdingTree(tree_cfg)
    if cfg.model == "arf":
        return OnlineBaggingForest(
            OnlineForestConfig(
                n_trees=cfg.n_trees,
                poisson_lambda=cfg.poisson_lambda,
                seed=derive_seed(cfg.seed, "forest"),
                tree=tree_cfg,
            )
        )
    raise FatalError(f"unknown model '{cfg.model}' (expected nb, ht, or arf)")


_METRICS_CSV_HEADER = (
    "model,eval_window,warmup,total,tn,fp,fn,tp,"
    "accuracy,macro_precision,macro_recall,macro_f1,"
    "micro_precision,micro_recall,micro_f1\n"
)


def cmd_stream(cfg: PipelineConfig) -> int:
    records = _load_daily(cfg, "balanced")
    if not records:
        raise FatalError("balanced stream is empty")
    _, width = _load_vocab_width(cfg, records)
    model = _build_model(cfg)
    store = ProfileStore(ngram_width=width)
    try:
        report = prequential_run(
            records, model, store, warmup=cfg.warmup, eval_window=cfg.eval_window
        )
    except ValueError as exc:
        raise FatalError(str(exc)) from exc

    _ensure_out_dir(cfg)
    metrics_path = os.path.join(cfg.out_dir, "metrics.json")
    _write_json(
        metrics_path,
        {
            "format": "wikirevert-metrics/1",
            "model": cfg.model,
            "eval_window": cfg.eval_window,
            "warmup": cfg.warmup,
            **report.to_dict(),
        },
    )
    csv_path = os.path.join(cfg.out_dir, "metrics.csv")
    c = report.confusion.reshape(-1)
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(_METRICS_CSV_HEADER)
        fh.write(
            f"{cfg.model},{cfg.eval_window},{cfg.warmup},{report.total},"
            f"{c[0]},{c[1]},{c[2]},{c[3]},"
            f"{report.accuracy!r},{report.macro_precision!r},{report.macro_recall!r},"
            f"{report.macro_f1!r},{report.micro_precision!r},{report.micro_recall!r},"
            f"{report.micro_f1!r}\n"
        )

    if report.empty:
        cfg.say("stream: evaluation window scored no records (report flagged empty)")
    else:
        cfg.say(
            f"stream[{cfg.model}] window={cfg.eval_window}: "
            f"accuracy {report.accuracy:.4f}, macro P/R/F "
            f"{report.macro_precision:.4f}/{report.macro_recall:.4f}/{report.macro_f1:.4f} "
            f"over {report.total} scored records"
        )
    cfg.say(f"stream: wall clock {report.wall_seconds:.2f}s over {len(records)} records")
    cfg.say(f"wrote {metrics_path}, {csv_path}")

    if cfg.write_checkpoint:
        if not hasattr(model, "to_state"):
            raise FatalError(f"model '{cfg.model}' does not support checkpointing")
        checkpoint_path = cfg.path("checkpoint", "checkpoint.json")
        _write_json(
            checkpoint_path,
            {"format": "wikirevert-checkpoint/1", "model": cfg.model, "state": model.to_state()},
        )
        cfg.say(f"wrote {checkpoint_path}")
    return 0


# -- explain ---------------------------------------------------------------------

def cmd_explain(cfg: PipelineConfig, samples: list[int]) -> int:
    checkpoint_path = cfg.path("checkpoint", "checkpoint.json")
    try:
        with open(checkpoint_path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise FatalError(f"cannot read checkpoint {checkpoint_path}: {exc}") from exc
    if payload.get("format") != "wikirevert-checkpoint/1":
        raise FatalError("unrecognized checkpoint format")
    kind = payload["model"]
    if kind == "ht":
        model = HoeffdingTree.from_state(payload["state"])
    elif kind == "arf":
        model = OnlineBaggingForest.from_state(payload["state"])
    else:
        raise FatalError(f"model '{kind}' has no decision paths to explain")

    records = _load_daily(cfg, "balanced")
    vocab, width = _load_vocab_width(cfg, records)
    space = FeatureSpace(vocab)

    bad = [s for s in samples if s < 0 or s >= len(records)]
    if bad:
        raise FatalError(f"unknown sample id(s) {bad}: stream has {len(records)} records")

    store = ProfileStore(ngram_width=width)
    wanted: dict[int, np.ndarray] = {}
    targets = set(samples)
    last = max(samples)
    for i, record in enumerate(records):
        store.update(record)
        if i in targets:
            wanted[i] = store.vector(record.editor_id)
        if i >= last:
            break

    _ensure_out_dir(cfg)
    blocks = []
    for sample_id in samples:
        x = wanted[sample_id]
        if kind == "arf":
            explanation = shortest_ensemble_path(model, x, space, sample_id=sample_id)
            source_tree = model.trees[explanation.tree_id].as_tree_node()
        else:
            source_tree = model.as_tree_node()
            explanation = decision_path(source_tree, x, space, sample_id=sample_id)
        blocks.append(render_nl(explanation))
        dot_path = os.path.join(cfg.out_dir, f"explanation_{sample_id}.dot")
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(export_dot(source_tree, highlight=explanation, feature_space=space))
        cfg.say(f"wrote {dot_path}")

    text_path = os.path.join(cfg.out_dir, "explanations.txt")
    with open(text_path, "w", encoding="utf-8") as fh:
        fh.write("\n\n".join(blocks) + "\n")
    cfg.say(f"wrote {text_path}")
    return 0


# -- argument parsing ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikirevert",
        description="Classify wiki review streams as revert/non-revert, with explanations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--seed", type=int, help="master seed for every stochastic stage")
        p.add_argument("--out-dir", help="artifact directory (default: out)")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p = sub.add_parser("preprocess", help="parse events, fit vocabulary, aggregate daily records")
    common(p)
    p.add_argument("--events", help="JSON-lines review events file")

    p = sub.add_parser("analyze", help="correlation report and importance-based feature selection")
    common(p)

    p = sub.add_parser("balance", help="generate synthetic reverts and merge chronologically")
    common(p)
    p.add_argument("--count", type=int, help="number of synthetic revert records")

    p = sub.add_parser("stream", help="prequential test-then-train evaluation")
    common(p)
    p.add_argument("--model", choices=("nb", "ht", "arf"), help="online classifier")
    p.add_argument("--eval-window", choices=("all", "last90", "last10"), help="scored span")
    p.add_argument("--warmup", type=int, help="leading records never scored")
    p.add_argument("--checkpoint", action="store_true", help="persist the trained model")

    p = sub.add_parser("explain", help="explain checkpointed predictions for selected samples")
    common(p)
    p.add_argument("--sample", type=int, action="append", required=True,
                   help="stream index to explain (repeatable)")
    return parser


def _merge_flags(cfg: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out_dir is not None:
        cfg.out_dir = args.out_dir
    if args.quiet:
        cfg.quiet = True
    if getattr(args, "events", None) is not None:
        cfg.events = args.events
    if getattr(args, "count", None) is not None:
        cfg.synth_count = args.count
    if getattr(args, "model", None) is not None:
        cfg.model = args.model
    if getattr(args, "eval_window", None) is not None:
        cfg.eval_window = args.eval_window
    if getattr(args, "warmup", None) is not None:
        cfg.warmup = args.warmup
    if getattr(args, "checkpoint", False):
        cfg.write_checkpoint = True
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else PipelineConfig()
        cfg = _merge_flags(cfg, args)
        if args.command == "preprocess":
            return cmd_preprocess(cfg)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "balance":
            return cmd_balance(cfg)
        if args.command == "stream":
            return cmd_stream(cfg)
        if args.command == "explain":
            return cmd_explain(cfg, args.sample)
        raise FatalError(f"unknown command {args.command}")
    except FatalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
