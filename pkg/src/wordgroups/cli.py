"""Command-line driver.

Subcommands wire the full pipeline together: ``cluster`` (corpus ->
vocabulary -> window counts -> context vectors -> distances -> dendrogram),
``nn`` (corpus -> per-occurrence inputs -> competitive network), ``elman``
(synthetic labeled corpus) and ``eval`` (score existing outputs against
gold groups).  Outputs are staged in a temporary directory and renamed into
place only on success, and every output directory contains the resolved
configuration as ``config.json``.

Exit codes: 0 success, 1 usage/config error, 2 data error.
"""

import argparse
import json
import os
import shutil
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

from wordgroups import compnet, cooccur, corpus, elman, evaluate, hcluster, metrics


class UsageError(Exception):
    """Bad flags or configuration (exit code 1)."""


class DataError(Exception):
    """Unusable input data (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@contextmanager
def _staged_dir(out):
    """Yield a temp directory that is atomically renamed to ``out`` on
    success and removed on failure."""
    out = Path(out)
    if out.exists():
        raise UsageError(f"output directory {out} already exists")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out.name}.tmp.", dir=out.parent))
    try:
        yield tmp
        os.rename(tmp, out)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise


def _check_outdir(out) -> None:
    if out is None:
        raise UsageError("no output directory given (--out)")
    if Path(out).exists():
        raise UsageError(f"output directory {out} already exists")


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_config(tmp, cfg) -> None:
    # the output path is implied by the file's own location; leaving it out
    # keeps reruns into different directories byte-identical
    _write_json(tmp / "config.json",
                {key: value for key, value in cfg.items() if key != "out"})


def _load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return cfg


def _resolve(args, defaults: dict) -> dict:
    """defaults < config file < command line, command line wins."""
    cfg = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        file_cfg = _load_config_file(config_path)
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in defaults:
        value = getattr(args, key, None)
        if key == "corpus":
            if value:
                cfg[key] = value
        elif value is not None:
            cfg[key] = value
    return cfg


def _read_corpus(paths) -> list[str]:
    if not paths:
        raise UsageError("no corpus path given")
    tokens = []
    for path in paths:
        try:
            tokens.extend(corpus.tokenize_file(path))
        except OSError as exc:
            raise DataError(f"cannot read corpus {path}: {exc}") from exc
    return tokens


def _positive(cfg, key, minimum=1):
    value = cfg[key]
    if not isinstance(value, int) or value < minimum:
        raise UsageError(f"{key} must be an integer >= {minimum}, got {value!r}")
    return value


def _prepare_vectors(cfg):
    """Shared corpus -> context-vector stage of ``cluster`` and ``nn``."""
    tokens = _read_corpus(cfg["corpus"])
    vocab = corpus.build_vocabulary(tokens)
    if len(vocab) < 2:
        raise DataError(f"corpus has only {len(vocab)} distinct words")
    targets = corpus.select_top(vocab, cfg["n_targets"])
    contexts = corpus.select_top(vocab, cfg["n_contexts"] or cfg["n_targets"])
    window = cooccur.WindowConfig(side_length=cfg["side_length"], gap=cfg["gap"])
    return tokens, vocab, targets, contexts, window


_CLUSTER_DEFAULTS = {
    "corpus": [],
    "out": None,
    "n_targets": 1000,
    "n_contexts": None,
    "side_length": 1,
    "gap": 0,
    "metric": "euclidean",
    "linkage": "average",
    "num_clusters": None,
    "gold": None,
    "seed": 0,
}


def cmd_cluster(args) -> int:
    cfg = _resolve(args, _CLUSTER_DEFAULTS)
    _positive(cfg, "n_targets")
    if cfg["n_contexts"] is not None:
        _positive(cfg, "n_contexts")
    if cfg["metric"] not in metrics.METRICS:
        raise UsageError(f"metric must be one of {metrics.METRICS}")
    if cfg["linkage"] not in hcluster.LINKAGES:
        raise UsageError(f"linkage must be one of {hcluster.LINKAGES}")
    _check_outdir(cfg["out"])
    try:
        tokens, vocab, targets, contexts, window = _prepare_vectors(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    gold = None
    if cfg["gold"]:
        try:
            gold = evaluate.load_gold_groups(cfg["gold"])
        except OSError as exc:
            raise DataError(f"cannot read gold groups: {exc}") from exc
    k = cfg["num_clusters"]
    if k is None and gold:
        k = len(gold)

    table = cooccur.count(tokens, targets, contexts, window)
    vectors = cooccur.to_vectors(table)
    usable = int((~vectors.flagged).sum())
    if usable < 2:
        raise DataError(f"only {usable} usable targets (need >= 2)")
    try:
        distances = metrics.pairwise(vectors, cfg["metric"])
        tree = hcluster.agglomerate(distances, cfg["linkage"])
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    partition = None
    if k is not None:
        if not 1 <= k <= tree.n_leaves:
            raise UsageError(f"num_clusters must be in 1..{tree.n_leaves}")
        partition = hcluster.cut(tree, k)

    with _staged_dir(cfg["out"]) as tmp:
        _write_config(tmp, cfg)
        vocab.save_tsv(tmp / "vocab.tsv")
        table.save_tsv(tmp / "counts.tsv")
        vectors.save_tsv(tmp / "vectors.tsv")
        distances.save_tsv(tmp / "distances.tsv")
        with open(tmp / "tree.nwk", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(hcluster.to_newick(tree) + "\n")
        with open(tmp / "tree.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(hcluster.to_json(tree))
        if partition is not None:
            _write_json(tmp / "partition.json",
                        {"k": partition.k, "assignment": partition.assignment})
        if gold:
            try:
                report = _partition_report(partition, gold)
            except ValueError as exc:
                raise DataError(str(exc)) from exc
            report["metric"] = cfg["metric"]
            report["linkage"] = cfg["linkage"]
            report["num_targets"] = len(targets)
            report["num_usable_targets"] = usable
            _write_json(tmp / "report.json", report)
            with open(tmp / "report.txt", "w", encoding="utf-8",
                      newline="\n") as fh:
                fh.write(_report_text(report))
    return 0


def _partition_report(partition, gold) -> dict:
    per_group, macro = evaluate.group_f1(partition, gold)
    return {
        "purity": evaluate.purity(partition, gold),
        "macro_f1": macro,
        "group_f1": per_group,
        "k": partition.k,
    }


def _report_text(report: dict) -> str:
    lines = []
    for key, value in sorted(report.items()):
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {name}: {val}" for name, val in sorted(value.items()))
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


_NN_DEFAULTS = {
    "corpus": [],
    "out": None,
    "n_targets": 1000,
    "n_contexts": None,
    "side_length": 1,
    "gap": 0,
    "num_units": 2,
    "learning_rate_initial": 0.3,
    "learning_rate_final": 0.01,
    "loser_rate": 0.1,
    "epochs": 3,
    "seed": 0,
    "labels": None,
}


def cmd_nn(args) -> int:
    cfg = _resolve(args, _NN_DEFAULTS)
    _positive(cfg, "n_targets")
    if cfg["n_contexts"] is not None:
        _positive(cfg, "n_contexts")
    try:
        net_config = compnet.NetworkConfig(
            num_units=cfg["num_units"],
            learning_rate_initial=cfg["learning_rate_initial"],
            learning_rate_final=cfg["learning_rate_final"],
            loser_rate=cfg["loser_rate"],
            epochs=cfg["epochs"],
            seed=cfg["seed"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _check_outdir(cfg["out"])
    try:
        tokens, vocab, targets, contexts, window = _prepare_vectors(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    gold_labels = None
    if cfg["labels"]:
        try:
            pairs = elman.load_labels(cfg["labels"])
        except OSError as exc:
            raise DataError(f"cannot read labels: {exc}") from exc
        if len(pairs) != len(tokens):
            raise DataError(f"labels file has {len(pairs)} entries for "
                            f"{len(tokens)} corpus tokens")
        gold_labels = [label for _, label in pairs]

    batch = compnet.encode_occurrences(tokens, targets, contexts, window)
    if len(batch) < net_config.num_units:
        raise DataError(f"only {len(batch)} occurrences for "
                        f"{net_config.num_units} units")
    net = compnet.init(net_config, batch.dim, batch)
    log = compnet.train(net, batch)
    unit_ids = compnet.classify(net, batch)

    with _staged_dir(cfg["out"]) as tmp:
        _write_config(tmp, cfg)
        vocab.save_tsv(tmp / "vocab.tsv")
        log.save_tsv(tmp / "training_log.tsv")
        for epoch, weights in enumerate(log.snapshots):
            epoch_net = compnet.CompetitiveNetwork(
                config=net_config, weights=weights,
                step=(epoch + 1) * len(batch))
            compnet.save_snapshot(epoch_net,
                                  tmp / f"snapshot_epoch{epoch:03d}.json")
        compnet.save_snapshot(net, tmp / "snapshot.json")
        with open(tmp / "labels.tsv", "w", encoding="utf-8",
                  newline="\n") as fh:
            for position, word, unit in zip(batch.positions, batch.words,
                                            unit_ids):
                fh.write(f"{position}\t{word}\t{unit}\n")
        if gold_labels is not None:
            occurrence_gold = [gold_labels[p] for p in batch.positions]
            accuracy = evaluate.category_accuracy(unit_ids, occurrence_gold)
            mapping = evaluate.majority_map(unit_ids, occurrence_gold)
            report = {
                "category_accuracy": accuracy,
                "num_occurrences": len(batch),
                "unit_majority": {str(u): c for u, c in sorted(mapping.items())},
            }
            _write_json(tmp / "report.json", report)
            with open(tmp / "report.txt", "w", encoding="utf-8",
                      newline="\n") as fh:
                fh.write(_report_text(report))
    return 0


def cmd_elman(args) -> int:
    if args.num_sentences is None or args.num_sentences < 1:
        raise UsageError("--num-sentences must be >= 1")
    _check_outdir(args.out)
    grammar = elman.default_grammar()
    labeled = elman.generate(grammar, args.num_sentences, seed=args.seed,
                             boundary=args.boundary)
    cfg = {
        "num_sentences": args.num_sentences,
        "seed": args.seed,
        "boundary": args.boundary,
        "out": args.out,
    }
    with _staged_dir(args.out) as tmp:
        _write_config(tmp, cfg)
        labeled.save_corpus(tmp / "corpus.txt")
        labeled.save_labels(tmp / "labels.tsv")
    return 0


def _load_partition(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return hcluster.Partition(dict(doc["assignment"]), int(doc["k"]))
    except OSError as exc:
        raise DataError(f"cannot read partition: {exc}") from exc
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"bad partition file: {exc}") from exc


def _load_unit_labels(path):
    positions, units = [], []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                position, _word, unit = line.rstrip("\n").split("\t")
                positions.append(int(position))
                units.append(int(unit))
    except OSError as exc:
        raise DataError(f"cannot read unit labels: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"bad unit-labels file: {exc}") from exc
    return positions, units


def cmd_eval(args) -> int:
    partition_mode = args.partition or args.gold
    accuracy_mode = args.unit_labels or args.category_labels
    if partition_mode and accuracy_mode:
        raise UsageError("choose either --partition/--gold or "
                         "--unit-labels/--category-labels")
    if partition_mode:
        if not (args.partition and args.gold):
            raise UsageError("--partition and --gold are both required")
        partition = _load_partition(args.partition)
        try:
            gold = evaluate.load_gold_groups(args.gold)
        except OSError as exc:
            raise DataError(f"cannot read gold groups: {exc}") from exc
        try:
            report = _partition_report(partition, gold)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
    elif accuracy_mode:
        if not (args.unit_labels and args.category_labels):
            raise UsageError("--unit-labels and --category-labels are both "
                             "required")
        positions, units = _load_unit_labels(args.unit_labels)
        try:
            pairs = elman.load_labels(args.category_labels)
        except OSError as exc:
            raise DataError(f"cannot read category labels: {exc}") from exc
        try:
            gold = [pairs[p][1] for p in positions]
        except IndexError as exc:
            raise DataError("unit-labels positions exceed category-labels "
                            "length") from exc
        report = {
            "category_accuracy": evaluate.category_accuracy(units, gold),
            "num_occurrences": len(units),
        }
    else:
        raise UsageError("nothing to evaluate; see --help")
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="wordgroups",
                     description="Group words by statistical context.")
    sub = parser.add_subparsers(dest="command", required=True)

    cluster = sub.add_parser("cluster", help="context vectors -> dendrogram")
    cluster.add_argument("corpus", nargs="*", help="plain-text corpus file(s)")
    cluster.add_argument("--config", help="JSON config file (flat keys)")
    cluster.add_argument("--out", help="output directory")
    cluster.add_argument("--n-targets", type=int, dest="n_targets")
    cluster.add_argument("--n-contexts", type=int, dest="n_contexts")
    cluster.add_argument("--side-length", type=int, dest="side_length")
    cluster.add_argument("--gap", type=int)
    cluster.add_argument("--metric", choices=metrics.METRICS)
    cluster.add_argument("--linkage", choices=hcluster.LINKAGES)
    cluster.add_argument("--num-clusters", type=int, dest="num_clusters")
    cluster.add_argument("--gold", help="gold groups JSON for the report")
    cluster.add_argument("--seed", type=int)
    cluster.set_defaults(func=cmd_cluster)

    nn = sub.add_parser("nn", help="train the competitive network")
    nn.add_argument("corpus", nargs="*", help="plain-text corpus file(s)")
    nn.add_argument("--config", help="JSON config file (flat keys)")
    nn.add_argument("--out", help="output directory")
    nn.add_argument("--n-targets", type=int, dest="n_targets")
    nn.add_argument("--n-contexts", type=int, dest="n_contexts")
    nn.add_argument("--side-length", type=int, dest="side_length")
    nn.add_argument("--gap", type=int)
    nn.add_argument("--num-units", type=int, dest="num_units")
    nn.add_argument("--learning-rate-initial", type=float,
                    dest="learning_rate_initial")
    nn.add_argument("--learning-rate-final", type=float,
                    dest="learning_rate_final")
    nn.add_argument("--loser-rate", type=float, dest="loser_rate")
    nn.add_argument("--epochs", type=int)
    nn.add_argument("--seed", type=int)
    nn.add_argument("--labels", help="per-token category TSV for accuracy")
    nn.set_defaults(func=cmd_nn)

    gen = sub.add_parser("elman", help="generate the synthetic corpus")
    gen.add_argument("--num-sentences", type=int, dest="num_sentences")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--boundary", help="optional sentence-boundary token")
    gen.add_argument("--out", help="output directory")
    gen.set_defaults(func=cmd_elman)

    ev = sub.add_parser("eval", help="score existing outputs")
    ev.add_argument("--partition", help="partition.json from cluster")
    ev.add_argument("--gold", help="gold groups JSON")
    ev.add_argument("--unit-labels", dest="unit_labels",
                    help="labels.tsv from nn")
    ev.add_argument("--category-labels", dest="category_labels",
                    help="per-token category TSV")
    ev.add_argument("--out", help="optional report JSON path")
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wordgroups: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"wordgroups: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
