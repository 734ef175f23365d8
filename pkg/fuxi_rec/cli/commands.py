# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Implementations of the ``fuxi-rec`` subcommands.

Every handler takes the parsed arguments and returns the process exit code. Handlers
that write files do so under a run directory holding a ``manifest.json``.
"""

import argparse
import contextlib
import datetime
import json
import logging
import os
import sys
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .manifest import MANIFEST_NAME, RunManifest, write_json_atomic
from .run_config import apply_overrides, load_run_config, output_root
from ..algorithms.ablation import ablation_matrix, run_ablation, valid_map_ablations
from ..algorithms.evaluation import evaluate
from ..algorithms.trainer import Trainer, TrainerConfig
from ..benchmarks.suites import (
    bench_bias_construction,
    bench_block,
    bench_cost_coefficients,
    cost_table_markdown,
    speedup_ratios,
)
from ..benchmarks.timing import (
    BenchConfig,
    machine_fingerprint,
    markdown_summary,
    write_bench_csv,
    write_markdown_summary,
)
from ..bias.bias_functions import BiasFunctionKind, BiasFunctionSpec, valid_kinds
from ..bias.curves import (
    curve_samples,
    export_bias_curves,
    is_monotone_decreasing,
    render_curves,
    write_curve_csv,
)
from ..datasets.movielens import parse_movielens
from ..datasets.sequences import SplitDataset, build_sequences
from ..datasets.split_io import load_split, save_split, sidecar_path
from ..datasets.synthetic import synthetic_cyclic
from ..exceptions import ConfigurationError
from ..neural_networks.model_config import ModelConfig
from ..neural_networks.parameter_count import describe
from ..neural_networks.sequential_recommender import SequentialRecommender
from ..utils.hashing import config_hash, file_hash

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = "small"
MONOTONE_KINDS = ("pow", "exp")
DEFAULT_MAX_DELTA = 365.0
BENCH_SUITES = ("bias", "block", "costs")


def parse_int_list(text: str) -> List[int]:
    """``"128,512,2048"`` to ``[128, 512, 2048]``; argparse type."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as ex:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from ex
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def parse_name_list(text: str) -> List[str]:
    """``"pow,exp"`` to ``["pow", "exp"]``; argparse type."""
    values = [part.strip() for part in text.split(",") if part.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected at least one name")
    return values


def _require_file(path: str, what: str) -> str:
    if not os.path.isfile(path):
        raise ConfigurationError(f"{what} not found: {path}")
    return path


def _run_dir(args: argparse.Namespace) -> str:
    if getattr(args, "run_dir", None):
        return args.run_dir
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%S")
    return os.path.join(output_root(args.output_root), args.command, f"{stamp}-{os.getpid()}")


@contextlib.contextmanager
def _tracked_run(
    args: argparse.Namespace, config: Dict[str, Any], seed: Optional[int] = None
) -> Iterator[Tuple[str, RunManifest]]:
    run_dir = _run_dir(args)
    os.makedirs(run_dir, exist_ok=True)
    manifest = RunManifest(args.command, config, seed=seed, argv=list(args.argv or []))
    manifest.write(os.path.join(run_dir, MANIFEST_NAME))
    try:
        yield run_dir, manifest
    except BaseException:
        manifest.finalize("failed")
        raise
    manifest.finalize("succeeded")


def _model_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "max_len": getattr(args, "max_len", None),
        "embed_dim": getattr(args, "embed_dim", None),
        "num_blocks": getattr(args, "num_blocks", None),
        "num_negatives": getattr(args, "num_negatives", None),
        "bias_function": getattr(args, "bias_function", None),
        "mixer.mode": getattr(args, "mixer_mode", None),
        "mixer.use_qk_map": True if getattr(args, "mixer_mode", None) == "qk_baseline" else None,
        "learning_rate": getattr(args, "learning_rate", None),
        "seed": getattr(args, "seed", None),
    }


def _trainer_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "batch_size": getattr(args, "batch_size", None),
        "max_epochs": getattr(args, "max_epochs", None),
        "patience": getattr(args, "patience", None),
        "num_workers": getattr(args, "num_workers", None),
        "cutoffs": getattr(args, "cutoffs", None),
        "seed": getattr(args, "seed", None),
    }


def _run_config(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    config = load_run_config(args.config or DEFAULT_CONFIG)
    config = apply_overrides(config, "model", _model_overrides(args))
    return apply_overrides(config, "trainer", _trainer_overrides(args))


def _load_dataset(
    args: argparse.Namespace, config: Dict[str, Dict[str, Any]]
) -> Tuple[SplitDataset, str]:
    max_len = config["model"].get("max_len")
    if getattr(args, "data", None):
        path = _require_file(args.data, "split file")
        return load_split(path, max_len=max_len), file_hash(path)
    synthetic = config["data"].get("synthetic")
    if getattr(args, "synthetic", False) or synthetic is not None:
        params = dict(synthetic or {})
        users = synthetic_cyclic(**params)
        seq_len = params.get("seq_len", 20)
        dataset = build_sequences(users, max_len or seq_len)
        return dataset, "synthetic:" + config_hash(params)
    raise ConfigurationError("no dataset: pass --data SPLIT_FILE or --synthetic")


def _model_config(
    config: Dict[str, Dict[str, Any]], dataset: Optional[SplitDataset] = None
) -> ModelConfig:
    values = dict(config["model"])
    if dataset is not None:
        values["item_count"] = dataset.item_count
        values["max_len"] = dataset.max_len
    if "item_count" not in values:
        raise ConfigurationError("model.item_count is unknown; pass --data or set it in the config")
    return ModelConfig.from_dict(values)


def cmd_prepare(args: argparse.Namespace) -> int:
    """Parse an interaction log and write the leave-one-out split file and its sidecar."""
    config = load_run_config(args.config)
    data = config["data"]
    max_len = args.max_len or data.get("max_len") or 200
    min_interactions = args.min_interactions or data.get("min_interactions") or 5
    if args.synthetic:
        params = dict(data.get("synthetic") or {})
        source: Dict[str, Any] = {"synthetic": params}
        users = synthetic_cyclic(**params)
    else:
        if not args.input:
            raise ConfigurationError("prepare needs --input or --synthetic")
        _require_file(args.input, "input file")
        source = {"input": os.path.basename(args.input), "input_hash": file_hash(args.input)}
        users = parse_movielens(args.input, min_interactions=min_interactions)
    settings = dict(source, max_len=max_len, min_interactions=min_interactions)
    with _tracked_run(args, {"data": settings}) as (run_dir, manifest):
        out = args.output or os.path.join(run_dir, "split.fxb")
        sidecar = save_split(out, build_sequences(users, max_len), settings)
        manifest.dataset_hash = sidecar["dataset_hash"]
        manifest.add_artifact(out)
        manifest.add_artifact(sidecar_path(out))
        print(
            f"{out}: {sidecar['user_count']} users, {sidecar['item_count']} items, "
            f"dataset hash {sidecar['dataset_hash']}"
        )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    """Train to early stopping, or print the parameter audit with ``--dry-run``."""
    config = _run_config(args)
    if args.dry_run:
        dataset = _load_dataset(args, config)[0] if args.data or args.synthetic else None
        model_config = _model_config(config, dataset)
        network = SequentialRecommender(model_config)
        print(describe(model_config, network.store))
        return 0
    dataset, dataset_hash = _load_dataset(args, config)
    model_config = _model_config(config, dataset)
    trainer_config = TrainerConfig.from_dict(config["trainer"])
    snapshot = {
        "model": model_config.to_dict(),
        "trainer": trainer_config.to_dict(),
        "data": config["data"],
    }
    with _tracked_run(args, snapshot, seed=model_config.seed) as (run_dir, manifest):
        manifest.dataset_hash = dataset_hash
        manifest.write()
        network = SequentialRecommender(model_config)
        try:
            result = Trainer(network, dataset, trainer_config, run_dir).fit()
        finally:
            for path in _existing(run_dir, ["metrics.jsonl", "diagnostics.json"]):
                manifest.add_artifact(path)
        for path in result.artifacts:
            manifest.add_artifact(path)
        test_path = os.path.join(run_dir, "test_metrics.json")
        write_json_atomic(test_path, result.test.to_dict())
        manifest.add_artifact(test_path)
        print(json.dumps(result.test.to_dict(), sort_keys=True))
    return 0


def _existing(run_dir: str, names: List[str]) -> List[str]:
    paths = [os.path.join(run_dir, name) for name in names]
    return [path for path in paths if os.path.exists(path)]


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate a checkpoint on the validation or test split."""
    config = _run_config(args)
    checkpoint = _require_file(args.checkpoint, "checkpoint")
    dataset, dataset_hash = _load_dataset(args, config)
    model_config = _model_config(config, dataset)
    cutoffs = tuple(args.cutoffs or config["trainer"].get("cutoffs") or (10, 50))
    snapshot = {
        "model": model_config.to_dict(),
        "checkpoint": checkpoint,
        "checkpoint_hash": file_hash(checkpoint),
        "split": args.split,
        "cutoffs": list(cutoffs),
        "tie_policy": args.tie_policy,
    }
    with _tracked_run(args, snapshot, seed=model_config.seed) as (run_dir, manifest):
        manifest.dataset_hash = dataset_hash
        network = SequentialRecommender(model_config)
        network.load(checkpoint)
        split = dataset.test if args.split == "test" else dataset.validation
        report = evaluate(
            network,
            split,
            cutoffs=cutoffs,
            num_workers=args.num_workers or 1,
            tie_policy=args.tie_policy,
        )
        out = os.path.join(run_dir, f"{args.split}_metrics.json")
        write_json_atomic(out, report.to_dict())
        manifest.add_artifact(out)
        print(json.dumps(report.to_dict(), sort_keys=True))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    """Time bias construction and blocks, and check counted cost coefficients."""
    unknown = set(args.suites) - set(BENCH_SUITES)
    if unknown:
        raise ConfigurationError(
            f"unknown bench suite(s) {', '.join(sorted(unknown))}; "
            f"valid suites: {', '.join(BENCH_SUITES)}"
        )
    config = load_run_config(args.config)
    bench_values = apply_overrides(
        config,
        "bench",
        {"warmup": args.warmup, "repetitions": args.repetitions, "seed": args.seed},
    )["bench"]
    if args.no_pin:
        bench_values["pin_cpu"] = False
    bench_config = BenchConfig.from_dict(bench_values)
    snapshot = {
        "bench": bench_config.to_dict(),
        "suites": args.suites,
        "sweep_n": args.sweep_n,
        "sweep_d": args.sweep_d,
    }
    with _tracked_run(args, snapshot, seed=bench_config.seed) as (run_dir, manifest):
        records = []
        if "bias" in args.suites:
            records += bench_bias_construction(args.sweep_n, config=bench_config)
        if "block" in args.suites:
            records += bench_block(args.sweep_n, args.sweep_d, config=bench_config)
        fingerprint = machine_fingerprint()
        ratios = speedup_ratios(records, "frab_pow", "bucketed_temporal")
        ratios += speedup_ratios(records, "fuxi_beta", "fuxi_alpha_style")
        summary = markdown_summary(records, fingerprint, ratios)
        if "costs" in args.suites:
            rows = bench_cost_coefficients(args.sweep_n[0], args.sweep_d[0])
            summary += "\n" + cost_table_markdown(rows)
            print(cost_table_markdown(rows), end="")
        csv_path = os.path.join(run_dir, "bench.csv")
        write_bench_csv(csv_path, records)
        md_path = os.path.join(run_dir, "bench.md")
        write_markdown_summary(md_path, summary)
        fingerprint_path = os.path.join(run_dir, "fingerprint.json")
        write_json_atomic(fingerprint_path, fingerprint)
        for path in (csv_path, md_path, fingerprint_path):
            manifest.add_artifact(path)
        print(f"{len(records)} records written to {csv_path}")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    """Train one model per bias function kind and attention-map row."""
    functions = args.functions
    if functions == ["all"]:
        functions = valid_kinds()
    maps = args.maps
    if maps == ["all"]:
        maps = valid_map_ablations()
    if not functions and not maps:
        functions = valid_kinds()
    ablation_matrix(functions, maps)
    config = _run_config(args)
    dataset, dataset_hash = _load_dataset(args, config)
    model_config = _model_config(config, dataset)
    trainer_config = TrainerConfig.from_dict(config["trainer"])
    snapshot = {
        "model": model_config.to_dict(),
        "trainer": trainer_config.to_dict(),
        "data": config["data"],
        "functions": functions,
        "maps": maps,
    }
    with _tracked_run(args, snapshot, seed=model_config.seed) as (run_dir, manifest):
        manifest.dataset_hash = dataset_hash
        runs = run_ablation(
            dataset, model_config, trainer_config, functions, maps, output_dir=run_dir
        )
        for root, _, names in sorted(os.walk(run_dir)):
            for name in sorted(names):
                if name != MANIFEST_NAME and not name.startswith(".manifest-"):
                    manifest.add_artifact(os.path.join(root, name))
        for run in runs:
            print(f"{run.name}: {json.dumps(run.to_row(), sort_keys=True)}")
    return 0


def _curve_range(
    args: argparse.Namespace,
    config: Dict[str, Dict[str, Any]],
    dataset: Optional[SplitDataset],
) -> float:
    """``--max-delta`` when given, else the largest elapsed time in the dataset."""
    if args.max_delta is not None:
        return args.max_delta
    if dataset is None:
        return DEFAULT_MAX_DELTA
    time_scale = _model_config(config, dataset).time_scale
    max_delta = dataset.max_elapsed() / time_scale
    if max_delta <= 0:
        logger.warning(
            "Dataset has no elapsed time between interactions; sampling up to %s",
            DEFAULT_MAX_DELTA,
        )
        return DEFAULT_MAX_DELTA
    logger.info("Sampling bias curves up to the largest observed gap %.6g", max_delta)
    return max_delta


def cmd_plot_bias(args: argparse.Namespace) -> int:
    """Export temporal bias curves, default or learned, as CSV and optionally PNG."""
    kinds = [BiasFunctionKind.parse(name) for name in args.functions]
    config = _run_config(args)
    dataset = _load_dataset(args, config)[0] if args.data or args.synthetic else None
    max_delta = _curve_range(args, config, dataset)
    snapshot: Dict[str, Any] = {
        "functions": [kind.value for kind in kinds],
        "max_delta": max_delta,
        "num": args.num,
    }
    if args.checkpoint:
        snapshot["checkpoint"] = args.checkpoint
    with _tracked_run(args, snapshot) as (run_dir, manifest):
        curves = {}
        if args.checkpoint:
            checkpoint = _require_file(args.checkpoint, "checkpoint")
            network = SequentialRecommender(_model_config(config, dataset))
            network.load(checkpoint)
            for index, spec in enumerate(network.bias_specs()):
                if spec is None or spec.kind.value == "bucket":
                    continue
                deltas, weights = curve_samples(spec, max_delta, args.num)
                path = os.path.join(run_dir, f"bias_curve_block{index}_{spec.kind.value}.csv")
                write_curve_csv(path, deltas, weights)
                manifest.add_artifact(path)
                curves[f"block{index} {spec.kind.value}"] = (deltas, weights)
        else:
            specs = [BiasFunctionSpec.default(kind) for kind in kinds]
            paths = export_bias_curves(run_dir, specs, max_delta, args.num)
            for spec in specs:
                manifest.add_artifact(paths[spec.kind.value])
                curves[spec.kind.value] = curve_samples(spec, max_delta, args.num)
        for label, (_, weights) in curves.items():
            monotone = is_monotone_decreasing(weights)
            if label.split()[-1] in MONOTONE_KINDS and not monotone:
                logger.warning("Curve %s is not monotone decreasing", label)
            print(f"{label}: {'decreasing' if monotone else 'not monotone'}")
        if args.render:
            image = os.path.join(run_dir, "bias_curves.png")
            render_curves(image, curves)
            manifest.add_artifact(image)
    return 0


def cmd_describe(args: argparse.Namespace) -> int:
    """Print the parameter audit of a configuration, and the cost coefficients with
    ``--costs``."""
    config = _run_config(args)
    dataset = _load_dataset(args, config)[0] if args.data or args.synthetic else None
    model_config = _model_config(config, dataset)
    network = SequentialRecommender(model_config)
    print(describe(model_config, network.store))
    if args.costs:
        print()
        print(cost_table_markdown(bench_cost_coefficients(64, 32)), end="")
    sys.stdout.flush()
    return 0
