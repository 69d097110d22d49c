"""Command line front end: ``bandgrid train|evaluate|sweep|inspect|reproduce``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .adjust import MODES as ADJUST_MODES
from .adjust import AdjustConfig, adjust_pass
from .data_io import DATA_ENV, bundled_descriptors, load_split, read_descriptor
from .errors import BandGridError, ConfigurationError
from .evaluation import DEFAULT_CELL_CAP, Model, evaluate, fit, resolve_policy, sweep_bands
from .model_io import check_pairing, load_model, save_model
from .preprocess import normalize
from .reproduce import format_json, format_text, run_suite

EXIT_USAGE = 2


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def band_range(text: str) -> list[int]:
    """``5:20`` (inclusive), ``5:20:5`` or ``2,10,12``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step < 1:
                raise ValueError
            return list(range(start, stop + 1, step))
        return _int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad band range {text!r}; use 5:20, 5:20:5 or 2,10,12") from None


def _dataset_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--dataset", help=f"bundled dataset name ({', '.join(bundled_descriptors())})")
    g.add_argument("--descriptor", help="path to a dataset descriptor .ini file")
    p.add_argument("--data-root", help=f"directory with the raw data files (default ${DATA_ENV} or ./data)")


def _grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bands", type=int, help="bands per variable (default from descriptor)")
    p.add_argument("--boundaries", choices=("uniform", "gaps"), help="band edge scheme")
    p.add_argument("--policy", help="flat | per_category | adjusted | manual (default from descriptor)")
    p.add_argument("--adjustments", type=_int_list, help="per-category count adjustments, e.g. 10,-10,-10,-10")
    p.add_argument("--denominators", type=_float_list, help="manual policy denominators, e.g. 34,73,78,53")
    p.add_argument("--mode", choices=("ratio", "product"), default="ratio", help="contribution rule")


def _adjust_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("adjustment phase (experimental)")
    g.add_argument("--adjust", action="store_true", help="run the competitive adjustment after training")
    g.add_argument("--eta", type=float, default=0.01)
    g.add_argument("--epochs", type=int, default=1)
    g.add_argument("--floor", type=float, default=0.0)
    g.add_argument("--adjust-mode", choices=ADJUST_MODES, default="dominant")


def _output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bandgrid", description="Single-pass band grid classifier")
    ap.add_argument("--version", action="version", version=f"bandgrid {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and save it")
    _dataset_args(p)
    _grid_args(p)
    _adjust_args(p)
    p.add_argument("--model", help="output model file (default <dataset>-<bands>.model.json)")
    p.add_argument("--force", action="store_true", help="overwrite an existing model file")

    p = sub.add_parser("evaluate", help="accuracy report (resubstitution or holdout)")
    _dataset_args(p, required=False)
    _grid_args(p)
    _adjust_args(p)
    p.add_argument("--model", help="evaluate a saved model instead of training")
    p.add_argument("--predictions", action="store_true", help="include per-row predictions")
    _output_args(p)

    p = sub.add_parser("sweep", help="accuracy across band counts")
    _dataset_args(p)
    _grid_args(p)
    p.add_argument("--range", dest="band_range", type=band_range, required=True, help="5:20, 5:20:5 or 2,10,12")
    p.add_argument("--cell-cap", type=int, default=DEFAULT_CELL_CAP, help="skip configurations storing more weights")
    p.add_argument("--plot-data", help="write band,correct,total,accuracy CSV here")
    _output_args(p)

    p = sub.add_parser("inspect", help="dump a model's weights band by band")
    p.add_argument("--model", required=True)
    p.add_argument("--variable", type=int, action="append", help="1-based variable to show (repeatable)")
    _output_args(p)

    p = sub.add_parser("reproduce", help="re-run the published accuracy tables")
    p.add_argument("--data-root")
    _output_args(p)
    return ap


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _descriptor(args):
    return read_descriptor(args.descriptor or args.dataset)


def _fit(args, desc, train) -> Model:
    bands = desc.default_bands if args.bands is None else args.bands
    boundaries = args.boundaries or desc.boundary_mode
    policy = resolve_policy(train, args.policy, args.adjustments, args.denominators)
    return fit(train, bands, policy, boundaries, args.mode)


def _maybe_adjust(args, model: Model, train) -> tuple[Model, dict | None]:
    if not args.adjust:
        return model, None
    cfg = AdjustConfig(args.eta, args.epochs, args.floor, args.adjust_mode)
    xn = normalize(train.features, model.stats)
    before = int((model.grid.predict(xn) == train.labels).sum())
    grid, corrections = adjust_pass(model.grid, xn, train.labels, cfg)
    after = int((grid.predict(xn) == train.labels).sum())
    info = {
        "eta": cfg.eta, "epochs": cfg.epochs, "floor": cfg.floor, "mode": cfg.mode,
        "train_correct_before": before, "train_correct_after": after,
        "corrections": corrections, "regression": after < before,
    }
    return Model(grid, model.stats, model.policy, model.bands, model.boundary_mode), info


def cmd_train(args) -> int:
    desc = _descriptor(args)
    bands = desc.default_bands if args.bands is None else args.bands
    out = Path(args.model or f"{desc.name}-{bands}.model.json")
    if out.exists() and not args.force:
        raise ConfigurationError(f"{out} exists; pass --force to overwrite")
    train, _ = load_split(desc, args.data_root)
    model, info = _maybe_adjust(args, _fit(args, desc, train), train)
    save_model(model, desc, out, force=True)
    print(f"trained {desc.name}: {train.n_rows} rows x {train.n_variables} variables, "
          f"{model.grid.cell_updates} cell updates -> {out}")
    if info:
        print(f"adjustment: {info['train_correct_before']} -> {info['train_correct_after']} correct on training rows")
    return 0


def cmd_evaluate(args) -> int:
    if args.model:
        model, header = load_model(args.model)
        desc = _descriptor(args) if (args.dataset or args.descriptor) else read_descriptor(header["dataset"])
        check_pairing(header, desc)
        train, test = load_split(desc, args.data_root)
        model, info = _maybe_adjust(args, model, train)
    else:
        if not (args.dataset or args.descriptor):
            raise ConfigurationError("evaluate needs --dataset/--descriptor or --model")
        desc = _descriptor(args)
        train, test = load_split(desc, args.data_root)
        model, info = _maybe_adjust(args, _fit(args, desc, train), train)
    target = train if test is None else test
    report = evaluate(model, target, "resubstitution" if test is None else "holdout", args.predictions)
    if info:
        report.notes.append(
            "adjustment phase (eta={eta}, epochs={epochs}, mode={mode}): training rows "
            "{train_correct_before} -> {train_correct_after} correct{flag}".format(
                **info, flag=" (REGRESSION)" if info["regression"] else ""
            )
        )
    text = report.to_json() if args.format == "json" else report.to_text()
    _emit(text, args.output)
    return 0


def cmd_sweep(args) -> int:
    desc = _descriptor(args)
    train, test = load_split(desc, args.data_root)
    policy = resolve_policy(train, args.policy, args.adjustments, args.denominators)
    result = sweep_bands(
        train, args.band_range, policy, test,
        args.boundaries or desc.boundary_mode, args.mode, args.cell_cap,
    )
    if args.plot_data:
        Path(args.plot_data).write_text(result.to_csv())
    text = json.dumps(result.to_dict(), indent=2) + "\n" if args.format == "json" else result.to_text()
    _emit(text, args.output)
    return 0


def cmd_inspect(args) -> int:
    model, header = load_model(args.model)
    variables = [v - 1 for v in args.variable] if args.variable else None
    if args.format == "json":
        text = json.dumps(
            {"dataset": header["dataset"], "categories": [str(c) for c in model.grid.categories],
             "variables": model.grid.dump(variables)},
            indent=2,
        ) + "\n"
    else:
        text = model.grid.dump_text(variables)
    _emit(text, args.output)
    return 0


def cmd_reproduce(args) -> int:
    outcomes = run_suite(args.data_root)
    _emit(format_json(outcomes) if args.format == "json" else format_text(outcomes), args.output)
    return 0


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "inspect": cmd_inspect,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BandGridError as exc:
        print(f"bandgrid: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
