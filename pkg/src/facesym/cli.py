"""Command-line entry point: ``facesym {validate,measure,evaluate,scatter,synth}``.

Exit status: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from facesym.config import Config, ConfigError, load_config
from facesym.dataset_io import LoadError, ParseError, load_dataset, read_manifest, read_pts70
from facesym.landmarks import validate
from facesym.measures import MEASURE_NAMES
from facesym.report import (
    evaluate_dataset,
    measure_rows,
    render_eval_csv,
    render_eval_text,
    render_measures,
    render_scatter_csv,
    scatter_series,
)

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2

class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"facesym: {msg}", file=sys.stderr)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    return cfg.override(
        ga_relative=True if getattr(args, "relative", False) else None,
        abs_angles=True if getattr(args, "abs", False) else None,
    )


def cmd_validate(args) -> int:
    status = EXIT_OK
    results = []
    for path in args.paths:
        try:
            ls = read_pts70(path)
        except (OSError, ParseError) as exc:
            results.append({"path": path, "errors": [str(exc)], "warnings": []})
            status = EXIT_DATA
            continue
        report = validate(ls)
        if report.errors:
            status = EXIT_DATA
        results.append({"path": path, "errors": list(report.errors), "warnings": list(report.warnings)})

    if args.format == "json":
        print(json.dumps(results, indent=2, sort_keys=True))
        return status
    for r in results:
        if args.quiet and not r["errors"] and not r["warnings"]:
            continue
        state = "error" if r["errors"] else ("warning" if r["warnings"] else "ok")
        if args.format == "csv":
            for kind in ("errors", "warnings"):
                for msg in r[kind]:
                    print(f"{r['path']},{kind[:-1]},{msg}")
            continue
        print(f"{r['path']}: {state}")
        for msg in r["errors"]:
            print(f"  error: {msg}")
        for msg in r["warnings"]:
            print(f"  warning: {msg}")
    return status


def cmd_measure(args) -> int:
    cfg = _config(args)
    status = EXIT_OK
    sets = []
    for path in args.paths:
        try:
            sets.append(read_pts70(path))
        except (OSError, ParseError) as exc:
            _err(str(exc))
            status = EXIT_DATA
    rows = measure_rows(sets, cfg.ga_relative, cfg.abs_angles)
    for image_id, _, error in rows:
        if error:
            _err(error)
            status = EXIT_DATA
    _emit(render_measures(rows, args.format, args.precision), args.out)
    return status


def _load(manifest_path, args):
    manifest = read_manifest(manifest_path, args.base_dir)
    return load_dataset(manifest, skip_bad=args.skip_bad)


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    try:
        dataset = _load(args.manifest, args)
        report, series = evaluate_dataset(dataset, cfg.bands, cfg.ga_relative, cfg.abs_angles,
                                          manifest=str(args.manifest))
    except (OSError, ParseError, LoadError, ValueError) as exc:
        _err(str(exc))
        return EXIT_DATA

    if args.format == "json":
        sys.stdout.write(report.to_json())
    elif args.format == "csv":
        sys.stdout.write(render_eval_csv(report))
    else:
        sys.stdout.write(render_eval_text(report, cfg.precision))
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    if args.plots:
        from facesym.plots import write_scatter_svg

        plot_dir = Path(args.plots)
        plot_dir.mkdir(parents=True, exist_ok=True)
        for name in MEASURE_NAMES:
            s = series[name]
            (plot_dir / f"scatter_{name}.csv").write_text(render_scatter_csv(s), encoding="utf-8")
            if s.points:
                write_scatter_svg([s], plot_dir / f"scatter_{name}.svg")
    return EXIT_OK


def cmd_scatter(args) -> int:
    cfg = _config(args)
    fmt = args.format or ("svg" if args.out and args.out.lower().endswith(".svg") else "csv")
    if fmt == "svg" and not args.out:
        raise UsageError("svg output needs --out PATH")
    manifests = [args.manifest] + list(args.overlay or [])
    all_series = []
    try:
        for m in manifests:
            dataset = _load(m, args)
            all_series.append(scatter_series(dataset, args.measure, cfg.ga_relative, cfg.abs_angles))
    except (OSError, ParseError, LoadError) as exc:
        _err(str(exc))
        return EXIT_DATA
    for s in all_series:
        for msg in s.errors:
            _err(msg)

    if fmt == "csv":
        _emit(render_scatter_csv(all_series[0]), args.out)
        return EXIT_OK
    from facesym.plots import write_scatter_svg

    labels = args.label or ([] if len(manifests) == 1 else [Path(m).stem for m in manifests])
    try:
        write_scatter_svg(all_series, args.out, labels)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_DATA
    return EXIT_OK


def cmd_synth(args) -> int:
    from facesym.synth import SynthConfig, write_dataset

    try:
        cfg = SynthConfig(
            n=args.n,
            sigma_pct=args.sigma,
            outlier_fraction=args.outliers,
            outlier_px=args.outlier_px,
            max_head_rotation=args.max_rotation,
            max_offset=args.max_offset,
            max_mouth_asym=args.max_mouth_asym,
            max_eye_asym=args.max_eye_asym,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    path = write_dataset(cfg, args.out_dir)
    print(path)
    return EXIT_OK


def _dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("manifest", help="CSV manifest with image_id,gt_path,pred_path")
    p.add_argument("--base-dir", help="resolve manifest paths against this directory")
    p.add_argument("--skip-bad", action="store_true", help="skip unloadable pairs instead of failing")


def _measure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--relative", action="store_true", help="report ga as deviation from 90 degrees")
    p.add_argument("--abs", action="store_true", help="report absolute angle values")
    p.add_argument("--config", help="key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facesym", description="Face and upper-body symmetry measures and their evaluation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check .pts70 files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("-q", "--quiet", action="store_true", help="only list files with findings")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("measure", help="compute the six measures per file")
    p.add_argument("paths", nargs="+")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out")
    p.add_argument("--precision", type=int, default=4, help="decimals in text output")
    _measure_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("evaluate", help="score predictions against ground truth")
    _dataset_flags(p)
    _measure_flags(p)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--plots", metavar="DIR", help="write per-measure scatter SVG and CSV here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("scatter", help="predicted vs ground truth for one measure")
    _dataset_flags(p)
    _measure_flags(p)
    p.add_argument("--measure", required=True, choices=MEASURE_NAMES)
    p.add_argument("--format", choices=("csv", "svg"))
    p.add_argument("--out")
    p.add_argument("--overlay", action="append", metavar="MANIFEST",
                   help="additional prediction manifest drawn on the same axes (svg only)")
    p.add_argument("--label", action="append", help="legend label per manifest, in order")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("out_dir")
    p.add_argument("-n", type=int, default=36)
    p.add_argument("--sigma", type=float, default=0.0, help="landmark noise, %% of outer-canthal distance")
    p.add_argument("--outliers", type=float, default=0.0, help="fraction of grossly failed predictions")
    p.add_argument("--outlier-px", type=float, default=50.0, help="displacement of failed landmarks")
    p.add_argument("--max-rotation", type=float, default=15.0, help="head tilt range, degrees")
    p.add_argument("--max-offset", type=float, default=0.3, help="lateral head offset range, canthal units")
    p.add_argument("--max-mouth-asym", type=float, default=12.0, help="left mouth corner shift range, px")
    p.add_argument("--max-eye-asym", type=float, default=6.0, help="inner canthus shift range, px")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
