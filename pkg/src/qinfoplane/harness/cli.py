"""Command-line entry point: ``qinfoplane run|gen-data|report``."""
import argparse
import csv
import logging
import sys
from pathlib import Path

from ..data import gen_clouds, gen_regression
from ..errors import InvalidArgumentError, ParseError
from .config import load_config
from .runner import emit, report, run


def _build_parser():
    p = argparse.ArgumentParser(prog="qinfoplane", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log every cell")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the alpha x seed sweep described by a config file")
    r.add_argument("config")
    r.add_argument("--threads", type=int, default=1, help="worker processes for grid cells")
    r.add_argument("--out", help="output directory (overrides the config)")
    r.add_argument("--seed-override", type=int, metavar="S",
                   help="replace the config's seed list with the single seed S")

    g = sub.add_parser("gen-data", help="write a synthetic dataset as CSV")
    g.add_argument("--experiment", choices=["synthetic", "regression"], default="synthetic")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    rep = sub.add_parser("report", help="summarise a result directory")
    rep.add_argument("result_dir")
    return p


def _gen_data(args):
    ds = gen_clouds(args.seed) if args.experiment == "synthetic" else gen_regression(args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(ds.feature_names) + ["label"])
        for row, y in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in row] + [repr(float(y))])
    print(f"wrote {len(ds)} rows to {out}")
    return 0


def _run(args):
    cfg = load_config(args.config)
    if args.seed_override is not None:
        cfg = cfg.with_seeds([args.seed_override])
    if args.out:
        cfg = cfg.with_outdir(args.out)
    if args.threads < 1:
        raise InvalidArgumentError("--threads must be at least 1")
    result = run(cfg, threads=args.threads)
    if any(c.ok for c in result.cells):
        emit(result, cfg.outdir)
        print(report(cfg.outdir))
    failed = result.failed
    if failed:
        for c in failed:
            print(f"cell alpha={c.alpha:g} seed={c.seed} failed: {c.error}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "gen-data":
            return _gen_data(args)
        print(report(args.result_dir))
        return 0
    except (ParseError, InvalidArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
