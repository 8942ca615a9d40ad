"""``bench`` command line: sweeps, operator charts, phantoms, dictionary export."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..data_io import generate_shepp_logan, save_csv_matrix, save_pgm
from ..dictionary import build_overcomplete_dct
from ..prox import RootPolicy
from .config import ExperimentConfig
from .outputs import emit_metadata, emit_tables
from .plots import emit_plots, operator_chart
from .runner import run_experiment

log = logging.getLogger("ictsparse.bench")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def cmd_run(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    config = config.with_overrides(
        output_dir=args.output, threads=args.threads, gamma=args.gamma, eta=args.eta,
        iterations=args.iterations, stride=args.stride, epsilon_zero=args.epsilon_zero,
        root_policy=args.root_policy, shrink_scaling=args.shrink_scaling,
        lambda_grid=args.lambda_grid, algorithms=args.algorithms,
        chunk_size=args.chunk_size, plots=args.plots)
    out = Path(config.output_dir)
    emit_metadata(config, out)
    (out / "config.resolved.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    result = run_experiment(config)
    for path in emit_tables(result, out):
        log.info("wrote %s", path)
    if config.plots:
        for path in emit_plots(result, out):
            log.info("wrote %s", path)
    failed = sum(r.failed for r in result.records)
    print(f"{len(result.records)} cells, {failed} failed; results in {out}")
    return 0


def cmd_operators(args) -> int:
    svg = operator_chart(args.lam, args.gamma, RootPolicy.parse(args.policy))
    Path(args.out).write_text(svg)
    print(f"wrote {args.out}")
    return 0


def cmd_phantom(args) -> int:
    save_pgm(generate_shepp_logan(args.size, args.variant), args.out, maxval=args.maxval)
    print(f"wrote {args.out}")
    return 0


def cmd_dictionary(args) -> int:
    save_csv_matrix(build_overcomplete_dct(args.patch_edge, args.atoms_per_axis).atoms, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a lambda sweep from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--output", default=None, help="overrides output_dir")
    run.add_argument("--threads", type=int, default=None)
    run.add_argument("--gamma", type=float, default=None)
    run.add_argument("--eta", type=float, default=None)
    run.add_argument("--iterations", type=int, default=None)
    run.add_argument("--stride", type=int, default=None)
    run.add_argument("--epsilon-zero", type=float, default=None)
    run.add_argument("--root-policy", choices=[r.value for r in RootPolicy], default=None)
    run.add_argument("--shrink-scaling", choices=["literal", "proximal"], default=None)
    run.add_argument("--lambda-grid", type=_floats, default=None,
                     help="comma-separated lambda values")
    run.add_argument("--algorithms", type=_names, default=None, help="e.g. IHT,ICT")
    run.add_argument("--chunk-size", type=int, default=None)
    run.add_argument("--plots", action=argparse.BooleanOptionalAction, default=None)
    run.set_defaults(func=cmd_run)

    ops = sub.add_parser("operators", help="plot hard/soft/Cauchy shrinkage curves")
    ops.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ops.add_argument("--gamma", type=float, default=0.001)
    ops.add_argument("--policy", choices=[r.value for r in RootPolicy],
                     default=RootPolicy.PAPER_LARGEST_ABS.value)
    ops.add_argument("--out", default="operators.svg")
    ops.set_defaults(func=cmd_operators)

    ph = sub.add_parser("phantom", help="write a Shepp-Logan phantom as PGM")
    ph.add_argument("--size", type=int, default=256)
    ph.add_argument("--variant", choices=["original", "modified"], default="original")
    ph.add_argument("--maxval", type=int, default=255)
    ph.add_argument("--out", default="phantom.pgm")
    ph.set_defaults(func=cmd_phantom)

    dc = sub.add_parser("dictionary", help="export the DCT dictionary as CSV")
    dc.add_argument("--patch-edge", type=int, default=8)
    dc.add_argument("--atoms-per-axis", type=int, default=12)
    dc.add_argument("--out", default="dictionary.csv")
    dc.set_defaults(func=cmd_dictionary)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
