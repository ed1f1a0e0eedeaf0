from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import CONSTRUCT_MODES, Mode, ScenarioConfig, load_config, parse_config
from .errors import ConfigError
from .report import write_report
from .runner import EXIT_CONFIG, EXIT_INTERNAL, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clocus",
        description="Critical loci of multiview projections: analysis, classification checks and converse constructions.",
    )
    parser.add_argument("--version", action="version", version=f"clocus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=["json", "text"], help="report format (default: json)")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--figures", help="directory for PNG figures and matching CSV tables")

    analyze = sub.add_parser("analyze", help="measure the critical locus of one setup")
    analyze.add_argument("--config", required=True, help="scenario JSON file")
    output_options(analyze)

    verify = sub.add_parser("verify-classification", help="run the acceptance matrix")
    verify.add_argument("--seed", type=int, help="base seed (default: built-in)")
    verify.add_argument("--field", type=int, help="large prime for the exact checks (default 32003)")
    verify.add_argument("--only", help="comma-separated criterion numbers")
    verify.add_argument("--config", help="optional scenario JSON file")
    output_options(verify)

    construct = sub.add_parser("construct", help="build projections realizing a classical variety")
    construct.add_argument("kind", choices=sorted(CONSTRUCT_MODES))
    construct.add_argument("--input", required=True, help="scenario JSON file with a target section")
    output_options(construct)
    return parser


def _verify_config(args: argparse.Namespace) -> ScenarioConfig:
    from .verify import DEFAULT_SEED

    if args.config:
        doc_cfg = load_config(args.config, Mode.VERIFY)
        doc = doc_cfg.to_json()
    else:
        doc = {"version": 1, "seed": DEFAULT_SEED}
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.field is not None:
        doc["field"] = args.field
    if args.only:
        try:
            doc["only"] = [int(x) for x in args.only.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"--only expects integers, got {args.only!r}") from None
    return parse_config(doc, Mode.VERIFY)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            cfg = load_config(args.config, Mode.ANALYZE)
        elif args.command == "construct":
            cfg = load_config(args.input, CONSTRUCT_MODES[args.kind])
        else:
            cfg = _verify_config(args)
    except ConfigError as exc:
        print(f"clocus: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    fmt = args.format or cfg.output_format
    out = args.out or cfg.output_path
    figures = args.figures or cfg.figures
    try:
        result = run_scenario(cfg)
    except ConfigError as exc:
        print(f"clocus: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        text = write_report(result.report, fmt, out)
    except OSError as exc:
        print(f"clocus: cannot write report: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if out is None:
        sys.stdout.write(text)
    if figures:
        from .plotting import write_figures

        for path in write_figures(result.figures, Path(figures)):
            print(f"wrote {path}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
