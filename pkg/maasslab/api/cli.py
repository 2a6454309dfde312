"""
Command-line surface: kbessel, solve, norm, signs, nodal, selftest

Flags are validated into a RunConfig before any computation. Results go to
--output through an atomic rename, or to stdout. Exit status is 0 on
success, 2 on usage errors and 1 on any computation error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from maasslab import __version__
from maasslab.core.errors import MaassLabError, UsageError
from maasslab.core.logging import configure_logging
from maasslab.models.run import OutputFormat, RunConfig
from maasslab.models.solver import SolverConfig
from maasslab.services import segments
from maasslab.services.bessel import classify_regime, scaled_K, scaled_K_array
from maasslab.services.certification import certify_sign_changes, select_good_abscissae, select_good_heights
from maasslab.services.coefficient_store import ingest_form, store_form, write_atomic
from maasslab.services.eigensolver import solve_even_form_result
from maasslab.services.nodal import grid_shape, nodal_report, sample_grid, sign_grid_frame
from maasslab.services.norms import lp_norm, range_decomposition
from maasslab.services.oscillation import locate_sign_changes
from maasslab.tasks.selftest import run_selftest

logger = logging.getLogger(__name__)

Payload = Any


def _rect(text: str):
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"rectangle {text!r} is not four numbers")
    if len(values) != 4:
        raise argparse.ArgumentTypeError("rectangle needs x0,x1,y0,y1")
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maasslab", description="Even Hecke-Maass form laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="json")
    parser.add_argument("--output", "-o", default=None, help="result file; stdout when omitted")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--log-level", default=None)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kbessel = commands.add_parser("kbessel", help="rescaled K-Bessel value")
    kbessel.add_argument("--r", type=float, required=True)
    kbessel.add_argument("--u", type=float, required=True)
    kbessel.add_argument("--method", choices=["auto", "quadrature"], default="auto")

    solve = commands.add_parser("solve", help="solve for the lowest even form in an interval")
    solve.add_argument("--t-min", type=float, required=True)
    solve.add_argument("--t-max", type=float, required=True)
    solve.add_argument("--m0", type=int, default=None)
    solve.add_argument("--y0", type=float, default=0.8)
    solve.add_argument("--tol", type=float, default=1e-6)
    solve.add_argument("--out", required=True, help="coefficient file to write")

    norm = commands.add_parser("norm", help="Lp norm over the fundamental domain")
    norm.add_argument("--form", required=True)
    norm.add_argument("--p", type=float, default=2.0)
    norm.add_argument("--ymax", type=float, default=None)
    norm.add_argument("--decompose", action="store_true")
    norm.add_argument("--eps", type=float, default=0.2)

    signs = commands.add_parser("signs", help="sign changes and certificates on a segment")
    signs.add_argument("mode", nargs="?", choices=["count", "scan"], default="count")
    signs.add_argument("--form", required=True)
    signs.add_argument("--segment", choices=["horocycle", "vertical", "axis", "arc"], default="horocycle")
    signs.add_argument("--y", type=float, default=1.0)
    signs.add_argument("--x", type=float, default=0.0)
    signs.add_argument("--a", type=float, default=1.0)
    signs.add_argument("--h", type=float, default=1.0)
    signs.add_argument("--certify", action="store_true")
    signs.add_argument("--assume-lindelof", action="store_true")
    signs.add_argument("--omega", type=float, default=None)
    signs.add_argument("--bigN", type=float, default=None)
    signs.add_argument("--eps", type=float, default=0.2)
    signs.add_argument("--eps1", type=float, default=0.001)
    signs.add_argument("--M", type=float, default=None)

    nodal = commands.add_parser("nodal", help="nodal domains on a rectangle")
    nodal.add_argument("--form", required=True)
    nodal.add_argument("--rect", type=_rect, required=True, help="x0,x1,y0,y1; write --rect=... when x0 is negative")
    nodal.add_argument("--res", type=int, default=40)
    nodal.add_argument("--no-refine", action="store_true")
    nodal.add_argument("--grid-csv", default=None)

    selftest = commands.add_parser("selftest", help="seeded acceptance suite")
    selftest.add_argument("--form", default=None)
    selftest.add_argument("--no-solve", action="store_true", help="skip the form checks when no --form is given")
    return parser


def _kbessel(config: RunConfig) -> Payload:
    opts = config.options
    if opts["method"] == "quadrature":
        values, errors = scaled_K_array(opts["r"], [opts["u"]], method="quadrature")
        return {
            "r": opts["r"], "u": opts["u"], "value": float(values[0]),
            "regime": classify_regime(opts["r"], opts["u"]).tag.value,
            "error_estimate": float(errors[0]), "terms_used": 0,
        }
    evaluation = scaled_K(opts["r"], opts["u"])
    return {
        "r": opts["r"], "u": opts["u"], "value": evaluation.value, "regime": evaluation.regime.tag.value,
        "error_estimate": evaluation.error_estimate, "terms_used": evaluation.terms_used,
    }


def _solve(config: RunConfig) -> Payload:
    opts = config.options
    truncation = opts["m0"] or int(2 * opts["t_max"]) + 1
    try:
        cfg = SolverConfig(
            t_min=opts["t_min"], t_max=opts["t_max"], truncation=truncation,
            sample_height=opts["y0"], tolerance=opts["tol"],
        )
    except ValidationError as error:
        raise UsageError(f"invalid solver flags: {error.errors()[0]['msg']}")
    result = solve_even_form_result(cfg, config.workers)
    store_form(result.form, opts["out"])
    return {
        "t": result.form.t,
        "rho1": result.form.rho_one,
        "primes": len(result.form.hecke.prime_eigenvalues),
        "automorphy_residual": result.automorphy_residual,
        "hecke_residual": result.hecke_residual,
        "coefficient_file": opts["out"],
    }


def _norm(config: RunConfig) -> Payload:
    opts = config.options
    form = ingest_form(opts["form"])
    result = lp_norm(form, opts["p"], opts["ymax"])
    payload = {"p": result.p, "value": result.value, "tail_bound": result.tail_bound, "y_max": result.y_max}
    if opts["decompose"]:
        payload["pieces"] = [piece.to_dict() for piece in range_decomposition(form, opts["eps"], opts["ymax"])]
    return payload


def _segment(form, opts) -> segments.SegmentFunction:
    kind = opts["segment"]
    if kind == "horocycle":
        return segments.horocycle(form, opts["y"])
    if kind == "vertical":
        return segments.vertical(form, opts["x"], opts["a"], opts["h"])
    if kind == "axis":
        return segments.axis(form, opts["a"], opts["h"])
    return segments.unit_arc(form, opts["a"], opts["a"] + opts["h"])


def _signs(config: RunConfig) -> Payload:
    opts = config.options
    form = ingest_form(opts["form"])
    if opts["mode"] == "scan":
        M = opts["M"] if opts["M"] is not None else form.t ** 0.3
        horizontal = opts["segment"] == "horocycle"
        if horizontal:
            selection = select_good_heights(form, opts["a"], opts["eps"], opts["eps1"], M, workers=config.workers)
        else:
            selection = select_good_abscissae(
                form, opts["a"], opts["h"], opts["eps"], opts["eps1"], M, workers=config.workers,
            )

        def make(window):
            if horizontal:
                return segments.horocycle(form, window.position)
            return segments.vertical(form, window.position, opts["a"], opts["h"])

        rows = []
        for window in selection.windows:
            count = locate_sign_changes(make(window)).count if window.accepted else None
            rows.append({
                "k": window.index, "position": window.position, "ratio": window.ratio,
                "accepted": window.accepted, "count": count,
            })
        return pd.DataFrame(rows, columns=["k", "position", "ratio", "accepted", "count"])

    segment = _segment(form, opts)
    located = locate_sign_changes(segment)
    payload: Dict[str, Any] = {
        "segment": segment.kind.value, "a": segment.a, "b": segment.b,
        "direct_count": located.count, "stable": located.stable,
    }
    if opts["certify"]:
        report = certify_sign_changes(
            form, segment, opts["eps"], opts["eps1"], omega=opts["omega"], N=opts["bigN"],
            assume_lindelof=opts["assume_lindelof"],
        )
        payload["certificate"] = report.certificate.to_dict()
        payload["relaxed"] = report.relaxed.to_dict()
        payload["parameters"] = report.parameters
        payload["certified"] = report.certificate.certified
    return payload


def _nodal(config: RunConfig) -> Payload:
    opts = config.options
    form = ingest_form(opts["form"])
    rect = opts["rect"]
    report = nodal_report(form, rect, opts["res"], refine=not opts["no_refine"], workers=config.workers)
    if opts["grid_csv"]:
        nx, ny = grid_shape(form, rect, opts["res"])
        frame = sign_grid_frame(sample_grid(form, rect, nx, ny, config.workers))
        write_atomic(opts["grid_csv"], frame.to_csv(index=False))
    return report.to_dict()


def _selftest(config: RunConfig) -> Payload:
    form = ingest_form(config.options["form"]) if config.options.get("form") else None
    return run_selftest(config.seed, form, solve=not config.options.get("no_solve", False))


HANDLERS: Dict[str, Callable[[RunConfig], Payload]] = {
    "kbessel": _kbessel,
    "solve": _solve,
    "norm": _norm,
    "signs": _signs,
    "nodal": _nodal,
    "selftest": _selftest,
}


def render(payload: Payload, output_format: OutputFormat) -> str:
    """JSON with sorted keys, or CSV for tabular payloads"""
    if isinstance(payload, pd.DataFrame):
        if output_format == OutputFormat.CSV:
            return payload.to_csv(index=False)
        payload = payload.to_dict(orient="records")
    elif output_format == OutputFormat.CSV:
        return pd.json_normalize(payload).to_csv(index=False)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_config(argv: Optional[Sequence[str]]) -> RunConfig:
    """
    Parse argv into a RunConfig

    Raises:
        UsageError: unknown flag, missing argument or invalid value
    """
    args = build_parser().parse_args(argv)
    options = {
        k: v for k, v in vars(args).items()
        if k not in ("command", "output_format", "output", "workers", "seed", "log_level")
    }
    fields = {"command": args.command, "options": options, "output_format": args.output_format, "output": args.output}
    if args.workers is not None:
        fields["workers"] = args.workers
    if args.seed is not None:
        fields["seed"] = args.seed
    try:
        config = RunConfig(**fields)
    except ValidationError as error:
        raise UsageError(f"invalid flags: {error.errors()[0]['msg']}")
    if args.log_level:
        configure_logging(level=args.log_level)
    return config


def run(config: RunConfig) -> int:
    """Dispatch one command and emit its result; returns the exit status"""
    logger.info(f"running {config.command} with {config.workers} workers")
    payload = HANDLERS[config.command](config)
    text = render(payload, config.output_format)
    if config.output:
        write_atomic(config.output, text)
    else:
        sys.stdout.write(text)
    if config.command == "selftest" and not payload["passed"]:
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    try:
        return run(parse_config(argv))
    except MaassLabError as error:
        logger.error(f"{type(error).__name__}: {error}")
        return error.exit_code
    except (ValueError, OSError) as error:
        logger.error(f"{type(error).__name__}: {error}", exc_info=True)
        return 1


def main_exit() -> None:
    sys.exit(main())
