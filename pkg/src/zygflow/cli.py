"""Command-line front door.

Subcommands:
    flow    integrate a registry field and write the map + log-derivative
    verify  run a named verification suite and write its bound reports
    bmo     sweep an estimator over CSV samples or a named expression

Every command writes delimited output (CSV/JSON), a PNG figure next to it
(suppress with --no-figures), and a manifest with content hashes of all
outputs.  Configuration comes from ``--config`` files (flat key = value)
overridden by flags; the effective configuration is embedded in the manifest.
ZYGFLOW_THREADS caps worker threads for flow sweeps (0 or unset = auto).

Exit codes: 0 success / all checks passed; 1 verification failure; 2 usage
error; 3 computation failure; 4 domain error (e.g. nonpositive weight).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .fields import UnknownFieldError, mollify, parse_field, truncate
from .flow import SolverConfig, SolverError, backward_flow, flow_to_csv, forward_flow
from .grids import SampledFunction, build_family, make_grid, read_csv
from .report import ConstantsLedger, round_sig
from .runio import RunManifest, parse_config_file, write_json
from .suites import run_suite, suite_names
from .weights import (NonPositiveWeightError, ainfty_constant, ap_constant,
                      bmo_norm, star_norm)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_DOMAIN = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _workers() -> int:
    raw = os.environ.get("ZYGFLOW_THREADS", "0")
    try:
        val = int(raw)
    except ValueError:
        val = 0
    return max(1, val) if val > 0 else 1


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        cfg.update(parse_config_file(args.config))
    return cfg


def _grid_from(args, cfg):
    L = args.L if args.L is not None else cfg.get("grid.L", 10.0)
    n = args.n if args.n is not None else cfg.get("grid.n", 4096)
    return make_grid(float(L), int(n))


def _family_from(grid, args, cfg):
    strategy = getattr(args, "strategy", None) or cfg.get("family.strategy", "sliding")
    min_length = getattr(args, "min_length", None) or cfg.get("family.min_length", 4)
    return build_family(grid, strategy, int(min_length))


def _solver_from(args, cfg) -> SolverConfig:
    def pick(flag, key, default):
        v = getattr(args, flag, None)
        return v if v is not None else cfg.get(key, default)

    return SolverConfig(
        rtol=float(pick("rtol", "solver.rtol", 1e-8)),
        atol=float(pick("atol", "solver.atol", 1e-10)),
        max_step=(lambda ms: None if ms is None else float(ms))(
            pick("max_step", "solver.max_step", None)),
        min_step=float(pick("min_step", "solver.min_step", 1e-12)),
    )


def _ledger_from(cfg) -> ConstantsLedger:
    kwargs = {}
    for key, value in cfg.items():
        if key.startswith("ledger."):
            kwargs[key.split(".", 1)[1]] = value
    return ConstantsLedger(**kwargs) if kwargs else ConstantsLedger()


def _out_dir(args, cfg) -> Path:
    out = Path(getattr(args, "out", None) or cfg.get("output.dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _figures_enabled(args, cfg) -> bool:
    if getattr(args, "no_figures", False):
        return False
    return bool(cfg.get("figures", True))


def _effective(cfg: dict, **extra) -> dict:
    eff = dict(cfg)
    eff.update({k: v for k, v in extra.items() if v is not None})
    return eff


def cmd_flow(args) -> int:
    cfg = _load_config(args)
    try:
        field = parse_field(args.field)
    except UnknownFieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.truncate is not None:
        if args.truncate <= 0:
            print("error: --truncate must be positive", file=sys.stderr)
            return EXIT_USAGE
        field = truncate(field, args.truncate)
    if args.mollify is not None:
        if args.mollify <= 0:
            print("error: --mollify must be positive", file=sys.stderr)
            return EXIT_USAGE
        field = mollify(field, args.mollify)

    try:
        grid = _grid_from(args, cfg)
        solver = _solver_from(args, cfg)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.times:
        try:
            times = sorted(float(t) for t in args.times.split(","))
        except ValueError:
            print(f"error: --times must be comma-separated reals, got {args.times!r}",
                  file=sys.stderr)
            return EXIT_USAGE
    else:
        times = [k * args.t / 8.0 for k in range(1, 9)]
    if min(times) <= 0:
        print("error: stored times must be positive", file=sys.stderr)
        return EXIT_USAGE

    out = _out_dir(args, cfg)
    manifest = RunManifest(
        command="flow", argv=sys.argv[1:],
        config=_effective(cfg, **{"grid.L": grid.half_width, "grid.n": grid.count,
                                  "solver.rtol": solver.rtol, "solver.atol": solver.atol,
                                  "field": field.field_id, "times": times,
                                  "backward": args.backward,
                                  "workers": _workers()}),
        version=__version__)
    try:
        if args.backward:
            t_top = max(times)
            lattice = [t_top] + sorted((t for t in times if t < t_top), reverse=True) + [0.0]
            fr = backward_flow(field, t_top, 0.0, grid, solver,
                               times=np.array(lattice), workers=_workers())
        else:
            fr = forward_flow(field, 0.0, np.array([0.0] + times), grid, solver,
                              workers=_workers())
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    csv_path = out / "flow.csv"
    flow_to_csv(fr, csv_path)
    json_path = out / "flow.json"
    write_json(json_path, fr.summary())
    manifest.add_output(csv_path)
    manifest.add_output(json_path)
    if _figures_enabled(args, cfg):
        from .figures import flow_figure
        fig_path = out / "flow.png"
        flow_figure(fr, fig_path)
        manifest.add_output(fig_path)
    manifest.write(out / "manifest.json")
    print(f"flow of {field.field_id}: {len(fr.times)} times x {len(fr.x_grid)} points "
          f"-> {csv_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    if args.suite not in suite_names():
        print(f"error: unknown suite {args.suite!r}; choose from {suite_names()}",
              file=sys.stderr)
        return EXIT_USAGE
    out = _out_dir(args, cfg)
    manifest = RunManifest(command="verify", argv=sys.argv[1:],
                           config=_effective(cfg, suite=args.suite),
                           version=__version__)
    try:
        reports = run_suite(args.suite)
    except (SolverError, ArithmeticError) as exc:
        print(f"error: computation failure: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    path = out / f"verify_{args.suite}.json"
    write_json(path, [r.to_json() for r in reports])
    manifest.add_output(path)
    if _figures_enabled(args, cfg):
        from .figures import verify_figure
        fig_path = out / f"verify_{args.suite}.png"
        verify_figure(reports, fig_path)
        manifest.add_output(fig_path)
    manifest.write(out / "manifest.json")

    failed = [r for r in reports if not r.passed]
    for r in reports:
        print(str(r))
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed -> {path}")
    return EXIT_VERIFY_FAIL if failed else EXIT_OK


_EXPRS = {
    "logabs": lambda x: np.log(np.abs(x)),
    "abs": np.abs,
    "sin": np.sin,
    "identity": lambda x: x,
}


def cmd_bmo(args) -> int:
    cfg = _load_config(args)
    try:
        if args.csv:
            try:
                f = read_csv(args.csv)
            except (ValueError, OSError) as exc:
                print(f"error: malformed CSV: {exc}", file=sys.stderr)
                return EXIT_USAGE
        else:
            grid = _grid_from(args, cfg)
            if args.expr:
                name, _, param = args.expr.partition(":")
                if name == "pow":
                    f = SampledFunction(grid, np.abs(grid.nodes) ** float(param))
                elif name == "const":
                    f = SampledFunction(grid, np.full(grid.count, float(param)))
                elif name in _EXPRS:
                    f = SampledFunction(grid, _EXPRS[name](grid.nodes))
                else:
                    print(f"error: unknown expression {args.expr!r}; known: "
                          f"{sorted(_EXPRS) + ['pow:A', 'const:C']}", file=sys.stderr)
                    return EXIT_USAGE
            else:
                field = parse_field(args.field_dx)
                f = SampledFunction(grid, np.asarray(field.eval_dx(args.t, grid.nodes)))
        family = _family_from(f.grid, args, cfg)
    except UnknownFieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.mode == "bmo":
            est = bmo_norm(f, family)
            payload = est.to_json()
        elif args.mode == "star":
            est = bmo_norm(f, family)
            payload = est.to_json()
            payload["functional"] = "star"
            payload["value"] = star_norm(f, family)
        elif args.mode == "ainfty":
            est = ainfty_constant(f, family)
            payload = est.to_json()
        else:  # ap
            est = ap_constant(f, args.p, family)
            payload = est.to_json()
    except NonPositiveWeightError as exc:
        print(f"error: domain: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = _out_dir(args, cfg)
    manifest = RunManifest(command="bmo", argv=sys.argv[1:],
                           config=_effective(cfg, mode=args.mode,
                                             **{"grid.L": f.grid.half_width,
                                                "grid.n": f.grid.count,
                                                "family.strategy": family.strategy,
                                                "family.min_length": family.min_length}),
                           version=__version__)
    path = out / "estimate.json"
    write_json(path, payload)
    manifest.add_output(path)
    if _figures_enabled(args, cfg):
        from .figures import estimate_figure
        fig_path = out / "estimate.png"
        estimate_figure(f, est, fig_path)
        manifest.add_output(fig_path)
    manifest.write(out / "manifest.json")
    print(json.dumps(round_sig(payload), indent=2))
    return EXIT_OK


def build_parser() -> _Parser:
    from .runio import CONFIG_KEYS
    key_list = ", ".join(sorted(CONFIG_KEYS))
    p = _Parser(prog="zygflow",
                description="Flow maps, oscillation estimators, and bound checks "
                            "for rough-slope 1-d vector fields.",
                epilog=f"config file keys (flat 'key = value' lines): {key_list}. "
                       "ZYGFLOW_THREADS caps flow-sweep worker threads (0 = auto); "
                       "outputs do not depend on it.",
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"zygflow {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", help="output directory (default: .)")
    common.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering next to the delimited output")

    pf = sub.add_parser("flow", parents=[common],
                        help="integrate a registry field over a staggered grid")
    pf.add_argument("--field", required=True,
                    help="field id, e.g. xlogabs:sigma=1 | affine:a0=0,a1=2 | "
                         "sine:amp=1,freq=1 | powerlog:exponent=1,cutoff=0.1")
    pf.add_argument("--t", type=float, default=1.0, help="final time (default 1)")
    pf.add_argument("--times", help="comma-separated stored times (overrides --t)")
    pf.add_argument("--L", type=float, help="grid half-width (default 10)")
    pf.add_argument("--n", type=int, help="grid size, even (default 4096)")
    pf.add_argument("--backward", action="store_true",
                    help="integrate the reversed-time flow from max(times) down to 0")
    pf.add_argument("--truncate", type=float, metavar="K",
                    help="clamp the slope to [-K, K] before integrating")
    pf.add_argument("--mollify", type=float, metavar="EPS",
                    help="smooth the field by bump convolution at width EPS")
    pf.add_argument("--rtol", type=float)
    pf.add_argument("--atol", type=float)
    pf.add_argument("--max-step", dest="max_step", type=float)
    pf.add_argument("--min-step", dest="min_step", type=float)
    pf.set_defaults(fn=cmd_flow)

    pv = sub.add_parser("verify", parents=[common],
                        help="run a verification suite and report pass/fail")
    pv.add_argument("suite", help=f"one of {suite_names()}")
    pv.set_defaults(fn=cmd_verify)

    pb = sub.add_parser("bmo", parents=[common],
                        help="interval-sweep estimators on samples")
    src = pb.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv", help="x,value sample file")
    src.add_argument("--expr", help="named samples: logabs|abs|sin|identity|pow:A|const:C")
    src.add_argument("--field-dx", dest="field_dx",
                     help="sample the slope of a registry field")
    pb.add_argument("--t", type=float, default=0.0, help="time for --field-dx")
    pb.add_argument("--mode", choices=["bmo", "star", "ap", "ainfty"], default="bmo")
    pb.add_argument("--p", type=float, default=2.0, help="exponent for --mode ap")
    pb.add_argument("--L", type=float, help="grid half-width (default 10)")
    pb.add_argument("--n", type=int, help="grid size, even (default 4096)")
    pb.add_argument("--strategy", choices=["dyadic", "sliding", "exhaustive"])
    pb.add_argument("--min-length", dest="min_length", type=int)
    pb.set_defaults(fn=cmd_bmo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
