"""Command-line harness: verification suites, curvature scans, recovery.

Reports are line-oriented JSON (one case record per line, then a summary
record with the resolved configuration); curvature scans write CSV.  All
output is deterministic for a fixed configuration and seed.  Exit codes:
0 all checks pass, 1 at least one check failed, 2 configuration error,
3 numerical domain or convergence error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .blowup import bundle_metric, chart_point_from_coordinates, curvature
from .errors import ConfigError, ConvergenceError, DomainError, JordanKeplerError
from .kernels import CoefficientSequence, KernelSpec, q_kernel_eval, recover_coefficients
from .suites import SUITES, RunConfig, run_suites
from .triples import TripleSpace, standard_tripotent

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

CURVATURE_SCHEMA = "curvature-v1"
RECOVERY_SCHEMA = "recovery-v1"


def _dump(record) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _write_report(records, out: str | None) -> None:
    text = "".join(_dump(rec) + "\n" for rec in records)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


_CONFIG_KEYS = {
    "r": int,
    "s": int,
    "lam": int,
    "nu": float,
    "weight_bound": int,
    "vanishing_order": int,
    "seed": int,
    "trials": int,
    "samples": int,
    "workers": int,
}


def _build_config(args) -> RunConfig:
    """Config file first, then command-line flags on top (flags win)."""
    merged = {}
    for key, cast in _CONFIG_KEYS.items():
        if key in args.file_config and args.file_config[key] is not None:
            merged[key] = cast(args.file_config[key])
        flagval = getattr(args, key, None)
        if flagval is not None:
            merged[key] = cast(flagval)
    if getattr(args, "d", None) is not None:
        merged["r"] = 1
        merged["s"] = int(args.d)
        merged.setdefault("lam", 1)
    if "workers" not in merged:
        merged["workers"] = int(os.environ.get("JORDANKEPLER_WORKERS", "1"))
    try:
        cfg = RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.space()  # reject invalid structure constants before any work
    return cfg


def _add_common_flags(parser):
    parser.add_argument("--r", type=int, help="row size of the matrix space")
    parser.add_argument("--s", type=int, help="column size (s >= r)")
    parser.add_argument("--lambda", dest="lam", type=int, help="Kepler rank")
    parser.add_argument("--d", type=int, help="shorthand for the rank-one space C^{1xd}")
    parser.add_argument("--nu", type=float, help="weight parameter of the nu-rule sequence")
    parser.add_argument("--M", dest="weight_bound", type=int, help="series weight bound")
    parser.add_argument("--k", dest="vanishing_order", type=int, help="vanishing order")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="number of random cases per check")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--workers", type=int, help="suite worker budget")
    parser.add_argument("--config", dest="config_path", help="JSON config file")
    parser.add_argument("--out", help="output path ('-' for stdout)")


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    cfg = _build_config(args)
    records = run_suites(names, cfg)
    _write_report(records, args.out)
    summary = records[-1]
    print(
        f"verify: {summary['n_cases']} cases, {summary['n_failed']} failed, "
        f"max residual {summary['max_residual']:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK if summary["all_pass"] else EXIT_FAIL


def _parse_grid(text: str):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise ConfigError(f"grid must look like 'lo:hi:n', got {text!r}") from exc
    if n < 0:
        raise ConfigError("grid size must be nonnegative")
    return np.linspace(lo, hi, n) if n else np.array([])


def _metric_factory(args, cfg: RunConfig):
    """Returns (metric callable on complex coords, n_coords, oracle or None)."""
    if args.metric == "plus":
        return (lambda co: 1.0 + float(np.abs(co[0]) ** 2), 1,
                lambda co: (1.0 + float(np.abs(co[0]) ** 2)) ** -2)
    if args.metric == "bergman":
        nu = cfg.nu

        def h(co):
            x = float(np.abs(co[0]) ** 2)
            if x >= 1.0:
                raise DomainError("outside the unit disk")
            return (1.0 - x) ** (-nu)

        return h, 1, lambda co: nu * (1.0 - float(np.abs(co[0]) ** 2)) ** -2
    if args.metric == "bundle":
        space = cfg.space()
        weight = cfg.weight_bound or 12
        spec = KernelSpec(space, CoefficientSequence.nu_rule(space, cfg.nu), weight, 1)
        c = standard_tripotent(space, space.lam)

        def h(co):
            point = chart_point_from_coordinates(space, c, co)
            return bundle_metric(spec, point)

        return h, space.d_lam, None
    raise ConfigError(f"unknown metric {args.metric!r}")


def cmd_curvature_scan(args) -> int:
    cfg = _build_config(args)
    metric, ncoord, oracle = _metric_factory(args, cfg)
    grid = _parse_grid(args.grid)
    step = args.step

    if args.metric == "bundle":
        space = cfg.space()
        # scan the first Peirce-1 coordinate, s block frozen at s_scale * c
        base = np.zeros(ncoord, dtype=complex)
        base[: space.lam**2] = (args.s_scale * np.eye(space.lam, dtype=complex)).ravel()
        t_index = space.lam**2
    else:
        base = np.zeros(ncoord, dtype=complex)
        t_index = 0

    header = ["t_re", "t_im", "h", "status"]
    for i in range(ncoord):
        for j in range(ncoord):
            header += [f"k_{i}{j}_re", f"k_{i}{j}_im"]
    header.append("fd_err")
    if oracle is not None:
        header.append("k_exact")

    rows = []
    for tre in grid:
        for tim in grid:
            coords = base.copy()
            coords[t_index] = tre + 1j * tim
            row = [repr(float(tre)), repr(float(tim))]
            try:
                hval = metric(coords)
                rep = curvature(metric, coords, step=step)
                row.append(repr(float(hval)))
                row.append("ok")
                for i in range(ncoord):
                    for j in range(ncoord):
                        row += [repr(float(rep.matrix[i, j].real)), repr(float(rep.matrix[i, j].imag))]
                row.append(repr(float(rep.error_estimate)))
                if oracle is not None:
                    row.append(repr(float(oracle(coords))))
            except (DomainError, ConvergenceError):
                row.append("")
                row.append("out_of_domain")
                row += [""] * (2 * ncoord * ncoord + 1)
                if oracle is not None:
                    row.append("")
            rows.append(row)

    out = args.out
    lines = [f"# {CURVATURE_SCHEMA}"]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
    print(f"curvature-scan: {len(rows)} grid points", file=sys.stderr)
    return EXIT_OK


def _partition_key(mu) -> str:
    return ",".join(str(m) for m in mu.parts) or "0"


def cmd_recover(args) -> int:
    cfg = _build_config(args)
    space = cfg.space()
    weight = cfg.weight_bound or 6

    def make_evaluator(kind):
        if kind == "nu":
            coeffs = CoefficientSequence.nu_rule(space, cfg.nu)
        elif kind == "hardy":
            coeffs = CoefficientSequence.hardy()
        else:
            raise ConfigError(f"unknown generator {kind!r}")
        spec = KernelSpec(space, coeffs, weight + space.lam, 1)
        return lambda x: q_kernel_eval(spec, x, x).value

    result = recover_coefficients(space, make_evaluator(args.generator), weight)
    payload = {
        "schema": RECOVERY_SCHEMA,
        "space": {"r": space.r, "s": space.s, "lam": space.lam},
        "generator": args.generator,
        "nu": cfg.nu if args.generator == "nu" else None,
        "weight_bound": weight,
        "condition_number": result.condition_number,
        "max_residual": result.max_residual,
        "table": {_partition_key(mu): rho for mu, rho in sorted(result.table.items(), key=lambda kv: (kv[0].weight, kv[0].parts))},
    }
    if args.generator2 is not None:
        other = recover_coefficients(space, make_evaluator(args.generator2), weight)
        gap = max(abs(result.table[mu] - other.table[mu]) for mu in result.table)
        payload["generator2"] = args.generator2
        payload["max_discrepancy"] = gap
        payload["verdict"] = "equal" if gap < 1e-8 else "distinct"
    text = _dump(payload) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(f"recover: {len(result.table)} coefficients, cond {result.condition_number:.3e}",
          file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jordankepler",
        description="Verification harness for kernel identities on matrix Kepler varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a named identity suite")
    p_verify.add_argument("--suite", default="all", choices=("all",) + SUITES)
    _add_common_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("curvature-scan", help="scan curvature over a chart grid")
    p_scan.add_argument("--metric", default="bundle", choices=("plus", "bergman", "bundle"))
    p_scan.add_argument("--grid", default="-0.5:0.5:11", help="lo:hi:n for both real axes")
    p_scan.add_argument("--step", type=float, default=1e-3, help="finite difference step")
    p_scan.add_argument("--s-scale", dest="s_scale", type=float, default=0.3,
                        help="frozen Peirce-2 coefficient for bundle scans")
    _add_common_flags(p_scan)
    p_scan.set_defaults(func=cmd_curvature_scan)

    p_rec = sub.add_parser("recover", help="recover a coefficient table from the diagonal")
    p_rec.add_argument("--generator", default="nu", choices=("nu", "hardy"))
    p_rec.add_argument("--generator2", choices=("nu", "hardy"),
                       help="second generator for an equality verdict")
    _add_common_flags(p_rec)
    p_rec.set_defaults(func=cmd_recover)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.file_config = _load_config_file(getattr(args, "config_path", None))
        return args.func(args)
    except ConfigError as exc:
        print(_dump({"record": "error", "kind": "config", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ConvergenceError) as exc:
        print(_dump({"record": "error", "kind": "numeric", "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC
    except JordanKeplerError as exc:
        print(_dump({"record": "error", "kind": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
