"""``cop`` command-line entry point.

Exit codes: 0 success, 1 an asserted invariant failed, 2 usage or validation
error. Numbers go out as JSON (12 significant digits) or CSV (9).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import aosd
from .entanglement import default_split, entanglement_of_purification
from .io import load_state
from .manifold_opt import OptimizerConfig, grid_oracle
from .purification import (
    OptimizerFailure,
    canonical_purification,
    cop_adapted,
    cop_fixed_basis,
    cop_sweep,
    fixed_basis_entropy,
    residual_quantumness,
)
from .qcore import StructureError, UnsupportedError, ValidationError, as_density
from .verify import PROPS, run_suite, witness_checks

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2


def _round(obj):
    """Round every float to 12 significant digits; non-finite floats become null."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj + 0.0:.12g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    try:
        return _round(float(obj))
    except (TypeError, ValueError):
        return str(obj)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(_round(obj), indent=2) + "\n", out)


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, max_iters=args.max_iters,
                           opt_tol=args.opt_tol, seed=args.seed)


def _optimizer_summary(res, restarts: int) -> dict:
    if res.optimizer is None:
        return {"restarts": 0, "best": res.value, "converged": True}
    return {"restarts": restarts, "best": res.optimizer.best_value, "converged": res.optimizer.converged}


def _cmd_compute(args) -> int:
    rho = as_density(load_state(args.state))
    config = _config(args)
    if args.adapted:
        _emit_json({"value": cop_adapted(rho), "definition": "adapted", "ancilla_dim": rho.rank(),
                    "optimizer": {"restarts": 0, "best": None, "converged": True}}, args.out)
        return EXIT_OK
    if args.sweep_ancilla:
        results = cop_sweep(rho, config)
        n, best = min(results.items(), key=lambda kv: (kv[1].value, kv[0]))
        payload = {"value": best.value, "definition": "fixed_basis", "ancilla_dim": n,
                   "optimizer": _optimizer_summary(best, config.restarts),
                   "per_ancilla_dim": {str(k): r.value for k, r in results.items()}}
    else:
        best = cop_fixed_basis(rho, config)
        payload = {"value": best.value, "definition": "fixed_basis", "ancilla_dim": best.ancilla_dim,
                   "optimizer": _optimizer_summary(best, config.restarts)}
    _emit_json(payload, args.out)
    return EXIT_OK


def _parse_split(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.lower().split("x"))
    except ValueError as exc:
        raise ValidationError(f"bad split {text!r}, expected AxB") from exc
    if a < 1 or b < 1:
        raise ValidationError("split factors must be positive")
    return a, b


def _cmd_eop(args) -> int:
    rho = as_density(load_state(args.state))
    config = _config(args)
    split = _parse_split(args.split) if args.split else default_split(rho.rank())
    n = split[0] * split[1]
    cp = cop_fixed_basis(rho, config, ancilla_dim=n)
    warm = [cp.optimizer.unitary] if cp.optimizer is not None else []
    ep = entanglement_of_purification(rho, config, split, initial=warm)
    _emit_json({"eop": ep.value, "cop": cp.value, "gap": cp.value - ep.value,
                "split": list(split)}, args.out)
    return EXIT_OK


def _cmd_residual(args) -> int:
    rho = as_density(load_state(args.state))
    _emit_json({"residual_quantumness": residual_quantumness(rho, _config(args))}, args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    rho = as_density(load_state(args.state))
    config = _config(args)
    res = cop_fixed_basis(rho, config)
    x = canonical_purification(rho, res.ancilla_dim).amplitudes
    oracle = grid_oracle(res.ancilla_dim, lambda u: fixed_basis_entropy(x @ u.T), args.samples, seed=args.seed)
    _emit_json({"cop": res.value, "oracle": oracle, "gap": oracle - res.value,
                "samples": args.samples}, args.out)
    return EXIT_OK


def _cmd_aosd(args) -> int:
    grid = aosd.parse_grid(args.alpha_grid)
    rows = aosd.sweep(grid, args.condition, _config(args), sign=args.sign,
                      random_phases=args.random_phases, seed=args.seed)
    _emit(aosd.rows_to_csv(rows), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.props == "all":
        props, with_witness = "all", True
    else:
        props = [p.strip().upper() for p in args.props.split(",") if p.strip()]
        with_witness = "WITNESS" in props
        props = [p for p in props if p != "WITNESS"]
        unknown = set(props) - set(PROPS)
        if unknown:
            raise ValidationError(f"unknown propositions {sorted(unknown)}")
    try:
        dims = tuple(int(d) for d in args.dims.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad --dims {args.dims!r}") from exc
    config = _config(args)
    reports = run_suite(props, args.n, dims, args.seed, config, threads=args.threads) if props else []
    if with_witness:
        reports.append(witness_checks(config))
    for rep in reports:
        print(rep.summary(), file=sys.stderr)
    ok = all(r.passed for r in reports)
    _emit_json({"passed": ok, "seed": args.seed, "n": args.n, "dims": list(dims),
                "optimizer": {"restarts": config.restarts, "max_iters": config.max_iters,
                              "opt_tol": config.opt_tol},
                "reports": [r.to_dict() for r in reports]}, args.out)
    return EXIT_OK if ok else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--restarts", type=int, default=16)
    common.add_argument("--max-iters", type=int, default=2000)
    common.add_argument("--opt-tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cop", description="Coherence of purification toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="coherence of purification of a state")
    c.add_argument("--state", required=True)
    c.add_argument("--adapted", action="store_true", help="co-rotating ancilla basis closed form")
    c.add_argument("--sweep-ancilla", action="store_true", help="minimize over ancilla dims rank..d*rank")
    c.set_defaults(func=_cmd_compute)

    e = sub.add_parser("eop", parents=[common], help="entanglement of purification vs C_P")
    e.add_argument("--state", required=True)
    e.add_argument("--split", default=None, help="ancilla split AxB, e.g. 2x2")
    e.set_defaults(func=_cmd_eop)

    r = sub.add_parser("residual", parents=[common], help="residual quantumness")
    r.add_argument("--state", required=True)
    r.set_defaults(func=_cmd_residual)

    o = sub.add_parser("oracle", parents=[common], help="optimizer vs Haar random search")
    o.add_argument("--state", required=True)
    o.add_argument("--samples", type=int, default=100_000)
    o.set_defaults(func=_cmd_oracle)

    a = sub.add_parser("aosd", parents=[common], help="assisted discrimination sweep as CSV")
    a.add_argument("--alpha-grid", default="0:1:21", help="start:stop:count")
    a.add_argument("--condition", choices=("optimal", "constant"), default="optimal")
    a.add_argument("--sign", type=int, choices=(1, -1), default=1, help="branch for the constant condition")
    a.add_argument("--random-phases", action="store_true")
    a.set_defaults(func=_cmd_aosd)

    v = sub.add_parser("verify", parents=[common], help="randomized proposition checks")
    v.add_argument("--props", default="all", help="'all' or comma list of " + ",".join(PROPS) + ",WITNESS")
    v.add_argument("--n", type=int, default=200)
    v.add_argument("--dims", default="2,3")
    v.add_argument("--threads", type=int, default=None)
    v.set_defaults(func=_cmd_verify, seed=7)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, StructureError, UnsupportedError, ValueError, OSError) as exc:
        print(f"cop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OptimizerFailure as exc:
        print(f"cop: invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
