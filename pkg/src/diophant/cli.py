"""Batch command-line frontend: JSON reports and optional SVG plots."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .config import RunConfig
from .errors import BadInput, DiophantError

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path} is not valid JSON: {exc}") from exc


def _poly(path):
    from .polycore import HomogeneousPolynomial

    obj = _read_json(path)
    try:
        return HomogeneousPolynomial.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiophantError):
            raise
        raise BadInput(f"malformed polynomial file {path}: {exc}") from exc


def _point(path, cfg: RunConfig):
    from .points import ProjectivePoint

    obj = _read_json(path)
    try:
        pt = ProjectivePoint.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiophantError):
            raise
        raise BadInput(f"malformed point file {path}: {exc}") from exc
    if pt.exact is not None and pt.precision_bits != cfg.precision_bits:
        return ProjectivePoint.rational(list(pt.exact), cfg.precision_bits)
    return pt


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise BadInput(f"expected comma-separated integers, got {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise BadInput(f"expected comma-separated numbers, got {text!r}") from exc


def _clean(obj):
    """Replace non-finite floats by tags so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if obj != obj else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _norm_json(v) -> dict:
    return {"value": v.value, "log": math.log(v.value) if v.value > 0 else v.value,
            "error_radius": v.error_radius}


# ---------------------------------------------------------------------------
# commands


def cmd_norm(args, cfg):
    from .polycore import l2_norm, normrel_sandwich

    f = _poly(args.poly)
    sand = normrel_sandwich(f, seed=cfg.seed, samples=args.samples)
    sup = math.exp(sand["log_sup"])
    mah = math.exp(sand["mahler"])
    return {"command": "norm", "poly": f.to_json(), "l2": _norm_json(l2_norm(f)),
            "sup": {"value": sup, "log": sand["log_sup"],
                    "error_radius": sup * (1 - math.exp(-sand["log_sup_radius"]))},
            "mahler": {"value": mah, "log": sand["mahler"],
                       "error_radius": mah * math.expm1(sand["mahler_radius"])},
            "sandwich_ok": sand["ok"]}, EXIT_OK


def cmd_dist(args, cfg):
    from .metric import cycle_distance, derivated_algebraic_distance
    from .points import EffectiveCycle

    theta = _point(args.point, cfg)
    if bool(args.poly) == bool(args.cycle):
        raise BadInput("give exactly one of --poly and --cycle")
    if args.poly:
        d = derivated_algebraic_distance(_poly(args.poly), theta, args.order)
    else:
        d = cycle_distance(EffectiveCycle.from_json(_read_json(args.cycle)), theta, args.order)
    return {"command": "dist", "order": args.order, "value": d.value,
            "error_radius": d.error_radius}, EXIT_OK


def cmd_derive(args, cfg):
    import mpmath

    from .derivations import VarietyPresentation, build_derivation_data, derivative_at

    X = VarietyPresentation.from_json(_read_json(args.variety))
    f = _poly(args.poly)
    I = _ints(args.index)
    data = build_derivation_data(X)
    fi = data.derivative_polynomial(f, I)
    out = {"command": "derive", "index": I, "derivative_polynomial": fi.to_json(),
           "degree_bound": data.degree_bound(f, sum(I)), "value": None}
    if args.point:
        theta = _point(args.point, cfg)
        g = _poly(args.g) if args.g else None
        v = derivative_at(f, I, X, theta, g)
        digits = max(20, int(cfg.precision_bits * 0.30103))
        out["value"] = [mpmath.nstr(mpmath.re(v), digits), mpmath.nstr(mpmath.im(v), digits)]
    return out, EXIT_OK


def cmd_mult(args, cfg):
    from .multiplicity import check_local_bezout, vanishing_order

    y = _point(args.point, cfg)
    polys = [_poly(p) for p in args.poly]
    if not 1 <= len(polys) <= 2:
        raise BadInput("give one or two --poly files")
    orders = {f"v_{i}": vanishing_order(f, y).to_json() for i, f in enumerate(polys)}
    bez = None
    if len(polys) == 2:
        bez = check_local_bezout(polys[0], polys[1], y, seed=cfg.seed).to_json()
    return {"command": "mult", "orders": orders, "bezout": bez}, EXIT_OK


def _digits_text(args) -> str:
    if args.digits:
        return Path(args.digits).read_text().strip() if Path(args.digits).exists() else args.digits
    raise BadInput("--digits (file or literal) is required")


def cmd_find_approx(args, cfg):
    from .approx import find_algebraic_approximant

    res = find_algebraic_approximant(_digits_text(args), args.max_degree, args.max_height)
    return dict(command="find-approx", **res.to_json()), EXIT_OK


def cmd_avoid(args, cfg):
    from .approx import find_avoiding_subspace
    from .derivations import VarietyPresentation
    from .points import ProjectivePoint

    if args.variety:
        X = VarietyPresentation.from_json(_read_json(args.variety))
    elif args.points:
        X = [ProjectivePoint.from_json(p) for p in _read_json(args.points)]
    else:
        raise BadInput("give --variety or --points")
    res = find_avoiding_subspace(X, args.codim, degree=args.degree, c_bar=cfg.const("c_bar"),
                                 c_tilde=cfg.const("c_tilde"), seed=cfg.seed)
    return dict(command="avoid-subspace", **res.to_json()), EXIT_OK


def cmd_exponent(args, cfg):
    from .approx import approximation_exponent

    cells = approximation_exponent(_digits_text(args), _ints(args.degrees), _floats(args.heights))
    out = {"command": "exponent-scan", "cells": [c.to_json() for c in cells]}
    if args.plot:
        _plot_exponents(out["cells"], args.plot)
    return out, EXIT_OK


def cmd_check(args, cfg):
    from .criteria import (FAILED, CriterionInstance, check_hypotheses_algind1,
                           check_hypotheses_algind2)

    inst = CriterionInstance.from_json(_read_json(args.instance), strict=not args.lenient)
    run = check_hypotheses_algind1 if args.criterion == 1 else check_hypotheses_algind2
    rep = run(inst, seed=cfg.seed, samples=args.samples)
    out = dict(command="check-criterion", criterion=args.criterion, **rep.to_json())
    if args.plot:
        _plot_limit(rep.limit["values"], args.plot)
    return out, EXIT_FAILED if rep.verdict == FAILED else EXIT_OK


def cmd_calibrate(args, cfg):
    from .calibration import CALIBRATION_SEED, run_calibration

    res = run_calibration(seed=args.calibration_seed or CALIBRATION_SEED)
    if args.write:
        Path(args.write).write_text(json.dumps(_clean(res), indent=2, sort_keys=True) + "\n")
    return dict(command="calibrate", **res), EXIT_OK


# ---------------------------------------------------------------------------
# plots


def _svg(fig, path):
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = "diophant"
    fig.savefig(path, format="svg", metadata={"Date": None})


def _plot_exponents(cells, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.2))
    D = [c["D"] for c in cells]
    a1.plot(D, [c["exponent"] for c in cells], "o-")
    a1.set_xlabel("D")
    a1.set_ylabel("exponent")
    a2.scatter(D, [c["log_distance"] for c in cells])
    a2.set_xlabel("D")
    a2.set_ylabel("log distance")
    fig.tight_layout()
    _svg(fig, path)
    plt.close(fig)


def _plot_limit(values, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.2))
    vals = [v for v in values if isinstance(v, float) and v > 0]
    ax.semilogy(range(1, len(vals) + 1), vals, "o-")
    ax.set_xlabel("k")
    ax.set_ylabel("criterion value")
    fig.tight_layout()
    _svg(fig, path)
    plt.close(fig)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="write the JSON report here (default stdout)")
    common.add_argument("--config", default=None, help="JSON config; DIOPHANT_CONFIG overrides")

    p = argparse.ArgumentParser(prog="diophant", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", parents=[common], help="L2, sup and Mahler norms")
    s.add_argument("--poly", required=True)
    s.add_argument("--samples", type=int, default=40000)
    s.set_defaults(run=cmd_norm)

    s = sub.add_parser("dist", parents=[common], help="derivated algebraic distance")
    s.add_argument("--poly")
    s.add_argument("--cycle")
    s.add_argument("--point", required=True)
    s.add_argument("--order", type=int, default=0)
    s.set_defaults(run=cmd_dist)

    s = sub.add_parser("derive", parents=[common], help="derivative polynomial f_I on a variety")
    s.add_argument("--variety", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--index", required=True, help="multi-index, e.g. 2,1")
    s.add_argument("--point")
    s.add_argument("--g")
    s.set_defaults(run=cmd_derive)

    s = sub.add_parser("mult", parents=[common], help="vanishing orders and local Bezout")
    s.add_argument("--poly", action="append", required=True)
    s.add_argument("--point", required=True)
    s.set_defaults(run=cmd_mult)

    s = sub.add_parser("find-approx", parents=[common], help="algebraic approximant of a number")
    s.add_argument("--digits", required=True, help="file holding a decimal string, or the string")
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--max-height", type=float, default=10.0)
    s.set_defaults(run=cmd_find_approx)

    s = sub.add_parser("avoid-subspace", parents=[common], help="integral subspace avoiding X")
    s.add_argument("--variety")
    s.add_argument("--points")
    s.add_argument("--codim", type=int, required=True)
    s.add_argument("--degree", type=int, default=None)
    s.set_defaults(run=cmd_avoid)

    s = sub.add_parser("exponent-scan", parents=[common], help="empirical approximation exponents")
    s.add_argument("--digits", required=True)
    s.add_argument("--degrees", required=True)
    s.add_argument("--heights", required=True)
    s.add_argument("--plot")
    s.set_defaults(run=cmd_exponent)

    s = sub.add_parser("check-criterion", parents=[common], help="criterion hypothesis harness")
    s.add_argument("--instance", required=True)
    s.add_argument("--criterion", type=int, choices=(1, 2), default=1)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--lenient", action="store_true", help="report degree violations instead of rejecting")
    s.add_argument("--plot")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("calibrate", parents=[common], help="rerun the calibration suites")
    s.add_argument("--write", help="write the calibration map here")
    s.add_argument("--calibration-seed", type=int, default=None)
    s.set_defaults(run=cmd_calibrate)
    return p


def _emit(obj, out):
    text = json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config, args.precision, args.seed, args.out)
        report, code = args.run(args, cfg)
    except (DiophantError, ValueError, OSError) as exc:
        err = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(f"diophant {args.command}: {type(exc).__name__}: {exc}\n")
        _emit(err, args.out)
        return EXIT_ERROR
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
