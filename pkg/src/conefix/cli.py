"""Scenario-driven command line front end.

Subcommands
-----------
classify    check / fit the scenario's conditions, exit 2 on any violation
solve       run the pair iteration, write a trace file, print a certificate
verify      check metric axioms, commutation, and range inclusion
gen         generate a random finite instance as a new scenario file
estimate-k  estimate the normal constant of a cone under a norm

Exit codes: 0 clean, 1 input error, 2 violation found (classify/verify,
or a converged solve whose certificate is rejected), 3 iteration budget
exhausted, 4 preimage failure (the breaking point is reported).

Reports are JSON on stdout; numbers are printed at full precision so they
round-trip exactly.  Identical scenario plus seeds gives byte-identical
output.  Non-finite values appear as null in reports.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .cones import estimate_normal_constant, Euclidean, MaxNorm, Orthant, SecondOrder
from .conditions import check_condition, contraction_factor, fit_minimal_constants
from .errors import ConefixError, PreimageError, ScenarioError
from .maps import check_commuting, check_range_inclusion
from .oracle import random_finite_instance
from .scenario import (
    _FAMILIES,
    Scenario,
    apply_overrides,
    dump_scenario,
    instance_to_dict,
    load_scenario,
)
from .solver import certify_common_fixed_point, jungck_iterate
from .spaces import FinitePoints, sample_domain_points, verify_axioms


def _jsonable(obj):
    """Reports must be valid JSON: numpy scalars unwrap, non-finite -> null."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(_jsonable(report), indent=2) + "\n")


def _load(args) -> Scenario:
    if not args.scenario:
        raise ScenarioError("--scenario: a scenario file is required")
    scn = load_scenario(args.scenario)
    variant = None
    if getattr(args, "variant", None):
        variant = args.variant.replace("-", "_")
    return apply_overrides(scn, seed=args.seed, variant=variant)


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _pair_dict(wp):
    if wp is None:
        return None
    return {
        "x": _jsonable(wp.x),
        "y": _jsonable(wp.y),
        "lhs": _jsonable(wp.lhs),
        "rhs": _jsonable(wp.rhs),
        "slack": _jsonable(wp.slack),
    }


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    scn = _load(args)
    records = []
    violated = False
    for req in scn.conditions:
        record: dict = {"family": req.family}
        if req.condition is not None:
            rep = check_condition(
                scn.space, scn.s, scn.t, req.condition,
                seed=scn.seed, n_samples=scn.n_samples,
            )
            record["holds_on_checked"] = rep.holds_on_checked
            record["mode"] = rep.mode
            record["n_pairs"] = rep.n_pairs
            record["worst_pair"] = _pair_dict(rep.worst_pair)
            violated = violated or not rep.holds_on_checked
        if req.fit:
            fit = fit_minimal_constants(
                scn.space, scn.s, scn.t, _FAMILIES[req.family][0],
                seed=scn.seed, n_samples=scn.n_samples,
            )
            record["fit"] = {
                "feasible": fit.feasible,
                "value": fit.value,
                "method": fit.method,
                "bound": fit.bound,
            }
        records.append(record)
    _emit({"scenario": scn.name, "command": "classify", "records": records})
    return 2 if violated else 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _point_columns(space, label):
    if isinstance(space.domain, FinitePoints):
        return [label]
    return [f"{label}{i}" for i in range(space.domain.dim)]


def _point_cells(space, point):
    if isinstance(space.domain, FinitePoints):
        return [repr(int(point))]
    return [repr(float(v)) for v in np.atleast_1d(point)]


def write_trace(trace, space, path) -> None:
    """Tab-separated trace: header row, then one row per executed iteration.

    Floats are written with repr, so parsing a cell back with float()
    reproduces the exact binary value.  The ratio column is empty on the
    first row (a ratio needs two steps).
    """
    header = [
        "iter",
        *_point_columns(space, "x"),
        *_point_columns(space, "s"),
        "step_norm",
        "ratio",
    ]
    lines = ["\t".join(header)]
    for n in range(1, trace.iterations + 1):
        ratio = repr(float(trace.ratios[n - 2])) if n >= 2 else ""
        row = [
            str(n),
            *_point_cells(space, trace.x[n]),
            *_point_cells(space, trace.s_images[n]),
            repr(float(trace.step_norms[n - 1])),
            ratio,
        ]
        lines.append("\t".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_solve(args) -> int:
    scn = _load(args)
    if scn.solver is None:
        raise ScenarioError("solver: section is required for solve")
    cond = next(
        (r.condition for r in scn.conditions if r.condition is not None), None
    )
    try:
        trace = jungck_iterate(
            scn.space, scn.s, scn.t, scn.solver.x0,
            cond=cond, tol=scn.solver.tol, max_iter=scn.solver.max_iter,
        )
    except PreimageError as exc:
        _emit({
            "scenario": scn.name,
            "command": "solve",
            "error": "preimage failure",
            "detail": str(exc),
            "breaking_point": _jsonable(exc.value),
        })
        return 4
    trace_path = _out_dir(args) / f"{scn.name}.trace.tsv"
    write_trace(trace, scn.space, trace_path)

    z = trace.s_images[-1]
    factor = contraction_factor(cond) if cond is not None else None
    k_normal = estimate_normal_constant(
        scn.space.cone, scn.space.norm, seed=scn.seed
    ).value
    cert = certify_common_fixed_point(
        scn.space, scn.s, scn.t, z,
        tol=scn.solver.tol, factor=factor, k_normal=k_normal, trace=trace,
    )
    _emit({
        "scenario": scn.name,
        "command": "solve",
        "converged": trace.converged,
        "iterations": trace.iterations,
        "rate_consistent": trace.rate_consistent,
        "trace_file": str(trace_path),
        "certificate": {
            "z": _jsonable(z),
            "residual_s": _jsonable(cert.residual_s),
            "residual_t": _jsonable(cert.residual_t),
            "tol": cert.tol,
            "a_priori_bound_at_stop": cert.a_priori_bound_at_stop,
            "accepted": cert.accepted,
        },
    })
    if not trace.converged:
        return 3
    return 0 if cert.accepted else 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    scn = _load(args)
    points = None
    if not isinstance(scn.space.domain, FinitePoints):
        rng = np.random.default_rng(scn.seed)
        points = sample_domain_points(scn.space.domain, rng, scn.n_samples)
    axioms = verify_axioms(scn.space, points=points)
    commuting = check_commuting(
        scn.s, scn.t, scn.space.domain, seed=scn.seed, n_samples=scn.n_samples
    )
    range_rep = check_range_inclusion(
        scn.s, scn.t, scn.space.domain, seed=scn.seed, n_samples=scn.n_samples
    )
    report = {
        "scenario": scn.name,
        "command": "verify",
        "axioms": {
            "passed": axioms.passed,
            "exhaustive": axioms.exhaustive,
            "n_points": axioms.n_points,
            "violations": [
                {
                    "axiom": v.axiom,
                    "points": _jsonable(v.points),
                    "values": _jsonable(v.values),
                    "detail": v.detail,
                }
                for v in axioms.violations
            ],
        },
        "commuting": {
            "commutes": commuting.commutes,
            "mode": commuting.mode,
            "witness": _jsonable(commuting.witness),
            "deviation": _jsonable(commuting.deviation),
        },
        "range_inclusion": {
            "included": range_rep.included,
            "mode": range_rep.mode,
            "witness": _jsonable(range_rep.witness),
        },
    }
    _emit(report)
    ok = axioms.passed and commuting.commutes and range_rep.included
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# gen / estimate-k
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    seed = 0 if args.seed is None else args.seed
    inst = random_finite_instance(seed, args.n, args.m, args.cone_kind)
    name = args.name or f"instance-{args.cone_kind}-s{seed}-n{args.n}-m{args.m}"
    doc = instance_to_dict(inst, name)
    path = _out_dir(args) / f"{name}.json"
    dump_scenario(doc, path)
    _emit({
        "command": "gen",
        "written": str(path),
        "seed": seed,
        "n": args.n,
        "m": args.m,
        "cone_kind": args.cone_kind,
    })
    return 0


_CONE_KINDS = {"orthant": Orthant, "second_order": SecondOrder}
_NORM_KINDS = {"euclidean": Euclidean, "max": MaxNorm}


def cmd_estimate_k(args) -> int:
    if args.scenario:
        scn = load_scenario(args.scenario)
        cone, norm = scn.space.cone, scn.space.norm
        seed = args.seed if args.seed is not None else scn.seed
    else:
        cone = _CONE_KINDS[args.cone_kind](args.dim)
        norm = _NORM_KINDS[args.norm]()
        seed = 0 if args.seed is None else args.seed
    est = estimate_normal_constant(cone, norm, seed=seed, n_samples=args.samples)
    _emit({
        "command": "estimate-k",
        "cone": type(cone).__name__,
        "dim": cone.dim,
        "norm": type(norm).__name__,
        "value": est.value,
        "samples_used": est.samples_used,
        "seed": est.seed,
        "is_analytic": est.is_analytic,
    })
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse's default SystemExit(2) would collide with "2 = violation"
    def error(self, message):
        raise ScenarioError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="conefix",
        description="Classify, solve, and verify cone-metric fixed point scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--scenario", help="path to a scenario JSON file")
        p.add_argument("--out", help="directory for traces and generated files")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument(
            "--variant",
            choices=["classic", "as-printed"],
            help="text variant used for combined-inequality conditions",
        )

    p = sub.add_parser("classify")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen")
    common(p)
    p.add_argument("--n", type=int, default=4, help="number of points")
    p.add_argument("--m", type=int, default=2, help="ambient dimension")
    p.add_argument(
        "--cone-kind",
        default="orthant",
        choices=["orthant", "second_order", "polyhedral"],
    )
    p.add_argument("--name", help="scenario name (also the file stem)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("estimate-k")
    common(p)
    p.add_argument("--cone-kind", default="orthant", choices=sorted(_CONE_KINDS))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--norm", default="euclidean", choices=sorted(_NORM_KINDS))
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_estimate_k)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except PreimageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 4
    except ConefixError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
