"""Scenario files: a frozen JSON syntax for spaces, map pairs, and runs.

A scenario bundles everything one experiment needs: the space (domain,
cone, norm, metric), the map pair, the conditions to test, and solver
settings.  All sampling seeds live in the file, so identical scenarios
produce byte-identical reports.  Validation errors name the offending
field with a dotted path, e.g. ``conditions[0].b``.

Schema sketch (see README for the full table)::

    {
      "name": "linear-pair",
      "seed": 0,
      "n_samples": 64,
      "space": {
        "domain": {"kind": "continuous", "dim": 1, "box": [[-16, 16]]},
        "cone":   {"kind": "orthant", "dim": 1},
        "norm":   {"kind": "euclidean"},
        "metric": {"kind": "induced", "scale": [1.0]}
      },
      "maps": {
        "s": {"kind": "affine", "matrix": [[0.25]]},
        "t": {"kind": "affine", "matrix": [[0.5]]}
      },
      "conditions": [{"family": "jungck", "a": 0.5, "fit": true}],
      "solver": {"x0": [8.0], "tol": 1e-8, "max_iter": 100}
    }
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .cones import Euclidean, MaxNorm, Orthant, Polyhedral, SecondOrder, Weighted
from .conditions import (
    Chatterjea,
    ConditionSpec,
    CrossWeakContraction,
    Jungck,
    Kannan,
    SinghContraction,
    WeakContraction,
    Zamfirescu,
    ZamfirescuMax,
)
from .errors import ConefixError, ScenarioError
from .maps import Affine, FiniteTable, MapSpec, ScalarRational
from .spaces import (
    ConeMetricSpace,
    Continuous,
    FinitePoints,
    InducedMetric,
    TableMetric,
)

_FAMILIES: dict[str, tuple[type, tuple[str, ...]]] = {
    "jungck": (Jungck, ("a",)),
    "kannan": (Kannan, ("b",)),
    "chatterjea": (Chatterjea, ("c",)),
    "singh": (SinghContraction, ("a", "b", "c")),
    "zamfirescu": (Zamfirescu, ("a", "b", "c")),
    "zamfirescu_max": (ZamfirescuMax, ("h",)),
    "weak": (WeakContraction, ("delta", "L")),
    "cross_weak": (CrossWeakContraction, ("delta", "L")),
}

_FITTABLE = {"jungck", "kannan", "chatterjea", "zamfirescu_max"}


@dataclass(frozen=True)
class ConditionRequest:
    family: str
    condition: ConditionSpec | None   # None when the entry only asks for a fit
    fit: bool


@dataclass(frozen=True)
class SolverSettings:
    x0: object
    tol: float
    max_iter: int


@dataclass(frozen=True)
class Scenario:
    name: str
    space: ConeMetricSpace
    s: MapSpec
    t: MapSpec
    conditions: tuple[ConditionRequest, ...]
    solver: SolverSettings | None
    seed: int
    n_samples: int


# ---------------------------------------------------------------------------
# field plumbing
# ---------------------------------------------------------------------------

def _get(node, key, path, kind=None, default=KeyError):
    if not isinstance(node, dict):
        raise ScenarioError(f"{path}: expected an object")
    if key not in node:
        if default is KeyError:
            raise ScenarioError(f"{path}.{key}: required field is missing")
        return default
    value = node[key]
    if kind is not None and not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(
            k.__name__ for k in kind
        )
        raise ScenarioError(f"{path}.{key}: expected {names}")
    return value


def _number(node, key, path, default=KeyError):
    value = _get(node, key, path, default=default)
    if value is default and default is not KeyError:
        return default
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}.{key}: expected a number")
    return float(value)


def _array(node, key, path, default=KeyError):
    value = _get(node, key, path, default=default)
    if value is default and default is not KeyError:
        return default
    try:
        return np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}.{key}: not a numeric array ({exc})") from exc


def _build(path, factory, *args, **kwargs):
    """Run a library constructor, rewrapping its complaint under the path."""
    try:
        return factory(*args, **kwargs)
    except (ConefixError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# section builders
# ---------------------------------------------------------------------------

def _build_domain(node, path):
    kind = _get(node, "kind", path, str)
    if kind == "continuous":
        dim = int(_number(node, "dim", path))
        box = _array(node, "box", path)
        return _build(path, Continuous, dim, box)
    if kind == "finite":
        return _build(path, FinitePoints, int(_number(node, "count", path)))
    raise ScenarioError(f"{path}.kind: unknown domain kind {kind!r}")


def _build_cone(node, path):
    kind = _get(node, "kind", path, str)
    tol = _number(node, "tolerance", path, default=None)
    extra = {} if tol is None else {"interior_tolerance": tol}
    if kind == "orthant":
        return _build(path, Orthant, int(_number(node, "dim", path)), **extra)
    if kind == "second_order":
        return _build(path, SecondOrder, int(_number(node, "dim", path)), **extra)
    if kind == "polyhedral":
        normals = _array(node, "normals", path)
        return _build(path, Polyhedral, normals, **extra)
    raise ScenarioError(f"{path}.kind: unknown cone kind {kind!r}")


def _build_norm(node, path):
    kind = _get(node, "kind", path, str)
    if kind == "euclidean":
        return Euclidean()
    if kind == "max":
        return MaxNorm()
    if kind == "weighted":
        return _build(path, Weighted, _array(node, "weights", path))
    raise ScenarioError(f"{path}.kind: unknown norm kind {kind!r}")


def _build_metric(node, path):
    kind = _get(node, "kind", path, str)
    if kind == "induced":
        return _build(path, InducedMetric, _array(node, "scale", path))
    if kind == "table":
        return _build(path, TableMetric, _array(node, "values", path))
    raise ScenarioError(f"{path}.kind: unknown metric kind {kind!r}")


def _build_space(node, path):
    domain = _build_domain(_get(node, "domain", path, dict), f"{path}.domain")
    cone = _build_cone(_get(node, "cone", path, dict), f"{path}.cone")
    norm = _build_norm(_get(node, "norm", path, dict), f"{path}.norm")
    metric = _build_metric(_get(node, "metric", path, dict), f"{path}.metric")
    return _build(path, ConeMetricSpace, domain, cone, norm, metric)


def _build_map(node, path):
    kind = _get(node, "kind", path, str)
    if kind == "affine":
        matrix = _array(node, "matrix", path)
        offset = _array(node, "offset", path, default=None)
        if offset is None:
            offset = np.zeros(matrix.shape[0] if matrix.ndim == 2 else 1)
        return _build(path, Affine, matrix, offset)
    if kind == "rational":
        return _build(
            path,
            ScalarRational,
            _array(node, "numerator", path),
            _array(node, "denominator", path),
        )
    if kind == "table":
        images = _get(node, "images", path, list)
        return _build(path, FiniteTable, np.asarray(images))
    raise ScenarioError(f"{path}.kind: unknown map kind {kind!r}")


def _build_condition(node, path):
    family = _get(node, "family", path, str)
    if family not in _FAMILIES:
        raise ScenarioError(f"{path}.family: unknown family {family!r}")
    cls, params = _FAMILIES[family]
    fit = _get(node, "fit", path, bool, default=False)
    if fit and family not in _FITTABLE:
        raise ScenarioError(
            f"{path}.fit: {family} is not a single-parameter family"
        )
    given = [p for p in params if p in node]
    if not given:
        if not fit:
            raise ScenarioError(
                f"{path}: needs parameter(s) {params} or \"fit\": true"
            )
        return ConditionRequest(family, None, True)
    kwargs = {}
    for p in params:
        if p in node:
            kwargs[p] = _number(node, p, path)
        elif p != "L":            # L defaults to 0 in the weak families
            raise ScenarioError(f"{path}.{p}: required field is missing")
    if family == "singh":
        variant = _get(node, "variant", path, str, default="classic")
        kwargs["text_variant"] = variant
    # constructor messages name the offending parameter themselves
    cond = _build(path, cls, **kwargs)
    return ConditionRequest(family, cond, fit)


# ---------------------------------------------------------------------------
# top level
# ---------------------------------------------------------------------------

def scenario_from_dict(data, origin="scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(f"{origin}: top level must be an object")
    name = _get(data, "name", origin, str, default="unnamed")
    seed = int(_number(data, "seed", origin, default=0.0))
    n_samples = int(_number(data, "n_samples", origin, default=64.0))
    if n_samples < 1:
        raise ScenarioError(f"{origin}.n_samples: must be at least 1")
    space = _build_space(_get(data, "space", origin, dict), f"{origin}.space")
    maps = _get(data, "maps", origin, dict)
    s = _build_map(_get(maps, "s", f"{origin}.maps", dict), f"{origin}.maps.s")
    t = _build_map(_get(maps, "t", f"{origin}.maps", dict), f"{origin}.maps.t")
    cond_nodes = _get(data, "conditions", origin, list, default=[])
    conditions = tuple(
        _build_condition(node, f"{origin}.conditions[{i}]")
        for i, node in enumerate(cond_nodes)
    )
    solver = None
    solver_node = _get(data, "solver", origin, dict, default=None)
    if solver_node is not None:
        spath = f"{origin}.solver"
        x0 = _get(solver_node, "x0", spath)
        if isinstance(space.domain, FinitePoints):
            if isinstance(x0, bool) or not isinstance(x0, int):
                raise ScenarioError(f"{spath}.x0: expected a point index")
        else:
            x0 = _array(solver_node, "x0", spath)
        tol = _number(solver_node, "tol", spath, default=1e-9)
        max_iter = int(_number(solver_node, "max_iter", spath, default=100.0))
        solver = SolverSettings(x0, tol, max_iter)
    return Scenario(name, space, s, t, conditions, solver, seed, n_samples)


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(data)


def apply_overrides(scn: Scenario, seed=None, variant=None) -> Scenario:
    """Command-line overrides: the seed, and the text variant of (S)-type rows."""
    if seed is not None:
        scn = dataclasses.replace(scn, seed=int(seed))
    if variant is not None:
        rows = []
        for req in scn.conditions:
            if req.condition is not None and isinstance(
                req.condition, SinghContraction
            ):
                cond = dataclasses.replace(req.condition, text_variant=variant)
                req = dataclasses.replace(req, condition=cond)
            rows.append(req)
        scn = dataclasses.replace(scn, conditions=tuple(rows))
    return scn


# ---------------------------------------------------------------------------
# serialization (used by the generator subcommand)
# ---------------------------------------------------------------------------

def _cone_to_dict(cone):
    if isinstance(cone, Orthant):
        return {"kind": "orthant", "dim": cone.dim}
    if isinstance(cone, SecondOrder):
        return {"kind": "second_order", "dim": cone.dim}
    return {"kind": "polyhedral", "normals": cone.normals.tolist()}


def instance_to_dict(inst, name) -> dict:
    """Scenario document for a finite instance; floats keep full precision."""
    space = inst.space
    return {
        "name": name,
        "seed": 0 if inst.seed is None else int(inst.seed),
        "space": {
            "domain": {"kind": "finite", "count": space.domain.count},
            "cone": _cone_to_dict(space.cone),
            "norm": {"kind": "euclidean"},
            "metric": {"kind": "table", "values": space.metric.table.tolist()},
        },
        "maps": {
            "s": {"kind": "table", "images": inst.s.images.tolist()},
            "t": {"kind": "table", "images": inst.t.images.tolist()},
        },
        "conditions": [],
        "solver": {"x0": 0, "tol": 1e-9, "max_iter": 200},
    }


def dump_scenario(data: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
