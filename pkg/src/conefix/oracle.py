"""Exhaustive ground truth on finite instances.

A finite instance bundles a table-metric space with a table map pair; on it,
every universal claim is decidable by enumeration: condition checks over all
n^2 pairs, common fixed points by scanning indices, minimal constants by
exact per-pair ratios.  ``exact_minimal_constant`` deliberately reimplements
the ratio computation in plain Python loops so that it can cross-check the
vectorized fitter; the two routes must agree to the last bit on orthant
instances and must never be merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import Euclidean, Orthant, Polyhedral, SecondOrder
from .conditions import (
    Chatterjea,
    ConditionSpec,
    Jungck,
    Kannan,
    ViolationReport,
    ZamfirescuMax,
    check_condition,
)
from .errors import ParameterError
from .maps import FiniteTable
from .spaces import ConeMetricSpace, FinitePoints, TableMetric

_EXACT_FAMILIES = {
    Jungck: 1.0,
    Kannan: 0.5,
    Chatterjea: 0.5,
    ZamfirescuMax: 1.0,
}

MIN_POINT_SEPARATION = 0.05


@dataclass(frozen=True)
class FiniteInstance:
    space: ConeMetricSpace
    s: FiniteTable
    t: FiniteTable
    seed: int | None = None

    def __post_init__(self):
        if not isinstance(self.space.domain, FinitePoints):
            raise ValueError("finite instances need a finite domain")
        if not isinstance(self.space.metric, TableMetric):
            raise ValueError("finite instances need a table metric")
        n = self.space.domain.count
        if self.s.size != n or self.t.size != n:
            raise ValueError("map tables must cover the whole domain")

    @property
    def n_points(self) -> int:
        return self.space.domain.count


def enumerate_common_fixed_points(inst: FiniteInstance) -> list[int]:
    """All indices fixed by both maps, ascending."""
    return [
        p
        for p in range(inst.n_points)
        if inst.s.images[p] == p and inst.t.images[p] == p
    ]


def exhaustive_certify(inst: FiniteInstance, cond: ConditionSpec) -> ViolationReport:
    """Condition check over all ordered pairs; a pass is a proof here."""
    return check_condition(inst.space, inst.s, inst.t, cond)


@dataclass(frozen=True)
class ExactConstant:
    family: type
    feasible: bool
    value: float
    method: str                 # "exact" or "grid"


def exact_minimal_constant(inst: FiniteInstance, family: type) -> ExactConstant:
    """Minimal single parameter by direct per-pair ratio enumeration.

    Orthant cones reduce the cone order to coordinatewise comparisons, so
    the minimal parameter of a pair is a maximum of coordinate ratios and
    the instance's constant is the maximum over pairs, computed here in
    plain Python as an independent oracle.  Other cones fall back to a
    1e-3 parameter grid, reported as method "grid".
    """
    if family not in _EXACT_FAMILIES:
        raise ParameterError(
            f"{getattr(family, '__name__', family)!r} is not a single-parameter family"
        )
    bound = _EXACT_FAMILIES[family]
    if not isinstance(inst.space.cone, Orthant):
        return _grid_minimal_constant(inst, family, bound)

    table = inst.space.metric.table
    s_img = inst.s.images
    t_img = inst.t.images
    n, m = inst.n_points, inst.space.ambient_dim
    worst = -math.inf
    for x in range(n):
        for y in range(n):
            sx, sy, tx, ty = s_img[x], s_img[y], t_img[x], t_img[y]
            branch_reqs = []
            for branch in _exact_patterns(family, table, x, y, sx, sy, tx, ty):
                req = -math.inf
                for i in range(m):
                    lhs = float(table[sx, sy, i])
                    pat = float(branch[i])
                    if pat > 0.0:
                        r = lhs / pat
                    elif lhs <= 0.0:
                        r = 0.0
                    else:
                        r = math.inf
                    if r > req:
                        req = r
                branch_reqs.append(req)
            need = min(branch_reqs)
            if need > worst:
                worst = need
    return ExactConstant(family, worst < bound, worst, "exact")


def _exact_patterns(family, table, x, y, sx, sy, tx, ty):
    if family is Jungck:
        return [table[tx, ty]]
    if family is Kannan:
        return [[float(a) + float(b) for a, b in zip(table[sx, tx], table[sy, ty])]]
    if family is Chatterjea:
        return [[float(a) + float(b) for a, b in zip(table[sx, ty], table[sy, tx])]]
    # single-constant branch family: best of the three patterns
    return [
        table[tx, ty],
        [(float(a) + float(b)) / 2.0 for a, b in zip(table[sx, tx], table[sy, ty])],
        [(float(a) + float(b)) / 2.0 for a, b in zip(table[sx, ty], table[sy, tx])],
    ]


def _grid_minimal_constant(inst, family, bound, step=1e-3):
    for p in np.arange(0.0, bound, step):
        if exhaustive_certify(inst, family(float(p))).holds_on_checked:
            return ExactConstant(family, True, float(p), "grid")
    return ExactConstant(family, False, math.inf, "grid")


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------

def random_finite_instance(
    seed: int, n: int, m: int, cone_kind: str = "orthant"
) -> FiniteInstance:
    """Seeded random instance that satisfies every structural hypothesis.

    The metric table is induced from an embedding (n points in the plane,
    distances stretched along a fixed cone-interior direction), which makes
    the axioms hold by construction.  T is a uniform random index table and
    S is a power of it, so the pair commutes exactly and S's range sits
    inside T's.  Identical seeds give identical instances, bit for bit.
    """
    if n < 1 or m < 1:
        raise ParameterError("need n >= 1 points and ambient dimension m >= 1")
    rng = np.random.default_rng(seed)
    pts = _separated_points(rng, n)
    cone, direction = _cone_and_direction(rng, m, cone_kind)
    base = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    table = direction[None, None, :] * base[:, :, None]
    space = ConeMetricSpace(
        FinitePoints(n), cone, Euclidean(), TableMetric(table)
    )
    t_img = rng.integers(0, n, size=n)
    k = int(rng.integers(2, 5))
    s_img = np.arange(n)
    for _ in range(k):
        s_img = t_img[s_img]
    return FiniteInstance(space, FiniteTable(s_img), FiniteTable(t_img), seed=seed)


def _separated_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Points in the unit square, pairwise at least MIN_POINT_SEPARATION apart.

    Separation keeps every off-diagonal table entry well above the membership
    tolerance, so the verifier never mistakes close points for duplicates.
    """
    pts = []
    while len(pts) < n:
        cand = rng.uniform(-1.0, 1.0, size=2)
        if all(np.linalg.norm(cand - p) >= MIN_POINT_SEPARATION for p in pts):
            pts.append(cand)
    return np.array(pts)


def _cone_and_direction(rng, m, cone_kind):
    """A cone of the requested kind plus an interior direction for the table."""
    if cone_kind == "orthant":
        return Orthant(m), rng.uniform(0.2, 2.0, size=m)
    if cone_kind == "second_order":
        if m < 2:
            raise ParameterError("second-order cones need m >= 2")
        tail = rng.standard_normal(m - 1)
        tail_len = float(np.linalg.norm(tail))
        if tail_len == 0.0:
            tail_len = 1.0
        tail = tail / tail_len * rng.uniform(0.0, 0.9)
        direction = np.concatenate([[1.0], tail]) * rng.uniform(0.5, 2.0)
        return SecondOrder(m), direction
    if cone_kind == "polyhedral":
        gauss = rng.standard_normal((m, m))
        q, r = np.linalg.qr(gauss)
        q = q * np.sign(np.diag(r))[None, :]
        normals = q.T
        direction = q @ rng.uniform(0.2, 2.0, size=m)
        return Polyhedral(normals), direction
    raise ParameterError(
        "cone_kind must be 'orthant', 'second_order', or 'polyhedral'"
    )
