"""Cone metric spaces: point domains, distance rules, and axiom diagnostics.

A cone metric takes its values in the ambient ordered space R^m rather than in
the reals; the metric axioms are stated against the cone's partial order.  Two
distance rules are supported:

* ``InducedMetric(scale)``  --  d(x, y) = scale * |x - y|_2 on a continuous
  domain M subset of R^k, each coordinate a fixed nonnegative multiple of the
  base euclidean distance (at least one multiple positive);
* ``TableMetric(table)``    --  an explicit (n, n, m) array on a finite domain.

Induced metrics satisfy the axioms by construction; tables can encode anything
and are what ``verify_axioms`` exists for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import Cone, Norm, as_vec, cone_contains, norm_values, partial_leq
from .errors import DimensionMismatchError, DomainError


# ---------------------------------------------------------------------------
# point domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Continuous:
    """Points live in R^dim; ``box`` is the (dim, 2) sampling region."""

    dim: int
    box: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("domain dimension must be >= 1")
        box = np.asarray(self.box, dtype=float)
        if box.shape != (self.dim, 2):
            raise ValueError(f"sampling box must have shape ({self.dim}, 2)")
        if not np.all(np.isfinite(box)) or not np.all(box[:, 1] > box[:, 0]):
            raise ValueError("sampling box must be finite with positive volume")
        box.setflags(write=False)
        object.__setattr__(self, "box", box)


@dataclass(frozen=True)
class FinitePoints:
    """Points are the indices 0 .. count-1."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("finite domain needs at least one point")


PointDomain = Continuous | FinitePoints


def check_point(domain: PointDomain, p):
    """Normalize ``p`` to the domain's point representation or raise."""
    if isinstance(domain, FinitePoints):
        idx = int(p)
        if idx != p or not 0 <= idx < domain.count:
            raise DomainError(
                f"point index {p!r} outside finite domain of {domain.count} points"
            )
        return idx
    return as_vec(p, domain.dim)


def sample_domain_points(domain: Continuous, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform draws from the sampling box, shape (count, dim)."""
    lo = domain.box[:, 0]
    hi = domain.box[:, 1]
    return rng.uniform(lo, hi, size=(count, domain.dim))


# ---------------------------------------------------------------------------
# distance rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InducedMetric:
    """d(x, y) = scale * euclidean(x, y); scale entries >= 0, not all zero."""

    scale: np.ndarray

    def __post_init__(self):
        scale = np.asarray(self.scale, dtype=float)
        if scale.ndim != 1 or scale.size < 1:
            raise ValueError("scale must be a nonempty 1-D array")
        if not np.all(np.isfinite(scale)) or np.any(scale < 0.0):
            raise ValueError("scale entries must be finite and nonnegative")
        if not np.any(scale > 0.0):
            raise ValueError("at least one scale entry must be positive")
        scale.setflags(write=False)
        object.__setattr__(self, "scale", scale)


@dataclass(frozen=True, eq=False)
class TableMetric:
    """Explicit distance table, shape (n, n, m)."""

    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 3 or table.shape[0] != table.shape[1]:
            raise ValueError("metric table must have shape (n, n, m)")
        if not np.all(np.isfinite(table)):
            raise ValueError("metric table entries must be finite")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


Metric = InducedMetric | TableMetric


@dataclass(frozen=True, eq=False)
class ConeMetricSpace:
    domain: PointDomain
    cone: Cone
    norm: Norm
    metric: Metric

    def __post_init__(self):
        m = self.cone.dim
        if isinstance(self.metric, InducedMetric):
            if not isinstance(self.domain, Continuous):
                raise ValueError("induced metrics require a continuous domain")
            if self.metric.scale.size != m:
                raise DimensionMismatchError(
                    f"metric scale has {self.metric.scale.size} coordinates, "
                    f"cone lives in dimension {m}"
                )
        elif isinstance(self.metric, TableMetric):
            if not isinstance(self.domain, FinitePoints):
                raise ValueError("table metrics require a finite domain")
            n_tab, _, m_tab = self.metric.table.shape
            if n_tab != self.domain.count:
                raise DimensionMismatchError(
                    f"metric table covers {n_tab} points, domain has {self.domain.count}"
                )
            if m_tab != m:
                raise DimensionMismatchError(
                    f"metric table values have {m_tab} coordinates, "
                    f"cone lives in dimension {m}"
                )
        else:
            raise TypeError(f"unknown metric {self.metric!r}")

    @property
    def ambient_dim(self) -> int:
        return self.cone.dim


def distance(space: ConeMetricSpace, p, q) -> np.ndarray:
    """The cone-valued distance d(p, q), an m-vector."""
    p = check_point(space.domain, p)
    q = check_point(space.domain, q)
    if isinstance(space.metric, TableMetric):
        return space.metric.table[p, q].copy()
    diff = p - q
    base = float(np.sqrt((diff * diff).sum()))
    return space.metric.scale * base


def distance_norm(space: ConeMetricSpace, p, q) -> float:
    """Shorthand for the ambient norm of d(p, q)."""
    return float(norm_values(space.norm, distance(space, p, q)))


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomViolation:
    axiom: str                 # "CM1", "CM2", or "CM3"
    points: tuple
    values: tuple              # the offending distance vectors
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    violations: tuple[AxiomViolation, ...]
    n_points: int
    exhaustive: bool


def verify_axioms(space: ConeMetricSpace, points=None) -> AxiomReport:
    """Check CM1/CM2/CM3 on the given points (all of them, for finite domains).

    CM1 and CM2 run over all ordered pairs, CM3 over all ordered triples.
    On a finite domain with the default point set the check is exhaustive,
    so a passed report proves the table is a cone metric.
    """
    exhaustive = False
    if points is None:
        if isinstance(space.domain, FinitePoints):
            points = list(range(space.domain.count))
            exhaustive = True
        else:
            raise ValueError("continuous domains need an explicit point sample")
    else:
        points = [check_point(space.domain, p) for p in points]
        if isinstance(space.domain, FinitePoints):
            exhaustive = sorted(set(points)) == list(range(space.domain.count))
    if len(points) < 1:
        raise ValueError("need at least one point")

    cone = space.cone
    tol = cone.interior_tolerance
    violations = []
    n = len(points)
    dmat = np.empty((n, n, space.ambient_dim))
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            dmat[i, j] = distance(space, p, q)

    def same_point(p, q):
        if isinstance(space.domain, FinitePoints):
            return p == q
        return bool(np.array_equal(p, q))

    for i, p in enumerate(points):
        for j, q in enumerate(points):
            v = dmat[i, j]
            if not cone_contains(cone, v):
                violations.append(
                    AxiomViolation("CM1", (p, q), (v,), "distance outside the cone")
                )
            zero = float(np.abs(v).max()) <= tol
            if same_point(p, q) and not zero:
                violations.append(
                    AxiomViolation("CM1", (p, q), (v,), "nonzero self-distance")
                )
            elif zero and not same_point(p, q):
                violations.append(
                    AxiomViolation("CM1", (p, q), (v,), "zero distance between distinct points")
                )
            if j > i:
                w = dmat[j, i]
                if float(np.abs(v - w).max()) > tol:
                    violations.append(
                        AxiomViolation("CM2", (p, q), (v, w), "asymmetric distance")
                    )

    for i, p in enumerate(points):
        for j, q in enumerate(points):
            for k, r in enumerate(points):
                lhs = dmat[i, j]
                rhs = dmat[i, k] + dmat[k, j]
                if not partial_leq(cone, lhs, rhs):
                    violations.append(
                        AxiomViolation(
                            "CM3", (p, q, r), (lhs, rhs),
                            "triangle inequality fails in the cone order",
                        )
                    )

    return AxiomReport(not violations, tuple(violations), n, exhaustive)


# ---------------------------------------------------------------------------
# sequence diagnostics
# ---------------------------------------------------------------------------

def check_convergence(space: ConeMetricSpace, seq, candidate, tail_window: int, tol: float) -> bool:
    """True iff the last ``tail_window`` terms all sit within ``tol`` of the
    candidate, measured by the norm of the cone distance.

    The norm criterion is equivalent to cone-order convergence because every
    cone in scope is normal.
    """
    if len(seq) < 1:
        raise ValueError("sequence must be nonempty")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if tail_window < 1:
        raise ValueError("tail_window must be >= 1")
    tail = seq[-tail_window:]
    return all(distance_norm(space, x, candidate) <= tol for x in tail)


def cauchy_ratio_profile(space: ConeMetricSpace, seq) -> np.ndarray:
    """Consecutive step-norm ratios r_n = |d(x_{n+1}, x_n)| / |d(x_n, x_{n-1})|.

    A profile uniformly below some a < 1 is the hypothesis of the geometric
    Cauchy criterion.  Convention: 0/0 counts as 0 (the sequence has already
    stabilized); a nonzero numerator over a zero denominator is undefined and
    reported as NaN.
    """
    if len(seq) < 3:
        raise DomainError("need at least 3 points to form a ratio")
    steps = np.array(
        [distance_norm(space, seq[i + 1], seq[i]) for i in range(len(seq) - 1)]
    )
    num = steps[1:]
    den = steps[:-1]
    out = np.empty(num.size)
    for i in range(num.size):
        if den[i] > 0.0:
            out[i] = num[i] / den[i]
        elif num[i] == 0.0:
            out[i] = 0.0
        else:
            out[i] = np.nan
    return out
