"""Cones in R^m, the partial order they induce, and normal-constant estimation.

A cone P is a closed, pointed subset of R^m that is stable under nonnegative
combinations.  It induces the partial order  x <= y  iff  y - x in P, and the
strict relation  x << y  iff  y - x lies in the interior of P.  Three concrete
families are supported:

* ``Orthant(m)``       -- componentwise nonnegative vectors,
* ``Polyhedral(N)``    -- intersection of half-spaces  <n_i, v> >= 0,
* ``SecondOrder(m)``   -- v[0] >= euclidean norm of v[1:].

Membership is tolerance-based and one-sided: boundary points count as members
(closedness), but not as interior points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError

DEFAULT_TOLERANCE = 1e-9

_SAMPLE_CHUNK = 4096


# ---------------------------------------------------------------------------
# cone variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orthant:
    """The nonnegative orthant in R^dim."""

    dim: int
    interior_tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("Orthant dimension must be >= 1")


@dataclass(frozen=True, eq=False)
class Polyhedral:
    """Cone given by facet normals: members satisfy <n_i, v> >= 0 for all i.

    ``normals`` is an (n_facets, dim) array.  Facet form keeps membership a
    direct inequality check; cones given by generator rays are out of scope.
    """

    normals: np.ndarray
    interior_tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        normals = np.asarray(self.normals, dtype=float)
        if normals.ndim != 2 or normals.shape[0] < 1:
            raise ValueError("facet normals must form a nonempty 2-D array")
        if not np.all(np.isfinite(normals)):
            raise ValueError("facet normals must be finite")
        if np.any(np.all(normals == 0.0, axis=1)):
            raise ValueError("zero facet normal")
        normals.setflags(write=False)
        object.__setattr__(self, "normals", normals)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]


@dataclass(frozen=True)
class SecondOrder:
    """The second-order (ice cream) cone: v[0] >= ||v[1:]||_2."""

    dim: int
    interior_tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("SecondOrder cone needs dimension >= 2")


Cone = Orthant | Polyhedral | SecondOrder


# ---------------------------------------------------------------------------
# norms on the ambient space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Euclidean:
    pass


@dataclass(frozen=True)
class MaxNorm:
    pass


@dataclass(frozen=True, eq=False)
class Weighted:
    """Weighted euclidean norm  sqrt(sum_i w_i v_i^2)  with positive weights."""

    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size < 1:
            raise ValueError("weights must be a nonempty 1-D array")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
            raise ValueError("weights must be finite and positive")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)


Norm = Euclidean | MaxNorm | Weighted


def norm_values(norm: Norm, vecs: np.ndarray) -> np.ndarray:
    """Norm of each vector along the last axis."""
    vecs = np.asarray(vecs, dtype=float)
    if isinstance(norm, Euclidean):
        return np.sqrt((vecs * vecs).sum(axis=-1))
    if isinstance(norm, MaxNorm):
        return np.abs(vecs).max(axis=-1)
    if isinstance(norm, Weighted):
        if vecs.shape[-1] != norm.weights.size:
            raise DimensionMismatchError(
                f"vector dimension {vecs.shape[-1]} does not match "
                f"{norm.weights.size} norm weights"
            )
        return np.sqrt((norm.weights * vecs * vecs).sum(axis=-1))
    raise TypeError(f"unknown norm {norm!r}")


def norm_value(norm: Norm, v: np.ndarray) -> float:
    return float(norm_values(norm, as_vec(v)))


def as_vec(v, dim: int | None = None) -> np.ndarray:
    """Coerce ``v`` to a 1-D float vector, checking its dimension if given."""
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {arr.shape}")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {arr.size}")
    return arr


# ---------------------------------------------------------------------------
# membership and order
# ---------------------------------------------------------------------------

def margins(cone: Cone, vecs: np.ndarray) -> np.ndarray:
    """Signed membership margin of each vector along the last axis.

    Nonnegative margin means the vector satisfies every defining inequality
    of the cone; the margin is the worst (smallest) slack among them.
    """
    vecs = np.asarray(vecs, dtype=float)
    if vecs.shape[-1] != cone.dim:
        raise DimensionMismatchError(
            f"vector dimension {vecs.shape[-1]} does not match cone dimension {cone.dim}"
        )
    if isinstance(cone, Orthant):
        return vecs.min(axis=-1)
    if isinstance(cone, Polyhedral):
        # broadcasting product + sum keeps the accumulation order identical
        # to the compiled kernel's left-to-right loop
        prods = (cone.normals * vecs[..., None, :]).sum(axis=-1)
        return prods.min(axis=-1)
    if isinstance(cone, SecondOrder):
        tail = vecs[..., 1:]
        return vecs[..., 0] - np.sqrt((tail * tail).sum(axis=-1))
    raise TypeError(f"unknown cone {cone!r}")


def margin(cone: Cone, v) -> float:
    return float(margins(cone, as_vec(v, cone.dim)))


def cone_contains(cone: Cone, v) -> bool:
    """True iff ``v`` belongs to the (closed) cone, up to the tolerance."""
    return margin(cone, v) >= -cone.interior_tolerance


def cone_interior_contains(cone: Cone, v) -> bool:
    """True iff ``v`` satisfies every membership inequality strictly."""
    return margin(cone, v) > cone.interior_tolerance


def partial_leq(cone: Cone, x, y) -> bool:
    """Order test  x <= y,  i.e.  y - x  is a cone member."""
    x = as_vec(x, cone.dim)
    y = as_vec(y, cone.dim)
    return cone_contains(cone, y - x)


def strictly_less(cone: Cone, x, y) -> bool:
    """Strict order test  x << y,  i.e.  y - x  is interior."""
    x = as_vec(x, cone.dim)
    y = as_vec(y, cone.dim)
    return cone_interior_contains(cone, y - x)


# ---------------------------------------------------------------------------
# normal constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalConstantEstimate:
    """Estimate of the least K with  0 <= x <= y  implying  ||x|| <= K ||y||.

    ``is_analytic`` marks exact values obtained from a monotone-norm
    argument; sampled values are underestimates of the true constant.
    """

    value: float
    samples_used: int
    seed: int
    is_analytic: bool


def analytic_normal_constant(cone: Cone, norm: Norm) -> float | None:
    """Exact normal constant where a monotonicity argument applies, else None.

    On the orthant, the euclidean, max, and positively weighted norms are all
    monotone (0 <= x <= y componentwise implies ||x|| <= ||y||), so K = 1.
    """
    if isinstance(cone, Orthant) and isinstance(norm, (Euclidean, MaxNorm, Weighted)):
        return 1.0
    return None


def estimate_normal_constant(
    cone: Cone, norm: Norm, seed: int = 0, n_samples: int = 10_000
) -> NormalConstantEstimate:
    """Normal constant of the cone under the given norm.

    Returns the analytic value when one is known; otherwise the supremum of
    ||x|| / ||y|| over ``n_samples`` sampled ordered pairs 0 <= x <= y with
    y rescaled to unit norm.  The sampled value is reproducible for a fixed
    seed and monotone nondecreasing in ``n_samples`` for a fixed seed stream.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    analytic = analytic_normal_constant(cone, norm)
    if analytic is not None:
        return NormalConstantEstimate(analytic, 0, seed, True)
    value = sample_order_ratio_sup(cone, norm, seed, n_samples)
    return NormalConstantEstimate(value, n_samples, seed, False)


def sample_order_ratio_sup(cone: Cone, norm: Norm, seed: int, n_samples: int) -> float:
    """Sampled sup of ||x||/||y|| over ordered pairs 0 <= x <= y, ||y|| = 1.

    Pairs are built constructively as y = x + w with sampled members x, w,
    so both order inequalities hold by cone stability.  The degenerate pair
    x = y is always included, which pins the sup at >= 1.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = 1.0  # the x = y pair
    remaining = n_samples
    while remaining > 0:
        take = min(_SAMPLE_CHUNK, remaining)
        x = _sample_members(cone, rng, _SAMPLE_CHUNK)[:take]
        w = _sample_members(cone, rng, _SAMPLE_CHUNK)[:take]
        y = x + w
        ny = norm_values(norm, y)
        ok = ny > 0.0
        if np.any(ok):
            ratios = norm_values(norm, x[ok]) / ny[ok]
            best = max(best, float(ratios.max()))
        remaining -= take
    return best


def _sample_members(cone: Cone, rng: np.random.Generator, count: int) -> np.ndarray:
    if isinstance(cone, Orthant):
        return np.abs(rng.standard_normal((count, cone.dim)))
    if isinstance(cone, SecondOrder):
        m = cone.dim
        head = np.abs(rng.standard_normal(count))
        dirs = rng.standard_normal((count, m - 1))
        lens = np.sqrt((dirs * dirs).sum(axis=-1))
        lens[lens == 0.0] = 1.0
        frac = rng.uniform(0.0, 1.0, count)
        out = np.empty((count, m))
        out[:, 0] = head
        out[:, 1:] = dirs / lens[:, None] * (head * frac)[:, None]
        return out
    if isinstance(cone, Polyhedral):
        return _sample_polyhedral(cone, rng, count)
    raise TypeError(f"unknown cone {cone!r}")


def _sample_polyhedral(cone: Polyhedral, rng: np.random.Generator, count: int) -> np.ndarray:
    # Blend gaussian draws toward a fixed interior direction just enough to
    # satisfy every facet; the blend coefficient has a closed form because
    # facet margins are affine in it.
    v_int = _interior_direction(cone)
    g = rng.standard_normal((count, cone.dim))
    glen = np.sqrt((g * g).sum(axis=-1))
    glen[glen == 0.0] = 1.0
    a = g @ cone.normals.T                              # (count, f)
    c = glen[:, None] * (cone.normals @ v_int)[None, :]  # (count, f), > 0
    need = np.where(a < 0.0, -a / (c - a), 0.0)
    beta = need.max(axis=-1)
    return (1.0 - beta)[:, None] * g + (beta * glen)[:, None] * v_int[None, :]


@lru_cache(maxsize=128)
def _interior_direction(cone: Polyhedral) -> np.ndarray:
    """Direction with strictly positive margin against every facet.

    Found by maximizing the worst facet margin over the unit box.  Raises if
    the cone has no detectable interior (e.g. contradictory facets), which
    also flags degenerate inputs that fail the nonemptiness requirement.
    """
    from scipy.optimize import linprog

    normals = cone.normals
    f, m = normals.shape
    # variables: v (m entries), t; maximize t subject to N v >= t
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-normals, np.ones((f, 1))])
    b_ub = np.zeros(f)
    bounds = [(-1.0, 1.0)] * m + [(0.0, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success or res.x[-1] <= 1e-7:
        raise ValueError(
            "polyhedral cone has no detectable interior direction; "
            "cannot sample members"
        )
    return res.x[:-1]
