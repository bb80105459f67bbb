"""Self-map pairs (S, T): application, commutation, range inclusion, preimages.

Three machine-checkable map families are supported:

* ``Affine(matrix, offset)``          on continuous domains in R^k,
* ``ScalarRational(num, den)``        on continuous domains in R (polynomial
                                      coefficients in ascending order),
* ``FiniteTable(images)``             on finite index domains.

The (S,T)-iteration needs x with T(x) = y at every step; ``t_preimage``
makes that explicit per family (linear solve, bracketed root find, table
scan) instead of hiding it behind an approximation.  Non-injective maps
resolve ties deterministically: smallest index for tables, leftmost root
for rational maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .cones import as_vec
from .errors import DomainError, PreimageError
from .spaces import Continuous, FinitePoints, PointDomain, sample_domain_points

_DEN_TOL = 1e-12


# ---------------------------------------------------------------------------
# map variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Affine:
    """x -> matrix @ x + offset on R^k."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        offset = np.atleast_1d(np.asarray(self.offset, dtype=float))
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("affine matrix must be square")
        if offset.shape != (matrix.shape[0],):
            raise ValueError("affine offset length must match the matrix")
        if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(offset))):
            raise ValueError("affine coefficients must be finite")
        matrix.setflags(write=False)
        offset.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ScalarRational:
    """x -> num(x) / den(x) on M subset of R, coefficients ascending."""

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        num = np.atleast_1d(np.asarray(self.numerator, dtype=float))
        den = np.atleast_1d(np.asarray(self.denominator, dtype=float))
        if num.ndim != 1 or den.ndim != 1:
            raise ValueError("polynomial coefficients must be 1-D")
        if not (np.all(np.isfinite(num)) and np.all(np.isfinite(den))):
            raise ValueError("polynomial coefficients must be finite")
        if not np.any(den != 0.0):
            raise ValueError("denominator polynomial is identically zero")
        num.setflags(write=False)
        den.setflags(write=False)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)


@dataclass(frozen=True, eq=False)
class FiniteTable:
    """index -> images[index] on a finite domain of len(images) points."""

    images: np.ndarray

    def __post_init__(self):
        images = np.asarray(self.images)
        if images.ndim != 1 or images.size < 1:
            raise ValueError("image table must be a nonempty 1-D array")
        if not np.issubdtype(images.dtype, np.integer):
            as_int = images.astype(int)
            if np.any(as_int != images):
                raise ValueError("image table entries must be integers")
            images = as_int
        if np.any(images < 0) or np.any(images >= images.size):
            raise ValueError(
                f"image table entries must lie in [0, {images.size})"
            )
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    @property
    def size(self) -> int:
        return self.images.size


MapSpec = Affine | ScalarRational | FiniteTable


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def apply_map(spec: MapSpec, p):
    """Image of point ``p`` under the map."""
    if isinstance(spec, FiniteTable):
        idx = int(p)
        if idx != p or not 0 <= idx < spec.size:
            raise DomainError(
                f"index {p!r} outside the table domain of {spec.size} points"
            )
        return int(spec.images[idx])
    if isinstance(spec, Affine):
        x = as_vec(p, spec.dim)
        return spec.matrix @ x + spec.offset
    if isinstance(spec, ScalarRational):
        x = float(as_vec(p, 1)[0])
        den = npoly.polyval(x, spec.denominator)
        if abs(den) <= _DEN_TOL:
            raise DomainError(f"denominator vanishes at x = {x!r}")
        return np.array([npoly.polyval(x, spec.numerator) / den])
    raise TypeError(f"unknown map {spec!r}")


def _map_dim(spec: MapSpec) -> int | None:
    if isinstance(spec, Affine):
        return spec.dim
    if isinstance(spec, ScalarRational):
        return 1
    return None


# ---------------------------------------------------------------------------
# commutation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommuteReport:
    commutes: bool
    mode: str                       # "exact" or "sampled"
    witness: object = None          # point with S(T(p)) != T(S(p))
    deviation: float = 0.0          # norm of the image gap at the witness


def check_commuting(
    s: MapSpec,
    t: MapSpec,
    domain: PointDomain,
    seed: int = 0,
    n_samples: int = 128,
    tol: float = 1e-9,
) -> CommuteReport:
    """Does S(T(p)) = T(S(p)) hold on the domain?

    Affine pairs and table pairs are decided exactly (algebra, respectively
    exhaustive scan); anything involving a rational map is sampled over the
    domain box, so a positive answer is only "no violation found".
    """
    _check_domain_compat(s, domain)
    _check_domain_compat(t, domain)
    if isinstance(s, FiniteTable) and isinstance(t, FiniteTable):
        st_ = s.images[t.images]
        ts_ = t.images[s.images]
        bad = np.nonzero(st_ != ts_)[0]
        if bad.size == 0:
            return CommuteReport(True, "exact")
        p = int(bad[0])
        return CommuteReport(
            False, "exact", witness=p, deviation=float(abs(st_[p] - ts_[p]))
        )
    if isinstance(s, Affine) and isinstance(t, Affine):
        gap_mat = s.matrix @ t.matrix - t.matrix @ s.matrix
        gap_off = s.matrix @ t.offset + s.offset - (t.matrix @ s.offset + t.offset)
        if np.abs(gap_mat).max() <= tol and np.abs(gap_off).max() <= tol:
            return CommuteReport(True, "exact")
        # a deterministic witness among 0 and +-e_i always exists: the gap
        # map p -> gap_mat p + gap_off cannot vanish on all of them
        candidates = [np.zeros(s.dim)]
        for i in range(s.dim):
            e = np.zeros(s.dim)
            e[i] = 1.0
            candidates.extend([e, -e])
        devs = [float(np.linalg.norm(gap_mat @ p + gap_off)) for p in candidates]
        best = int(np.argmax(devs))
        return CommuteReport(False, "exact", candidates[best], devs[best])
    if not isinstance(domain, Continuous):
        raise ValueError("mixed table and continuous maps share no domain")
    rng = np.random.default_rng(seed)
    pts = sample_domain_points(domain, rng, n_samples)
    worst_p, worst_dev = None, 0.0
    for p in pts:
        gap = apply_map(s, apply_map(t, p)) - apply_map(t, apply_map(s, p))
        dev = float(np.linalg.norm(gap))
        if dev > worst_dev:
            worst_p, worst_dev = p, dev
    if worst_dev > tol:
        return CommuteReport(False, "sampled", worst_p, worst_dev)
    return CommuteReport(True, "sampled")


def _check_domain_compat(spec: MapSpec, domain: PointDomain) -> None:
    if isinstance(spec, FiniteTable):
        if not isinstance(domain, FinitePoints) or spec.size != domain.count:
            raise ValueError("table map does not fit the domain")
    else:
        if not isinstance(domain, Continuous):
            raise ValueError("continuous map on a finite domain")
        dim = _map_dim(spec)
        if dim is not None and dim != domain.dim:
            raise ValueError(
                f"map dimension {dim} does not match domain dimension {domain.dim}"
            )


# ---------------------------------------------------------------------------
# range inclusion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeReport:
    included: bool
    mode: str                       # "exact" or "sampled"
    witness: object = None          # S-image with no T-preimage found


def check_range_inclusion(
    s: MapSpec,
    t: MapSpec,
    domain: PointDomain,
    seed: int = 0,
    n_samples: int = 64,
    tol: float = 1e-9,
) -> RangeReport:
    """Does every S-image have a T-preimage (S(M) inside T(M))?

    Exact for tables (index-set inclusion) and for invertible affine T
    (surjectivity); otherwise sampled preimage probes.
    """
    _check_domain_compat(s, domain)
    _check_domain_compat(t, domain)
    if isinstance(s, FiniteTable) and isinstance(t, FiniteTable):
        t_range = set(t.images.tolist())
        for idx in s.images.tolist():
            if idx not in t_range:
                return RangeReport(False, "exact", witness=idx)
        return RangeReport(True, "exact")
    if isinstance(t, Affine) and abs(np.linalg.det(t.matrix)) > tol:
        return RangeReport(True, "exact")
    rng = np.random.default_rng(seed)
    pts = sample_domain_points(domain, rng, n_samples)
    for p in pts:
        y = apply_map(s, p)
        try:
            t_preimage(t, y, domain=domain, tol=max(tol, 1e-9))
        except PreimageError:
            return RangeReport(False, "sampled", witness=y)
    return RangeReport(True, "sampled")


# ---------------------------------------------------------------------------
# preimages
# ---------------------------------------------------------------------------

_N_BRACKETS = 1024


def t_preimage(t: MapSpec, y, domain: PointDomain | None = None, tol: float = 1e-9):
    """A point x with T(x) = y (within ``tol``), or PreimageError.

    Affine maps use a linear solve (minimum-norm solution when singular),
    tables return the smallest preimage index, rational maps bracket the
    leftmost root of num(x) - y*den(x) inside the domain box.
    """
    if isinstance(t, FiniteTable):
        idx = int(y)
        hits = np.nonzero(t.images == idx)[0]
        if hits.size == 0:
            raise PreimageError(f"index {idx} has no preimage under the table", value=y)
        return int(hits[0])
    if isinstance(t, Affine):
        target = as_vec(y, t.dim) - t.offset
        try:
            x = np.linalg.solve(t.matrix, target)
        except np.linalg.LinAlgError:
            x, *_ = np.linalg.lstsq(t.matrix, target, rcond=None)
        if float(np.linalg.norm(t.matrix @ x - target)) > tol:
            raise PreimageError(
                f"affine system has no solution for target {y!r}", value=y
            )
        return x
    if isinstance(t, ScalarRational):
        if not isinstance(domain, Continuous) or domain.dim != 1:
            raise ValueError("rational preimages need a 1-D continuous domain")
        return _rational_preimage(t, float(as_vec(y, 1)[0]), domain, tol)
    raise TypeError(f"unknown map {t!r}")


def _rational_preimage(t: ScalarRational, y: float, domain: Continuous, tol: float):
    from scipy.optimize import brentq

    # roots of g(x) = num(x) - y * den(x), scanned left to right
    g_num = npoly.polysub(t.numerator, y * t.denominator)

    def g(x):
        return npoly.polyval(x, g_num)

    lo, hi = domain.box[0]
    xs = np.linspace(lo, hi, _N_BRACKETS + 1)
    vals = g(xs)
    for i, x in enumerate(xs):
        if vals[i] == 0.0 and _accept_root(t, x, y, tol):
            return np.array([float(x)])
        if i + 1 < xs.size:
            a, b = vals[i], vals[i + 1]
            # compare signs rather than the product, which can underflow
            if (a < 0.0 < b) or (b < 0.0 < a):
                root = float(brentq(g, xs[i], xs[i + 1], xtol=1e-15))
                if _accept_root(t, root, y, tol):
                    return np.array([root])
    raise PreimageError(
        f"no preimage of {y!r} found inside the domain box", value=y
    )


def _accept_root(t: ScalarRational, x: float, y: float, tol: float) -> bool:
    den = npoly.polyval(x, t.denominator)
    if abs(den) <= _DEN_TOL:
        return False
    val = npoly.polyval(x, t.numerator) / den
    return abs(val - y) <= max(tol, 1e-9)
