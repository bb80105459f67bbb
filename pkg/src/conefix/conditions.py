"""Contraction conditions on map pairs, their checkers, fitters, and algebra.

Every condition bounds d(Sx, Sy) by a combination of the six pair distances

    D = d(Tx, Ty)    u = d(Sx, Tx)    v = d(Sy, Ty)
    w = d(Sx, Ty)    z = d(Sy, Tx)

in the cone order.  The families:

* ``SinghContraction(a, b, c)`` -- a*D + b*(u+v) + c*(w+z); the ``text_variant``
  switch also offers the one-sided form a*D + b*(u+v) + c*(w+v), which some
  sources print for the same theorem;
* ``Jungck(a)``                 -- a*D;
* ``Kannan(b)``                 -- b*(u+v), a generalized Kannan bound;
* ``Chatterjea(c)``             -- c*(w+z), a generalized Chatterjea bound;
* ``Zamfirescu(a, b, c)``       -- per pair, at least one of the three bounds
  a*D, b*(u+v), c*(w+z) holds;
* ``ZamfirescuMax(h)``          -- per pair, at least one of h*D, h*(u+v)/2,
  h*(w+z)/2 holds (single-constant form of the previous family);
* ``WeakContraction(delta, L)`` -- delta*D + L*u;
* ``CrossWeakContraction(delta, L)`` -- delta*D + L*z, the swapped-argument
  weak form that the Zamfirescu family also implies.

Checking evaluates the inequality with ``partial_leq``; a sampled check can
only ever report "no violation found", never prove the condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import Orthant, margins
from .errors import ParameterError
from .kernels import condition_slacks as _kernel_slacks
from .kernels import minimal_ratios as _kernel_ratios
from .kernels._fallback import _pair_stacks
from .maps import FiniteTable, MapSpec, apply_map
from .spaces import (
    ConeMetricSpace,
    Continuous,
    FinitePoints,
    TableMetric,
    distance,
    sample_domain_points,
)

TEXT_VARIANTS = ("classic", "as_printed")


def _check_unit(name: str, value: float, upper: float, upper_text: str) -> None:
    if not 0.0 <= value < upper:
        raise ParameterError(f"{name} must lie in [0, {upper_text})")


# ---------------------------------------------------------------------------
# condition families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SinghContraction:
    """Combined bound a*D + b*(u+v) + c*(w+z) with 0 <= a+2b+2c < 1."""

    a: float
    b: float
    c: float
    text_variant: str = "classic"

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0.0 or not all(
            math.isfinite(p) for p in (self.a, self.b, self.c)
        ):
            raise ParameterError("a, b, c must be nonnegative")
        if not self.a + 2.0 * self.b + 2.0 * self.c < 1.0:
            raise ParameterError("a + 2b + 2c must be less than 1")
        if self.text_variant not in TEXT_VARIANTS:
            raise ParameterError("text_variant must be 'classic' or 'as_printed'")


@dataclass(frozen=True)
class Jungck:
    a: float

    def __post_init__(self):
        _check_unit("a", self.a, 1.0, "1")


@dataclass(frozen=True)
class Kannan:
    b: float

    def __post_init__(self):
        _check_unit("b", self.b, 0.5, "1/2")


@dataclass(frozen=True)
class Chatterjea:
    c: float

    def __post_init__(self):
        _check_unit("c", self.c, 0.5, "1/2")


@dataclass(frozen=True)
class Zamfirescu:
    """Disjunction: each pair satisfies a*D or b*(u+v) or c*(w+z)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        _check_unit("a", self.a, 1.0, "1")
        _check_unit("b", self.b, 0.5, "1/2")
        _check_unit("c", self.c, 0.5, "1/2")


@dataclass(frozen=True)
class ZamfirescuMax:
    """Disjunction with one constant: h*D or h*(u+v)/2 or h*(w+z)/2."""

    h: float

    def __post_init__(self):
        _check_unit("h", self.h, 1.0, "1")


@dataclass(frozen=True)
class WeakContraction:
    """delta*D + L*u with 0 < delta < 1 and L >= 0."""

    delta: float
    L: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ParameterError("delta must lie in (0, 1)")
        if not self.L >= 0.0:
            raise ParameterError("L must be nonnegative")


@dataclass(frozen=True)
class CrossWeakContraction:
    """delta*D + L*z, the weak form with the swapped displacement term."""

    delta: float
    L: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ParameterError("delta must lie in (0, 1)")
        if not self.L >= 0.0:
            raise ParameterError("L must be nonnegative")


ConditionSpec = (
    SinghContraction
    | Jungck
    | Kannan
    | Chatterjea
    | Zamfirescu
    | ZamfirescuMax
    | WeakContraction
    | CrossWeakContraction
)

# kernel family codes (see conefix.kernels._fallback)
_KERNEL_CODE = {
    Jungck: 0,
    Kannan: 1,
    Chatterjea: 2,
    Zamfirescu: 5,
    ZamfirescuMax: 6,
    WeakContraction: 7,
    CrossWeakContraction: 8,
}


def _kernel_params(cond: ConditionSpec) -> tuple[int, float, float, float]:
    if isinstance(cond, SinghContraction):
        code = 3 if cond.text_variant == "classic" else 4
        return code, cond.a, cond.b, cond.c
    if isinstance(cond, Jungck):
        return 0, cond.a, 0.0, 0.0
    if isinstance(cond, Kannan):
        return 1, cond.b, 0.0, 0.0
    if isinstance(cond, Chatterjea):
        return 2, cond.c, 0.0, 0.0
    if isinstance(cond, Zamfirescu):
        return 5, cond.a, cond.b, cond.c
    if isinstance(cond, ZamfirescuMax):
        return 6, cond.h, 0.0, 0.0
    if isinstance(cond, WeakContraction):
        return 7, cond.delta, cond.L, 0.0
    if isinstance(cond, CrossWeakContraction):
        return 8, cond.delta, cond.L, 0.0
    raise TypeError(f"unknown condition {cond!r}")


def is_symmetric(cond: ConditionSpec) -> bool:
    """Whether swapping (x, y) leaves the condition's inequality unchanged."""
    if isinstance(cond, SinghContraction):
        return cond.text_variant == "classic"
    return not isinstance(cond, (WeakContraction, CrossWeakContraction))


def _rhs_branches(cond, big_d, u, v, w, z) -> list[np.ndarray]:
    """Right-hand sides on (..., m) distance stacks, one array per branch."""
    if isinstance(cond, SinghContraction):
        tail = w + z if cond.text_variant == "classic" else w + v
        return [cond.a * big_d + cond.b * (u + v) + cond.c * tail]
    if isinstance(cond, Jungck):
        return [cond.a * big_d]
    if isinstance(cond, Kannan):
        return [cond.b * (u + v)]
    if isinstance(cond, Chatterjea):
        return [cond.c * (w + z)]
    if isinstance(cond, Zamfirescu):
        return [cond.a * big_d, cond.b * (u + v), cond.c * (w + z)]
    if isinstance(cond, ZamfirescuMax):
        return [cond.h * big_d, cond.h * (u + v) / 2.0, cond.h * (w + z) / 2.0]
    if isinstance(cond, WeakContraction):
        return [cond.delta * big_d + cond.L * u]
    if isinstance(cond, CrossWeakContraction):
        return [cond.delta * big_d + cond.L * z]
    raise TypeError(f"unknown condition {cond!r}")


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WorstPair:
    x: object
    y: object
    lhs: np.ndarray
    rhs: np.ndarray
    slack: float


@dataclass(frozen=True)
class ViolationReport:
    holds_on_checked: bool
    mode: str                       # "exhaustive" or "sampled"
    n_pairs: int
    worst_pair: WorstPair | None
    condition: ConditionSpec


def _branch_slacks(cone, lhs, branches):
    """Cone-order slack per pair: best branch margin of rhs - lhs."""
    slack = None
    for rhs in branches:
        m = margins(cone, rhs - lhs)
        slack = m if slack is None else np.maximum(slack, m)
    return slack


def _finite_arrays(space, s, t):
    if not isinstance(s, FiniteTable) or not isinstance(t, FiniteTable):
        raise ValueError("finite domains need table maps")
    table = np.ascontiguousarray(space.metric.table, dtype=np.float64)
    s_img = np.ascontiguousarray(s.images, dtype=np.int64)
    t_img = np.ascontiguousarray(t.images, dtype=np.int64)
    return table, s_img, t_img


def _continuous_pair_stacks(space, s, t, pairs):
    ps = [p for p, _ in pairs]
    qs = [q for _, q in pairs]
    s_p = [apply_map(s, p) for p in ps]
    s_q = [apply_map(s, q) for q in qs]
    t_p = [apply_map(t, p) for p in ps]
    t_q = [apply_map(t, q) for q in qs]
    d = distance
    lhs = np.array([d(space, a, b) for a, b in zip(s_p, s_q)])
    big_d = np.array([d(space, a, b) for a, b in zip(t_p, t_q)])
    u = np.array([d(space, a, b) for a, b in zip(s_p, t_p)])
    v = np.array([d(space, a, b) for a, b in zip(s_q, t_q)])
    w = np.array([d(space, a, b) for a, b in zip(s_p, t_q)])
    z = np.array([d(space, a, b) for a, b in zip(s_q, t_p)])
    return lhs, big_d, u, v, w, z


def _resolve_pairs(space, pairs, seed, n_samples):
    """Return (pair list, exhaustive flag)."""
    domain = space.domain
    if isinstance(domain, FinitePoints):
        n = domain.count
        if pairs is None:
            return [(x, y) for x in range(n) for y in range(n)], True
        pairs = [(int(p), int(q)) for p, q in pairs]
        exhaustive = set(pairs) == {(x, y) for x in range(n) for y in range(n)}
        return pairs, exhaustive
    if pairs is None:
        rng = np.random.default_rng(seed)
        ps = sample_domain_points(domain, rng, n_samples)
        qs = sample_domain_points(domain, rng, n_samples)
        return list(zip(ps, qs)), False
    return [(np.asarray(p, dtype=float), np.asarray(q, dtype=float)) for p, q in pairs], False


def check_condition(
    space: ConeMetricSpace,
    s: MapSpec,
    t: MapSpec,
    cond: ConditionSpec,
    pairs=None,
    seed: int = 0,
    n_samples: int = 64,
) -> ViolationReport:
    """Test the condition over a pair source and report the tightest pair.

    Finite domains default to all ordered pairs, making the result a proof
    for the instance (mode "exhaustive"); continuous domains draw a seeded
    sample and the result is only "no violation found".  Conditions that
    are not symmetric in (x, y) get each sampled pair in both orders, since
    the inequality quantifies over all ordered pairs.
    """
    pair_list, exhaustive = _resolve_pairs(space, pairs, seed, n_samples)
    if not exhaustive and not is_symmetric(cond):
        pair_list = pair_list + [(q, p) for p, q in pair_list]

    cone = space.cone
    use_kernel = (
        isinstance(space.domain, FinitePoints)
        and isinstance(cone, Orthant)
        and isinstance(space.metric, TableMetric)
    )
    if use_kernel:
        table, s_img, t_img = _finite_arrays(space, s, t)
        code, p1, p2, p3 = _kernel_params(cond)
        slack_matrix = _kernel_slacks(table, s_img, t_img, code, p1, p2, p3)
        idx = np.array(pair_list, dtype=np.int64)
        slacks = slack_matrix[idx[:, 0], idx[:, 1]]
    elif isinstance(space.domain, FinitePoints):
        table, s_img, t_img = _finite_arrays(space, s, t)
        lhs, big_d, u, v, w, z = _pair_stacks(table, s_img, t_img)
        full = _branch_slacks(cone, lhs, _rhs_branches(cond, big_d, u, v, w, z))
        idx = np.array(pair_list, dtype=np.int64)
        slacks = full[idx[:, 0], idx[:, 1]]
    else:
        lhs, big_d, u, v, w, z = _continuous_pair_stacks(space, s, t, pair_list)
        slacks = _branch_slacks(cone, lhs, _rhs_branches(cond, big_d, u, v, w, z))

    worst_at = int(np.argmin(slacks))
    worst_x, worst_y = pair_list[worst_at]
    lhs_w, rhs_w, slack_w = _pair_detail(space, s, t, cond, worst_x, worst_y)
    holds = bool(slacks[worst_at] >= -cone.interior_tolerance)
    return ViolationReport(
        holds_on_checked=holds,
        mode="exhaustive" if exhaustive else "sampled",
        n_pairs=len(pair_list),
        worst_pair=WorstPair(worst_x, worst_y, lhs_w, rhs_w, float(slacks[worst_at])),
        condition=cond,
    )


def _pair_detail(space, s, t, cond, x, y):
    """lhs, best-branch rhs, and slack for a single ordered pair."""
    sp, sq = apply_map(s, x), apply_map(s, y)
    tp, tq = apply_map(t, x), apply_map(t, y)
    lhs = distance(space, sp, sq)
    big_d = distance(space, tp, tq)
    u = distance(space, sp, tp)
    v = distance(space, sq, tq)
    w = distance(space, sp, tq)
    z = distance(space, sq, tp)
    best_rhs, best_margin = None, -np.inf
    for rhs in _rhs_branches(cond, big_d, u, v, w, z):
        m = float(margins(space.cone, rhs - lhs))
        if m > best_margin:
            best_rhs, best_margin = rhs, m
    return lhs, best_rhs, best_margin


# ---------------------------------------------------------------------------
# fitting minimal constants
# ---------------------------------------------------------------------------

_FIT_FAMILIES = {
    Jungck: (0, 1.0),
    Kannan: (1, 0.5),
    Chatterjea: (2, 0.5),
    ZamfirescuMax: (6, 1.0),
}


@dataclass(frozen=True)
class FitResult:
    family: type
    feasible: bool
    value: float                # minimal parameter (lower bound when sampled)
    method: str                 # "coordinate-ratio", "grid", or "sampled"
    bound: float                # open upper bound of the family's parameter

    def condition(self) -> ConditionSpec:
        if not self.feasible:
            raise ParameterError(
                f"no {self.family.__name__} parameter below {self.bound} fits"
            )
        return self.family(self.value)


def fit_minimal_constants(
    space: ConeMetricSpace,
    s: MapSpec,
    t: MapSpec,
    family: type,
    pairs=None,
    seed: int = 0,
    n_samples: int = 64,
    grid_step: float = 1e-3,
) -> FitResult:
    """Tightest single parameter of the family over the checked pairs.

    Orthant table spaces reduce to exact coordinate ratios; other cones on
    finite domains scan a parameter grid of the given step; continuous
    domains take the ratio sup over sampled pairs (a lower bound on the
    true constant).  Multi-parameter families have no canonical single fit
    and are rejected.
    """
    if family not in _FIT_FAMILIES:
        raise ParameterError(
            f"{getattr(family, '__name__', family)!r} is not a single-parameter family"
        )
    code, bound = _FIT_FAMILIES[family]
    pair_list, exhaustive = _resolve_pairs(space, pairs, seed, n_samples)

    if isinstance(space.domain, FinitePoints):
        table, s_img, t_img = _finite_arrays(space, s, t)
        if isinstance(space.cone, Orthant):
            ratio_matrix = _kernel_ratios(table, s_img, t_img, code)
            idx = np.array(pair_list, dtype=np.int64)
            value = float(ratio_matrix[idx[:, 0], idx[:, 1]].max())
            return FitResult(family, value < bound, value, "coordinate-ratio", bound)
        return _grid_fit(space, s, t, family, pair_list, bound, grid_step)

    lhs, big_d, u, v, w, z = _continuous_pair_stacks(space, s, t, pair_list)
    pattern_sets = {
        0: [big_d],
        1: [u + v],
        2: [w + z],
        6: [big_d, (u + v) / 2.0, (w + z) / 2.0],
    }[code]
    per_branch = [_required_stack(lhs, pat) for pat in pattern_sets]
    value = float(np.minimum.reduce(per_branch).max())
    return FitResult(family, value < bound, value, "sampled", bound)


def _required_stack(lhs, pattern):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = lhs / pattern
    ratio = np.where(pattern > 0.0, ratio, np.where(lhs <= 0.0, 0.0, np.inf))
    return ratio.max(axis=-1)


def _grid_fit(space, s, t, family, pair_list, bound, grid_step):
    """Smallest grid value whose condition check passes on all pairs."""
    table, s_img, t_img = _finite_arrays(space, s, t)
    lhs, big_d, u, v, w, z = _pair_stacks(table, s_img, t_img)
    idx = np.array(pair_list, dtype=np.int64)
    tol = space.cone.interior_tolerance
    for p in np.arange(0.0, bound, grid_step):
        cond = family(float(p))
        full = _branch_slacks(space.cone, lhs, _rhs_branches(cond, big_d, u, v, w, z))
        if float(full[idx[:, 0], idx[:, 1]].min()) >= -tol:
            return FitResult(family, True, float(p), "grid", bound)
    return FitResult(family, False, float("inf"), "grid", bound)


# ---------------------------------------------------------------------------
# constant algebra
# ---------------------------------------------------------------------------

_DELTA_FLOOR = 1e-12


def singh_rate(a: float, b: float, c: float) -> float:
    """(a+b+c)/(1-b-c), unvalidated; callers must keep b + c < 1."""
    return (a + b + c) / (1.0 - b - c)


def alpha_from_singh(a: float, b: float, c: float) -> float:
    """Geometric step factor of the combined condition.

    Evaluable wherever the formula makes sense (nonnegative constants with
    b + c < 1), on purpose: the factor is < 1 exactly when a + 2b + 2c < 1,
    and both directions of that equivalence are worth checking, so the
    combined bound itself is not a precondition here.
    """
    if min(a, b, c) < 0.0:
        raise ParameterError("a, b, c must be nonnegative")
    if b + c >= 1.0:
        raise ParameterError("b + c must be less than 1")
    return singh_rate(a, b, c)


def zamfirescu_rate(a: float, b: float, c: float) -> float:
    """max(a, b/(1-b), c/(1-c)), unvalidated; callers keep b, c < 1."""
    return max(a, b / (1.0 - b), c / (1.0 - c))


def delta_from_gz0(a: float, b: float, c: float) -> float:
    """Single factor absorbing all three branches; in [0, 1) when valid."""
    Zamfirescu(a, b, c)
    return zamfirescu_rate(a, b, c)


def gz0_to_maxform(a: float, b: float, c: float) -> ZamfirescuMax:
    """h = max(a, 2b, 2c): the equivalent single-constant branch form."""
    Zamfirescu(a, b, c)
    return ZamfirescuMax(max(a, 2.0 * b, 2.0 * c))


def maxform_to_gz0(h: float) -> Zamfirescu:
    """The reverse direction: (a, b, c) = (h, h/2, h/2)."""
    ZamfirescuMax(h)
    return Zamfirescu(h, h / 2.0, h / 2.0)


def gwc_witness_from(cond: ConditionSpec) -> WeakContraction:
    """Weak-contraction constants implied by the stronger condition.

    The zero-parameter edge cases would need delta = 0, which the weak form
    forbids; they get the documented floor of 1e-12 instead (sound, since a
    larger delta only weakens the bound).
    """
    if isinstance(cond, Jungck):
        return WeakContraction(max(cond.a, _DELTA_FLOOR), 0.0)
    if isinstance(cond, Kannan):
        d = cond.b / (1.0 - cond.b)
        return WeakContraction(max(d, _DELTA_FLOOR), 2.0 * d)
    if isinstance(cond, Chatterjea):
        d = cond.c / (1.0 - cond.c)
        return WeakContraction(max(d, _DELTA_FLOOR), 2.0 * d)
    if isinstance(cond, Zamfirescu):
        d = delta_from_gz0(cond.a, cond.b, cond.c)
        return WeakContraction(max(d, _DELTA_FLOOR), 2.0 * d)
    raise ParameterError(
        f"no weak-contraction witness for {type(cond).__name__}"
    )


def cross_weak_witness_from(cond: Zamfirescu) -> CrossWeakContraction:
    """The swapped-displacement weak form implied by the branch condition."""
    if not isinstance(cond, Zamfirescu):
        raise ParameterError("cross witness is derived from the branch family")
    d = delta_from_gz0(cond.a, cond.b, cond.c)
    return CrossWeakContraction(max(d, _DELTA_FLOOR), 2.0 * d)


def contraction_factor(cond: ConditionSpec) -> float:
    """The geometric factor governing the pair iteration under the condition."""
    if isinstance(cond, SinghContraction):
        return singh_rate(cond.a, cond.b, cond.c)
    if isinstance(cond, Jungck):
        return cond.a
    if isinstance(cond, Kannan):
        return cond.b / (1.0 - cond.b)
    if isinstance(cond, Chatterjea):
        return cond.c / (1.0 - cond.c)
    if isinstance(cond, Zamfirescu):
        return zamfirescu_rate(cond.a, cond.b, cond.c)
    if isinstance(cond, ZamfirescuMax):
        return cond.h
    if isinstance(cond, (WeakContraction, CrossWeakContraction)):
        # along the iteration the L-term multiplies d(Sx_n, Tx_{n+1}) = 0,
        # so delta alone bounds consecutive steps
        return cond.delta
    raise TypeError(f"unknown condition {cond!r}")
