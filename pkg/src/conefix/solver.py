"""The (S,T)-iteration to a common fixed point, with bounds and certificates.

Each step solves T(x_{n+1}) = S(x_n), so the S-images form the approximating
sequence.  Under any of the contraction conditions the consecutive S-image
distances shrink geometrically with the condition's factor, which gives both
a stopping rule (step norm below tolerance) and an a priori error bound
factor^n * K * first_step_norm, K being the cone's normal constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conditions import ConditionSpec, SinghContraction, contraction_factor
from .errors import DomainError, ParameterError
from .maps import MapSpec, apply_map, t_preimage
from .spaces import ConeMetricSpace, distance, distance_norm

RATE_SLACK = 1e-9


@dataclass(frozen=True)
class IterationTrace:
    """Record of one run: points, S-images, step distances, and diagnostics.

    ``iterations`` counts executed steps, so ``x`` holds iterations + 1
    points.  ``ratios[n]`` is step_norms[n+1] / step_norms[n] (0/0 counts
    as 0; NaN marks a step out of an exact rest point, which no contraction
    allows).  ``rate_consistent`` is None when no condition was supplied.
    """

    x: tuple
    s_images: tuple
    step_dists: np.ndarray
    step_norms: np.ndarray
    ratios: np.ndarray
    converged: bool
    iterations: int
    tol: float
    factor: float | None = None
    rate_consistent: bool | None = None

    @property
    def converged_at(self) -> int | None:
        """Index of the first step that met the tolerance, if any."""
        hits = np.nonzero(self.step_norms <= self.tol)[0]
        return int(hits[0]) if hits.size else None


@dataclass(frozen=True)
class Certificate:
    """A candidate common fixed point with its two residuals.

    ``bound_alpha`` and ``a_priori_bound_at_stop`` are carried over from the
    producing run when one exists; they are None for standalone checks.
    """

    z: object
    residual_s: float
    residual_t: float
    tol: float
    bound_alpha: float | None = None
    a_priori_bound_at_stop: float | None = None

    @property
    def accepted(self) -> bool:
        return max(self.residual_s, self.residual_t) <= self.tol


def jungck_iterate(
    space: ConeMetricSpace,
    s: MapSpec,
    t: MapSpec,
    x0,
    cond: ConditionSpec | None = None,
    tol: float = 1e-9,
    max_iter: int = 100,
    preimage_tol: float = 1e-9,
) -> IterationTrace:
    """Run x_{n+1} = T^{-1}(S(x_n)) from x0 until the S-images stabilize.

    Stops once a step's S-image distance norm is at most ``tol`` (converged)
    or after ``max_iter`` steps.  With a condition supplied, the trace also
    carries the expected geometric factor and whether every observed ratio
    stayed within it; a condition is not required to run, which is useful
    for exploring non-contractive pairs.  Preimage failures propagate: they
    mean the range inclusion S(M) in T(M) broke at a concrete point.
    """
    if tol <= 0.0:
        raise ParameterError("tol must be positive")
    if max_iter < 1:
        raise ParameterError("max_iter must be >= 1")
    factor = None
    if cond is not None:
        if isinstance(cond, SinghContraction) and cond.a + 2 * cond.b + 2 * cond.c == 0.0:
            raise ParameterError(
                "a + 2b + 2c must be positive for the iteration theorem"
            )
        factor = contraction_factor(cond)

    xs = [x0]
    s_imgs = [apply_map(s, x0)]
    step_dists = []
    step_norms = []
    converged = False
    while len(step_norms) < max_iter:
        x_next = t_preimage(t, s_imgs[-1], domain=space.domain, tol=preimage_tol)
        s_next = apply_map(s, x_next)
        step = distance(space, s_next, s_imgs[-1])
        step_norm = distance_norm(space, s_next, s_imgs[-1])
        if not (np.all(np.isfinite(np.atleast_1d(x_next))) and np.isfinite(step_norm)):
            raise DomainError("iteration produced non-finite values")
        xs.append(x_next)
        s_imgs.append(s_next)
        step_dists.append(step)
        step_norms.append(step_norm)
        if step_norm <= tol:
            converged = True
            break

    step_norms = np.array(step_norms)
    ratios = _consecutive_ratios(step_norms)
    rate_ok = None
    if factor is not None:
        finite = ratios[~np.isnan(ratios)]
        rate_ok = bool(
            not np.isnan(ratios).any() and np.all(finite <= factor + RATE_SLACK)
        )
    return IterationTrace(
        x=tuple(xs),
        s_images=tuple(s_imgs),
        step_dists=np.array(step_dists),
        step_norms=step_norms,
        ratios=ratios,
        converged=converged,
        iterations=len(step_norms),
        tol=tol,
        factor=factor,
        rate_consistent=rate_ok,
    )


def _consecutive_ratios(norms: np.ndarray) -> np.ndarray:
    out = np.empty(max(norms.size - 1, 0))
    for i in range(out.size):
        if norms[i] > 0.0:
            out[i] = norms[i + 1] / norms[i]
        elif norms[i + 1] == 0.0:
            out[i] = 0.0
        else:
            out[i] = np.nan
    return out


def a_priori_bound(alpha: float, k_normal: float, first_step_norm: float, n: int) -> float:
    """Geometric error bound alpha^n * K * first_step_norm after n steps."""
    if not 0.0 <= alpha < 1.0:
        raise ParameterError("alpha must lie in [0, 1)")
    if not k_normal >= 1.0:
        raise ParameterError("the normal constant is at least 1")
    if not first_step_norm >= 0.0:
        raise ParameterError("first_step_norm must be nonnegative")
    if n < 0:
        raise ParameterError("n must be nonnegative")
    return alpha**n * k_normal * first_step_norm


def certify_common_fixed_point(
    space: ConeMetricSpace,
    s: MapSpec,
    t: MapSpec,
    z,
    tol: float = 1e-9,
    factor: float | None = None,
    k_normal: float | None = None,
    trace: IterationTrace | None = None,
) -> Certificate:
    """Residual check of Sz = z and Tz = z under the space's norm.

    The certificate is accepted iff both residuals are within ``tol``.  When
    the producing trace, its factor, and the normal constant are given, the
    a priori bound at the stopping index is recorded alongside.
    """
    res_s = distance_norm(space, apply_map(s, z), z)
    res_t = distance_norm(space, apply_map(t, z), z)
    bound = None
    if (
        trace is not None
        and factor is not None
        and k_normal is not None
        and trace.step_norms.size
    ):
        bound = a_priori_bound(
            factor, k_normal, float(trace.step_norms[0]), trace.iterations
        )
    return Certificate(
        z=z,
        residual_s=res_s,
        residual_t=res_t,
        tol=tol,
        bound_alpha=factor,
        a_priori_bound_at_stop=bound,
    )


def uniqueness_probe(
    space: ConeMetricSpace, certificates, tol: float = 1e-9
) -> bool:
    """Are all certified points the same point, within ``tol``?

    A False answer from certified runs signals that some hypothesis of the
    uniqueness theorem (commutation, range inclusion, the condition itself)
    does not actually hold for the pair.
    """
    accepted = [c for c in certificates if c.accepted]
    if not accepted:
        raise ParameterError("need at least one accepted certificate")
    for i, a in enumerate(accepted):
        for b in accepted[i + 1 :]:
            if distance_norm(space, a.z, b.z) > tol:
                return False
    return True
