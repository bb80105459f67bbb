"""Vectorized numpy implementation of the pair-evaluation kernels.

Semantics contract shared with the compiled core (conefix.kernels._core):
given a finite metric table ``table[(x, y)] -> m-vector`` and image arrays
``s_img``, ``t_img`` of the two maps, evaluate for every ordered point pair
(x, y) the inequality slack of a contraction condition under the orthant
order, or the minimal parameter making the inequality hold.

The two implementations must agree bit for bit.  Every operation here is
elementwise arithmetic or a min/max reduction, both exact in IEEE double,
so no accumulation-order tricks are needed; keep it that way when adding
kernels (in particular, no dot products or BLAS calls).

Pair shorthand (all (n, n, m) stacks):
    lhs = d(Sx, Sy)   D = d(Tx, Ty)
    u   = d(Sx, Tx)   v = d(Sy, Ty)
    w   = d(Sx, Ty)   z = d(Sy, Tx)

Family codes:
    0 ratio bound            rhs = p1 * D
    1 self-displacement sum  rhs = p1 * (u + v)
    2 cross-displacement sum rhs = p1 * (w + z)
    3 combined, symmetric    rhs = p1*D + p2*(u + v) + p3*(w + z)
    4 combined, one-sided    rhs = p1*D + p2*(u + v) + p3*(w + v)
    5 three-branch           rhs branches: p1*D | p2*(u + v) | p3*(w + z)
    6 max-form               rhs branches: p1*D | p1*(u + v)/2 | p1*(w + z)/2
    7 weak, same-side        rhs = p1*D + p2*u
    8 weak, cross            rhs = p1*D + p2*z
"""

import numpy as np

N_FAMILIES = 9
DISJUNCTIVE = (5, 6)
SINGLE_PARAM_FIT = (0, 1, 2, 6)


def _pair_stacks(table, s_img, t_img):
    lhs = table[np.ix_(s_img, s_img)]
    big_d = table[np.ix_(t_img, t_img)]
    u_vec = table[s_img, t_img]            # u_vec[x] = d(Sx, Tx)
    u = np.broadcast_to(u_vec[:, None, :], lhs.shape)
    v = np.broadcast_to(u_vec[None, :, :], lhs.shape)
    w = table[np.ix_(s_img, t_img)]        # w[x, y] = d(Sx, Ty)
    z = np.swapaxes(w, 0, 1)               # z[x, y] = d(Sy, Tx)
    return lhs, big_d, u, v, w, z


def condition_slacks(table, s_img, t_img, family, p1, p2, p3):
    """Orthant-order slack of the condition for every ordered pair.

    slack[x, y] = min over coordinates of (rhs - lhs); for the disjunctive
    families (5, 6) it is the best branch's slack.  A pair satisfies the
    condition iff its slack >= -tolerance.
    """
    lhs, big_d, u, v, w, z = _pair_stacks(table, s_img, t_img)
    if family == 0:
        return (p1 * big_d - lhs).min(axis=2)
    if family == 1:
        return (p1 * (u + v) - lhs).min(axis=2)
    if family == 2:
        return (p1 * (w + z) - lhs).min(axis=2)
    if family == 3:
        rhs = p1 * big_d + p2 * (u + v) + p3 * (w + z)
        return (rhs - lhs).min(axis=2)
    if family == 4:
        rhs = p1 * big_d + p2 * (u + v) + p3 * (w + v)
        return (rhs - lhs).min(axis=2)
    if family == 5:
        s1 = (p1 * big_d - lhs).min(axis=2)
        s2 = (p2 * (u + v) - lhs).min(axis=2)
        s3 = (p3 * (w + z) - lhs).min(axis=2)
        return np.maximum(np.maximum(s1, s2), s3)
    if family == 6:
        s1 = (p1 * big_d - lhs).min(axis=2)
        s2 = (p1 * (u + v) / 2.0 - lhs).min(axis=2)
        s3 = (p1 * (w + z) / 2.0 - lhs).min(axis=2)
        return np.maximum(np.maximum(s1, s2), s3)
    if family == 7:
        return (p1 * big_d + p2 * u - lhs).min(axis=2)
    if family == 8:
        return (p1 * big_d + p2 * z - lhs).min(axis=2)
    raise ValueError(f"unknown family code {family}")


def _required(lhs, pattern):
    # smallest p with lhs <= p * pattern coordinatewise:
    # max over coordinates of lhs/pattern, with 0/0 -> 0 and pos/0 -> inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = lhs / pattern
    ratio = np.where(
        pattern > 0.0, ratio, np.where(lhs <= 0.0, 0.0, np.inf)
    )
    return ratio.max(axis=2)


def minimal_ratios(table, s_img, t_img, family):
    """Minimal per-pair parameter for the single-parameter families.

    For the max-form family each pair may pick its cheapest branch, so the
    result is the branch-wise minimum of the per-branch requirements.
    """
    lhs, big_d, u, v, w, z = _pair_stacks(table, s_img, t_img)
    if family == 0:
        return _required(lhs, big_d)
    if family == 1:
        return _required(lhs, u + v)
    if family == 2:
        return _required(lhs, w + z)
    if family == 6:
        r1 = _required(lhs, big_d)
        r2 = _required(lhs, (u + v) / 2.0)
        r3 = _required(lhs, (w + z) / 2.0)
        return np.minimum(np.minimum(r1, r2), r3)
    raise ValueError(f"family code {family} has no single-parameter fit")
