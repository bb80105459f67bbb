import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conefix.errors import DomainError, PreimageError
from conefix.maps import (
    Affine,
    FiniteTable,
    ScalarRational,
    apply_map,
    check_commuting,
    check_range_inclusion,
    t_preimage,
)
from conefix.spaces import Continuous, FinitePoints


def line(lo=-10.0, hi=10.0):
    return Continuous(1, np.array([[lo, hi]]))


def affine1(a, b=0.0):
    return Affine(np.array([[a]]), np.array([b]))


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def test_apply_affine_halving():
    npt.assert_allclose(apply_map(affine1(0.5), [6.0]), [3.0])


def test_apply_table():
    assert apply_map(FiniteTable(np.array([2, 0, 1])), 0) == 2


def test_apply_rational_quarter():
    quarter = ScalarRational(np.array([0.0, 1.0]), np.array([4.0]))
    npt.assert_allclose(apply_map(quarter, [8.0]), [2.0])


def test_apply_rational_rejects_vanishing_denominator():
    inv = ScalarRational(np.array([1.0]), np.array([0.0, 1.0]))  # 1/x
    with pytest.raises(DomainError):
        apply_map(inv, [0.0])


def test_apply_table_range_check():
    with pytest.raises(DomainError):
        apply_map(FiniteTable(np.array([0, 1])), 2)


def test_map_validation():
    with pytest.raises(ValueError):
        Affine(np.array([[1.0, 0.0]]), np.array([0.0]))
    with pytest.raises(ValueError):
        Affine(np.eye(2), np.array([0.0]))
    with pytest.raises(ValueError):
        FiniteTable(np.array([0, 3]))
    with pytest.raises(ValueError):
        FiniteTable(np.array([0.5, 1.0]))
    with pytest.raises(ValueError):
        ScalarRational(np.array([1.0]), np.array([0.0]))


# ---------------------------------------------------------------------------
# commutation
# ---------------------------------------------------------------------------

def test_rational_quarter_and_half_commute():
    s = ScalarRational(np.array([0.0, 1.0]), np.array([4.0]))
    t = ScalarRational(np.array([0.0, 1.0]), np.array([2.0]))
    report = check_commuting(s, t, line(), seed=3)
    assert report.commutes
    assert report.mode == "sampled"


def test_affine_quarter_and_half_commute_exactly():
    report = check_commuting(affine1(0.25), affine1(0.5), line())
    assert report.commutes and report.mode == "exact"


def test_shift_and_doubling_do_not_commute():
    # S(T(p)) = 2p + 1 while T(S(p)) = 2p + 2
    s = affine1(1.0, 1.0)
    t = affine1(2.0)
    report = check_commuting(s, t, line())
    assert not report.commutes
    assert report.mode == "exact"
    assert report.witness is not None
    assert report.deviation == pytest.approx(1.0)
    gap = apply_map(s, apply_map(t, report.witness)) - apply_map(
        t, apply_map(s, report.witness)
    )
    assert np.linalg.norm(gap) == pytest.approx(report.deviation)


def test_identity_table_commutes_with_anything():
    ident = FiniteTable(np.arange(4))
    s = FiniteTable(np.array([2, 2, 3, 0]))
    report = check_commuting(s, ident, FinitePoints(4))
    assert report.commutes and report.mode == "exact"


def test_table_noncommuting_witness():
    s = FiniteTable(np.array([1, 0, 2]))
    t = FiniteTable(np.array([0, 2, 1]))
    report = check_commuting(s, t, FinitePoints(3))
    assert not report.commutes
    p = report.witness
    assert apply_map(s, apply_map(t, p)) != apply_map(t, apply_map(s, p))


@given(st.integers(0, 500), st.integers(2, 6), st.integers(2, 4))
@settings(max_examples=30, deadline=None)
def test_table_powers_always_commute(seed, n, k):
    rng = np.random.default_rng(seed)
    t = FiniteTable(rng.integers(0, n, size=n))
    images = np.arange(n)
    for _ in range(k):
        images = t.images[images]
    s = FiniteTable(images)
    assert check_commuting(s, t, FinitePoints(n)).commutes


def test_commuting_rejects_mismatched_domains():
    with pytest.raises(ValueError):
        check_commuting(affine1(0.5), FiniteTable(np.array([0])), line())
    with pytest.raises(ValueError):
        check_commuting(
            FiniteTable(np.array([0, 1])),
            FiniteTable(np.array([0, 1, 2])),
            FinitePoints(3),
        )


# ---------------------------------------------------------------------------
# range inclusion
# ---------------------------------------------------------------------------

def test_invertible_affine_t_is_surjective():
    report = check_range_inclusion(affine1(7.0, 3.0), affine1(0.5), line())
    assert report.included and report.mode == "exact"


def test_table_range_violation():
    s = FiniteTable(np.array([1, 1, 1]))
    t = FiniteTable(np.array([0, 2, 2]))
    report = check_range_inclusion(s, t, FinitePoints(3))
    assert not report.included
    assert report.mode == "exact"
    assert report.witness == 1


def test_table_range_inclusion_holds():
    s = FiniteTable(np.array([0, 0]))
    t = FiniteTable(np.array([0, 1]))
    report = check_range_inclusion(s, t, FinitePoints(2))
    assert report.included and report.mode == "exact"


def test_sampled_range_inclusion_for_rational_pair():
    s = ScalarRational(np.array([0.0, 1.0]), np.array([4.0]))
    t = ScalarRational(np.array([0.0, 1.0]), np.array([2.0]))
    report = check_range_inclusion(s, t, line(), seed=1, n_samples=16)
    assert report.included and report.mode == "sampled"


# ---------------------------------------------------------------------------
# preimages
# ---------------------------------------------------------------------------

def test_preimage_halving_map():
    npt.assert_allclose(t_preimage(affine1(0.5), [3.0]), [6.0])


def test_preimage_diagonal_affine():
    t = Affine(np.array([[2.0, 0.0], [0.0, 4.0]]), np.zeros(2))
    npt.assert_allclose(t_preimage(t, [2.0, 2.0]), [1.0, 0.5])


def test_preimage_table_smallest_index_wins():
    assert t_preimage(FiniteTable(np.array([0, 0, 2])), 0) == 0


def test_preimage_table_missing_value():
    with pytest.raises(PreimageError) as err:
        t_preimage(FiniteTable(np.array([0, 0, 2])), 1)
    assert err.value.value == 1


def test_preimage_singular_affine():
    t = Affine(np.array([[1.0, 0.0], [0.0, 0.0]]), np.zeros(2))
    x = t_preimage(t, [2.0, 0.0])
    npt.assert_allclose(t.matrix @ x, [2.0, 0.0], atol=1e-12)
    with pytest.raises(PreimageError):
        t_preimage(t, [2.0, 1.0])


def test_preimage_rational_leftmost_root():
    # T(x) = x^2 has preimages -2 and 2 of y=4; leftmost wins
    t = ScalarRational(np.array([0.0, 0.0, 1.0]), np.array([1.0]))
    x = t_preimage(t, [4.0], domain=line())
    npt.assert_allclose(x, [-2.0], atol=1e-9)


def test_preimage_rational_no_root_in_box():
    t = ScalarRational(np.array([0.0, 1.0]), np.array([2.0]))  # x/2
    with pytest.raises(PreimageError):
        t_preimage(t, [100.0], domain=line())


@given(st.floats(-4.9, 4.9))
@settings(max_examples=40)
def test_preimage_round_trip_affine(y):
    t = affine1(0.5, 1.0)
    x = t_preimage(t, [y], domain=line())
    npt.assert_allclose(apply_map(t, x), [y], atol=1e-9)


@given(st.floats(-4.0, 4.0))
@settings(max_examples=40, deadline=None)
def test_preimage_round_trip_rational(y):
    # T(x) = x / (1 + x^2/100): monotone on [-10, 10]
    t = ScalarRational(np.array([0.0, 1.0]), np.array([1.0, 0.0, 0.01]))
    x = t_preimage(t, [y], domain=line())
    npt.assert_allclose(apply_map(t, x), [y], atol=1e-8)
