import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conefix.cones import Euclidean, Orthant, SecondOrder, margin
from conefix.conditions import (
    Chatterjea,
    Jungck,
    Kannan,
    SinghContraction,
    ZamfirescuMax,
    fit_minimal_constants,
)
from conefix.errors import ParameterError
from conefix.maps import FiniteTable
from conefix.oracle import (
    FiniteInstance,
    enumerate_common_fixed_points,
    exact_minimal_constant,
    exhaustive_certify,
    random_finite_instance,
)
from conefix.solver import certify_common_fixed_point, jungck_iterate
from conefix.spaces import (
    ConeMetricSpace,
    FinitePoints,
    TableMetric,
    verify_axioms,
)


def embedded_instance(values, s_img, t_img, scale=(1.0,)):
    """Instance whose table comes from |x - y| stretched along `scale`."""
    vals = np.asarray(values, dtype=float)
    scale = np.asarray(scale, dtype=float)
    base = np.abs(vals[:, None] - vals[None, :])
    table = scale[None, None, :] * base[:, :, None]
    space = ConeMetricSpace(
        FinitePoints(len(vals)), Orthant(len(scale)), Euclidean(), TableMetric(table)
    )
    return FiniteInstance(space, FiniteTable(s_img), FiniteTable(t_img))


class TestCommonFixedPoints:
    def test_identity_pair_fixes_everything(self):
        inst = embedded_instance([0.0, 1.0, 2.0], [0, 1, 2], [0, 1, 2])
        assert enumerate_common_fixed_points(inst) == [0, 1, 2]

    def test_single_shared_fixed_point(self):
        inst = embedded_instance([0.0, 1.0, 2.0], [0, 0, 0], [0, 2, 1])
        assert enumerate_common_fixed_points(inst) == [0]

    def test_disjoint_fixed_points_give_empty_list(self):
        inst = embedded_instance([0.0, 1.0], [1, 0], [0, 1])
        assert enumerate_common_fixed_points(inst) == []


class TestInstanceValidation:
    def test_wrong_size_tables_rejected(self):
        with pytest.raises(ValueError, match="cover the whole domain"):
            embedded_instance([0.0, 1.0, 2.0], [0, 1], [0, 1, 2])

    def test_non_table_metric_rejected(self):
        from conefix.spaces import Continuous, InducedMetric

        space = ConeMetricSpace(
            Continuous(1, np.array([[0.0, 1.0]])),
            Orthant(1),
            Euclidean(),
            InducedMetric(np.array([1.0])),
        )
        with pytest.raises(ValueError):
            FiniteInstance(space, FiniteTable([0]), FiniteTable([0]))


class TestExactMinimalConstant:
    def test_dyadic_shift_instance_is_exactly_half(self):
        # points at 2^-i with T an index shift: every ratio is exactly 0.5
        vals = [0.5**i for i in range(5)]
        t_img = [1, 2, 3, 4, 4]
        s_img = [t_img[j] for j in t_img]
        inst = embedded_instance(vals, s_img, t_img)
        res = exact_minimal_constant(inst, Jungck)
        assert res.feasible
        assert res.value == 0.5
        assert res.method == "exact"

    def test_constant_maps_need_nothing(self):
        inst = embedded_instance([0.0, 1.0, 3.0], [1, 1, 1], [1, 1, 1])
        res = exact_minimal_constant(inst, Kannan)
        assert res.feasible
        assert res.value == 0.0

    def test_identity_pair_is_infeasible(self):
        inst = embedded_instance([0.0, 1.0], [0, 1], [0, 1])
        res = exact_minimal_constant(inst, Jungck)
        assert not res.feasible
        assert res.value == 1.0

    def test_multi_parameter_family_rejected(self):
        inst = embedded_instance([0.0, 1.0], [0, 0], [0, 1])
        with pytest.raises(ParameterError, match="single-parameter"):
            exact_minimal_constant(inst, SinghContraction)

    @pytest.mark.parametrize("family", [Jungck, Kannan, Chatterjea, ZamfirescuMax])
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_fitter_bit_for_bit_on_orthant(self, family, seed):
        inst = random_finite_instance(seed, n=6, m=2)
        res = exact_minimal_constant(inst, family)
        fit = fit_minimal_constants(inst.space, inst.s, inst.t, family)
        assert fit.method == "coordinate-ratio"
        assert res.feasible == fit.feasible
        if math.isfinite(res.value) or math.isfinite(fit.value):
            assert res.value == fit.value

    def test_feasible_value_certifies(self):
        res = None
        for seed in range(50):
            inst = random_finite_instance(seed, n=5, m=2)
            res = exact_minimal_constant(inst, Jungck)
            if res.feasible:
                break
        assert res is not None and res.feasible
        report = exhaustive_certify(inst, Jungck(res.value))
        assert report.holds_on_checked
        assert report.mode == "exhaustive"

    def test_non_orthant_cone_reports_grid(self):
        inst = random_finite_instance(0, n=4, m=3, cone_kind="second_order")
        res = exact_minimal_constant(inst, Jungck)
        assert res.method == "grid"
        fit = fit_minimal_constants(inst.space, inst.s, inst.t, Jungck)
        assert fit.method == "grid"
        assert res.feasible == fit.feasible
        if res.feasible:
            assert res.value == fit.value


class TestRandomInstances:
    def test_seeded_instance_passes_all_axioms(self):
        inst = random_finite_instance(1, n=4, m=2)
        report = verify_axioms(inst.space)
        assert report.exhaustive
        assert report.passed, report.violations

    def test_same_seed_is_bitwise_identical(self):
        a = random_finite_instance(7, n=6, m=3)
        b = random_finite_instance(7, n=6, m=3)
        assert np.array_equal(a.space.metric.table, b.space.metric.table)
        assert np.array_equal(a.s.images, b.s.images)
        assert np.array_equal(a.t.images, b.t.images)

    def test_different_seeds_differ(self):
        a = random_finite_instance(0, n=6, m=2)
        b = random_finite_instance(1, n=6, m=2)
        assert not np.array_equal(a.space.metric.table, b.space.metric.table)

    def test_s_is_a_power_of_t(self):
        inst = random_finite_instance(11, n=8, m=2)
        t = inst.t.images
        candidates = []
        img = t[t]
        for _ in range(3):
            candidates.append(img.copy())
            img = t[img]
        assert any(np.array_equal(inst.s.images, c) for c in candidates)

    def test_maps_commute_and_ranges_nest(self):
        from conefix.maps import check_commuting, check_range_inclusion

        inst = random_finite_instance(5, n=7, m=2)
        assert check_commuting(inst.s, inst.t, inst.space.domain).commutes
        assert check_range_inclusion(inst.s, inst.t, inst.space.domain).included

    @pytest.mark.parametrize("kind", ["second_order", "polyhedral"])
    def test_other_cone_kinds_pass_axioms(self, kind):
        inst = random_finite_instance(2, n=4, m=3, cone_kind=kind)
        report = verify_axioms(inst.space)
        assert report.passed, report.violations
        assert not isinstance(inst.space.cone, Orthant)

    def test_second_order_direction_is_interior(self):
        inst = random_finite_instance(4, n=3, m=3, cone_kind="second_order")
        assert isinstance(inst.space.cone, SecondOrder)
        # any strictly positive off-diagonal entry sits strictly inside
        entry = inst.space.metric.table[0, 1]
        assert margin(inst.space.cone, entry) > 0

    def test_bad_arguments_rejected(self):
        with pytest.raises(ParameterError):
            random_finite_instance(0, n=0, m=2)
        with pytest.raises(ParameterError):
            random_finite_instance(0, n=3, m=1, cone_kind="second_order")
        with pytest.raises(ParameterError, match="cone_kind"):
            random_finite_instance(0, n=3, m=2, cone_kind="icecream")

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_any_seed_builds_a_valid_instance(self, seed):
        inst = random_finite_instance(seed, n=5, m=2)
        assert verify_axioms(inst.space).passed


class TestTheoremOnFiniteInstances:
    """Certified instances must behave exactly as the convergence theory says."""

    def certified(self, seed, n=6, m=2):
        inst = random_finite_instance(seed, n=n, m=m)
        res = exact_minimal_constant(inst, Jungck)
        if not res.feasible:
            return None
        return inst, Jungck(res.value)

    def test_unique_common_fixed_point_and_global_convergence(self):
        checked = 0
        for seed in range(100):
            pair = self.certified(seed)
            if pair is None:
                continue
            inst, cond = pair
            checked += 1
            fixed = enumerate_common_fixed_points(inst)
            assert len(fixed) == 1
            z = fixed[0]
            for start in range(inst.n_points):
                trace = jungck_iterate(
                    inst.space, inst.s, inst.t, start,
                    cond=cond, tol=1e-12, max_iter=200,
                )
                assert trace.converged
                assert trace.s_images[-1] == z
                cert = certify_common_fixed_point(
                    inst.space, inst.s, inst.t, trace.s_images[-1], tol=1e-12
                )
                assert cert.accepted
        assert checked >= 10

    def test_certified_iteration_stops_quickly(self):
        pair = None
        for seed in range(100):
            pair = self.certified(seed, n=8)
            if pair is not None:
                break
        assert pair is not None
        inst, cond = pair
        for start in range(inst.n_points):
            trace = jungck_iterate(
                inst.space, inst.s, inst.t, start, cond=cond, tol=1e-12
            )
            # orbit must freeze within a couple of laps around the point set
            assert trace.iterations <= 2 * inst.n_points
