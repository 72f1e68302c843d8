import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from contrastive_moments.density1d import DensityModel
from contrastive_moments.margin import (
    NoCandidateError,
    max_margin,
    recover,
    recover_isotropic,
    select,
    sin_theta,
)
from contrastive_moments.sampler import generate, make_instance


def col(values):
    return np.asarray(values, dtype=float)[:, None]


class TestMaxMargin:
    def test_hand_example(self):
        rep = max_margin(col([-3, -1, 2, 2.5]), np.array([1.0]), 0.0)
        assert (rep.gap_lo, rep.gap_hi, rep.width) == (-1, 2, 3)
        assert (rep.left_count, rep.right_count) == (2, 2)

    def test_all_equal(self):
        assert max_margin(col([1.0] * 6), np.array([1.0]), 0.0).width == 0.0

    def test_side_fraction_excludes_outlier_gap(self):
        y = col([-100, 0, 0.1, 0.2, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7])
        assert max_margin(y, np.array([1.0]), 0.0).width == 100
        rep = max_margin(y, np.array([1.0]), 0.15)
        assert rep.width == pytest.approx(1.0)

    @pytest.mark.parametrize("kw", [{"direction": [2.0]}, {"min_side_fraction": 0.5}, {"min_side_fraction": -0.1}])
    def test_validation(self, kw):
        args = {"direction": [1.0], "min_side_fraction": 0.0, **kw}
        with pytest.raises(ValueError):
            max_margin(col([0, 1, 2]), np.array(args["direction"]), args["min_side_fraction"])

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            max_margin(col([0.0]), np.array([1.0]), 0.0)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=60))
    def test_matches_brute_force(self, values):
        y = np.array(values)
        rep = max_margin(y[:, None], np.array([1.0]), 0.0)
        s = np.sort(y)
        assert rep.width == np.max(np.diff(s))
        assert rep.left_count + rep.right_count == len(y)
        assert not np.any((y > rep.gap_lo) & (y < rep.gap_hi))


class TestSelect:
    def test_widest_wins(self):
        Y = np.array([[0.0, 0.0], [0.0, 1.0], [5.0, 2.0], [6.0, 3.0]])
        idx, d, reps = select(Y, [np.array([0.0, 1.0]), np.array([1.0, 0.0])], 0.0)
        assert idx == 1
        assert reps[1].width == 5

    def test_tie_goes_first(self):
        Y = np.array([[0.0, 0.0], [1.0, 1.0]])
        idx, _, _ = select(Y, [np.array([1.0, 0.0]), np.array([0.0, 1.0])], 0.0)
        assert idx == 0

    def test_single_unflagged(self):
        Y = np.array([[0.0, 0.0], [1.0, 1.0]])
        idx, d, reps = select(Y, [None, None, np.array([0.0, 1.0])], 0.0)
        assert idx == 2 and reps[0] is None

    def test_all_flagged(self):
        with pytest.raises(NoCandidateError):
            select(np.zeros((3, 2)), [None, None])


class TestSinTheta:
    @pytest.mark.parametrize(
        "u,v,expected",
        [([1, 0], [2, 0], 0.0), ([1, 0], [0, 3], 1.0), ([1, 0], [1, 1], math.sqrt(0.5)), ([1, 0], [-1, 0], 0.0)],
    )
    def test_values(self, u, v, expected):
        assert sin_theta(u, v) == pytest.approx(expected, abs=1e-12)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            sin_theta([0, 0], [1, 0])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3), st.lists(st.floats(-10, 10), min_size=3, max_size=3))
    def test_range_and_symmetry(self, u, v):
        if np.linalg.norm(u) < 1e-3 or np.linalg.norm(v) < 1e-3:
            return
        s = sin_theta(u, v)
        assert 0.0 <= s <= 1.0
        assert s == pytest.approx(sin_theta(v, u), abs=1e-12)


def recovery_kinds(a, b, seeds):
    kinds, sins = [], []
    for s in seeds:
        inst = make_instance(DensityModel.gaussian(), a, b, 10, 0.01, "rotation", np.random.default_rng(s))
        res = recover(generate(inst, 200_000, s).X)
        normal = res.whitener.normal_to_whitened(inst.normal_in_input_coords())
        kinds.append(res.selected_kind)
        sins.append(sin_theta(normal, res.chosen))
    return kinds, sins


class TestRecover:
    def test_symmetric_selects_cov(self):
        kinds, sins = recovery_kinds(-0.5, 0.5, range(10))
        assert kinds.count("cov") >= 8
        assert np.median(sins) <= 0.2

    def test_asymmetric_selects_mean(self):
        kinds, _ = recovery_kinds(-2.0, 0.5, range(10))
        assert sum(k.startswith("mean") for k in kinds) >= 8

    def test_result_fields(self):
        inst = make_instance(DensityModel.gaussian(), -0.5, 0.5, 5, 0.01, "random", np.random.default_rng(0))
        res = recover(generate(inst, 20_000, 0).X)
        assert len(res.reports) == 3 and len(res.sin_thetas(np.eye(5)[0])) == 3
        assert res.selected_kind in ("mean1", "mean2", "cov")
        assert np.linalg.norm(res.chosen_in_input_coords()) == pytest.approx(1.0)
        n = inst.normal_in_input_coords()
        assert sin_theta(n, res.chosen_in_input_coords()) < 0.3

    def test_isotropic_path(self):
        inst = make_instance(
            DensityModel.gaussian(), 0.3, 1.3, 6, 0.01, "identity", np.random.default_rng(0), standardize=False
        )
        res = recover_isotropic(generate(inst, 50_000, 0).X)
        assert res.kinds == ("mean", "cov")
        assert_allclose(res.chosen_in_input_coords(), res.chosen)
        assert res.sin_thetas(np.eye(6)[0])[0] < 0.2
