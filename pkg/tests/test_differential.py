import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import six_differential_outputs
from pipeclimb.differential import (
    DifferentialConfig,
    Inertias,
    allocate_output_speeds,
    dynamic_output_torque,
    equal_load_output_speed,
    lumped_output_torque,
    output_state,
    ring_speed_from_sides,
    steady_state_output_torque,
)
from pipeclimb.errors import AllocationError

weights = st.floats(0.01, 100)


def test_ring_speed():
    assert ring_speed_from_sides(1, 10, 14) == 12
    assert ring_speed_from_sides(1, 12, 12) == 12
    assert ring_speed_from_sides(2, 10, 14) == 24


@pytest.mark.parametrize(
    "wu,j,k,expected",
    [(120, 1, 10, 12.0), (0, 3, 7, 0.0), (60, 1, 2, 30.0)],
)
def test_equal_load_output_speed(wu, j, k, expected):
    assert equal_load_output_speed(DifferentialConfig(k=k, j=j, input_speed_wu=wu)) == expected


def test_steady_state_torque_and_power():
    cfg = DifferentialConfig(k=1, j=0.1, input_speed_wu=120, input_torque_tau_u=30)
    assert steady_state_output_torque(cfg) == pytest.approx(100)
    assert steady_state_output_torque(DifferentialConfig(input_torque_tau_u=0)) == 0
    state = output_state(cfg)
    assert state.speeds == pytest.approx((12, 12, 12))
    # 3 outputs x 100 x (j wu / k) == 30 x 120
    power = sum(t * w for t, w in zip(state.torques, state.speeds))
    assert power == pytest.approx(30 * 120, rel=1e-12)


def test_dynamic_torque():
    cfg = DifferentialConfig(k=1, j=0.1, input_torque_tau_u=30, inertias=Inertias(I01=2, I03=1))
    assert dynamic_output_torque(cfg, 1, 2) == pytest.approx(60)
    assert dynamic_output_torque(cfg, 0, 0) == steady_state_output_torque(cfg)
    free = DifferentialConfig(k=1, j=0.1, input_torque_tau_u=30)
    assert dynamic_output_torque(free, 123.0, -7.0) == steady_state_output_torque(free)
    assert lumped_output_torque(free, 5.0) == steady_state_output_torque(free)


@given(a=st.floats(-50, 50), b=st.floats(-50, 50))
def test_dynamic_torque_slopes_by_finite_difference(a, b):
    cfg = DifferentialConfig(k=3, j=0.4, input_torque_tau_u=7, inertias=Inertias(I1=0.3, I01=2.5, I03=0.7))
    h = 1e-3
    d07 = (dynamic_output_torque(cfg, a + h, b) - dynamic_output_torque(cfg, a - h, b)) / (2 * h)
    d08 = (dynamic_output_torque(cfg, a, b + h) - dynamic_output_torque(cfg, a, b - h)) / (2 * h)
    d1 = (lumped_output_torque(cfg, a + h) - lumped_output_torque(cfg, a - h)) / (2 * h)
    assert d07 == pytest.approx(-2.5 / 0.4, rel=1e-6)
    assert d08 == pytest.approx(-0.7 / 0.4, rel=1e-6)
    assert d1 == pytest.approx(-2 * 0.3 / 0.4, rel=1e-6)


def test_allocation_examples():
    cfg = DifferentialConfig()
    assert allocate_output_speeds(cfg, (1, 1, 1)) == pytest.approx((12, 12, 12))
    got = allocate_output_speeds(cfg, (0.6706, 1.1647, 1.1647))
    # frozen from the six-differential constraint solve
    assert got == pytest.approx((8.0472, 13.9764, 13.9764), abs=1e-4)
    assert sum(allocate_output_speeds(cfg, (2, 1, 1))) == pytest.approx(36, rel=1e-15)


@pytest.mark.parametrize("bad", [(0, 1, 1), (-1, 1, 1), (1, float("inf"), 1), (1, float("nan"), 1), (1, 1)])
def test_allocation_rejects_bad_weights(bad):
    with pytest.raises(AllocationError):
        allocate_output_speeds(DifferentialConfig(), bad)


@given(w=st.tuples(weights, weights, weights), wu=st.floats(0, 500), ratio=st.floats(0.01, 10))
def test_allocation_sum_invariant(w, wu, ratio):
    cfg = DifferentialConfig(k=1.0, j=ratio, input_speed_wu=wu)
    target = 3 * ratio * wu
    assert sum(allocate_output_speeds(cfg, w)) == pytest.approx(target, rel=1e-12, abs=1e-12)


@given(w=st.tuples(weights, weights, weights))
def test_allocation_permutation_equivariant(w):
    cfg = DifferentialConfig()
    base = allocate_output_speeds(cfg, w)
    for perm in ((1, 2, 0), (2, 0, 1), (1, 0, 2)):
        permuted = allocate_output_speeds(cfg, [w[i] for i in perm])
        assert permuted == pytest.approx([base[i] for i in perm], rel=1e-12)


@given(w=st.tuples(weights, weights, weights), wu=st.floats(1, 500), k=st.floats(0.1, 20), j=st.floats(0.1, 20))
def test_allocation_matches_constraint_graph(w, wu, k, j):
    cfg = DifferentialConfig(k=k, j=j, input_speed_wu=wu)
    oracle = six_differential_outputs(k, j, wu, w)
    assert np.allclose(allocate_output_speeds(cfg, w), oracle, rtol=1e-9, atol=1e-9 * wu)


def test_config_validation():
    with pytest.raises(ValueError):
        DifferentialConfig(k=0)
    with pytest.raises(ValueError):
        DifferentialConfig(input_speed_wu=-1)
