"""Exit criteria for the simulator, one test per criterion, at fixed tolerances."""

import math
from dataclasses import replace

import numpy as np
import pytest

from oracles import six_differential_outputs
from pipeclimb.analysis import ape, load_reference, validate_reference
from pipeclimb.cli import main
from pipeclimb.config import load_scenario
from pipeclimb.differential import (
    DifferentialConfig,
    allocate_output_speeds,
    equal_load_output_speed,
    output_state,
)
from pipeclimb.errors import OverCompressionError
from pipeclimb.geometry import PipeNetwork, PipeSpec, Straight, robot_path_length, total_centerline_length
from pipeclimb.kinematics import bend_track_speeds, linear_track_speed
from pipeclimb.sim import Mode, SimSettings, run, slip_profile, with_orientation
from pipeclimb.suspension import SpringConfig, compression_at

N_CASES = 10_000


@pytest.fixture(scope="module")
def scenario():
    return load_scenario("paper_network")


def test_c01_equal_load_output_speed(criterion):
    cfg = DifferentialConfig(k=10, j=1, input_speed_wu=120)
    speeds = allocate_output_speeds(cfg, (1, 1, 1))
    ok = equal_load_output_speed(cfg) == 12.0 and speeds == (12.0, 12.0, 12.0)
    criterion(1, ok, f"outputs {speeds} rpm (exact 12)")
    assert ok


def test_c02_nominal_linear_speed(criterion):
    v = linear_track_speed(12, 80)
    apes = [ape(v, obs) for obs in (50.03, 50.22, 51.36)]
    ok = abs(v - 50.265) < 5e-4 and all(a < 2.2 for a in apes)
    criterion(2, ok, f"v={v:.3f} mm/s, APE vs reported straights {[round(a, 2) for a in apes]} (< 2.2%)")
    assert ok


def test_c03_bend_triple_mu0(criterion):
    R = 418.77
    speeds = bend_track_speeds(50.24, R, 0.3293 * R, 0).as_tuple()
    expected = (33.69, 58.51, 58.51)
    ok = all(abs(s - e) <= 0.05 for s, e in zip(speeds, expected))
    criterion(3, ok, f"triple {tuple(round(s, 3) for s in speeds)} vs {expected} +/- 0.05")
    assert ok


def test_c04_ape_reproduction(criterion):
    rows = {r.comparison.label: r.comparison for r in validate_reference(load_reference())}
    mu0, mu30, mu60 = rows["bend mu=0"].max_ape, rows["bend mu=30"].max_ape, rows["bend mu=60"].max_ape
    ok = abs(mu0 - 1.2) <= 0.1 and abs(mu30 - 3.8) <= 0.1
    criterion(4, ok, f"max APE mu0={mu0:.2f}% (1.2+/-0.1), mu30={mu30:.2f}% (3.8+/-0.1); "
                     f"mu60={mu60:.2f}% reported only")
    assert ok


def test_c05_traversal_time(criterion, scenario):
    assert scenario.settings.effective_distance_override == 3016.49
    assert scenario.settings.speed_override == 50.24
    rep = run(scenario.network, with_orientation(scenario.robot, 0), scenario.settings)
    vertical = PipeNetwork(PipeSpec(137.9), (Straight(550, "vertical"),))
    climb = run(vertical, scenario.robot, SimSettings(effective_distance_override=450))
    ok = abs(rep.total_time / 60.04 - 1) <= 5e-3 and abs(climb.total_time - 8.95) <= 0.1
    criterion(5, ok, f"network {rep.total_time:.3f} s (60.04 +/- 0.5%), vertical {climb.total_time:.3f} s (8.95 +/- 0.1)")
    assert ok


def test_c06_network_length(criterion, scenario):
    total = total_centerline_length(scenario.network)
    d_r = robot_path_length(scenario.network, 200)
    ok = abs(total - 3023.49) <= 0.1 and abs(d_r - 2823.49) <= 0.1
    criterion(6, ok, f"D_pipe={total:.3f} mm, D_R={d_r:.3f} mm")
    assert ok


def test_c07_property_suite(criterion):
    rng = np.random.default_rng(20240917)
    worst = dict(sum_rule=0.0, cyclic=0.0, alloc_sum=0.0, power=0.0, graph=0.0)
    for _ in range(N_CASES):
        v = rng.uniform(0.1, 500)
        R = rng.uniform(10, 5000)
        r = rng.uniform(0, 0.99) * R
        mu = rng.uniform(-360, 720)
        speeds = bend_track_speeds(v, R, r, mu).as_tuple()
        worst["sum_rule"] = max(worst["sum_rule"], abs(math.fsum(speeds) - 3 * v) / (3 * v))
        shifted = bend_track_speeds(v, R, r, mu + 120).as_tuple()
        rotated = (speeds[1], speeds[2], speeds[0])
        worst["cyclic"] = max(worst["cyclic"], max(abs(a - b) / v for a, b in zip(shifted, rotated)))

        cfg = DifferentialConfig(
            k=rng.uniform(0.1, 20), j=rng.uniform(0.1, 20),
            input_speed_wu=rng.uniform(1, 500), input_torque_tau_u=rng.uniform(0.1, 100),
        )
        w = rng.uniform(0.01, 10, size=3)
        alloc = allocate_output_speeds(cfg, w)
        budget = 3 * cfg.j * cfg.input_speed_wu / cfg.k
        worst["alloc_sum"] = max(worst["alloc_sum"], abs(math.fsum(alloc) - budget) / budget)
        state = output_state(cfg)
        power_in = cfg.input_torque_tau_u * cfg.input_speed_wu
        power_out = math.fsum(t * s for t, s in zip(state.torques, state.speeds))
        worst["power"] = max(worst["power"], abs(power_out - power_in) / power_in)
        oracle = six_differential_outputs(cfg.k, cfg.j, cfg.input_speed_wu, w)
        worst["graph"] = max(worst["graph"], float(np.max(np.abs(np.array(alloc) - oracle) / budget)))

    limits = dict(sum_rule=1e-12, cyclic=1e-12, alloc_sum=1e-12, power=1e-9, graph=1e-9)
    ok = all(worst[k] < limits[k] for k in limits)
    criterion(7, ok, f"{N_CASES} cases each; worst relative errors "
                     + ", ".join(f"{k}={worst[k]:.1e}<{limits[k]:.0e}" for k in limits))
    assert ok


def test_c08_slip(criterion, scenario):
    passive_max = 0.0
    for mu in (0, 30, 60):
        rep = run(scenario.network, with_orientation(scenario.robot, mu), scenario.settings)
        passive_max = max(passive_max, slip_profile(rep).max_abs_overall)
    fixed = run(scenario.network, with_orientation(scenario.robot, 0), replace(scenario.settings, mode=Mode.FIXED_EQUAL_SPEED))
    elbow = next(s for s in fixed.segments if s.index == 1)
    t = fixed.column("t_s")
    in_elbow = (t > elbow.entry_t) & (t <= elbow.exit_t)
    inner = float(np.max(np.abs(fixed.column("slipA_mm_s")[in_elbow])))
    ok = passive_max == 0.0 and abs(inner - 16.5) <= 0.2
    criterion(8, ok, f"passive max |slip|={passive_max} (mu 0/30/60); fixed mu=0 elbow inner slip {inner:.3f} mm/s (16.5 +/- 0.2)")
    assert ok


def test_c09_compression(criterion):
    cfg = SpringConfig()
    straight = compression_at("straight", 0, cfg)
    inner, outer = compression_at("bend", 0, cfg), compression_at("bend", 180, cfg)
    raised = []
    for bad in (SpringConfig(preload=17), SpringConfig(preload=15, bend_extra_compression=1.5)):
        try:
            compression_at("bend", 0, bad)
            raised.append(False)
        except OverCompressionError:
            raised.append(True)
    ok = straight == 1.25 and abs(inner - 2.75) < 1e-12 and abs(outer - 2.75) < 1e-12 and all(raised)
    criterion(9, ok, f"straight {straight} mm, bend inner/outer {inner}/{outer} mm, >16 mm raises: {all(raised)}")
    assert ok


def test_c10_determinism(criterion, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["simulate", "paper_network", "--mode", "both", "--out", str(out)]) == 0
    capsys.readouterr()
    names = sorted(p.name for p in a.iterdir())
    identical = names == sorted(p.name for p in b.iterdir()) and all(
        (a / n).read_bytes() == (b / n).read_bytes() for n in names
    )
    csvs = [n for n in names if n.endswith(".csv")]
    ok = identical and len(csvs) == 7
    criterion(10, ok, f"{len(names)} output files ({len(csvs)} CSV) byte-identical across two runs: {identical}")
    assert ok
