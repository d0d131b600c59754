"""Time-stepped traversal of a pipe network.

The robot is tracked as a point at its body center moving along the pipe
centerline at the nominal speed. Track speeds are piecewise constant per
segment, and every step is split at segment boundaries, so explicit Euler
integration is exact. Bend entry is instantaneous: contact transients
are not modelled.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import differential as diff
from .errors import DivergenceError, PositionError
from .geometry import Bend, PipeNetwork, locate, robot_path_length, total_centerline_length
from .kinematics import TrackSpeeds, bend_track_speeds, linear_track_speed, module_angles, normalize_deg
from .suspension import SpringConfig, compressions

CSV_HEADER = (
    "t_s", "center_mm",
    "vA_mm_s", "vB_mm_s", "vC_mm_s",
    "odoA_mm", "odoB_mm", "odoC_mm",
    "compA_mm", "compB_mm", "compC_mm",
    "slipA_mm_s", "slipB_mm_s", "slipC_mm_s",
)
MAX_STEPS = 10**7
_EPS_S = 1e-9  # mm; positions closer than this to a boundary snap onto it
_SLIP_RTOL = 1e-12


class Mode(str, Enum):
    PASSIVE_DIFFERENTIAL = "passive"
    FIXED_EQUAL_SPEED = "fixed"


@dataclass(frozen=True)
class RobotConfig:
    robot_length_LR: float = 200.0
    sprocket_diameter_Ds: float = 80.0
    orientation_mu: float = 0.0
    differential: diff.DifferentialConfig = field(default_factory=diff.DifferentialConfig)
    springs: SpringConfig = field(default_factory=SpringConfig)

    def __post_init__(self):
        if not self.robot_length_LR > 0:
            raise ValueError(f"robot length must be positive, got {self.robot_length_LR}")
        if not self.sprocket_diameter_Ds > 0:
            raise ValueError(f"sprocket diameter must be positive, got {self.sprocket_diameter_Ds}")
        object.__setattr__(self, "orientation_mu", normalize_deg(self.orientation_mu))


@dataclass(frozen=True)
class SimSettings:
    dt: float = 0.01
    mode: Mode = Mode.PASSIVE_DIFFERENTIAL
    effective_distance_override: float | None = None
    # replaces the sprocket-derived nominal speed, e.g. the rounded 50.24 mm/s
    speed_override: float | None = None
    record_stride: int = 1
    max_steps: int = MAX_STEPS

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.record_stride < 1:
            raise ValueError(f"record stride must be >= 1, got {self.record_stride}")
        object.__setattr__(self, "mode", Mode(self.mode))


@dataclass(frozen=True)
class SimState:
    t: float
    center_s: float
    track_odometers: tuple[float, float, float]
    speeds: TrackSpeeds
    compressions: tuple[float, float, float]
    slip: tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SegmentTiming:
    index: int
    kind: str
    entry_t: float
    exit_t: float
    distance: float
    track_distances: tuple[float, float, float]

    @property
    def duration(self) -> float:
        return self.exit_t - self.entry_t

    @property
    def mean_speeds(self) -> TrackSpeeds:
        if self.duration <= 0:
            return TrackSpeeds(0.0, 0.0, 0.0)
        return TrackSpeeds(*(d / self.duration for d in self.track_distances))


@dataclass
class TraversalReport:
    name: str
    mode: Mode
    mu: float
    speed: float
    distance: float
    total_time: float
    segments: list[SegmentTiming]
    series: np.ndarray  # one row per recorded step, columns as CSV_HEADER
    slip_integral: tuple[float, float, float] = (0.0, 0.0, 0.0)
    notes: str = "bend entry modelled as instantaneous; contact transients not simulated"

    def column(self, name: str) -> np.ndarray:
        return self.series[:, CSV_HEADER.index(name)]

    @property
    def summary(self) -> dict:
        odo = self.series[-1, 5:8]
        slip = np.abs(self.series[:, 11:14])
        return {
            "total_time_s": self.total_time,
            "distance_mm": self.distance,
            "mean_speeds_mm_s": tuple(odo / self.total_time) if self.total_time > 0 else (0.0,) * 3,
            "max_abs_slip_mm_s": float(slip.max()) if slip.size else 0.0,
            "max_compression_mm": float(self.series[:, 8:11].max()),
        }


def nominal_speed(robot: RobotConfig, settings: SimSettings | None = None) -> float:
    """Center speed in mm/s: equal-load output speed through the sprocket."""
    if settings is not None and settings.speed_override is not None:
        return settings.speed_override
    rpm = diff.equal_load_output_speed(robot.differential)
    return linear_track_speed(rpm, robot.sprocket_diameter_Ds)


def _pose_speeds(segment, network: PipeNetwork, robot: RobotConfig, settings: SimSettings, v: float):
    """(commanded, no-slip) track speeds while the center is in ``segment``."""
    if not isinstance(segment, Bend):
        flat = TrackSpeeds.uniform(v)
        return flat, flat
    geometric = bend_track_speeds(v, segment.bend_radius_R, network.spec.inner_radius_r, robot.orientation_mu)
    if settings.mode is Mode.FIXED_EQUAL_SPEED:
        return TrackSpeeds.uniform(v), geometric
    if v == 0:
        return TrackSpeeds.uniform(0.0), geometric
    # the differential splits its output budget in proportion to the no-slip demand
    equal_rpm = diff.equal_load_output_speed(robot.differential)
    if equal_rpm == 0:
        return TrackSpeeds.uniform(0.0), geometric
    rpm = diff.allocate_output_speeds(robot.differential, [g / v for g in geometric])
    commanded = TrackSpeeds(*(v * w / equal_rpm for w in rpm))
    return commanded, geometric


def _pose(network, robot, settings, v, center_s):
    pos = locate(network, center_s)
    segment = network.segments[pos.segment_index]
    commanded, geometric = _pose_speeds(segment, network, robot, settings, v)
    comp = compressions(segment, module_angles(robot.orientation_mu), robot.springs)
    # differences below roundoff of the speeds themselves are zero slip
    tol = _SLIP_RTOL * max(v, 1.0)
    slip = tuple(0.0 if abs(c - g) <= tol else c - g for c, g in zip(commanded, geometric))
    return pos.segment_index, commanded, comp, slip


def initial_state(network: PipeNetwork, robot: RobotConfig, settings: SimSettings, center_s: float = 0.0) -> SimState:
    v = nominal_speed(robot, settings)
    _, commanded, comp, slip = _pose(network, robot, settings, v, center_s)
    return SimState(0.0, center_s, (0.0, 0.0, 0.0), commanded, comp, slip)


def step(
    state: SimState,
    network: PipeNetwork,
    robot: RobotConfig,
    settings: SimSettings,
    dt: float | None = None,
    stop_s: float | None = None,
    _on_substep=None,
) -> SimState:
    """Advance the robot by ``dt`` seconds (``settings.dt`` by default).

    The interval is split at segment boundaries and never carries the center
    past ``stop_s`` (the network end by default). The returned state carries
    the speeds, compressions and slip that applied over the last sub-interval.
    """
    dt = settings.dt if dt is None else dt
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    if dt == 0:
        return state
    total = total_centerline_length(network)
    stop_s = total if stop_s is None else min(stop_s, total)
    v = nominal_speed(robot, settings)

    t, s = state.t, state.center_s
    odo = list(state.track_odometers)
    speeds, comp, slip = state.speeds, state.compressions, state.slip
    remaining = dt
    while remaining > 0 and s < stop_s:
        index, speeds, comp, slip = _pose(network, robot, settings, v, s)
        if v <= 0:
            t += remaining
            break
        boundary = min(network.segment_end(index), stop_s)
        h = min(remaining, (boundary - s) / v)
        s_next = s + v * h
        if h < remaining or boundary - s_next < _EPS_S:
            s_next = boundary
        for i, u in enumerate(speeds):
            odo[i] += u * h
        if _on_substep is not None:
            _on_substep(index, h, speeds, slip)
        t += h
        s = s_next
        remaining -= h
    return SimState(t, s, tuple(odo), speeds, comp, slip)


def _travel_window(network: PipeNetwork, robot: RobotConfig, settings: SimSettings) -> tuple[float, float]:
    total = total_centerline_length(network)
    if settings.effective_distance_override is None:
        distance = robot_path_length(network, robot.robot_length_LR)
        start = robot.robot_length_LR / 2
    else:
        distance = settings.effective_distance_override
        if not 0 < distance <= total:
            raise PositionError(f"effective distance {distance} mm must lie in (0, {total}]")
        # keep the half-length start offset when the override leaves room for it
        start = min(robot.robot_length_LR / 2, total - distance)
    return start, start + distance


def run(
    network: PipeNetwork,
    robot: RobotConfig,
    settings: SimSettings,
    name: str = "run",
) -> TraversalReport:
    if not network.segments:
        raise PositionError("cannot simulate an empty network")
    start, end = _travel_window(network, robot, settings)
    v = nominal_speed(robot, settings)
    if not v > 0:
        raise DivergenceError(f"nominal speed {v} mm/s never reaches the end of the network")

    entry: dict[int, float] = {}
    exit_: dict[int, float] = {}
    seg_dist = {}
    seg_track = {}
    slip_integral = [0.0, 0.0, 0.0]
    clock = [0.0]

    def on_substep(index, h, speeds, slip):
        entry.setdefault(index, clock[0])
        clock[0] += h
        exit_[index] = clock[0]
        seg_dist[index] = seg_dist.get(index, 0.0) + v * h
        acc = seg_track.setdefault(index, [0.0, 0.0, 0.0])
        for i in range(3):
            acc[i] += speeds[i] * h
            slip_integral[i] += abs(slip[i]) * h

    state = initial_state(network, robot, settings, start)
    rows = [_row(state)]
    steps = 0
    while state.center_s < end:
        if steps >= settings.max_steps:
            raise DivergenceError(f"no arrival after {steps} steps")
        state = step(state, network, robot, settings, stop_s=end, _on_substep=on_substep)
        steps += 1
        if steps % settings.record_stride == 0 or state.center_s >= end:
            rows.append(_row(state))

    segments = [
        SegmentTiming(
            index=i,
            kind="bend" if network.segments[i].is_bend else "straight",
            entry_t=entry[i],
            exit_t=exit_[i],
            distance=seg_dist[i],
            track_distances=tuple(seg_track[i]),
        )
        for i in sorted(entry)
    ]
    return TraversalReport(
        name=name,
        mode=settings.mode,
        mu=robot.orientation_mu,
        speed=v,
        distance=end - start,
        total_time=state.t,
        segments=segments,
        series=np.array(rows, dtype=float),
        slip_integral=tuple(slip_integral),
    )


def _row(state: SimState) -> tuple:
    return (state.t, state.center_s, *state.speeds, *state.track_odometers, *state.compressions, *state.slip)


@dataclass(frozen=True)
class SlipProfile:
    t: np.ndarray
    slip: np.ndarray  # (n, 3) mm/s
    max_abs: tuple[float, float, float]
    integral_abs: tuple[float, float, float]  # mm

    @property
    def max_abs_overall(self) -> float:
        return max(self.max_abs)


def slip_profile(report: TraversalReport) -> SlipProfile:
    slip = report.series[:, 11:14]
    return SlipProfile(
        t=report.series[:, 0],
        slip=slip,
        max_abs=tuple(float(x) for x in np.abs(slip).max(axis=0)),
        integral_abs=report.slip_integral,
    )


def write_csv(report: TraversalReport, path, precision: int = 6) -> Path:
    path = Path(path)
    fmt = f"{{:.{precision}f}}"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        negative_zero = fmt.format(-0.0)
        for row in report.series:
            cells = [fmt.format(x) for x in row]
            # "-0.000000" would make the bytes depend on roundoff sign
            writer.writerow(fmt.format(0.0) if c == negative_zero else c for c in cells)
    return path


def read_csv(path) -> np.ndarray:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = [[float(x) for x in row] for row in reader if row]
    return np.array(rows, dtype=float).reshape(-1, len(CSV_HEADER))


def report_from_csv(path, name: str | None = None, mode: Mode | str = Mode.PASSIVE_DIFFERENTIAL, mu: float = 0.0) -> TraversalReport:
    """Rebuild a report from a time-series CSV; segment timings are not recoverable."""
    series = read_csv(path)
    if len(series) == 0:
        raise ValueError(f"{path}: no rows")
    t = series[:, 0]
    duration = float(t[-1] - t[0])
    distance = float(series[-1, 1] - series[0, 1])
    slip = np.abs(series[:, 11:14])
    if len(series) > 1:
        slip_integral = tuple(float(x) for x in (slip[1:] * np.diff(t)[:, None]).sum(axis=0))
    else:
        slip_integral = (0.0, 0.0, 0.0)
    return TraversalReport(
        name=name or Path(path).stem,
        mode=Mode(mode),
        mu=mu,
        speed=distance / duration if duration > 0 else 0.0,
        distance=distance,
        total_time=duration,
        segments=[],
        series=series,
        slip_integral=slip_integral,
    )


def with_orientation(robot: RobotConfig, mu: float) -> RobotConfig:
    return replace(robot, orientation_mu=mu)
