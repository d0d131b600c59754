"""Pipe networks as ordered centerline segments with arc-length accounting."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from itertools import accumulate

from .errors import GeometryError, PositionError, RobotLengthError


class Gravity(str, Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class PipeSpec:
    inner_radius_r: float

    def __post_init__(self):
        if not self.inner_radius_r > 0:
            raise GeometryError(f"pipe inner radius must be positive, got {self.inner_radius_r}")


@dataclass(frozen=True)
class Straight:
    length: float
    gravity_orientation: Gravity = Gravity.HORIZONTAL

    def __post_init__(self):
        if not self.length > 0:
            raise GeometryError(f"straight length must be positive, got {self.length}")
        object.__setattr__(self, "gravity_orientation", Gravity(self.gravity_orientation))

    @property
    def arc_length(self) -> float:
        return self.length

    @property
    def is_bend(self) -> bool:
        return False


@dataclass(frozen=True)
class Bend:
    bend_radius_R: float
    sweep_angle: float
    label: str = ""

    def __post_init__(self):
        if not 0 < self.sweep_angle < 360:
            raise GeometryError(f"bend sweep must lie in (0, 360) degrees, got {self.sweep_angle}")
        if not self.bend_radius_R > 0:
            raise GeometryError(f"bend radius must be positive, got {self.bend_radius_R}")

    @property
    def arc_length(self) -> float:
        return self.bend_radius_R * math.radians(self.sweep_angle)

    @property
    def is_bend(self) -> bool:
        return True


Segment = Straight | Bend


@dataclass(frozen=True)
class ArcPosition:
    segment_index: int
    local_s: float
    global_s: float


@dataclass(frozen=True)
class PipeNetwork:
    spec: PipeSpec
    segments: tuple[Segment, ...] = ()
    _starts: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        r = self.spec.inner_radius_r
        for i, seg in enumerate(segments):
            if isinstance(seg, Bend) and not seg.bend_radius_R > r:
                raise GeometryError(
                    f"segment {i}: bend radius {seg.bend_radius_R} must exceed pipe radius {r}"
                )
        starts = tuple(accumulate((s.arc_length for s in segments), initial=0.0))
        object.__setattr__(self, "_starts", starts)

    def segment_start(self, index: int) -> float:
        """Global arc-length at which segment ``index`` begins."""
        return self._starts[index]

    def segment_end(self, index: int) -> float:
        return self._starts[index + 1]


def bend_arc_length(R: float, sweep_deg: float) -> float:
    return R * math.radians(sweep_deg)


def total_centerline_length(network: PipeNetwork) -> float:
    return math.fsum(seg.arc_length for seg in network.segments)


def robot_path_length(network: PipeNetwork | float, robot_length_LR: float) -> float:
    """Distance the robot center covers: centerline length minus the robot length.

    ``network`` may also be given directly as a centerline length in mm.
    """
    total = network if isinstance(network, (int, float)) else total_centerline_length(network)
    if robot_length_LR < 0 or robot_length_LR >= total:
        raise RobotLengthError(
            f"robot length {robot_length_LR} mm must be in [0, {total}) for this network"
        )
    return total - robot_length_LR


def locate(network: PipeNetwork, global_s: float) -> ArcPosition:
    """Map a global arc-length to (segment, local offset).

    A position exactly on a boundary belongs to the following segment; the
    network end belongs to the last segment.
    """
    total = network._starts[-1]
    n = len(network.segments)
    if n == 0 or not 0 <= global_s <= total:
        raise PositionError(f"arc-length {global_s} outside [0, {total}]")
    index = min(bisect_right(network._starts, global_s) - 1, n - 1)
    local = global_s - network._starts[index]
    return ArcPosition(index, local, global_s)


def end_corrected_lengths(network: PipeNetwork, robot_length_LR: float) -> list[float]:
    """Per-segment distance covered by the robot center.

    Half the robot length is removed from the first and last segments, so the
    values sum to ``robot_path_length``.
    """
    lengths = [seg.arc_length for seg in network.segments]
    if lengths:
        lengths[0] -= robot_length_LR / 2
        lengths[-1] -= robot_length_LR / 2
    return lengths
