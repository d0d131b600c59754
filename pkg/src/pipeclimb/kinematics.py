"""No-slip track speeds in pipe bends and sprocket speed conversion.

Module angles are measured about the pipe axis from the direction pointing at
the bend center, so a module at 0 deg rides the inner wall and one at 180 deg
the outer wall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryError

MODULE_SPACING_DEG = 120.0


@dataclass(frozen=True)
class TrackSpeeds:
    v_tA: float
    v_tB: float
    v_tC: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.v_tA, self.v_tB, self.v_tC)

    def __iter__(self):
        return iter(self.as_tuple())

    def __getitem__(self, i):
        return self.as_tuple()[i]

    def __len__(self):
        return 3

    @classmethod
    def uniform(cls, v: float) -> TrackSpeeds:
        return cls(v, v, v)


def normalize_deg(angle: float) -> float:
    a = math.fmod(angle, 360.0)
    if a < 0:
        a += 360.0
    # fmod of a tiny negative number can round up to exactly 360
    return 0.0 if a >= 360.0 else a


def module_angles(mu: float) -> tuple[float, float, float]:
    """Angular positions of modules A, B and C for insertion orientation ``mu``."""
    return tuple(normalize_deg(mu + i * MODULE_SPACING_DEG) for i in range(3))


def track_speed_in_bend(v: float, R: float, r: float, mu_i: float) -> float:
    """Track speed that follows the wall without slip at angle ``mu_i`` (deg)."""
    if not R > r:
        raise GeometryError(f"bend radius R={R} must exceed pipe radius r={r}")
    if r < 0 or v < 0:
        raise GeometryError(f"pipe radius and speed must be non-negative (r={r}, v={v})")
    return v * (R - r * math.cos(math.radians(mu_i))) / R


def bend_track_speeds(v: float, R: float, r: float, mu: float) -> TrackSpeeds:
    return TrackSpeeds(*(track_speed_in_bend(v, R, r, a) for a in module_angles(mu)))


def linear_track_speed(omega_out: float, sprocket_diameter_Ds: float) -> float:
    """Track surface speed in mm/s for a sprocket turning at ``omega_out`` rpm."""
    if not sprocket_diameter_Ds > 0:
        raise GeometryError(f"sprocket diameter must be positive, got {sprocket_diameter_Ds}")
    return math.pi * sprocket_diameter_Ds * omega_out / 60


def output_speed_for_track(v: float, sprocket_diameter_Ds: float) -> float:
    """Inverse of :func:`linear_track_speed`: rpm needed for track speed ``v``."""
    return 60 * v / (math.pi * sprocket_diameter_Ds)
