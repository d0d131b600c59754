"""Radial spring compression of the three track modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import OverCompressionError

DEFAULT_LINKAGE_SPAN = 100.0
DEFAULT_MAX_COMPRESSION = 16.0


def _default_phi() -> float:
    return math.degrees(math.atan2(DEFAULT_MAX_COMPRESSION, DEFAULT_LINKAGE_SPAN))


@dataclass(frozen=True)
class SpringConfig:
    preload: float = 1.25
    bend_extra_compression: float = 1.5
    max_compression: float = DEFAULT_MAX_COMPRESSION
    asym_max_angle_phi: float = field(default_factory=_default_phi)
    linkage_span: float = DEFAULT_LINKAGE_SPAN

    def __post_init__(self):
        if self.preload < 0:
            raise ValueError(f"preload must be non-negative, got {self.preload}")
        if self.bend_extra_compression < 0:
            raise ValueError(f"bend compression must be non-negative, got {self.bend_extra_compression}")
        if not self.linkage_span > 0:
            raise ValueError(f"linkage span must be positive, got {self.linkage_span}")


@dataclass(frozen=True)
class AsymmetryCheck:
    passed: bool
    angle_deg: float
    reason: str = ""


def _is_bend(segment_kind) -> bool:
    if isinstance(segment_kind, str):
        kind = segment_kind.lower()
        if kind not in ("straight", "bend"):
            raise ValueError(f"unknown segment kind {segment_kind!r}")
        return kind == "bend"
    return bool(segment_kind.is_bend)


def compression_at(segment_kind, module_angle: float, cfg: SpringConfig) -> float:
    """Spring compression (mm) of a module at ``module_angle`` degrees.

    ``segment_kind`` is a segment instance or one of ``"straight"``/``"bend"``.
    In a bend the extra compression scales with |cos(angle)|: full at the inner
    (0 deg) and outer (180 deg) positions, none at the flanks.
    """
    value = cfg.preload
    if _is_bend(segment_kind):
        value += cfg.bend_extra_compression * abs(math.cos(math.radians(module_angle)))
    if value > cfg.max_compression:
        raise OverCompressionError(
            f"compression {value:.3f} mm exceeds the {cfg.max_compression} mm module travel"
        )
    return value


def compressions(segment_kind, angles, cfg: SpringConfig) -> tuple[float, float, float]:
    return tuple(compression_at(segment_kind, a, cfg) for a in angles)


def check_asymmetric(front_compression: float, rear_compression: float, cfg: SpringConfig) -> AsymmetryCheck:
    angle = math.degrees(math.atan2(abs(front_compression - rear_compression), cfg.linkage_span))
    worst = max(front_compression, rear_compression)
    if worst > cfg.max_compression:
        return AsymmetryCheck(False, angle, f"compression {worst} mm exceeds {cfg.max_compression} mm")
    # 1e-12 slack so the limiting configuration itself is accepted
    if angle > cfg.asym_max_angle_phi + 1e-12:
        return AsymmetryCheck(False, angle, f"tilt {angle:.3f} deg exceeds {cfg.asym_max_angle_phi:.3f} deg")
    return AsymmetryCheck(True, angle)
