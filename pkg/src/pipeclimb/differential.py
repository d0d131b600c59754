"""Equal-output three-output differential: speed and torque relations.

The mechanism is a single input feeding three two-output differentials whose
side gears mesh pairwise into three two-input differentials, one per output.
Only the composite ratio ``j / k`` is observable from outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import AllocationError

RPM_TO_RAD_S = 2 * math.pi / 60


@dataclass(frozen=True)
class Inertias:
    I1: float = 0.0
    I01: float = 0.0
    I03: float = 0.0


@dataclass(frozen=True)
class DifferentialConfig:
    k: float = 10.0
    j: float = 1.0
    input_speed_wu: float = 120.0  # rpm
    input_torque_tau_u: float = 0.0
    inertias: Inertias = field(default_factory=Inertias)

    def __post_init__(self):
        if not self.k > 0 or not self.j > 0:
            raise ValueError(f"gear ratios must be positive, got k={self.k}, j={self.j}")
        if not self.input_speed_wu >= 0:
            raise ValueError(f"input speed must be non-negative, got {self.input_speed_wu}")


@dataclass(frozen=True)
class OutputState:
    speeds: tuple[float, float, float]  # rpm
    torques: tuple[float, float, float]


def ring_speed_from_sides(k: float, w01: float, w02: float) -> float:
    """Ring gear speed of a two-output differential from its two side gears."""
    return k * (w01 + w02) / 2


def equal_load_output_speed(cfg: DifferentialConfig) -> float:
    """Speed of every output (rpm) when the three loads are equal or absent."""
    return cfg.j * cfg.input_speed_wu / cfg.k


def steady_state_output_torque(cfg: DifferentialConfig) -> float:
    return cfg.k * cfg.input_torque_tau_u / (3 * cfg.j)


def dynamic_output_torque(cfg: DifferentialConfig, wdot07: float, wdot08: float) -> float:
    """Output torque with the inertial load of the two internal gear stages.

    Accelerations are in rad/s^2 and taken as given; internal gear states are
    not integrated.
    """
    I = cfg.inertias
    return steady_state_output_torque(cfg) - (I.I01 * wdot07 + I.I03 * wdot08) / cfg.j


def lumped_output_torque(cfg: DifferentialConfig, wdot1: float) -> float:
    """Output torque with the single lumped inertia term ``2 * I1 * wdot1 / j``."""
    return steady_state_output_torque(cfg) - 2 * cfg.inertias.I1 * wdot1 / cfg.j


def allocate_output_speeds(cfg: DifferentialConfig, demand_ratios) -> tuple[float, float, float]:
    """Split the fixed output-speed budget in proportion to the demand weights.

    The three outputs always sum to ``3 * j * wu / k``; equal weights give the
    equal-load speed on every output.
    """
    weights = tuple(float(w) for w in demand_ratios)
    if len(weights) != 3:
        raise AllocationError(f"expected three demand weights, got {len(weights)}")
    if not all(math.isfinite(w) and w > 0 for w in weights):
        raise AllocationError(f"demand weights must be positive and finite, got {weights}")
    budget = 3 * equal_load_output_speed(cfg)
    total = math.fsum(weights)
    return tuple(budget * w / total for w in weights)


def output_state(cfg: DifferentialConfig, demand_ratios=(1.0, 1.0, 1.0)) -> OutputState:
    """Output speeds for the given demand and steady-state torques."""
    speeds = allocate_output_speeds(cfg, demand_ratios)
    tau = steady_state_output_torque(cfg)
    return OutputState(speeds=speeds, torques=(tau, tau, tau))

