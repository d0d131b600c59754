"""Kinematic simulator for a tracked in-pipe robot with an equal-output differential."""

from .analysis import ape, compare_orientation, render_report
from .differential import (
    DifferentialConfig,
    allocate_output_speeds,
    dynamic_output_torque,
    equal_load_output_speed,
    ring_speed_from_sides,
    steady_state_output_torque,
)
from .geometry import Bend, PipeNetwork, PipeSpec, Straight, locate, robot_path_length, total_centerline_length
from .kinematics import TrackSpeeds, bend_track_speeds, linear_track_speed, module_angles, track_speed_in_bend
from .sim import Mode, RobotConfig, SimSettings, run, slip_profile, step
from .suspension import SpringConfig, check_asymmetric, compression_at

__version__ = "0.1.0"

__all__ = [
    "Bend",
    "DifferentialConfig",
    "Mode",
    "PipeNetwork",
    "PipeSpec",
    "RobotConfig",
    "SimSettings",
    "SpringConfig",
    "Straight",
    "TrackSpeeds",
    "allocate_output_speeds",
    "ape",
    "bend_track_speeds",
    "check_asymmetric",
    "compare_orientation",
    "compression_at",
    "dynamic_output_torque",
    "equal_load_output_speed",
    "linear_track_speed",
    "locate",
    "module_angles",
    "render_report",
    "ring_speed_from_sides",
    "robot_path_length",
    "run",
    "slip_profile",
    "steady_state_output_torque",
    "step",
    "total_centerline_length",
    "track_speed_in_bend",
]
