"""Plain-text scenario files.

One directive per line, ``#`` starts a comment::

    pipe_radius 137.9
    straight 550 vertical
    bend 418.79 90 elbow
    mu_deg 0 30 60
    gear_k 10

A ``network <path>`` line pulls segment lines from another file (resolved
relative to the including file).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .differential import DifferentialConfig, Inertias
from .errors import ConfigError, PipeClimbError
from .geometry import Bend, Gravity, PipeNetwork, PipeSpec, Straight
from .sim import Mode, RobotConfig, SimSettings
from .suspension import SpringConfig

BUNDLED = {"paper_network": "paper_network.txt"}

_DIFF_KEYS = {"gear_j": "j", "gear_k": "k", "input_rpm": "input_speed_wu", "input_torque": "input_torque_tau_u"}
_INERTIA_KEYS = {"inertia_I1": "I1", "inertia_I01": "I01", "inertia_I03": "I03"}
_SPRING_KEYS = {
    "spring_preload_mm": "preload",
    "spring_bend_extra_mm": "bend_extra_compression",
    "spring_max_mm": "max_compression",
    "linkage_span_mm": "linkage_span",
    "asym_max_deg": "asym_max_angle_phi",
}
_ROBOT_KEYS = {"sprocket_mm": "sprocket_diameter_Ds", "robot_length_mm": "robot_length_LR"}
_SETTINGS_KEYS = {"dt_s": "dt", "effective_distance_mm": "effective_distance_override", "speed_mm_s": "speed_override"}


@dataclass
class Scenario:
    name: str
    network: PipeNetwork
    robot: RobotConfig = field(default_factory=RobotConfig)
    settings: SimSettings = field(default_factory=SimSettings)
    mus: tuple[float, ...] = (0.0,)
    modes: tuple[Mode, ...] = (Mode.PASSIVE_DIFFERENTIAL,)
    source: str | None = None


def _number(token: str, lineno: int, path: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"expected a number, got {token!r}", lineno, path) from None


def _parse_lines(lines, path: str, base: Path | None, out: dict, depth: int = 0):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()

        def nums(count=None, at_least=None):
            if count is not None and len(args) != count:
                raise ConfigError(f"{key} takes {count} value(s), got {len(args)}", lineno, path)
            if at_least is not None and len(args) < at_least:
                raise ConfigError(f"{key} needs at least {at_least} value(s)", lineno, path)
            return [_number(a, lineno, path) for a in args]

        try:
            if key == "pipe_radius":
                out["pipe_radius"] = nums(1)[0]
            elif key == "straight":
                if not 1 <= len(args) <= 2:
                    raise ConfigError("straight takes <length> [vertical|horizontal]", lineno, path)
                length = _number(args[0], lineno, path)
                orient = args[1].lower() if len(args) == 2 else "horizontal"
                if orient not in {g.value for g in Gravity}:
                    raise ConfigError(f"unknown orientation {args[1]!r}", lineno, path)
                out["segments"].append(Straight(length, Gravity(orient)))
                out["segment_lines"].append((path, lineno))
            elif key == "bend":
                if len(args) < 2:
                    raise ConfigError("bend takes <radius> <sweep_deg> [label]", lineno, path)
                R, sweep = (_number(a, lineno, path) for a in args[:2])
                out["segments"].append(Bend(R, sweep, " ".join(args[2:])))
                out["segment_lines"].append((path, lineno))
            elif key == "network":
                if len(args) != 1:
                    raise ConfigError("network takes one path", lineno, path)
                if depth > 4:
                    raise ConfigError("network includes nested too deeply", lineno, path)
                target = Path(args[0])
                if base is not None and not target.is_absolute():
                    target = base / target
                try:
                    text = target.read_text()
                except OSError as exc:
                    raise ConfigError(f"cannot read network file: {exc}", lineno, path) from None
                _parse_lines(text.splitlines(), str(target), target.parent, out, depth + 1)
            elif key == "name":
                if len(args) != 1:
                    raise ConfigError("name takes one word", lineno, path)
                out["name"] = args[0]
            elif key == "mu_deg":
                out["mus"] = tuple(nums(at_least=1))
            elif key == "mode":
                if not args:
                    raise ConfigError("mode needs at least one of passive, fixed, both", lineno, path)
                out["modes"] = parse_modes(args)
            elif key == "record_stride":
                value = nums(1)[0]
                if value != int(value) or value < 1:
                    raise ConfigError("record_stride must be a positive integer", lineno, path)
                out["settings"]["record_stride"] = int(value)
            elif key in _DIFF_KEYS:
                out["diff"][_DIFF_KEYS[key]] = nums(1)[0]
            elif key in _INERTIA_KEYS:
                out["inertias"][_INERTIA_KEYS[key]] = nums(1)[0]
            elif key in _SPRING_KEYS:
                out["springs"][_SPRING_KEYS[key]] = nums(1)[0]
            elif key in _ROBOT_KEYS:
                out["robot"][_ROBOT_KEYS[key]] = nums(1)[0]
            elif key in _SETTINGS_KEYS:
                out["settings"][_SETTINGS_KEYS[key]] = nums(1)[0]
            else:
                raise ConfigError(f"unknown keyword {key!r}", lineno, path)
        except ConfigError:
            raise
        except (PipeClimbError, ValueError) as exc:
            raise ConfigError(str(exc), lineno, path) from None


def parse_modes(tokens) -> tuple[Mode, ...]:
    modes = []
    for tok in tokens:
        tok = tok.lower()
        if tok == "both":
            candidates = [Mode.PASSIVE_DIFFERENTIAL, Mode.FIXED_EQUAL_SPEED]
        else:
            try:
                candidates = [Mode(tok)]
            except ValueError:
                raise ValueError(f"unknown mode {tok!r} (passive, fixed, both)") from None
        modes.extend(m for m in candidates if m not in modes)
    return tuple(modes)


def parse_scenario(text: str, path: str = "<string>", base: Path | None = None, name: str | None = None) -> Scenario:
    out = {"segments": [], "segment_lines": [], "diff": {}, "inertias": {}, "springs": {}, "robot": {}, "settings": {}}
    _parse_lines(text.splitlines(), path, base, out)
    if "pipe_radius" not in out:
        raise ConfigError("missing pipe_radius", path=path)
    for seg, (src, lineno) in zip(out["segments"], out["segment_lines"]):
        if isinstance(seg, Bend) and not seg.bend_radius_R > out["pipe_radius"]:
            raise ConfigError(
                f"bend radius {seg.bend_radius_R} must exceed pipe radius {out['pipe_radius']}", lineno, src
            )
    try:
        network = PipeNetwork(PipeSpec(out["pipe_radius"]), tuple(out["segments"]))
        diff = DifferentialConfig(inertias=Inertias(**out["inertias"]), **out["diff"])
        robot = RobotConfig(differential=diff, springs=SpringConfig(**out["springs"]), **out["robot"])
        settings = SimSettings(**out["settings"])
    except (PipeClimbError, ValueError) as exc:
        raise ConfigError(str(exc), path=path) from None
    if not network.segments:
        raise ConfigError("network has no segments", path=path)
    return Scenario(
        name=out.get("name") or name or Path(path).stem,
        network=network,
        robot=robot,
        settings=settings,
        mus=out.get("mus", (robot.orientation_mu,)),
        modes=out.get("modes", (Mode.PASSIVE_DIFFERENTIAL,)),
        source=path,
    )


def load_scenario(ref: str) -> Scenario:
    """Load a scenario from a file path or a bundled scenario name."""
    if ref in BUNDLED:
        text = resources.files("pipeclimb.data").joinpath(BUNDLED[ref]).read_text()
        return parse_scenario(text, path=ref, name=ref)
    p = Path(ref)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc.strerror or exc}", path=str(p)) from None
    return parse_scenario(text, path=str(p), base=p.parent)


def with_overrides(scenario: Scenario, mus=None, modes=None, dt=None, stride=None) -> Scenario:
    settings = scenario.settings
    if dt is not None:
        settings = replace(settings, dt=dt)
    if stride is not None:
        settings = replace(settings, record_stride=stride)
    return replace(
        scenario,
        settings=settings,
        mus=tuple(mus) if mus else scenario.mus,
        modes=tuple(modes) if modes else scenario.modes,
    )
