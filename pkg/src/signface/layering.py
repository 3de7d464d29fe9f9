"""Region-aware channel compositor.

Evaluates every track at fixed-fps sample times and blends the active
spans into one activation vector per frame. Layers apply in policy
priority order; each pulls the accumulated face toward its own vector
by (envelope weight x region affinity). A weight-1, affinity-1 layer
therefore fully overrides its region while leaving the others alone,
which is how a mandatory mouth action can win the lower face without
erasing the emotion on the brows. Gloss spans carry no activation and
serve as timing reference only.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from .emotion import MappingMode, pa_to_pose
from .errors import InvariantViolation, UnknownPose, UnknownTrackKind
from .grid import CornerPoseGrid
from .notation import PoseLexicon, Span, Timeline, TrackKind
from .numfmt import fmt6, fmt_fps
from .units import REGION_BY_INDEX, UNIT_NAMES, ActivationVector, Region, clamp_values

DEFAULT_FPS = 30.0

_DEFAULT_PRIORITY = (TrackKind.EMOTION, TrackKind.BROWS, TrackKind.MOUTHING)

_DEFAULT_AFFINITY: dict[TrackKind, dict[Region, float]] = {
    TrackKind.EMOTION: {Region.UPPER: 1.0, Region.MID: 1.0, Region.LOWER: 1.0},
    TrackKind.BROWS: {Region.UPPER: 1.0, Region.MID: 0.0, Region.LOWER: 0.0},
    TrackKind.MOUTHING: {Region.UPPER: 0.0, Region.MID: 0.0, Region.LOWER: 1.0},
}


@dataclass(frozen=True)
class LayerPolicy:
    """Blend configuration: track priority (low to high) and per-region affinities."""

    priority: tuple[TrackKind, ...] = _DEFAULT_PRIORITY
    affinity: Mapping[TrackKind, Mapping[Region, float]] = field(
        default_factory=lambda: _DEFAULT_AFFINITY)

    def __post_init__(self):
        wanted = {k for k in TrackKind if k is not TrackKind.GLOSS}
        if set(self.priority) != wanted or len(self.priority) != len(wanted):
            raise InvariantViolation(
                "priority must list emotion, brows and mouthing exactly once each")
        affinity = {}
        for kind in self.priority:
            row = dict(_DEFAULT_AFFINITY[kind])
            row.update(self.affinity.get(kind, {}))
            for region, value in row.items():
                if not (0.0 <= float(value) <= 1.0):
                    raise InvariantViolation(
                        f"affinity {kind.value}/{region.value} = {value!r} outside [0, 1]")
            affinity[kind] = row
        object.__setattr__(self, "affinity", affinity)
        # Per-unit affinity rows in canonical order, for the blend inner loop.
        by_index = {
            kind: tuple(float(row[region]) for region in REGION_BY_INDEX)
            for kind, row in affinity.items()
        }
        object.__setattr__(self, "_affinity_by_index", by_index)

    @classmethod
    def default(cls) -> "LayerPolicy":
        return cls()

    def affinity_row(self, kind: TrackKind) -> tuple[float, ...]:
        try:
            return self._affinity_by_index[kind]
        except KeyError:
            raise UnknownTrackKind(
                f"track kind '{kind.value}' is not in the layer policy") from None


def policy_load(data: bytes | str) -> LayerPolicy:
    """Parse a policy JSON file: {"priority": [...], "affinity": {track: {region: v}}}.

    Both keys are optional; omitted parts keep the defaults.
    """
    import json

    from .errors import MalformedPolicy

    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedPolicy(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedPolicy("top level must be a JSON object")
    unknown = sorted(set(doc) - {"priority", "affinity"})
    if unknown:
        raise MalformedPolicy(f"unknown key '{unknown[0]}'")

    priority = _DEFAULT_PRIORITY
    if "priority" in doc:
        if not isinstance(doc["priority"], list):
            raise MalformedPolicy("'priority' must be a list of track names")
        names = []
        for item in doc["priority"]:
            try:
                kind = TrackKind(item)
            except ValueError:
                raise MalformedPolicy(f"unknown track '{item}' in priority") from None
            if kind is TrackKind.GLOSS:
                raise MalformedPolicy(
                    "unknown track 'gloss' in priority (gloss carries no activation)")
            names.append(kind)
        priority = tuple(names)

    affinity: dict[TrackKind, dict[Region, float]] = {}
    if "affinity" in doc:
        if not isinstance(doc["affinity"], dict):
            raise MalformedPolicy("'affinity' must be an object")
        for track_name, row in doc["affinity"].items():
            try:
                kind = TrackKind(track_name)
            except ValueError:
                raise MalformedPolicy(f"unknown track '{track_name}' in affinity") from None
            if not isinstance(row, dict):
                raise MalformedPolicy(f"affinity for '{track_name}' must be an object")
            parsed_row = {}
            for region_name, value in row.items():
                try:
                    region = Region(str(region_name).lower())
                except ValueError:
                    raise MalformedPolicy(
                        f"unknown region '{region_name}' (expected upper, mid, lower)"
                    ) from None
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise MalformedPolicy(
                        f"affinity {track_name}/{region_name} must be a number")
                parsed_row[region] = float(value)
            affinity[kind] = parsed_row
    return LayerPolicy(priority=priority, affinity=affinity)


@dataclass(frozen=True)
class SampledCurve:
    """Fixed-fps activation samples; frame i is at time i / fps."""

    fps: float
    frames: tuple[ActivationVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "fps", float(self.fps))
        if self.fps <= 0:
            raise InvariantViolation(f"fps must be positive, got {self.fps!r}")
        object.__setattr__(self, "frames", tuple(self.frames))

    def time_of(self, index: int) -> float:
        return index / self.fps


def envelope_eval(span: Span, t: float) -> float:
    """Span influence at time t: 0 outside (start, end), a linear ramp up
    over `attack`, the weight plateau, and a linear ramp down over
    `release`. A zero attack (release) starts (ends) at full weight, so a
    span covering the whole timeline can hold its apex on every frame.
    When attack+release exceeds the span the ramps cross and the apex is
    never reached."""
    if t < span.start or t > span.end:
        return 0.0
    env = span.envelope
    up = (t - span.start) / env.attack if env.attack > 0 else 1.0
    down = (span.end - t) / env.release if env.release > 0 else 1.0
    return span.weight * max(0.0, min(1.0, up, down))


def blend_layers(
    base: ActivationVector,
    layers,
    policy: LayerPolicy,
) -> ActivationVector:
    """Fold (vector, weight, kind) layers over a base vector.

    Layers must already be sorted by policy priority, lowest first. Each
    layer moves every unit toward its own value by weight * affinity for
    the unit's region; the result is clamped to [0, 1].
    """
    out = list(base.values)
    for vector, weight, kind in layers:
        affinity = policy.affinity_row(kind)
        values = vector.values
        for i, aff in enumerate(affinity):
            f = weight * aff
            if f:
                out[i] += (values[i] - out[i]) * f
    return clamp_values(out)


def sample_timeline(
    timeline: Timeline,
    grid: CornerPoseGrid,
    lexicon: PoseLexicon | None,
    policy: LayerPolicy,
    fps: float,
    mode: MappingMode,
) -> SampledCurve:
    """Evaluate the timeline at every frame and blend the active spans.

    Pure function of its inputs; frame count is floor(duration * fps) + 1.
    """
    if fps <= 0:
        raise InvariantViolation(f"fps must be positive, got {fps!r}")

    resolved: list[tuple[Span, ActivationVector]] = []
    for kind in policy.priority:
        for span in timeline.tracks[kind]:
            resolved.append((span, _span_vector(span, grid, lexicon, mode)))

    neutral = ActivationVector.neutral()
    frame_count = int(math.floor(timeline.duration * fps)) + 1
    frames = []
    for i in range(frame_count):
        t = i / fps
        layers = []
        for span, vector in resolved:
            if span.start <= t <= span.end:
                w = envelope_eval(span, t)
                if w > 0.0:
                    layers.append((vector, w, span.kind))
        frames.append(blend_layers(neutral, layers, policy) if layers else neutral)
    return SampledCurve(fps=fps, frames=tuple(frames))


def _span_vector(span: Span, grid: CornerPoseGrid, lexicon: PoseLexicon | None,
                 mode: MappingMode) -> ActivationVector:
    if span.kind is TrackKind.EMOTION:
        return pa_to_pose(span.payload, grid, mode)
    if lexicon is None:
        raise UnknownPose(
            f"pose '{span.payload}' cannot be resolved: no lexicon loaded",
            line=span.line)
    try:
        return lexicon.vector_for(span.payload, span.kind)
    except UnknownPose as exc:
        raise UnknownPose(exc.message, line=span.line) from None


def export_curves(curve: SampledCurve, fmt: str) -> bytes:
    """Serialize a curve to canonical JSON or CSV with 6-decimal values."""
    fmt = fmt.lower()
    if fmt == "json":
        unit_list = ", ".join(f'"{name}"' for name in UNIT_NAMES)
        rows = ",\n".join(
            "    [" + ", ".join(fmt6(v) for v in frame.values) + "]"
            for frame in curve.frames
        )
        text = (
            "{\n"
            f'  "fps": {fmt_fps(curve.fps)},\n'
            f'  "units": [{unit_list}],\n'
            '  "frames": [\n'
            f"{rows}\n"
            "  ]\n"
            "}\n"
        )
        return text.encode("utf-8")
    if fmt == "csv":
        lines = ["time," + ",".join(UNIT_NAMES)]
        for i, frame in enumerate(curve.frames):
            lines.append(fmt6(curve.time_of(i)) + "," + ",".join(fmt6(v) for v in frame.values))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise InvariantViolation(f"unknown export format '{fmt}' (expected json or csv)")
