"""Parser and serializer for the annotation timeline text format.

The format is line oriented UTF-8. ``#`` starts a comment, blank lines
are ignored. The first statement must be ``duration <sec>``, optionally
followed by ``fps <n>``. Every other line is one span:

    <track> <start> <end> <payload> [w=<weight>] [attack=<sec>] [release=<sec>]

``<track>`` is one of ``gloss``, ``emotion``, ``mouthing``, ``brows``.
The emotion payload is ``p=<real> a=<real>``; a gloss payload is a bare
label; mouthing and brows payloads name entries in a pose lexicon.
Defaults: w=1, attack and release each min(0.1 s, 10% of the span).

All numbers are quantized to 6 decimal places at construction, which is
what makes parse/serialize round-trips exact. Within a track spans may
not overlap; emotion spans may not overlap each other either, because
the face holds a single emotional state at a time (transitions are
expressed by adjacent spans whose envelopes cross-fade through the
neutral base).
"""

from __future__ import annotations

import enum
import json
import math
import re
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from .errors import (
    AnnotationSyntaxError,
    Diagnostic,
    InvariantViolation,
    MalformedLexicon,
    OutOfRange,
    OverlapError,
    RegionMismatch,
    UnknownPose,
    ValueRangeError,
)
from .emotion import PleasureArousal
from .numfmt import fmt6, fmt_fps, q6
from .units import UNIT_INDEX, UNIT_REGIONS, ActivationVector, Region


class TrackKind(enum.Enum):
    GLOSS = "gloss"
    EMOTION = "emotion"
    MOUTHING = "mouthing"
    BROWS = "brows"


_TRACK_BY_KEYWORD = {kind.value: kind for kind in TrackKind}

# Which face region a pose-lexicon track is allowed to touch.
TRACK_REGION: dict[TrackKind, Region] = {
    TrackKind.MOUTHING: Region.LOWER,
    TrackKind.BROWS: Region.UPPER,
}

DEFAULT_RAMP_CAP = 0.1  # seconds; also capped at 10% of the span


@dataclass(frozen=True)
class Envelope:
    """Onset/offset ramp times. Weight is 0 at the span edges, ramps
    linearly to 1 over `attack`, holds, and ramps back over `release`."""

    attack: float
    release: float

    def __post_init__(self):
        object.__setattr__(self, "attack", q6(self.attack))
        object.__setattr__(self, "release", q6(self.release))
        if self.attack < 0:
            raise ValueRangeError(f"attack={self.attack} must be >= 0")
        if self.release < 0:
            raise ValueRangeError(f"release={self.release} must be >= 0")

    @classmethod
    def default_for(cls, duration: float) -> "Envelope":
        ramp = q6(min(DEFAULT_RAMP_CAP, 0.1 * duration))
        return cls(attack=ramp, release=ramp)


@dataclass(frozen=True)
class Span:
    """One timed annotation on a track."""

    kind: TrackKind
    start: float
    end: float
    payload: str | PleasureArousal
    weight: float = 1.0
    envelope: Envelope | None = None
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "start", q6(self.start))
        object.__setattr__(self, "end", q6(self.end))
        object.__setattr__(self, "weight", q6(self.weight))
        if self.start < 0:
            raise ValueRangeError(f"span start {self.start} must be >= 0")
        if self.end <= self.start:
            raise ValueRangeError(f"span end {self.end} must be after start {self.start}")
        if not (0.0 < self.weight <= 1.0):
            raise ValueRangeError(f"w={self.weight} outside (0, 1]")
        if self.envelope is None:
            object.__setattr__(self, "envelope", Envelope.default_for(self.duration))
        if self.kind is TrackKind.EMOTION:
            if not isinstance(self.payload, PleasureArousal):
                raise InvariantViolation("emotion span payload must be a PleasureArousal")
        elif not isinstance(self.payload, str):
            raise InvariantViolation(f"{self.kind.value} span payload must be a name")

    @property
    def duration(self) -> float:
        return self.end - self.start

    def describe(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.kind.value} [{fmt6(self.start)}, {fmt6(self.end)}]{where}"


@dataclass(frozen=True)
class Timeline:
    """Parsed annotation document: per-track span lists plus duration."""

    duration: float
    tracks: dict[TrackKind, tuple[Span, ...]] = field(default_factory=dict)
    fps_hint: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "duration", q6(self.duration))
        if self.duration < 0:
            raise ValueRangeError(f"duration {self.duration} must be >= 0")
        if self.fps_hint is not None:
            object.__setattr__(self, "fps_hint", q6(self.fps_hint))
            if self.fps_hint <= 0:
                raise ValueRangeError(f"fps {self.fps_hint} must be > 0")
        tracks = {kind: () for kind in TrackKind}
        for kind, spans in self.tracks.items():
            for span in spans:
                if span.kind is not kind:
                    raise InvariantViolation(
                        f"{span.kind.value} span stored on the {kind.value} track"
                    )
            tracks[kind] = tuple(sorted(spans, key=lambda s: (s.start, s.end)))
        object.__setattr__(self, "tracks", tracks)
        for kind, spans in tracks.items():
            for prev, cur in zip(spans, spans[1:]):
                if cur.start < prev.end:
                    raise OverlapError(
                        f"{kind.value} spans overlap: {prev.describe()} and {cur.describe()}",
                        line=cur.line,
                    )

    def spans(self, kind: TrackKind) -> tuple[Span, ...]:
        return self.tracks[kind]

    def all_spans(self) -> tuple[Span, ...]:
        return tuple(s for kind in TrackKind for s in self.tracks[kind])


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _number(tok: str, line: int, col: int, what: str) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise AnnotationSyntaxError(f"expected a number for {what}, got '{tok}'",
                                    line, col) from None
    if not math.isfinite(value):
        raise AnnotationSyntaxError(f"{what} must be finite, got '{tok}'", line, col)
    return value


def _split_option(tok: str, line: int, col: int) -> tuple[str, str]:
    if "=" not in tok:
        raise AnnotationSyntaxError(
            f"expected key=value option, got '{tok}'", line, col)
    key, _, value = tok.partition("=")
    if not key or not value:
        raise AnnotationSyntaxError(f"malformed option '{tok}'", line, col)
    return key, value


def parse_annotation(
    text: str,
    lexicon: "PoseLexicon | None" = None,
    *,
    strict: bool = True,
    on_warning: Callable[[Diagnostic], None] | None = None,
) -> Timeline:
    """Parse annotation text into a Timeline.

    When a lexicon is given, mouthing/brows pose names are resolved (and
    region-checked) at parse time so errors carry source positions. In
    lenient mode, out-of-range p/a values are clamped with a warning
    instead of failing; everything else stays strict.
    """
    duration: float | None = None
    fps_hint: float | None = None
    spans: dict[TrackKind, list[Span]] = {kind: [] for kind in TrackKind}

    def warn(message: str, line: int, col: int) -> None:
        if on_warning is not None:
            on_warning(Diagnostic("warning", message, line=line, col=col))

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, head_col = toks[0]

        if duration is None:
            if head != "duration":
                raise AnnotationSyntaxError(
                    "first statement must be 'duration <sec>'", lineno, head_col)
            if len(toks) != 2:
                raise AnnotationSyntaxError(
                    "'duration' takes exactly one value", lineno, head_col)
            value = _number(toks[1][0], lineno, toks[1][1], "duration")
            if value < 0:
                raise ValueRangeError(f"duration {toks[1][0]} must be >= 0",
                                      lineno, toks[1][1])
            duration = q6(value)
            continue

        if head == "duration":
            raise AnnotationSyntaxError("duplicate 'duration' directive", lineno, head_col)

        if head == "fps":
            if fps_hint is not None:
                raise AnnotationSyntaxError("duplicate 'fps' directive", lineno, head_col)
            if len(toks) != 2:
                raise AnnotationSyntaxError("'fps' takes exactly one value", lineno, head_col)
            value = _number(toks[1][0], lineno, toks[1][1], "fps")
            if value <= 0:
                raise ValueRangeError(f"fps {toks[1][0]} must be > 0", lineno, toks[1][1])
            fps_hint = q6(value)
            continue

        kind = _TRACK_BY_KEYWORD.get(head)
        if kind is None:
            raise AnnotationSyntaxError(
                f"unknown track '{head}' (expected gloss, emotion, mouthing or brows)",
                lineno, head_col)
        spans[kind].append(
            _parse_span(kind, toks, lineno, duration, lexicon, strict, warn))

    if duration is None:
        raise AnnotationSyntaxError("missing 'duration' directive", 1, 1)

    _check_overlaps(spans)
    return Timeline(duration=duration, fps_hint=fps_hint,
                    tracks={k: tuple(v) for k, v in spans.items()})


def _parse_span(kind, toks, lineno, duration, lexicon, strict, warn) -> Span:
    if len(toks) < 4:
        raise AnnotationSyntaxError(
            f"{kind.value} span needs '<start> <end> <payload>'", lineno, toks[0][1])

    start = _number(toks[1][0], lineno, toks[1][1], "start")
    if start < 0:
        raise ValueRangeError(f"start {toks[1][0]} must be >= 0", lineno, toks[1][1])
    end = _number(toks[2][0], lineno, toks[2][1], "end")
    if end <= start:
        raise ValueRangeError(
            f"end {toks[2][0]} must be after start {toks[1][0]}", lineno, toks[2][1])
    if q6(end) > duration:
        raise ValueRangeError(
            f"span ends at {toks[2][0]} but duration is {fmt6(duration)}",
            lineno, toks[2][1])

    payload: str | PleasureArousal
    rest: list[tuple[str, int]]
    if kind is TrackKind.EMOTION:
        payload, rest = _parse_emotion_payload(toks[3:], lineno, strict, warn)
    else:
        tok, col = toks[3]
        if "=" in tok:
            raise AnnotationSyntaxError(
                f"{kind.value} span is missing its payload", lineno, col)
        payload = tok
        rest = toks[4:]
        if lexicon is not None and kind in TRACK_REGION:
            try:
                lexicon.vector_for(tok, kind)
            except (UnknownPose, RegionMismatch) as exc:
                raise type(exc)(exc.message, lineno, col) from None

    weight = 1.0
    attack: float | None = None
    release: float | None = None
    seen: set[str] = set()
    for tok, col in rest:
        key, value = _split_option(tok, lineno, col)
        if key in seen:
            raise AnnotationSyntaxError(f"duplicate option '{key}'", lineno, col)
        seen.add(key)
        value_col = col + len(key) + 1
        if key == "w":
            weight = _number(value, lineno, value_col, "w")
            if not (0.0 < weight <= 1.0):
                raise ValueRangeError(f"w={value} outside (0, 1]", lineno, value_col)
        elif key == "attack":
            attack = _number(value, lineno, value_col, "attack")
            if attack < 0:
                raise ValueRangeError(f"attack={value} must be >= 0", lineno, value_col)
        elif key == "release":
            release = _number(value, lineno, value_col, "release")
            if release < 0:
                raise ValueRangeError(f"release={value} must be >= 0", lineno, value_col)
        else:
            raise AnnotationSyntaxError(
                f"unknown option '{key}' (expected w, attack or release)", lineno, col)

    span_len = q6(end) - q6(start)
    default_ramp = q6(min(DEFAULT_RAMP_CAP, 0.1 * span_len))
    envelope = Envelope(
        attack=default_ramp if attack is None else attack,
        release=default_ramp if release is None else release,
    )
    return Span(kind=kind, start=start, end=end, payload=payload,
                weight=weight, envelope=envelope, line=lineno)


def _parse_emotion_payload(toks, lineno, strict, warn):
    if len(toks) < 2:
        raise AnnotationSyntaxError(
            "emotion span needs 'p=<real> a=<real>'", lineno,
            toks[0][1] if toks else 1)
    values = {}
    for expected, (tok, col) in zip(("p", "a"), toks[:2]):
        key, _, value = tok.partition("=")
        if key != expected or not value:
            raise AnnotationSyntaxError(
                f"expected '{expected}=<real>', got '{tok}'", lineno, col)
        value_col = col + 2
        v = _number(value, lineno, value_col, expected)
        if not (-1.0 <= v <= 1.0):
            if strict:
                raise ValueRangeError(f"{expected}={value} outside [-1, 1]",
                                      lineno, value_col)
            clamped = min(1.0, max(-1.0, v))
            warn(f"{expected}={value} outside [-1, 1], clamped to {clamped}",
                 lineno, value_col)
            v = clamped
        values[expected] = q6(v)
    return PleasureArousal(values["p"], values["a"]), toks[2:]


def _check_overlaps(spans: dict[TrackKind, list[Span]]) -> None:
    for kind, track in spans.items():
        ordered = sorted(track, key=lambda s: (s.start, s.end))
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start < prev.end:
                raise OverlapError(
                    f"{kind.value} spans overlap: {prev.describe()} and {cur.describe()}",
                    line=cur.line)


# --- serialization ---------------------------------------------------------

def serialize_annotation(timeline: Timeline) -> str:
    """Canonical text: fixed track order, sorted spans, 6-decimal numbers,
    all options explicit. parse(serialize(t)) == t."""
    lines = [f"duration {fmt6(timeline.duration)}"]
    if timeline.fps_hint is not None:
        lines.append(f"fps {fmt_fps(timeline.fps_hint)}")
    for kind in TrackKind:
        for span in timeline.tracks[kind]:
            if isinstance(span.payload, PleasureArousal):
                payload = f"p={fmt6(span.payload.p)} a={fmt6(span.payload.a)}"
            else:
                payload = span.payload
            lines.append(
                f"{kind.value} {fmt6(span.start)} {fmt6(span.end)} {payload}"
                f" w={fmt6(span.weight)}"
                f" attack={fmt6(span.envelope.attack)}"
                f" release={fmt6(span.envelope.release)}"
            )
    return "\n".join(lines) + "\n"


# --- lint ------------------------------------------------------------------

def validate_timeline(timeline: Timeline) -> list[Diagnostic]:
    """Lint a structurally valid timeline.

    Returns diagnostics rather than raising: spans outside [0, duration]
    are errors (possible only for programmatically built timelines; the
    parser rejects them); envelopes that leave no room for the apex are
    warnings.
    """
    out: list[Diagnostic] = []
    for span in timeline.all_spans():
        if span.end > timeline.duration or span.start < 0:
            out.append(Diagnostic(
                "error",
                f"{span.describe()} extends outside [0, {fmt6(timeline.duration)}]",
                kind="RangeError", line=span.line))
        if span.kind is TrackKind.GLOSS:
            continue
        ramp = span.envelope.attack + span.envelope.release
        if ramp > span.duration + 1e-12:
            out.append(Diagnostic(
                "warning",
                f"{span.describe()}: attack+release ({fmt6(ramp)}) exceeds the span; "
                "the apex weight is unreachable",
                line=span.line))
        elif abs(ramp - span.duration) <= 1e-12 and ramp > 0:
            out.append(Diagnostic(
                "warning",
                f"{span.describe()}: attack+release equals the span length; "
                "the apex lasts zero seconds",
                line=span.line))
    return out


# --- pose lexicon ----------------------------------------------------------

class PoseLexicon:
    """Named sparse poses for the mouthing and brows tracks.

    Entries map a name to unit->value pairs; unlisted units are 0. A
    name may only be used by a track whose region covers every listed
    unit (mouthing owns the lower face, brows the upper face).
    """

    def __init__(self, entries: Mapping[str, Mapping[str, float]]):
        self.entries: dict[str, dict[str, float]] = {
            name: dict(units) for name, units in entries.items()
        }
        for name, units in self.entries.items():
            for unit, value in units.items():
                if unit not in UNIT_INDEX:
                    raise MalformedLexicon(f"pose '{name}': unknown unit '{unit}'")
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise MalformedLexicon(f"pose '{name}': {unit} must be a number")
                if not (0.0 <= float(value) <= 1.0):
                    raise MalformedLexicon(
                        f"pose '{name}': {unit}={value!r} outside [0, 1]")

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self.entries))

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def vector_for(self, name: str, kind: TrackKind) -> ActivationVector:
        if name not in self.entries:
            raise UnknownPose(f"pose '{name}' is not in the lexicon")
        region = TRACK_REGION.get(kind)
        if region is None:
            raise RegionMismatch(f"{kind.value} track does not take lexicon poses")
        for unit in self.entries[name]:
            if UNIT_REGIONS[unit] is not region:
                raise RegionMismatch(
                    f"pose '{name}' touches {unit} ({UNIT_REGIONS[unit].value} face) "
                    f"but the {kind.value} track only drives the {region.value} face")
        return ActivationVector.from_sparse(self.entries[name])


def lexicon_load(data: bytes | str) -> PoseLexicon:
    """Parse a pose-lexicon JSON file: {"name": {"unit": value, ...}, ...}."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedLexicon(f"lexicon file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedLexicon(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedLexicon("top level must be a JSON object")
    for name, units in doc.items():
        if not isinstance(units, dict):
            raise MalformedLexicon(f"pose '{name}' must be an object of unit values")
    return PoseLexicon(doc)
