"""End-to-end compile: annotation text in, curve bytes out.

Shared by the CLI and the HTTP server so both produce byte-identical
output for identical inputs.
"""

from __future__ import annotations

from collections.abc import Callable

from .emotion import MappingMode
from .errors import Diagnostic
from .grid import CornerPoseGrid
from .layering import DEFAULT_FPS, LayerPolicy, export_curves, sample_timeline
from .notation import PoseLexicon, Timeline, parse_annotation, validate_timeline


def resolve_fps(timeline: Timeline, fps_override: float | None) -> float:
    """CLI/request override wins, then the file's fps hint, then 30."""
    if fps_override is not None:
        return float(fps_override)
    if timeline.fps_hint is not None:
        return timeline.fps_hint
    return DEFAULT_FPS


def compile_annotation(
    text: str,
    *,
    grid: CornerPoseGrid,
    lexicon: PoseLexicon | None,
    policy: LayerPolicy,
    fps_override: float | None = None,
    mode: MappingMode = MappingMode.CONTINUOUS,
    fmt: str = "json",
    strict: bool = True,
    on_warning: Callable[[Diagnostic], None] | None = None,
) -> bytes:
    """Parse, lint, sample and export. Raises SignfaceError subclasses on
    any user/data problem; warnings flow through on_warning."""
    timeline = parse_annotation(text, lexicon, strict=strict, on_warning=on_warning)
    if on_warning is not None:
        for diag in validate_timeline(timeline):
            if diag.severity == "warning":
                on_warning(diag)
    fps = resolve_fps(timeline, fps_override)
    curve = sample_timeline(timeline, grid, lexicon, policy, fps, mode)
    return export_curves(curve, fmt)
