"""Pleasure/arousal coordinates and their mapping onto corner poses.

Two mapping modes exist. DISCRETE snaps each axis to {-1, 0, +1} with
half rounding away from zero, so a half-intensity annotation reaches
the expressive corner rather than staying neutral. CONTINUOUS
interpolates bilinearly inside whichever of the four grid cells
contains the point, which guarantees corner reproduction and keeps
every output inside the convex hull of the cell's corner values.
Both modes agree exactly at the nine corners.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import OutOfRange
from .grid import CORNER_INDICES, CornerPoseGrid
from .units import ActivationVector


@dataclass(frozen=True)
class PleasureArousal:
    """A point in the pleasure/arousal square [-1, 1] x [-1, 1]."""

    p: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "a", float(self.a))
        if not (-1.0 <= self.p <= 1.0):
            raise OutOfRange(f"p={self.p!r} outside [-1, 1]")
        if not (-1.0 <= self.a <= 1.0):
            raise OutOfRange(f"a={self.a!r} outside [-1, 1]")


class MappingMode(enum.Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"

    @classmethod
    def parse(cls, text: str) -> "MappingMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise OutOfRange(
                f"unknown mapping mode '{text}' (expected 'discrete' or 'continuous')"
            ) from None


def corner_targets() -> tuple[PleasureArousal, ...]:
    """The nine corner points, arousal descending then pleasure ascending."""
    return tuple(PleasureArousal(float(p), float(a)) for p, a in CORNER_INDICES)


def pa_distance(x: PleasureArousal, y: PleasureArousal) -> float:
    """Euclidean distance in the pleasure/arousal plane."""
    return math.sqrt((x.p - y.p) ** 2 + (x.a - y.a) ** 2)


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def cell_for(p: float, a: float) -> tuple[int, int, int, int]:
    """The grid cell (p0, p1, a0, a1) containing (p, a); points on the
    interior gridlines belong to the non-negative cell."""
    p0, p1 = (-1, 0) if p < 0 else (0, 1)
    a0, a1 = (-1, 0) if a < 0 else (0, 1)
    return p0, p1, a0, a1


def bilinear_weights(p: float, a: float) -> tuple[tuple[tuple[int, int], float], ...]:
    """The four (corner, weight) pairs the continuous mode combines for (p, a)."""
    p0, p1, a0, a1 = cell_for(p, a)
    s = (p - p0) / (p1 - p0)
    t = (a - a0) / (a1 - a0)
    return (
        ((p0, a0), (1.0 - s) * (1.0 - t)),
        ((p1, a0), s * (1.0 - t)),
        ((p0, a1), (1.0 - s) * t),
        ((p1, a1), s * t),
    )


def eval_in_cell(grid: CornerPoseGrid, cell: tuple[int, int, int, int],
                 p: float, a: float) -> ActivationVector:
    """Bilinear interpolation of the grid inside an explicit cell.

    Exposed separately so callers can evaluate a shared edge from both
    adjacent cells (continuity checks); pa_to_pose picks the cell itself.
    """
    p0, p1, a0, a1 = cell
    s = (p - p0) / (p1 - p0)
    t = (a - a0) / (a1 - a0)
    w00 = (1.0 - s) * (1.0 - t)
    w10 = s * (1.0 - t)
    w01 = (1.0 - s) * t
    w11 = s * t
    v00 = grid.pose(p0, a0).values
    v10 = grid.pose(p1, a0).values
    v01 = grid.pose(p0, a1).values
    v11 = grid.pose(p1, a1).values
    out = []
    for i in range(len(v00)):
        v = w00 * v00[i] + w10 * v10[i] + w01 * v01[i] + w11 * v11[i]
        # Convex combination; the min/max only absorbs last-ulp roundoff
        # so the [0, 1] type invariant cannot trip on noise.
        out.append(min(1.0, max(0.0, v)))
    return ActivationVector(tuple(out))


def pa_to_pose(pa: PleasureArousal, grid: CornerPoseGrid,
               mode: MappingMode) -> ActivationVector:
    """Map a pleasure/arousal point to an activation vector via the grid."""
    if mode is MappingMode.DISCRETE:
        return grid.pose(round_half_away(pa.p), round_half_away(pa.a))
    return eval_in_cell(grid, cell_for(pa.p, pa.a), pa.p, pa.a)


def resolve_pa(p: float, a: float, strict: bool = True):
    """Turn raw numbers into a PleasureArousal.

    Strict mode raises OutOfRange; lenient mode clamps to the square and
    returns the clamp messages alongside the point.
    """
    warnings: list[str] = []
    if strict:
        return PleasureArousal(p, a), warnings
    cp = min(1.0, max(-1.0, float(p)))
    ca = min(1.0, max(-1.0, float(a)))
    if cp != p:
        warnings.append(f"p={p!r} clamped to {cp}")
    if ca != a:
        warnings.append(f"a={a!r} clamped to {ca}")
    return PleasureArousal(cp, ca), warnings
