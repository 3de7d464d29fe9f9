"""The 3x3 corner-pose grid: prototype expressions at the pleasure and
arousal extremes, with canonical JSON persistence.

The grid holds nine artist-authored poses, one per (p, a) combination
in {-1, 0, +1} squared. The center pose (0, 0) is all zeros by
definition: "no emotion" equals "no activation", which gives the
interpolator a fixed point and lets the compositor treat neutral as an
absorbing base. Activations are quantized to 6 decimal places on
construction so save -> load round-trips are exact and the serialized
form is stable byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvariantViolation, MalformedGrid
from .numfmt import fmt6, q6
from .units import UNIT_COUNT, UNIT_NAMES, ActivationVector

# Row-major corner order: arousal descending, pleasure ascending.
CORNER_INDICES: tuple[tuple[int, int], ...] = tuple(
    (p, a) for a in (1, 0, -1) for p in (-1, 0, 1)
)

_CORNER_POS: dict[tuple[int, int], int] = {c: i for i, c in enumerate(CORNER_INDICES)}


def corner_key(corner: tuple[int, int]) -> str:
    """JSON object key for a corner, e.g. (1, -1) -> '1,-1'."""
    return f"{corner[0]},{corner[1]}"


@dataclass(frozen=True)
class CornerPoseGrid:
    """Nine prototype poses indexed by (p, a) in {-1, 0, +1} squared."""

    name: str
    version: int
    poses: tuple[ActivationVector, ...] = field(default=())

    def __post_init__(self):
        if len(self.poses) != 9:
            raise InvariantViolation(f"grid needs 9 poses, got {len(self.poses)}")
        quantized = tuple(
            ActivationVector(tuple(q6(v) for v in pose.values)) for pose in self.poses
        )
        object.__setattr__(self, "poses", quantized)
        center = quantized[_CORNER_POS[(0, 0)]]
        if not center.is_neutral():
            bad = next(iter(center.nonzero().items()))
            raise InvariantViolation(
                f"pose (0,0) must be the all-zeros neutral pose, found {bad[0]}={fmt6(bad[1])}"
            )

    def pose(self, p_idx: int, a_idx: int) -> ActivationVector:
        return self.poses[_CORNER_POS[(p_idx, a_idx)]]

    @classmethod
    def from_poses(cls, name: str, version: int,
                   poses: dict[tuple[int, int], ActivationVector]) -> "CornerPoseGrid":
        missing = [c for c in CORNER_INDICES if c not in poses]
        if missing:
            raise InvariantViolation(f"missing corner ({missing[0][0]},{missing[0][1]})")
        return cls(name=name, version=version,
                   poses=tuple(poses[c] for c in CORNER_INDICES))

    @classmethod
    def neutral(cls, name: str = "neutral", version: int = 1) -> "CornerPoseGrid":
        z = ActivationVector.neutral()
        return cls(name=name, version=version, poses=(z,) * 9)


def grid_save(grid: CornerPoseGrid) -> bytes:
    """Serialize to canonical JSON: sorted keys, activations as 6-decimal strings."""
    doc = {
        "name": grid.name,
        "version": grid.version,
        "units": list(UNIT_NAMES),
        "poses": {
            corner_key(c): [fmt6(v) for v in grid.pose(*c).values]
            for c in CORNER_INDICES
        },
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def grid_load(data: bytes | str) -> CornerPoseGrid:
    """Parse grid JSON, checking structure and invariants.

    Structural problems raise MalformedGrid; value-level problems
    (activation out of range, non-neutral center) raise
    InvariantViolation. Messages name the offending path.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedGrid(f"grid file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedGrid(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedGrid("top level must be a JSON object")

    required = {"name", "version", "units", "poses"}
    unknown = sorted(set(doc) - required)
    if unknown:
        raise MalformedGrid(f"unknown top-level key '{unknown[0]}'")
    missing_key = sorted(required - set(doc))
    if missing_key:
        raise MalformedGrid(f"missing top-level key '{missing_key[0]}'")

    name = doc["name"]
    if not isinstance(name, str):
        raise MalformedGrid("'name' must be a string")
    version = doc["version"]
    if not isinstance(version, int) or isinstance(version, bool):
        raise MalformedGrid("'version' must be an integer")

    units = doc["units"]
    if not isinstance(units, list):
        raise MalformedGrid("'units' must be a list")
    if len(units) != UNIT_COUNT:
        raise MalformedGrid(f"'units' must list {UNIT_COUNT} names, got {len(units)}")
    for i, unit in enumerate(units):
        if unit != UNIT_NAMES[i]:
            if unit in UNIT_NAMES:
                raise MalformedGrid(
                    f"units[{i}] is '{unit}' but canonical order expects '{UNIT_NAMES[i]}'"
                )
            raise MalformedGrid(f"unknown unit name '{unit}' at units[{i}]")

    poses_doc = doc["poses"]
    if not isinstance(poses_doc, dict):
        raise MalformedGrid("'poses' must be an object")
    poses: dict[tuple[int, int], ActivationVector] = {}
    for corner in CORNER_INDICES:
        key = corner_key(corner)
        if key not in poses_doc:
            raise MalformedGrid(f"missing corner ({corner[0]},{corner[1]})")
        raw = poses_doc[key]
        path = f'poses["{key}"]'
        if not isinstance(raw, list) or len(raw) != UNIT_COUNT:
            raise MalformedGrid(f"{path} must be a list of {UNIT_COUNT} activations")
        values = []
        for i, item in enumerate(raw):
            v = _parse_activation(item, f"{path}[{i}]")
            if not (0.0 <= v <= 1.0):
                raise InvariantViolation(
                    f"{path}[{i}] ({UNIT_NAMES[i]}) = {item!r} outside [0, 1]"
                )
            values.append(v)
        poses[corner] = ActivationVector(tuple(values))
    extra = sorted(set(poses_doc) - {corner_key(c) for c in CORNER_INDICES})
    if extra:
        raise MalformedGrid(f"unknown pose key '{extra[0]}'")

    center = poses[(0, 0)]
    if not center.is_neutral():
        unit, value = next(iter(center.nonzero().items()))
        raise InvariantViolation(
            f'poses["0,0"] must be the all-zeros neutral pose, found {unit}={fmt6(value)}'
        )
    return CornerPoseGrid.from_poses(name=name, version=version, poses=poses)


def _parse_activation(item, path: str) -> float:
    if isinstance(item, bool):
        raise MalformedGrid(f"{path} must be a number or numeric string")
    if isinstance(item, (int, float)):
        return float(item)
    if isinstance(item, str):
        try:
            return float(item)
        except ValueError:
            raise MalformedGrid(f"{path} is not a number: '{item}'") from None
    raise MalformedGrid(f"{path} must be a number or numeric string")
