"""Facial control-unit inventory and dense activation vectors.

The inventory is a fixed 20-unit abstraction over FACS-style action
units: coarse enough to drive from linguistic annotation, fine enough
to keep upper-face and lower-face channels independent. Each unit
belongs to exactly one face region; regions are what the layer
compositor keys its affinities on.

Activations are dimensionless in [0, 1] (0 neutral, 1 maximal).
Antagonistic motions get separate units (brow_lowerer vs. the
raisers) so blending stays monotone.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass

from .errors import InvariantViolation, MissingUnit


class Region(enum.Enum):
    UPPER = "upper"
    MID = "mid"
    LOWER = "lower"


# Canonical inventory, grouped by region. AU numbers noted where the
# unit matches the classic FACS action unit.
_INVENTORY: tuple[tuple[str, Region], ...] = (
    ("inner_brow_raiser", Region.UPPER),     # AU1
    ("outer_brow_raiser", Region.UPPER),     # AU2
    ("brow_lowerer", Region.UPPER),          # AU4
    ("upper_lid_raiser", Region.UPPER),      # AU5
    ("lid_tightener", Region.UPPER),         # AU7
    ("eyes_widener", Region.UPPER),
    ("nose_wrinkler", Region.MID),           # AU9
    ("cheek_raiser", Region.MID),            # AU6
    ("infraorbital_tightener", Region.MID),
    ("upper_lip_raiser", Region.LOWER),      # AU10
    ("lip_corner_puller", Region.LOWER),     # AU12
    ("lip_corner_depressor", Region.LOWER),  # AU15
    ("lower_lip_depressor", Region.LOWER),   # AU16
    ("chin_raiser", Region.LOWER),           # AU17
    ("lip_puckerer", Region.LOWER),          # AU18
    ("lip_stretcher", Region.LOWER),         # AU20
    ("lip_pressor", Region.LOWER),           # AU24
    ("lips_part", Region.LOWER),             # AU25
    ("jaw_drop", Region.LOWER),              # AU26
    ("mouth_stretch", Region.LOWER),         # AU27
)

UNIT_NAMES: tuple[str, ...] = tuple(name for name, _ in _INVENTORY)
UNIT_REGIONS: dict[str, Region] = dict(_INVENTORY)
UNIT_INDEX: dict[str, int] = {name: i for i, name in enumerate(UNIT_NAMES)}
UNIT_COUNT: int = len(UNIT_NAMES)

# Region of each unit by canonical index; the blend inner loop uses this.
REGION_BY_INDEX: tuple[Region, ...] = tuple(region for _, region in _INVENTORY)


def units_in_region(region: Region) -> tuple[str, ...]:
    return tuple(name for name, r in _INVENTORY if r is region)


@dataclass(frozen=True)
class ActivationVector:
    """Dense activation levels, one per inventory unit, in canonical order."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != UNIT_COUNT:
            raise MissingUnit(f"expected {UNIT_COUNT} activation values, got {len(vals)}")
        for name, v in zip(UNIT_NAMES, vals):
            if not (0.0 <= v <= 1.0):
                raise InvariantViolation(f"{name}={v!r} outside [0, 1]")

    @classmethod
    def neutral(cls) -> "ActivationVector":
        return _NEUTRAL

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "ActivationVector":
        """Build from a dense name->value map; every inventory unit required."""
        _check_known(values)
        missing = [name for name in UNIT_NAMES if name not in values]
        if missing:
            raise MissingUnit(f"missing control unit '{missing[0]}'")
        return cls(tuple(values[name] for name in UNIT_NAMES))

    @classmethod
    def from_sparse(cls, values: Mapping[str, float]) -> "ActivationVector":
        """Build from a sparse name->value map; unlisted units default to 0."""
        _check_known(values)
        return cls(tuple(values.get(name, 0.0) for name in UNIT_NAMES))

    def __getitem__(self, name: str) -> float:
        return self.values[UNIT_INDEX[name]]

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(UNIT_NAMES, self.values))

    def nonzero(self) -> dict[str, float]:
        return {name: v for name, v in zip(UNIT_NAMES, self.values) if v != 0.0}

    def is_neutral(self) -> bool:
        return all(v == 0.0 for v in self.values)


_NEUTRAL = ActivationVector((0.0,) * UNIT_COUNT)


def _check_known(values: Mapping[str, float]) -> None:
    for name in values:
        if name not in UNIT_INDEX:
            raise MissingUnit(f"unknown control unit '{name}'")


def vector_clamp(values: Mapping[str, float]) -> ActivationVector:
    """Clamp a dense raw unit map into a valid vector (each value to [0, 1])."""
    _check_known(values)
    missing = [name for name in UNIT_NAMES if name not in values]
    if missing:
        raise MissingUnit(f"missing control unit '{missing[0]}'")
    return ActivationVector(
        tuple(min(1.0, max(0.0, float(values[name]))) for name in UNIT_NAMES)
    )


def clamp_values(values) -> ActivationVector:
    """Clamp an iterable already in canonical unit order."""
    return ActivationVector(
        tuple(0.0 if v < 0.0 else 1.0 if v > 1.0 else float(v) for v in values)
    )
