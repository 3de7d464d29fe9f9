import random
from pathlib import Path

import pytest

from signface import (
    ActivationVector,
    CornerPoseGrid,
    Envelope,
    PleasureArousal,
    Span,
    Timeline,
    TrackKind,
)
from signface.cli import load_default_grid, load_default_lexicon
from signface.grid import CORNER_INDICES
from signface.numfmt import q6

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO_ROOT / "corpus"

MOUTH_POSES = ("pah", "oo", "ee", "mm", "th", "open")
BROW_POSES = ("raised", "furrowed", "concerned", "wide", "flat")


@pytest.fixture(scope="session")
def default_grid():
    return load_default_grid()


@pytest.fixture(scope="session")
def default_lexicon():
    return load_default_lexicon()


@pytest.fixture(scope="session")
def corpus_paths():
    paths = sorted(CORPUS_DIR.glob("*.nmt"))
    assert len(paths) == 5
    return paths


def random_grid(rng: random.Random, name: str = "random") -> CornerPoseGrid:
    """A valid grid with 6-decimal random activations and a neutral center."""
    poses = {}
    for corner in CORNER_INDICES:
        if corner == (0, 0):
            poses[corner] = ActivationVector.neutral()
        else:
            poses[corner] = ActivationVector(
                tuple(q6(rng.random()) for _ in range(20)))
    return CornerPoseGrid.from_poses(name=name, version=1, poses=poses)


def random_spans(rng: random.Random, kind: TrackKind, duration: float) -> list[Span]:
    """Up to three non-overlapping spans with in-range envelopes."""
    spans = []
    cuts = sorted(q6(rng.uniform(0.0, duration)) for _ in range(6))
    for lo, hi in zip(cuts[::2], cuts[1::2]):
        if hi - lo < 0.05:
            continue
        if rng.random() < 0.3:
            continue
        length = hi - lo
        if kind is TrackKind.EMOTION:
            payload = PleasureArousal(q6(rng.uniform(-1, 1)), q6(rng.uniform(-1, 1)))
        elif kind is TrackKind.MOUTHING:
            payload = rng.choice(MOUTH_POSES)
        elif kind is TrackKind.BROWS:
            payload = rng.choice(BROW_POSES)
        else:
            payload = "SIGN" + str(rng.randrange(100))
        spans.append(Span(
            kind=kind, start=lo, end=hi, payload=payload,
            weight=q6(rng.uniform(0.05, 1.0)),
            envelope=Envelope(
                attack=q6(rng.uniform(0.0, 0.45 * length)),
                release=q6(rng.uniform(0.0, 0.45 * length)),
            ),
        ))
    return spans


def random_timeline(rng: random.Random) -> Timeline:
    duration = q6(rng.uniform(0.5, 2.5))
    tracks = {kind: tuple(random_spans(rng, kind, duration)) for kind in TrackKind}
    return Timeline(duration=duration, tracks=tracks)
