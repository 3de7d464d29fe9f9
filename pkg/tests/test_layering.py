import random

import pytest

from signface import (
    ActivationVector,
    CornerPoseGrid,
    Envelope,
    LayerPolicy,
    MappingMode,
    PleasureArousal,
    SampledCurve,
    Span,
    Timeline,
    TrackKind,
    blend_layers,
    envelope_eval,
    export_curves,
    lexicon_load,
    policy_load,
    sample_timeline,
)
from signface.errors import InvariantViolation, MalformedPolicy, UnknownPose, UnknownTrackKind
from signface.grid import CORNER_INDICES
from signface.units import UNIT_NAMES, Region, units_in_region

from conftest import random_timeline


def _span(start=0.0, end=1.0, attack=0.0, release=0.0, weight=1.0,
          kind=TrackKind.EMOTION, payload=None):
    return Span(kind=kind, start=start, end=end,
                payload=payload if payload is not None else PleasureArousal(1, 0),
                weight=weight, envelope=Envelope(attack=attack, release=release))


# -- envelopes ----------------------------------------------------------------

def test_envelope_outside_span_is_zero():
    span = _span(start=1.0, end=2.0, attack=0.2, release=0.2)
    assert envelope_eval(span, 0.99) == 0.0
    assert envelope_eval(span, 2.01) == 0.0


def test_envelope_apex_is_weight():
    span = _span(start=0.0, end=1.0, attack=0.2, release=0.2, weight=1.0)
    assert envelope_eval(span, 0.5) == 1.0
    half = _span(start=0.0, end=1.0, attack=0.2, release=0.2, weight=0.5)
    assert envelope_eval(half, 0.5) == 0.5


def test_envelope_ramp_midpoint():
    span = _span(start=0.0, end=1.0, attack=0.2, release=0.0, weight=1.0)
    assert envelope_eval(span, 0.1) == pytest.approx(0.5, abs=1e-12)


def test_envelope_boundaries_with_positive_ramps():
    span = _span(start=0.0, end=1.0, attack=0.2, release=0.2)
    assert envelope_eval(span, 0.0) == 0.0
    assert envelope_eval(span, 1.0) == 0.0


def test_envelope_zero_ramps_hold_apex_at_boundaries():
    # a span covering the whole timeline keeps its apex on every frame
    span = _span(start=0.0, end=1.0, attack=0.0, release=0.0)
    assert envelope_eval(span, 0.0) == 1.0
    assert envelope_eval(span, 1.0) == 1.0


def test_envelope_crossing_ramps_never_reach_apex():
    span = _span(start=0.0, end=0.1, attack=0.1, release=0.1, weight=1.0)
    peak = max(envelope_eval(span, 0.1 * i / 100) for i in range(101))
    assert peak < 1.0


# -- blending -----------------------------------------------------------------

def test_single_full_weight_emotion_layer_is_identity():
    vec = ActivationVector.from_sparse({"lip_corner_puller": 0.8, "jaw_drop": 0.3})
    out = blend_layers(ActivationVector.neutral(),
                       [(vec, 1.0, TrackKind.EMOTION)], LayerPolicy.default())
    assert out == vec


def test_mouthing_overrides_lower_face_keeps_upper():
    emotion = ActivationVector.from_sparse(
        {"lip_corner_puller": 0.8, "inner_brow_raiser": 0.6})
    mouthing = ActivationVector.from_sparse({"jaw_drop": 1.0})
    out = blend_layers(
        ActivationVector.neutral(),
        [(emotion, 1.0, TrackKind.EMOTION), (mouthing, 1.0, TrackKind.MOUTHING)],
        LayerPolicy.default())
    # hand-evaluated two-step lerp with default affinities
    assert out["lip_corner_puller"] == 0.0
    assert out["jaw_drop"] == 1.0
    assert out["inner_brow_raiser"] == 0.6


def test_half_weight_mouthing_lerps_lower_face():
    emotion = ActivationVector.from_sparse(
        {"lip_corner_puller": 0.8, "inner_brow_raiser": 0.6})
    mouthing = ActivationVector.from_sparse({"jaw_drop": 1.0})
    out = blend_layers(
        ActivationVector.neutral(),
        [(emotion, 1.0, TrackKind.EMOTION), (mouthing, 0.5, TrackKind.MOUTHING)],
        LayerPolicy.default())
    assert out["lip_corner_puller"] == pytest.approx(0.4, abs=1e-12)
    assert out["jaw_drop"] == pytest.approx(0.5, abs=1e-12)
    assert out["inner_brow_raiser"] == pytest.approx(0.6, abs=1e-12)


def test_zero_weight_layers_absorb_to_base():
    rng = random.Random(31)
    base = ActivationVector(tuple(round(rng.random(), 6) for _ in range(20)))
    layers = [
        (ActivationVector.from_sparse({"jaw_drop": 1.0}), 0.0, TrackKind.MOUTHING),
        (ActivationVector.from_sparse({"brow_lowerer": 1.0}), 0.0, TrackKind.BROWS),
    ]
    assert blend_layers(base, layers, LayerPolicy.default()) == base


def test_monotone_weight_response():
    emotion = ActivationVector.from_sparse({"lip_corner_puller": 0.9})
    prev = -1.0
    for step in range(11):
        w = step / 10 or 1e-9
        out = blend_layers(ActivationVector.neutral(),
                           [(emotion, w, TrackKind.EMOTION)], LayerPolicy.default())
        assert out["lip_corner_puller"] >= prev
        prev = out["lip_corner_puller"]


def test_unknown_track_kind_rejected():
    vec = ActivationVector.neutral()
    with pytest.raises(UnknownTrackKind):
        blend_layers(vec, [(vec, 1.0, TrackKind.GLOSS)], LayerPolicy.default())


def test_policy_validation():
    with pytest.raises(InvariantViolation, match="exactly once"):
        LayerPolicy(priority=(TrackKind.EMOTION, TrackKind.EMOTION, TrackKind.BROWS))
    with pytest.raises(InvariantViolation, match="affinity"):
        LayerPolicy(affinity={TrackKind.EMOTION: {Region.UPPER: 1.4}})


def test_policy_load_defaults_and_overrides():
    policy = policy_load(b"{}")
    assert policy == LayerPolicy.default()
    policy = policy_load(
        '{"priority": ["brows", "mouthing", "emotion"],'
        ' "affinity": {"emotion": {"lower": 0.5}}}')
    assert policy.priority[-1] is TrackKind.EMOTION
    assert policy.affinity[TrackKind.EMOTION][Region.LOWER] == 0.5
    assert policy.affinity[TrackKind.EMOTION][Region.UPPER] == 1.0
    with pytest.raises(MalformedPolicy, match="unknown track"):
        policy_load('{"priority": ["gloss"]}')
    with pytest.raises(MalformedPolicy, match="region"):
        policy_load('{"affinity": {"brows": {"forehead": 1}}}')


# -- sampling -----------------------------------------------------------------

def test_empty_timeline_gives_neutral_frames(default_grid, default_lexicon):
    curve = sample_timeline(Timeline(duration=1.0), default_grid, default_lexicon,
                            LayerPolicy.default(), 30, MappingMode.CONTINUOUS)
    assert len(curve.frames) == 31
    assert all(frame.is_neutral() for frame in curve.frames)


def test_constant_apex_span_holds_corner_pose(default_grid, default_lexicon):
    span = _span(start=0.0, end=1.0, payload=PleasureArousal(1, 1))
    t = Timeline(duration=1.0, tracks={TrackKind.EMOTION: (span,)})
    curve = sample_timeline(t, default_grid, default_lexicon,
                            LayerPolicy.default(), 30, MappingMode.CONTINUOUS)
    expected = default_grid.pose(1, 1)
    assert all(frame == expected for frame in curve.frames)


def test_mouthing_wins_lower_face_then_returns(default_lexicon):
    # emotion pose with upper and lower content, mouthing interlude mid-file
    poses = {c: ActivationVector.neutral() for c in CORNER_INDICES}
    poses[(1, 0)] = ActivationVector.from_sparse(
        {"inner_brow_raiser": 0.6, "lip_corner_puller": 0.8})
    grid = CornerPoseGrid.from_poses("fixture", 1, poses)
    emotion = _span(start=0.0, end=3.0, payload=PleasureArousal(1, 0))
    mouthing = Span(kind=TrackKind.MOUTHING, start=1.0, end=2.0, payload="pah",
                    envelope=Envelope(attack=0.2, release=0.2))
    t = Timeline(duration=3.0, tracks={TrackKind.EMOTION: (emotion,),
                                       TrackKind.MOUTHING: (mouthing,)})
    curve = sample_timeline(t, grid, default_lexicon, LayerPolicy.default(),
                            30, MappingMode.CONTINUOUS)
    pah = default_lexicon.vector_for("pah", TrackKind.MOUTHING)
    lower = [UNIT_NAMES.index(u) for u in units_in_region(Region.LOWER)]
    upper = [UNIT_NAMES.index(u) for u in units_in_region(Region.UPPER)]
    emo = grid.pose(1, 0)

    apex = curve.frames[45]  # t = 1.5, mouthing apex
    for i in lower:
        assert apex.values[i] == pytest.approx(pah.values[i], abs=1e-9)
    for i in upper:
        assert apex.values[i] == pytest.approx(emo.values[i], abs=1e-9)

    after = curve.frames[75]  # t = 2.5, past the release
    for i in lower:
        assert after.values[i] == pytest.approx(emo.values[i], abs=1e-9)


def test_brute_force_per_frame_oracle(default_grid, default_lexicon):
    """Frame-by-frame comparison against a straight-line reimplementation."""
    text = ("duration 2.0\n"
            "emotion 0.0 2.0 p=1 a=0 attack=0.3 release=0.3\n"
            "mouthing 0.8 1.4 pah attack=0.1 release=0.1\n"
            "brows 0.2 1.0 raised w=0.7\n")
    from signface import parse_annotation
    t = parse_annotation(text, default_lexicon)
    policy = LayerPolicy.default()
    fps = 25
    curve = sample_timeline(t, default_grid, default_lexicon, policy, fps,
                            MappingMode.CONTINUOUS)
    assert len(curve.frames) == 51

    def env(span, tm):
        if tm < span.start or tm > span.end:
            return 0.0
        ramp_up = 1.0 if span.envelope.attack == 0 else (tm - span.start) / span.envelope.attack
        ramp_dn = 1.0 if span.envelope.release == 0 else (span.end - tm) / span.envelope.release
        return span.weight * max(0.0, min(1.0, ramp_up, ramp_dn))

    from signface import pa_to_pose
    for i, frame in enumerate(curve.frames):
        tm = i / fps
        out = [0.0] * 20
        for kind in policy.priority:
            for span in t.tracks[kind]:
                w = env(span, tm)
                if w <= 0:
                    continue
                if kind is TrackKind.EMOTION:
                    vec = pa_to_pose(span.payload, default_grid, MappingMode.CONTINUOUS)
                else:
                    vec = default_lexicon.vector_for(span.payload, kind)
                aff = policy.affinity[kind]
                for j, name in enumerate(UNIT_NAMES):
                    from signface.units import UNIT_REGIONS
                    f = w * aff[UNIT_REGIONS[name]]
                    out[j] += (vec.values[j] - out[j]) * f
        for j in range(20):
            assert frame.values[j] == pytest.approx(out[j], abs=1e-12)


def test_gloss_contributes_nothing(default_grid, default_lexicon):
    span = Span(kind=TrackKind.GLOSS, start=0.0, end=1.0, payload="HELLO")
    t = Timeline(duration=1.0, tracks={TrackKind.GLOSS: (span,)})
    curve = sample_timeline(t, default_grid, default_lexicon,
                            LayerPolicy.default(), 30, MappingMode.CONTINUOUS)
    assert all(frame.is_neutral() for frame in curve.frames)


def test_unknown_pose_propagates(default_grid):
    span = Span(kind=TrackKind.MOUTHING, start=0.0, end=1.0, payload="zzz", line=4)
    t = Timeline(duration=1.0, tracks={TrackKind.MOUTHING: (span,)})
    lexicon = lexicon_load("{}")
    with pytest.raises(UnknownPose) as err:
        sample_timeline(t, default_grid, lexicon, LayerPolicy.default(),
                        30, MappingMode.CONTINUOUS)
    assert err.value.line == 4


def test_sampling_is_deterministic(default_grid, default_lexicon, corpus_paths):
    from signface import parse_annotation
    t = parse_annotation(corpus_paths[0].read_text(), default_lexicon)
    a = sample_timeline(t, default_grid, default_lexicon, LayerPolicy.default(),
                        30, MappingMode.CONTINUOUS)
    b = sample_timeline(t, default_grid, default_lexicon, LayerPolicy.default(),
                        30, MappingMode.CONTINUOUS)
    assert export_curves(a, "json") == export_curves(b, "json")
    assert export_curves(a, "csv") == export_curves(b, "csv")


def test_range_safety_on_random_timelines(default_grid, default_lexicon):
    rng = random.Random(33)
    for _ in range(50):
        t = random_timeline(rng)
        curve = sample_timeline(t, default_grid, default_lexicon,
                                LayerPolicy.default(), 20, MappingMode.CONTINUOUS)
        assert len(curve.frames) == int(t.duration * 20) + 1
        for frame in curve.frames:
            assert all(0.0 <= v <= 1.0 for v in frame.values)


# -- export -------------------------------------------------------------------

def test_csv_export_shape():
    curve = SampledCurve(fps=30, frames=(ActivationVector.neutral(),) * 31)
    data = export_curves(curve, "csv").decode()
    lines = data.strip().split("\n")
    assert len(lines) == 32
    assert lines[0].startswith("time,inner_brow_raiser,")
    assert lines[1].count("0.000000") == 21  # time column plus 20 units


def test_csv_contains_six_decimal_value():
    frame = ActivationVector.from_sparse({"jaw_drop": 0.5})
    curve = SampledCurve(fps=2, frames=(frame, frame))
    assert b"0.500000" in export_curves(curve, "csv")


def test_json_export_parses_back():
    import json
    frame = ActivationVector.from_sparse({"jaw_drop": 0.5})
    curve = SampledCurve(fps=30, frames=(frame,))
    doc = json.loads(export_curves(curve, "json"))
    assert doc["fps"] == 30
    assert doc["units"] == list(UNIT_NAMES)
    assert doc["frames"][0][UNIT_NAMES.index("jaw_drop")] == 0.5


def test_export_identical_across_runs(default_grid, default_lexicon):
    rng = random.Random(34)
    t = random_timeline(rng)
    curve = sample_timeline(t, default_grid, default_lexicon,
                            LayerPolicy.default(), 24, MappingMode.CONTINUOUS)
    assert export_curves(curve, "json") == export_curves(curve, "json")


def test_unknown_export_format():
    curve = SampledCurve(fps=30, frames=(ActivationVector.neutral(),))
    with pytest.raises(InvariantViolation, match="format"):
        export_curves(curve, "yaml")
