"""signface: compile sign-language annotation timelines carrying
pleasure/arousal emotion values into facial control-unit activation
curves, blending emotion with mouthing and brow channels the way a
layered avatar face pipeline does."""

from .emotion import (
    MappingMode,
    PleasureArousal,
    corner_targets,
    pa_distance,
    pa_to_pose,
    resolve_pa,
)
from .errors import Diagnostic, SignfaceError
from .grid import CORNER_INDICES, CornerPoseGrid, grid_load, grid_save
from .layering import (
    DEFAULT_FPS,
    LayerPolicy,
    SampledCurve,
    blend_layers,
    envelope_eval,
    export_curves,
    policy_load,
    sample_timeline,
)
from .notation import (
    Envelope,
    PoseLexicon,
    Span,
    Timeline,
    TrackKind,
    lexicon_load,
    parse_annotation,
    serialize_annotation,
    validate_timeline,
)
from .picker import (
    AnnotatedSample,
    Dataset,
    corner_reference_sets,
    knn_pick,
    load_dataset,
)
from .pipeline import compile_annotation, resolve_fps
from .units import (
    UNIT_NAMES,
    UNIT_REGIONS,
    ActivationVector,
    Region,
    vector_clamp,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationVector",
    "AnnotatedSample",
    "CORNER_INDICES",
    "CornerPoseGrid",
    "Dataset",
    "DEFAULT_FPS",
    "Diagnostic",
    "Envelope",
    "LayerPolicy",
    "MappingMode",
    "PleasureArousal",
    "PoseLexicon",
    "Region",
    "SampledCurve",
    "SignfaceError",
    "Span",
    "Timeline",
    "TrackKind",
    "UNIT_NAMES",
    "UNIT_REGIONS",
    "blend_layers",
    "compile_annotation",
    "corner_reference_sets",
    "corner_targets",
    "envelope_eval",
    "export_curves",
    "grid_load",
    "grid_save",
    "knn_pick",
    "lexicon_load",
    "load_dataset",
    "pa_distance",
    "pa_to_pose",
    "parse_annotation",
    "policy_load",
    "resolve_fps",
    "resolve_pa",
    "sample_timeline",
    "serialize_annotation",
    "validate_timeline",
    "vector_clamp",
]
