"""Token timestamps from continuous integrate-and-fire weights.

The pipeline: frame-level fire weights (``FrameWeights``) go through the
integrate-and-fire scan (``integrate_and_fire`` -> ``raw_timestamps``),
optional weight transforms (``scaled_cif``, ``weaken_spikes``), and
silence-aware post-processing (``postprocess``) to produce a
``TimestampTrack``.  Tracks are compared with edit-distance pairing
(``align_tokens``) and scored with ``aas`` / ``der`` or corpus-level
``score_corpus``.  ``synth.generate`` builds utterances with known ground
truth for end-to-end validation.
"""

from .align import TokenPairing, align_tokens
from .fire import FireEvent, FireResult, RawTimestamps, integrate_and_fire, raw_timestamps
from .io import (
    RunConfig,
    WeightsRecord,
    format_ctm,
    load_config_file,
    read_ctm,
    read_weights_file,
    resolve_config,
    write_ctm,
    write_weights_file,
)
from .metrics import (
    DerResult,
    ScoreReport,
    UndefinedMetricError,
    UtteranceScore,
    aas,
    der,
    score_corpus,
    score_pair,
)
from .postproc import (
    SILENCE,
    PostprocParams,
    StageFlags,
    TimestampTrack,
    TrackEntry,
    fire_delay_and_insert,
    postprocess,
    to_track,
    trim_boundary_silence,
)
from .synth import SynthSpec, generate, make_corpus
from .weights import FrameWeights, ScaleParams, apply_scaled_cif, scaled_cif, weaken_spikes

__version__ = "0.1.0"

__all__ = [
    "FireEvent",
    "FireResult",
    "FrameWeights",
    "PostprocParams",
    "RawTimestamps",
    "RunConfig",
    "ScaleParams",
    "ScoreReport",
    "DerResult",
    "SILENCE",
    "StageFlags",
    "SynthSpec",
    "TimestampTrack",
    "TokenPairing",
    "TrackEntry",
    "UndefinedMetricError",
    "UtteranceScore",
    "WeightsRecord",
    "aas",
    "align_tokens",
    "apply_scaled_cif",
    "der",
    "fire_delay_and_insert",
    "format_ctm",
    "generate",
    "integrate_and_fire",
    "load_config_file",
    "make_corpus",
    "postprocess",
    "raw_timestamps",
    "read_ctm",
    "read_weights_file",
    "resolve_config",
    "scaled_cif",
    "score_corpus",
    "score_pair",
    "to_track",
    "trim_boundary_silence",
    "weaken_spikes",
    "write_ctm",
    "write_weights_file",
]
