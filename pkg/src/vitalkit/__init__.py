"""Camera-based vitals estimation, patient triage, and dialog toolkit."""

from .errors import (
    DialogError,
    EstimationError,
    FrameError,
    SignalError,
    SynthError,
    TriageError,
    VitalkitError,
)
from .frameio import Frame, FrameSequence, decode_base64_frame, encode_frame, load_sequence
from .dsp import Spectrum, TimeSeries, bandpass, detrend, dominant_frequency, magnitude_spectrum, normalize
from .roi import BoundingBox, ChannelStats, channel_stats, detect_roi, extract_series
from .synth import GaussianStream, SynthSpec, generate, ground_truth
from .vitals import (
    Spo2Calibration,
    VitalsReport,
    classify,
    estimate_hr,
    estimate_rr,
    estimate_spo2,
)
from .triage import PatientRecord, PatientStore, TriageScore, WeightTable, rank, risk_level, score
from .dialog import DialogGraph, DialogSession, return_to_checkpoint, start_session, step

__version__ = "0.1.0"
