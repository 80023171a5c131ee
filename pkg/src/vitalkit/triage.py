"""Weighted 14-parameter patient prioritization with a JSON-backed store.

Each parameter maps to a risk level in [0, 1] through a piecewise-linear
ramp (binary symptoms pass through unchanged, gender is neutral, height and
weight share the BMI risk), the weighted risks sum to the patient score,
and patients rank in descending score order. Weights and ramp breakpoints
live in a versioned JSON config so clinical owners can recalibrate without
touching code.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .errors import TriageError

PARAMETERS = (
    "age",
    "gender",
    "height",
    "weight",
    "heart_rate",
    "respiratory_rate",
    "spo2",
    "body_temp",
    "cough",
    "sore_throat",
    "breathing_difficulty",
    "fatigue",
    "preexisting_conditions",
    "pregnancy",
)

BINARY_PARAMETERS = (
    "cough",
    "sore_throat",
    "breathing_difficulty",
    "fatigue",
    "preexisting_conditions",
    "pregnancy",
)

GENDERS = ("male", "female", "other")

_FIELD_BOUNDS = {
    "age": (0, 130),
    "height": (30, 260),
    "weight": (1, 400),
    "heart_rate": (30, 240),
    "respiratory_rate": (4, 60),
    "spo2": (0, 100),
    "body_temp": (30, 45),
}


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def load_config(path: Path | str | None = None) -> dict:
    """Load the weights/ramps config; defaults to the packaged one."""
    if path is None:
        text = resources.files("vitalkit.data").joinpath("triage_config.json").read_text()
    else:
        text = Path(path).read_text()
    cfg = json.loads(text)
    if "schema_version" not in cfg:
        raise TriageError("config missing schema_version")
    WeightTable(cfg["weights"])  # validates
    return cfg


@dataclass(frozen=True)
class WeightTable:
    """Nonnegative weight per parameter; all 14 keys must be present."""

    w: dict

    def __post_init__(self):
        missing = set(PARAMETERS) - set(self.w)
        extra = set(self.w) - set(PARAMETERS)
        if missing:
            raise TriageError(f"weights missing parameters: {sorted(missing)}")
        if extra:
            raise TriageError(f"weights for unknown parameters: {sorted(extra)}")
        values = {k: float(v) for k, v in self.w.items()}
        if any(v < 0 for v in values.values()):
            raise TriageError("weights must be nonnegative")
        if sum(values.values()) <= 0:
            raise TriageError("at least one weight must be positive")
        object.__setattr__(self, "w", values)

    @classmethod
    def default(cls) -> "WeightTable":
        return cls(load_config()["weights"])


@dataclass
class PatientRecord:
    id: str
    name: str
    age: float
    gender: str
    height: float
    weight: float
    heart_rate: float
    respiratory_rate: float
    spo2: float
    body_temp: float
    cough: int = 0
    sore_throat: int = 0
    breathing_difficulty: int = 0
    fatigue: int = 0
    preexisting_conditions: int = 0
    pregnancy: int = 0
    prescription_note: str = ""
    created_at: str = ""
    updated_at: str = ""

    def __post_init__(self):
        if not self.id:
            raise TriageError("record needs an id")
        if self.gender not in GENDERS:
            raise TriageError(f"gender must be one of {GENDERS}")
        for name, (lo, hi) in _FIELD_BOUNDS.items():
            v = getattr(self, name)
            if not (lo <= v <= hi):
                raise TriageError(f"{name} out of range [{lo}, {hi}]")
        for name in BINARY_PARAMETERS:
            if getattr(self, name) not in (0, 1):
                raise TriageError(f"{name} must be 0 or 1")

    def to_dict(self) -> dict:
        # flat fields only; avoids the recursive walk of dataclasses.asdict
        return {name: getattr(self, name) for name in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "PatientRecord":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise TriageError(f"unknown record fields: {sorted(unknown)}")
        missing = {
            f for f in known if f not in d and f in ("id", "name", "age", "gender",
            "height", "weight", "heart_rate", "respiratory_rate", "spo2", "body_temp")
        }
        if missing:
            raise TriageError(f"record missing fields: {sorted(missing)}")
        return cls(**d)


@dataclass(frozen=True)
class TriageScore:
    patient_id: str
    score: float
    contributions: dict


def _ramp_up(value: float, zero_at: float, one_at: float) -> float:
    """0 at zero_at rising linearly to 1 at one_at (either direction)."""
    if zero_at == one_at:
        return 0.0
    r = (value - zero_at) / (one_at - zero_at)
    return min(1.0, max(0.0, r))


def _bmi_risk(height_cm: float, weight_kg: float, ramps: dict) -> float:
    r = ramps["bmi"]
    bmi = weight_kg / (height_cm / 100.0) ** 2
    lo, hi = r["normal"]
    if bmi < lo:
        return _ramp_up(bmi, lo, r["one_low"])
    if bmi > hi:
        return _ramp_up(bmi, hi, r["one_high"])
    return 0.0


def risk_level(param_name: str, value, config: dict | None = None) -> float:
    """Risk in [0, 1] for one parameter value.

    For "height" and "weight", `value` must be the (height_cm, weight_kg)
    pair; each of the two carries half of the joint BMI risk.
    """
    cfg = config if config is not None else load_config()
    ramps = cfg["ramps"]
    if param_name in BINARY_PARAMETERS:
        if value not in (0, 1):
            raise TriageError(f"{param_name} must be 0 or 1")
        return float(value)
    if param_name == "gender":
        return 0.0
    if param_name in ("height", "weight"):
        height_cm, weight_kg = value
        return 0.5 * _bmi_risk(height_cm, weight_kg, ramps)
    if param_name == "age":
        r = ramps["age"]
        return _ramp_up(value, r["zero_until"], r["one_at"])
    if param_name == "spo2":
        r = ramps["spo2"]
        return _ramp_up(value, r["zero_at"], r["one_at"])
    if param_name == "body_temp":
        r = ramps["body_temp"]
        return _ramp_up(value, r["zero_at"], r["one_at"])
    if param_name in ("heart_rate", "respiratory_rate"):
        r = ramps[param_name]
        lo, hi = r["normal"]
        if value < lo:
            return _ramp_up(value, lo, r["one_low"])
        if value > hi:
            return _ramp_up(value, hi, r["one_high"])
        return 0.0
    raise TriageError("unknown parameter")


def score(record: PatientRecord, weights: WeightTable | None = None,
          config: dict | None = None) -> TriageScore:
    """Weighted sum of per-parameter risks, with the breakdown retained."""
    cfg = config if config is not None else load_config()
    weights = weights or WeightTable(cfg["weights"])
    contributions = {}
    for name in PARAMETERS:
        if name in ("height", "weight"):
            value = (record.height, record.weight)
        else:
            value = getattr(record, name)
        contributions[name] = weights.w[name] * risk_level(name, value, cfg)
    return TriageScore(record.id, sum(contributions.values()), contributions)


def rank(records, weights: WeightTable | None = None,
         config: dict | None = None) -> list[TriageScore]:
    """Scores in descending order; ties go to the older record, then the
    lexicographically smaller id."""
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise TriageError("duplicate patient id")
    cfg = config if config is not None else load_config()
    weights = weights or WeightTable(cfg["weights"])
    by_id = {r.id: r for r in records}
    scores = [score(r, weights, cfg) for r in records]
    scores.sort(key=lambda s: (-s.score, by_id[s.patient_id].created_at, s.patient_id))
    return scores


class PatientStore:
    """Single-file JSON store with atomic replace-on-write.

    Writes are serialized by a lock; reads return copies of the last
    committed snapshot, so readers are never blocked by a writer.
    """

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, PatientRecord] = {}
        if self.path.exists():
            raw = json.loads(self.path.read_text())
            for item in raw:
                rec = PatientRecord.from_dict(item)
                self._records[rec.id] = rec

    def _flush(self) -> None:
        data = json.dumps([r.to_dict() for r in self._records.values()], indent=2)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(data)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _store_one(self, record: PatientRecord, now: str) -> PatientRecord:
        existing = self._records.get(record.id)
        created = existing.created_at if existing else (record.created_at or now)
        stored = PatientRecord(**{**record.to_dict(),
                                  "created_at": created, "updated_at": now})
        self._records[record.id] = stored
        return stored

    def upsert(self, record: PatientRecord) -> PatientRecord:
        """Insert or replace by id; bumps updated_at, fills created_at."""
        with self._lock:
            stored = self._store_one(record, _now_iso())
            self._flush()
            return stored

    def upsert_many(self, records) -> list[PatientRecord]:
        """Bulk upsert with a single snapshot write."""
        with self._lock:
            now = _now_iso()
            stored = [self._store_one(r, now) for r in records]
            self._flush()
            return stored

    def delete(self, patient_id: str) -> None:
        with self._lock:
            if patient_id not in self._records:
                raise TriageError("not found")
            del self._records[patient_id]
            self._flush()

    def get(self, patient_id: str) -> PatientRecord:
        rec = self._records.get(patient_id)
        if rec is None:
            raise TriageError("not found")
        return rec

    def all_records(self) -> list[PatientRecord]:
        return sorted(self._records.values(), key=lambda r: r.updated_at, reverse=True)

    def search(self, name: str | None = None, age: float | None = None) -> list[PatientRecord]:
        """Case-insensitive substring match on name, exact match on age;
        at least one criterion is required. Most recently updated first."""
        if name is None and age is None:
            raise TriageError("missing criteria")
        hits = []
        for rec in self._records.values():
            if name is not None and name.lower() not in rec.name.lower():
                continue
            if age is not None and rec.age != age:
                continue
            hits.append(rec)
        hits.sort(key=lambda r: r.updated_at, reverse=True)
        return hits

    def __len__(self) -> int:
        return len(self._records)


def new_patient_id() -> str:
    return uuid.uuid4().hex[:12]
