"""
Result Records

Per-trial rows and the CSV serializer every experiment writes through.
Floats are written with repr so a re-run reproduces files byte for byte.
"""

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

TRIAL_FIELDS = [
    "trial",
    "method",
    "m",
    "e_sigma_z",
    "e_sigma_w",
    "squared_error",
    "wall_time_ms",
    "seed",
    "flags",
]


class Method:
    """Method names used in the ``method`` column"""
    LMMSE_NO_JITTER = "lmmse0"
    LMMSE = "lmmse"
    EM = "em"
    EM_RANDOM = "em_random"
    GIBBS = "gibbs"


@dataclass(frozen=True)
class TrialRecord:
    """One estimator run on one synthetic trial"""
    trial: int
    method: str
    m: int
    e_sigma_z: float
    e_sigma_w: float
    squared_error: float
    wall_time_ms: Optional[float] = None
    seed: int = 0
    flags: str = ""

    def __post_init__(self):
        if self.squared_error < 0:
            raise ValueError(f"squared_error must be >= 0, got {self.squared_error}")

    @property
    def failed(self) -> bool:
        return math.isnan(self.squared_error)

    @property
    def sort_key(self):
        return (self.m, self.e_sigma_w, self.e_sigma_z, self.trial, self.method)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trial": self.trial,
            "method": self.method,
            "m": self.m,
            "e_sigma_z": self.e_sigma_z,
            "e_sigma_w": self.e_sigma_w,
            "squared_error": self.squared_error,
            "wall_time_ms": self.wall_time_ms,
            "seed": self.seed,
            "flags": self.flags,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrialRecord":
        wall = data.get("wall_time_ms")
        return cls(
            trial=int(data["trial"]),
            method=str(data["method"]),
            m=int(data["m"]),
            e_sigma_z=float(data["e_sigma_z"]),
            e_sigma_w=float(data["e_sigma_w"]),
            squared_error=float(data["squared_error"]),
            wall_time_ms=float(wall) if wall not in (None, "") else None,
            seed=int(data.get("seed") or 0),
            flags=str(data.get("flags") or ""),
        )


def format_value(value: Any) -> str:
    """Exact text form of a cell: repr for floats, empty for None"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):  # numpy scalar
        return format_value(value.item())
    return str(value)


class CsvSerializer:
    """Serialize rows of dicts to CSV with a fixed column order"""

    def __init__(self, fieldnames: Sequence[str]):
        self.fieldnames = list(fieldnames)

    def serialize(self, rows: Iterable[Dict[str, Any]]) -> str:
        """
        Serialize rows to CSV text.

        Args:
            rows: Mappings keyed by the serializer's field names

        Returns:
            CSV text with a header line and ``\\n`` line endings
        """
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=self.fieldnames, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row.get(k)) for k in self.fieldnames})
        return buffer.getvalue()

    def deserialize(self, data: str) -> List[Dict[str, str]]:
        """
        Parse CSV text back into string-valued rows.

        Raises:
            ValueError: If the header does not match the field names
        """
        reader = csv.DictReader(io.StringIO(data))
        if reader.fieldnames != self.fieldnames:
            raise ValueError(f"Unexpected CSV header {reader.fieldnames}; expected {self.fieldnames}")
        return [dict(row) for row in reader]

    def write(self, path: Path, rows: Iterable[Dict[str, Any]]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.serialize(rows), encoding="utf-8")
        return path


def write_trial_records(path: Path, records: Iterable[TrialRecord]) -> Path:
    """Write records sorted by (sweep point, trial, method)"""
    ordered = sorted(records, key=lambda r: r.sort_key)
    return CsvSerializer(TRIAL_FIELDS).write(path, (r.to_dict() for r in ordered))


def read_trial_records(path: Path) -> List[TrialRecord]:
    rows = CsvSerializer(TRIAL_FIELDS).deserialize(Path(path).read_text(encoding="utf-8"))
    return [TrialRecord.from_dict(row) for row in rows]
