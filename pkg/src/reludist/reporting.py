"""Deterministic CSV/JSON emission of run results.

Floats are rendered with 12 significant digits in both formats, so CSV and
JSON emissions of the same records agree digit for digit. Re-running with an
identical RunConfig reproduces byte-identical payloads (the optional
timestamp is excluded unless explicitly requested).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from . import __version__ as _pkg_version
from .errors import DomainError
from .estimators import MomentEstimate, ZScoreVerdict
from .experiments import SeparationReport, SweepRecord

_DISTANCE_COLUMNS = (
    "theta", "m", "trials", "mc_mean", "mc_stderr",
    "analytic_corrected", "analytic_original", "bound_lower", "bound_upper",
)
_CONCENTRATION_COLUMNS = _DISTANCE_COLUMNS + ("rms_dev", "max_dev")
_ANGLE_COLUMNS = (
    "theta", "m", "trials", "layer_count", "mc_mean", "mc_stderr", "predicted_cos",
)


@dataclass
class RunConfig:
    """Echo of all parameters that determine a run's output."""

    subcommand: str
    n: int = 64
    m: int = 1024
    theta: Optional[float] = None
    trials: int = 400
    layers: int = 1
    grid: int = 181
    seed: int = 0
    norm_x: float = 1.0
    norm_y: float = 1.0
    claim: str = "both"
    m_list: Optional[list[int]] = None
    samples: int = 100_000
    classes: int = 2
    points_per_class: int = 20
    intra_angle_max: Optional[float] = None
    inter_angle_min: Optional[float] = None
    z_accept: float = 4.0
    z_reject: float = 10.0
    out: Optional[str] = None
    format: str = "csv"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunConfig":
        return cls(**d)


@dataclass
class ReportDocument:
    config: RunConfig
    records: list[Any] = field(default_factory=list)
    verdict: Optional[str] = None
    timestamp: Optional[str] = None


def format_float(v: float) -> str:
    return f"{v:.12g}"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def record_to_dict(record: Any) -> dict[str, Any]:
    """Flatten a record into an ordered column -> value mapping."""
    if isinstance(record, SweepRecord):
        if record.kind == "distance":
            cols = _DISTANCE_COLUMNS
        elif record.kind == "concentration":
            cols = _CONCENTRATION_COLUMNS
        elif record.kind == "angle":
            cols = _ANGLE_COLUMNS
        else:
            raise DomainError(f"unknown sweep record kind {record.kind!r}")
        d = asdict(record)
        return {c: d[c] for c in cols}
    if isinstance(record, SeparationReport):
        return asdict(record)
    if isinstance(record, ZScoreVerdict):
        return {
            "z_corrected": record.z_corrected,
            "z_original": record.z_original,
            "verdict": record.verdict.value,
        }
    if isinstance(record, MomentEstimate):
        return asdict(record)
    if isinstance(record, dict):
        return record
    raise DomainError(f"cannot serialize record of type {type(record).__name__}")


def emit_csv(records: list[Any]) -> str:
    """Header plus one comma-separated line per record, '\\n' line endings."""
    if not records:
        return "\n"
    dicts = [record_to_dict(r) for r in records]
    cols = list(dicts[0])
    for d in dicts[1:]:
        if list(d) != cols:
            raise DomainError("CSV emission requires a homogeneous record list")
    lines = [",".join(cols)]
    for d in dicts:
        lines.append(",".join(_cell(d[c]) for c in cols))
    return "\n".join(lines) + "\n"


def emit_csv_with_header(records: list[Any], columns: tuple[str, ...]) -> str:
    """Header-only CSV support when the record list is empty."""
    if records:
        return emit_csv(records)
    return ",".join(columns) + "\n"


def _json_value(v: Any, indent: int) -> str:
    pad = "  " * indent
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_json_value(val, indent + 1)}' for k, val in v.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        items = ",\n".join(f"{pad}  {_json_value(x, indent + 1)}" for x in v)
        return "[\n" + items + "\n" + pad + "]"
    raise DomainError(f"cannot serialize {type(v).__name__} to JSON")


def emit_json(report: ReportDocument) -> str:
    """Stable-key-order JSON: {"config", "records", "verdict"?}."""
    doc: dict[str, Any] = {
        "config": report.config.to_dict(),
        "records": [record_to_dict(r) for r in report.records],
    }
    if report.verdict is not None:
        doc["verdict"] = report.verdict
    doc["provenance"] = {"artifact_version": _pkg_version}
    if report.timestamp is not None:
        doc["provenance"]["timestamp"] = report.timestamp
    return _json_value(doc, 0) + "\n"
