"""Deterministic numeric and CSV formatting shared by the CLI and service.

All numbers are dot-decimal scientific notation with 9 significant digits,
pinned so golden-file tests are reproducible byte for byte.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

from .pipeline import AnalysisSnapshot

SNAPSHOT_CSV_HEADER = (
    "t_hours,nominal_lambda,nominal_reliability,"
    "sensor_lambda,sensor_reliability,potc_nominal,potc_sensor,failed"
)


def format_sig9(x: float) -> str:
    """9-significant-digit scientific notation; 'inf' for infinities."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.8e}"


def _opt(x: Optional[float]) -> str:
    return "" if x is None else format_sig9(x)


def snapshot_csv_row(snap: AnalysisSnapshot) -> str:
    return ",".join([
        format_sig9(snap.t),
        format_sig9(snap.nominal_lambda),
        format_sig9(snap.nominal_reliability),
        format_sig9(snap.sensor_lambda),
        format_sig9(snap.sensor_reliability),
        _opt(snap.potc_nominal),
        _opt(snap.potc_sensor),
        "1" if snap.failed else "0",
    ])


def snapshots_to_csv(snapshots: Iterable[AnalysisSnapshot]) -> str:
    lines = [SNAPSHOT_CSV_HEADER]
    lines.extend(snapshot_csv_row(s) for s in snapshots)
    return "\n".join(lines) + "\n"


def reliability_curve_csv(points: Sequence) -> str:
    """CSV for (t, R) pairs."""
    lines = ["t_hours,reliability"]
    lines.extend(f"{format_sig9(t)},{format_sig9(r)}" for t, r in points)
    return "\n".join(lines) + "\n"
