"""Deterministic CSV export of Bode sweeps with regime labels."""
from __future__ import annotations

import csv
import io

from .exceptions import InsufficientSpan
from .freq import bode, regime_labels, segment_regimes

CSV_HEADER = ("w_rad_s", "magnitude_db", "phase_deg", "regime")
UNSEGMENTED = "unsegmented"


def _fmt(x: float) -> str:
    return format(x, ".17g")


def bode_rows(tf, target, wmin, wmax, points_per_decade):
    """Bode samples and their regime labels (``unsegmented`` if the sweep has no clear regimes)."""
    samples = bode(tf, wmin, wmax, points_per_decade)
    try:
        labels = regime_labels(samples, segment_regimes(samples, target))
    except InsufficientSpan:
        labels = [UNSEGMENTED] * len(samples)
    return samples, labels


def bode_csv_text(samples, labels) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s, lab in zip(samples, labels):
        w.writerow((_fmt(s.w), _fmt(s.magnitude_db), _fmt(s.phase_deg), lab))
    return buf.getvalue()


def write_text(path, text: str) -> None:
    # newline="" keeps LF endings on every platform
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
