"""Confusion accounting and evaluation metrics.

Positive class = the legitimate node accepted.  A false alarm is a rejected
legitimate frame; a missed detection is an accepted attack frame.  RMSE is
always measured against the legitimate node's true angle, including for
attack streams.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("counts must be nonnegative")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.fn + other.fn,
            self.fp + other.fp,
            self.tn + other.tn,
        )

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @classmethod
    def from_decisions(cls, accepted: np.ndarray, legitimate: bool) -> "ConfusionCounts":
        """Tally a stream of accept/reject decisions for one class."""
        accepted = np.asarray(accepted, dtype=bool)
        n_acc = int(np.count_nonzero(accepted))
        n_rej = len(accepted) - n_acc
        if legitimate:
            return cls(tp=n_acc, fn=n_rej)
        return cls(fp=n_acc, tn=n_rej)


def p_fa(c: ConfusionCounts) -> float:
    """False-alarm probability FN / (TP + FN)."""
    if c.tp + c.fn == 0:
        raise ValueError("no legitimate samples; P_FA undefined")
    return c.fn / (c.tp + c.fn)


def p_md(c: ConfusionCounts) -> float:
    """Missed-detection probability FP / (FP + TN)."""
    if c.fp + c.tn == 0:
        raise ValueError("no attack samples; P_MD undefined")
    return c.fp / (c.fp + c.tn)


def accuracy(c: ConfusionCounts) -> float:
    """(TP + TN) / total."""
    if c.total == 0:
        raise ValueError("empty confusion counts")
    return (c.tp + c.tn) / c.total


def rmse(estimates_deg, reference_deg: float) -> float:
    """Root mean squared deviation of the estimates from the reference angle."""
    est = np.asarray(estimates_deg, dtype=float)
    if est.size == 0:
        raise ValueError("rmse of an empty sequence")
    return float(np.sqrt(np.mean((est - reference_deg) ** 2)))


METRICS_COLUMNS = [
    "attack",
    "theta_e_deg",
    "d_e_m",
    "trials",
    "p_fa",
    "p_md",
    "accuracy",
    "rmse_deg",
]


def write_metrics_csv(path, rows) -> None:
    """Write sweep results; each row is a dict over METRICS_COLUMNS (missing
    values are emitted empty)."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRICS_COLUMNS)
        for row in rows:
            writer.writerow(
                [_format(row.get(col)) for col in METRICS_COLUMNS]
            )


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)
