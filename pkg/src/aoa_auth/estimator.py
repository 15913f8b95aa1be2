"""Maximum-likelihood angle estimation with the channel gain concentrated out.

For a candidate angle theta the noiseless unit-gain model is
z_t(theta) = w_t^H a(theta) * s_t.  The best-fitting complex gain has the
closed form h_hat = z^H y / ||z||^2, which reduces the negative
log-likelihood to

    cost(theta) = ||y||^2 - |z(theta)^H y|^2 / ||z(theta)||^2.

The estimate is the argmin over a uniform grid spanning [-90, 90] followed by
one parabolic refinement around the winning grid point.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .signal_model import (
    BeamObservation,
    PilotSequence,
    ProbeSchedule,
    steering_vector,
)

DEFAULT_GRID_STEP_DEG = 0.05


@dataclass(frozen=True)
class CostCurve:
    """The ML objective sampled over the angle grid."""

    angles_deg: np.ndarray
    costs: np.ndarray

    def __post_init__(self):
        if len(self.angles_deg) != len(self.costs):
            raise ValueError("angles and costs length mismatch")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["angle_deg", "cost"])
            for a, c in zip(self.angles_deg, self.costs):
                writer.writerow([repr(float(a)), repr(float(c))])


@dataclass(frozen=True)
class AoaEstimate:
    theta_hat_deg: float
    cost_at_min: float
    gain_hat: complex


def _as_symbols(pilots) -> np.ndarray:
    if isinstance(pilots, PilotSequence):
        return pilots.symbols
    return np.asarray(pilots, dtype=complex)


def model_response(schedule: ProbeSchedule, theta_deg: float, pilots) -> np.ndarray:
    """Length-T unit-gain response z_t = (w_t^H a(theta)) s_t."""
    symbols = _as_symbols(pilots)
    if len(symbols) != schedule.num_probes:
        raise ValueError("pilot length does not match schedule length")
    return schedule.beam_gains(theta_deg) * symbols


def gain_hat(z: np.ndarray, y: np.ndarray) -> complex:
    """Least-squares complex gain z^H y / ||z||^2 (0 when z is all-zero)."""
    if z.shape != y.shape:
        raise ValueError("z and y length mismatch")
    norm2 = float(np.sum(np.abs(z) ** 2))
    if norm2 == 0.0:
        return 0.0 + 0.0j
    return complex(np.vdot(z, y) / norm2)


def _grid_angles(grid_step_deg: float) -> np.ndarray:
    if not 0.0 < grid_step_deg <= 10.0:
        raise ValueError("grid_step_deg must lie in (0, 10]")
    n = int(round(180.0 / grid_step_deg)) + 1
    return np.linspace(-90.0, 90.0, n)


class ResponseGrid:
    """Precomputed model responses over the angle grid for one schedule and
    pilot sequence.

    Building the (grid x T) response matrix once turns every cost evaluation
    into a small matrix product, which is what makes the Monte-Carlo sweeps
    tractable.
    """

    def __init__(self, schedule: ProbeSchedule, pilots, grid_step_deg: float = DEFAULT_GRID_STEP_DEG):
        symbols = _as_symbols(pilots)
        if len(symbols) != schedule.num_probes:
            raise ValueError("pilot length does not match schedule length")
        self.schedule = schedule
        self.symbols = symbols
        self.grid_step_deg = float(grid_step_deg)
        self.angles_deg = _grid_angles(grid_step_deg)
        n = schedule.num_antennas
        # (grid x N) steering matrix, rows a(theta_j)
        steer = np.exp(
            1j
            * np.pi
            * np.outer(np.sin(np.deg2rad(self.angles_deg)), np.arange(1, n + 1))
        )
        # rows z(theta_j) = (w_t^H a(theta_j)) s_t
        self.responses = (steer @ schedule.combiners.conj().T) * symbols[None, :]
        self.norms2 = np.sum(np.abs(self.responses) ** 2, axis=1)
        self._safe_norms2 = np.where(self.norms2 > 0.0, self.norms2, 1.0)

    @property
    def step_deg(self) -> float:
        return float(self.angles_deg[1] - self.angles_deg[0])

    def costs(self, y: np.ndarray) -> np.ndarray:
        """Cost at every grid angle for a single observation vector."""
        return self.costs_batch(y[None, :])[0]

    def costs_batch(self, ys: np.ndarray) -> np.ndarray:
        """Cost matrix (batch x grid) for a batch of observation vectors."""
        proj = np.abs(ys @ self.responses.conj().T) ** 2 / self._safe_norms2[None, :]
        proj[:, self.norms2 == 0.0] = 0.0
        total = np.sum(np.abs(ys) ** 2, axis=1)
        return total[:, None] - proj

    def _exact_cost_and_gain(self, y: np.ndarray, theta_deg: float):
        a = steering_vector(theta_deg, self.schedule.num_antennas)
        z = (self.schedule.combiners.conj() @ a) * self.symbols
        h = gain_hat(z, y)
        cost = float(np.sum(np.abs(y - h * z) ** 2))
        return cost, h

    def estimate(self, y: np.ndarray) -> AoaEstimate:
        """Grid argmin plus one parabolic refinement (lowest angle wins ties)."""
        costs = self.costs(y)
        i = int(np.argmin(costs))
        theta = float(self.angles_deg[i])
        if 0 < i < len(costs) - 1:
            cm, c0, cp = costs[i - 1], costs[i], costs[i + 1]
            denom = cm - 2.0 * c0 + cp
            if denom > 0.0:
                offset = float(np.clip(0.5 * (cm - cp) / denom, -0.5, 0.5))
                theta = float(self.angles_deg[i] + offset * self.step_deg)
        cost, h = self._exact_cost_and_gain(y, theta)
        if cost > costs[i]:
            # refinement must never worsen the fit
            theta = float(self.angles_deg[i])
            cost, h = self._exact_cost_and_gain(y, theta)
        return AoaEstimate(theta, cost, h)

    def estimate_batch(self, ys: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """Refined angle estimates for a batch of observations.

        Returns only the angles; exact per-estimate costs are skipped for
        throughput.  Identical refinement rule as :meth:`estimate`.
        """
        out = np.empty(len(ys))
        for lo in range(0, len(ys), chunk):
            ys_c = ys[lo : lo + chunk]
            costs = self.costs_batch(ys_c)
            idx = np.argmin(costs, axis=1)
            theta = self.angles_deg[idx].copy()
            interior = (idx > 0) & (idx < costs.shape[1] - 1)
            rows = np.nonzero(interior)[0]
            if len(rows):
                ii = idx[rows]
                cm = costs[rows, ii - 1]
                c0 = costs[rows, ii]
                cp = costs[rows, ii + 1]
                denom = cm - 2.0 * c0 + cp
                ok = denom > 0.0
                offset = np.zeros(len(rows))
                offset[ok] = np.clip(0.5 * (cm[ok] - cp[ok]) / denom[ok], -0.5, 0.5)
                theta[rows] = theta[rows] + offset * self.step_deg
            out[lo : lo + chunk] = theta
        return out


def cost_curve(
    obs: BeamObservation, pilots, grid_step_deg: float = DEFAULT_GRID_STEP_DEG
) -> CostCurve:
    """Evaluate the ML objective on the uniform grid over [-90, 90]."""
    grid = ResponseGrid(obs.schedule, pilots, grid_step_deg)
    return CostCurve(grid.angles_deg, grid.costs(obs.samples))


def estimate_aoa(
    obs: BeamObservation, pilots, grid_step_deg: float = DEFAULT_GRID_STEP_DEG
) -> AoaEstimate:
    """Grid search over [-90, 90] plus one parabolic refinement."""
    grid = ResponseGrid(obs.schedule, pilots, grid_step_deg)
    return grid.estimate(obs.samples)
