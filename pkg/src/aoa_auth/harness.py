"""Deterministic Monte-Carlo experiment pipelines.

Three experiments over a configured Scenario:

  * cost curves  - one realization of the ML objective per signal source,
    for plotting the attack signatures.
  * rmse sweep   - angle-estimation error versus the attacker's distance and
    angle, measured against the legitimate node's true angle.
  * auth sweep   - train the one-class verifier on legitimate estimates, then
    score balanced legitimate/attack test streams per sweep point.

All randomness flows through named streams derived from the master seed, so
results are reproducible byte-for-byte and independent of worker count.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import ocsvm
from .attacks import AttackContext, AttackKind, attack_pilots
from .config import Scenario
from .estimator import CostCurve, ResponseGrid
from .metrics import ConfusionCounts, accuracy, p_fa, p_md, rmse
from .signal_model import (
    NodeGeometry,
    channel_amplitude,
    noise_variance,
    synthesize_observation,
)

_MASK64 = (1 << 64) - 1


def derive_trial_rng(master_seed: int, *labels) -> np.random.Generator:
    """Deterministic, collision-free stream from (master seed, labels...).

    Labels may be ints, floats, or strings; strings and floats are hashed to
    64-bit words so the derivation is independent of platform repr details.
    """
    words = [int(master_seed) & _MASK64]
    for label in labels:
        if isinstance(label, (int, np.integer)):
            words.append(int(label) & _MASK64)
        else:
            digest = hashlib.sha256(repr(label).encode()).digest()
            words.append(int.from_bytes(digest[:8], "big"))
    return np.random.default_rng(np.random.SeedSequence(words))


def _batch_observations(base_signal, sigma2, count, rng):
    """``count`` frames of e^{j phi} * base + AWGN; the channel phase is drawn
    first, then the noise, so stream consumption order is part of the
    contract."""
    t = len(base_signal)
    phases = rng.uniform(0.0, 2.0 * np.pi, count)
    noise = np.sqrt(sigma2 / 2.0) * (
        rng.standard_normal((count, t)) + 1j * rng.standard_normal((count, t))
    )
    return np.exp(1j * phases)[:, None] * base_signal[None, :] + noise


def _simulate_estimates(scenario, grid, geometry, tx_pilots, count, rng):
    """Angle estimates for ``count`` noisy frames from one transmitter."""
    config = scenario.array_config()
    schedule = grid.schedule
    amp = np.sqrt(config.tx_power_watts) * channel_amplitude(
        geometry.distance_m, config.carrier_freq_hz
    )
    base = amp * schedule.beam_gains(geometry.aoa_deg) * tx_pilots.symbols
    ys = _batch_observations(base, noise_variance(config), count, rng)
    return grid.estimate_batch(ys)


def _eve_pilots(scenario, schedule, eve_aoa_deg, rng=None):
    kind = scenario.attack_kind()
    ctx = AttackContext(
        schedule=schedule,
        alice_pilots=scenario.alice_pilots(),
        target_aoa_deg=scenario.alice_aoa_deg,
        eve_aoa_deg=eve_aoa_deg,
    )
    return attack_pilots(kind, ctx, rng)


# ----------------------------------------------------------------------
# cost curves


def run_cost_curve_experiment(
    scenario: Scenario,
    eve_aoa_deg: float = 45.0,
    eve_distance_m: float = 10.0,
) -> dict[str, CostCurve]:
    """One noisy realization of the ML objective for every signal source."""
    scenario.validate()
    schedule = scenario.schedule()
    config = scenario.array_config()
    alice_pilots = scenario.alice_pilots()
    alice_geom = scenario.alice_geometry()
    eve_geom = NodeGeometry(eve_distance_m, eve_aoa_deg)
    grid = ResponseGrid(schedule, alice_pilots, scenario.grid_step_deg)

    sources = {
        "alice": (alice_geom, AttackKind.NONE),
        "eve_no_attack": (eve_geom, AttackKind.NONE),
        "random_attack": (eve_geom, AttackKind.RANDOM),
        "code_based": (eve_geom, AttackKind.CODE_BASED),
        "location_based": (eve_geom, AttackKind.LOCATION_BASED),
    }
    curves = {}
    for name, (geom, kind) in sources.items():
        rng = derive_trial_rng(scenario.master_seed, "cost-curve", name)
        ctx = AttackContext(
            schedule=schedule,
            alice_pilots=alice_pilots,
            target_aoa_deg=scenario.alice_aoa_deg,
            eve_aoa_deg=eve_aoa_deg,
        )
        tx_pilots = attack_pilots(kind, ctx, rng)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        obs = synthesize_observation(schedule, geom, tx_pilots, phase, config, rng)
        curves[name] = CostCurve(grid.angles_deg, grid.costs(obs.samples))
    return curves


# ----------------------------------------------------------------------
# RMSE sweep


def run_rmse_sweep(scenario: Scenario) -> list[dict]:
    """RMSE of the estimated angle against the legitimate angle, per sweep
    point, over ``scenario.trials`` per-trial-seeded frames."""
    scenario.validate()
    kind = scenario.attack_kind()
    if kind not in (AttackKind.CODE_BASED, AttackKind.LOCATION_BASED):
        raise ValueError("rmse sweep expects a code-based or location-based attack")
    schedule = scenario.schedule()
    config = scenario.array_config()
    grid = ResponseGrid(schedule, scenario.alice_pilots(), scenario.grid_step_deg)
    sigma2 = noise_variance(config)

    rows = []
    for theta_e in scenario.eve_aoas_deg:
        pilots = _eve_pilots(scenario, schedule, theta_e)
        gains = schedule.beam_gains(theta_e)
        for d_e in scenario.eve_distances_m:
            amp = np.sqrt(config.tx_power_watts) * channel_amplitude(
                d_e, config.carrier_freq_hz
            )
            base = amp * gains * pilots.symbols
            ys = np.empty((scenario.trials, schedule.num_probes), dtype=complex)
            for trial in range(scenario.trials):
                rng = derive_trial_rng(
                    scenario.master_seed, "rmse", scenario.attack, theta_e, d_e, trial
                )
                ys[trial] = _batch_observations(base, sigma2, 1, rng)[0]
            estimates = grid.estimate_batch(ys)
            rows.append(
                {
                    "attack": scenario.attack,
                    "theta_e_deg": float(theta_e),
                    "d_e_m": float(d_e),
                    "trials": scenario.trials,
                    "rmse_deg": rmse(estimates, scenario.alice_aoa_deg),
                }
            )
    return rows


# ----------------------------------------------------------------------
# authentication sweep


def _auth_repetition(scenario: Scenario, rep: int):
    """Train one verifier on fresh legitimate estimates and score the test
    streams; returns (alice counts, per-point attack counts)."""
    schedule = scenario.schedule()
    grid = ResponseGrid(schedule, scenario.alice_pilots(), scenario.grid_step_deg)
    alice_geom = scenario.alice_geometry()
    alice_pilots = scenario.alice_pilots()
    half = scenario.test_size // 2

    train_thetas = _simulate_estimates(
        scenario, grid, alice_geom, alice_pilots, scenario.train_size,
        derive_trial_rng(scenario.master_seed, "auth", rep, "train"),
    )
    model = ocsvm.train(train_thetas, scenario.ocsvm_params())

    alice_thetas = _simulate_estimates(
        scenario, grid, alice_geom, alice_pilots, half,
        derive_trial_rng(scenario.master_seed, "auth", rep, "alice-test"),
    )
    alice_counts = ConfusionCounts.from_decisions(
        model.decision(alice_thetas) > 0.0, legitimate=True
    )

    eve_counts = {}
    for theta_e in scenario.eve_aoas_deg:
        pilots = _eve_pilots(
            scenario, schedule, theta_e,
            derive_trial_rng(scenario.master_seed, "auth", rep, "attack", theta_e),
        )
        for d_e in scenario.eve_distances_m:
            eve_thetas = _simulate_estimates(
                scenario, grid, NodeGeometry(d_e, theta_e), pilots, half,
                derive_trial_rng(scenario.master_seed, "auth", rep, "eve", theta_e, d_e),
            )
            eve_counts[(theta_e, d_e)] = ConfusionCounts.from_decisions(
                model.decision(eve_thetas) > 0.0, legitimate=False
            )
    return alice_counts, eve_counts


def run_auth_sweep(scenario: Scenario, workers: int = 1) -> list[dict]:
    """Balanced authentication test per sweep point, merged over repetitions.

    The verifier is retrained per repetition and shared across sweep points,
    so the false-alarm rate is independent of the attacker's parameters.
    """
    scenario.validate()
    reps = range(scenario.repetitions)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_auth_repetition, [scenario] * len(reps), reps))
    else:
        results = [_auth_repetition(scenario, rep) for rep in reps]

    alice_total = ConfusionCounts()
    eve_totals: dict[tuple, ConfusionCounts] = {}
    for alice_counts, eve_counts in results:
        alice_total = alice_total + alice_counts
        for key, counts in eve_counts.items():
            eve_totals[key] = eve_totals.get(key, ConfusionCounts()) + counts

    rows = []
    for theta_e in scenario.eve_aoas_deg:
        for d_e in scenario.eve_distances_m:
            counts = eve_totals[(theta_e, d_e)] + alice_total
            rows.append(
                {
                    "attack": scenario.attack,
                    "theta_e_deg": float(theta_e),
                    "d_e_m": float(d_e),
                    "trials": counts.total,
                    "p_fa": p_fa(counts),
                    "p_md": p_md(counts),
                    "accuracy": accuracy(counts),
                }
            )
    return rows


# ----------------------------------------------------------------------
# output layout


def write_manifest(out_dir, scenario: Scenario, experiment: str) -> None:
    manifest = {
        "experiment": experiment,
        "master_seed": scenario.master_seed,
        "config_hash": scenario.config_hash(),
        "config": scenario.to_dict(),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
