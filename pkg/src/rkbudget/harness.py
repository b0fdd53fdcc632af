"""Empirical validation campaigns: do realized errors respect the bounds?

Campaigns integrate the benchmark exponential ODE with a concrete tableau,
with or without injected noise, and compare the realized final-time error
against the corresponding closed-form bound.  In clipped noise mode every
perturbation satisfies the norm bound deterministically, so any violation
signals an implementation defect; in plain Gaussian mode the per-evaluation
exceedance rate itself is the quantity under test.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bounds import global_error_bound_noiseless, global_error_bound_noisy
from .integrator import EvaluationOracle, NoiseSpec, integrate
from .scenarios import AnalyticProblem, Scenario, exp_ode
from .tableaux import ButcherTableau, profile

__all__ = [
    "CampaignReport",
    "validate_noiseless_bound",
    "validate_noisy_bound",
    "shots_to_delta",
    "delta_to_shots",
    "report_to_json",
]


@dataclass(frozen=True)
class CampaignReport:
    """Outcome of a validation campaign, reproducible from config + seed."""

    config: dict
    trials: int
    violations: int
    evaluations: int = 0
    delta_exceedances: int = 0
    seeds: tuple = ()
    worst_margin: float = 0.0  # max realized/bound over the campaign

    def __post_init__(self):
        if self.violations > self.trials:
            raise ValueError("violations cannot exceed trials")

    @property
    def violation_rate(self) -> float:
        return self.violations / self.trials if self.trials else 0.0

    @property
    def exceedance_rate(self) -> float:
        return self.delta_exceedances / self.evaluations if self.evaluations else 0.0


def validate_noiseless_bound(
    sc: Scenario,
    tableau: ButcherTableau,
    n_steps_list: Iterable[int],
    problem: AnalyticProblem | None = None,
) -> CampaignReport:
    """Check bound dominance for exact evaluations at several step counts.

    Integration is deterministic here, so each step count either holds or
    fails outright.
    """
    problem = problem if problem is not None else exp_ode()
    prof = profile(tableau, sc.error_const)
    reference = problem.exact(sc.pb.horizon)
    violations = 0
    worst = 0.0
    evaluations = 0
    n_steps_list = [int(n) for n in n_steps_list]
    for n in n_steps_list:
        oracle = EvaluationOracle(problem.field)
        traj = integrate(tableau, oracle, problem.y0, 0.0, sc.pb.horizon, n)
        evaluations += oracle.evaluations
        realized = float(np.linalg.norm(traj.final - reference))
        bound = global_error_bound_noiseless(sc.pb, prof, n)
        worst = max(worst, realized / bound)
        violations += realized > bound
    config = {
        "campaign": "noiseless-dominance",
        "scenario": sc.name,
        "method": tableau.name,
        "n_steps": n_steps_list,
    }
    return CampaignReport(
        config=config,
        trials=len(n_steps_list),
        violations=violations,
        evaluations=evaluations,
        worst_margin=worst,
    )


def validate_noisy_bound(
    sc: Scenario,
    tableau: ButcherTableau,
    n_steps: int,
    delta: float,
    trials: int = 1000,
    seed: int = 0,
    mode: str = "clipped-gaussian",
    eta: float = 0.05,
    problem: AnalyticProblem | None = None,
) -> CampaignReport:
    """Run seeded noisy integrations and count bound violations.

    ``delta == 0`` falls back to a single noiseless check.  Each trial uses
    the random stream keyed by ``(seed, trial)``, so reports are identical
    regardless of execution order.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0.0:
        return validate_noiseless_bound(sc, tableau, [n_steps], problem=problem)
    problem = problem if problem is not None else exp_ode()
    prof = profile(tableau, sc.error_const)
    reference = problem.exact(sc.pb.horizon)
    bound = global_error_bound_noisy(sc.pb, prof, n_steps, delta)
    violations = 0
    worst = 0.0
    evaluations = 0
    exceedances = 0
    for trial in range(trials):
        noise = NoiseSpec.from_delta(delta, eta=eta, mode=mode)
        oracle = EvaluationOracle(problem.field, noise=noise, rng=(seed, trial))
        traj = integrate(tableau, oracle, problem.y0, 0.0, sc.pb.horizon, n_steps)
        evaluations += oracle.evaluations
        exceedances += oracle.delta_exceedances
        realized = float(np.linalg.norm(traj.final - reference))
        worst = max(worst, realized / bound)
        violations += realized > bound
    config = {
        "campaign": "noisy-dominance",
        "scenario": sc.name,
        "method": tableau.name,
        "n_steps": n_steps,
        "delta": delta,
        "mode": mode,
        "eta": eta,
        "seed": seed,
    }
    return CampaignReport(
        config=config,
        trials=trials,
        violations=violations,
        evaluations=evaluations,
        delta_exceedances=exceedances,
        seeds=tuple((seed, t) for t in range(trials)),
        worst_margin=worst,
    )


def shots_to_delta(sigma: float, n_shots: float) -> float:
    """Per-evaluation noise bound implied by a shot count: ``sigma / sqrt(n_shots)``."""
    if sigma <= 0 or n_shots <= 0:
        raise ValueError("sigma and n_shots must be positive")
    return sigma / math.sqrt(n_shots)


def delta_to_shots(sigma: float, delta: float) -> float:
    """Shot count needed for a target noise bound: ``(sigma / delta)**2``."""
    if sigma <= 0 or delta <= 0:
        raise ValueError("sigma and delta must be positive")
    return (sigma / delta) ** 2


def report_to_json(report: CampaignReport, sample_size: int = 10) -> str:
    """Serialize a campaign report; only a sample of per-trial seeds is kept."""
    payload = {
        "config": report.config,
        "trials": report.trials,
        "violations": report.violations,
        "violation_rate": report.violation_rate,
        "evaluations": report.evaluations,
        "delta_exceedances": report.delta_exceedances,
        "exceedance_rate": report.exceedance_rate,
        "worst_margin": report.worst_margin,
        "seeds_sample": [list(s) for s in report.seeds[:sample_size]],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
