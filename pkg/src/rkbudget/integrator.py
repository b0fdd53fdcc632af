"""Explicit Runge-Kutta stepping against possibly-noisy field evaluations.

The oracle wraps the right-hand side ``f(tau, y)`` of an initial value
problem.  When a :class:`NoiseSpec` is attached, every evaluation is
perturbed by a random vector mimicking the statistical error of estimating
``f`` from a finite number of measurements: the perturbation norm stays
below ``delta = sigma / sqrt(n_shots)`` with probability at least
``1 - eta`` (and always, in clipped mode).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "NoiseSpec",
    "EvaluationOracle",
    "Trajectory",
    "StepFailureError",
    "DegenerateSlopeError",
    "rk_step",
    "integrate",
    "empirical_order",
    "trajectory_to_csv",
]

NOISE_MODES = ("gaussian", "clipped-gaussian")


class StepFailureError(RuntimeError):
    """A stage evaluation returned a non-finite value."""

    def __init__(self, message: str, step: int | None = None, stage: int | None = None):
        super().__init__(message)
        self.step = step
        self.stage = stage


class DegenerateSlopeError(RuntimeError):
    """Convergence errors vanished or hit machine precision; no slope exists."""


@dataclass(frozen=True)
class NoiseSpec:
    """Shot-noise model for field evaluations.

    ``sigma`` is the aggregate single-shot deviation scale, ``eta`` the
    exceedance probability and ``n_shots`` the number of measurements
    averaged per evaluation; the per-evaluation norm bound is
    ``delta = sigma / sqrt(n_shots)``.  Mode ``gaussian`` draws i.i.d.
    zero-mean components whose scale makes the Chebyshev bound hold, and
    ``clipped-gaussian`` additionally rescales any draw exceeding ``delta``
    onto the delta sphere so the bound holds deterministically.
    """

    sigma: float
    eta: float
    n_shots: int = 1
    mode: str = "gaussian"

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.n_shots < 1:
            raise ValueError("n_shots must be a positive integer")
        if self.mode not in NOISE_MODES:
            raise ValueError(f"mode must be one of {NOISE_MODES}")

    @property
    def delta(self) -> float:
        return self.sigma / math.sqrt(self.n_shots)

    @classmethod
    def from_delta(cls, delta: float, eta: float = 0.05, mode: str = "clipped-gaussian") -> "NoiseSpec":
        """Build a spec with a given per-evaluation bound (one shot, sigma = delta)."""
        return cls(sigma=delta, eta=eta, n_shots=1, mode=mode)


class EvaluationOracle:
    """Callable wrapper around a vector field, with optional noise injection.

    The oracle owns a private random stream so that two oracles built from
    the same seed produce bit-identical perturbation sequences.  It also
    counts how often it was called and how often a raw draw exceeded the
    noise bound, which the validation harness reports.
    """

    def __init__(
        self,
        f: Callable[[float, np.ndarray], np.ndarray],
        noise: NoiseSpec | None = None,
        rng: np.random.Generator | int | Sequence[int] | None = None,
    ):
        self.f = f
        self.noise = noise
        if isinstance(rng, np.random.Generator):
            self._rng = rng
        else:
            self._rng = np.random.default_rng(rng)
        self.evaluations = 0
        self.delta_exceedances = 0

    def __call__(self, tau: float, y: np.ndarray) -> np.ndarray:
        self.evaluations += 1
        value = np.asarray(self.f(tau, y), dtype=float)
        if self.noise is None:
            return value
        delta = self.noise.delta
        dim = value.size
        scale = delta * math.sqrt(self.noise.eta / dim)
        pert = self._rng.normal(0.0, scale, size=value.shape)
        norm = float(np.linalg.norm(pert))
        if norm > delta:
            self.delta_exceedances += 1
            if self.noise.mode == "clipped-gaussian":
                pert *= delta / norm
        return value + pert


@dataclass(frozen=True)
class Trajectory:
    """Uniformly spaced solution samples produced by :func:`integrate`."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if len(times) != len(states):
            raise ValueError("times and states must have equal length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def rk_step(tableau, oracle: Callable, tau_n: float, y_n: np.ndarray, dt: float) -> np.ndarray:
    """Advance one step: ``y + dt * sum_i b_i k_i`` with the staged recursion for ``k_i``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    y_n = np.atleast_1d(np.asarray(y_n, dtype=float))
    ks = np.empty((tableau.stages, y_n.size))
    for i in range(tableau.stages):
        y_stage = y_n if i == 0 else y_n + dt * (tableau.a[i, :i] @ ks[:i])
        k = np.atleast_1d(np.asarray(oracle(tau_n + tableau.c[i] * dt, y_stage), dtype=float))
        if not np.all(np.isfinite(k)):
            raise StepFailureError(f"non-finite field value at stage {i + 1}", stage=i + 1)
        ks[i] = k
    return y_n + dt * (tableau.b @ ks)


def integrate(
    tableau,
    oracle: Callable,
    y0: np.ndarray,
    tau0: float,
    horizon: float,
    n_steps: int,
) -> Trajectory:
    """Run ``n_steps`` fixed-size steps over ``[tau0, tau0 + horizon]``."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    dt = horizon / n_steps
    times = np.linspace(tau0, tau0 + horizon, n_steps + 1)
    y = np.atleast_1d(np.asarray(y0, dtype=float))
    states = np.empty((n_steps + 1, y.size))
    states[0] = y
    for n in range(n_steps):
        try:
            y = rk_step(tableau, oracle, times[n], y, dt)
        except StepFailureError as exc:
            raise StepFailureError(f"integration aborted at step {n + 1}: {exc}", step=n + 1, stage=exc.stage) from exc
        states[n + 1] = y
    return Trajectory(times=times, states=states)


def empirical_order(
    tableau,
    problem,
    steps: Iterable[int],
    horizon: float,
    tau0: float = 0.0,
) -> float:
    """Least-squares slope of log final error versus log step size.

    ``problem`` must expose ``field``, ``exact`` and ``y0`` (see
    :func:`rkbudget.scenarios.exp_ode`).  Noise is always off here.
    Raises :class:`DegenerateSlopeError` if any error vanishes or falls
    to the machine-precision floor, where no meaningful slope exists.
    """
    steps = sorted(int(n) for n in steps)
    if len(steps) < 4:
        raise ValueError("need at least 4 grid points for a slope estimate")
    reference = np.atleast_1d(np.asarray(problem.exact(tau0 + horizon), dtype=float))
    floor = 64.0 * np.finfo(float).eps * max(1.0, float(np.linalg.norm(reference)))
    errors = []
    for n in steps:
        oracle = EvaluationOracle(problem.field)
        traj = integrate(tableau, oracle, problem.y0, tau0, horizon, n)
        errors.append(float(np.linalg.norm(traj.final - reference)))
    errors = np.array(errors)
    if np.any(errors <= floor):
        raise DegenerateSlopeError(
            f"final errors {errors.tolist()} at or below machine-precision floor {floor:.3e}"
        )
    dts = horizon / np.array(steps, dtype=float)
    slope = float(np.polyfit(np.log(dts), np.log(errors), 1)[0])
    return slope


def trajectory_to_csv(traj: Trajectory) -> str:
    """Render a trajectory as CSV with header ``step,tau,y_0,...,y_{dim-1}``."""
    dim = traj.states.shape[1]
    out = io.StringIO()
    out.write("step,tau," + ",".join(f"y_{i}" for i in range(dim)) + "\n")
    for k, (tau, state) in enumerate(zip(traj.times, traj.states)):
        row = ",".join(f"{v:.16e}" for v in state)
        out.write(f"{k},{tau:.16e},{row}\n")
    return out.getvalue()
