"""Resource planning: minimal steps, minimal shots, cost and circuit budgets.

Given the analytic problem constants and a method profile, these closed
forms answer how many time steps (and, under shot noise, how many
measurement repetitions per evaluation) are needed to hit a target error,
and what the total evaluation bill is.  Step and shot counts are returned
as reals, matching the way the reference tables print them; callers round
up for execution.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bounds import ProblemBounds, _expm1_safe, f_factor, lte_bound
from .tableaux import MethodProfile, min_stages

__all__ = [
    "AnsatzDims",
    "BudgetRow",
    "InfeasibleShotsError",
    "min_steps_noiseless",
    "cost_noiseless",
    "min_steps_noisy",
    "min_shots",
    "cost_noisy",
    "circuit_budget",
    "distinct_circuits",
    "sigma_bound",
    "s_factor",
    "budget_table",
    "argmin_order",
    "rows_to_csv",
    "rows_to_json",
]

ROW_KEYS = ("p", "s", "N_tau", "N_r", "cost", "N_circ", "circuits", "ratio")


class InfeasibleShotsError(ValueError):
    """No shot count can reach the target: truncation alone already exceeds it."""


@dataclass(frozen=True)
class AnsatzDims:
    """Dimensions of the parameterized circuit whose evaluations we count.

    n_params
        Number of variational parameters (the state dimension of the
        parameter ODE).
    n_strings
        Pauli strings per circuit layer.
    n_pauli
        Pauli terms in the Hamiltonian decomposition.
    f_mag, lambda_mag
        Magnitude bounds on the layer coefficients and the Hamiltonian
        coefficients.
    """

    n_params: int
    n_strings: int
    n_pauli: int
    f_mag: float = 0.5
    lambda_mag: float = 1.0

    def __post_init__(self):
        if min(self.n_params, self.n_strings, self.n_pauli) < 1:
            raise ValueError("n_params, n_strings and n_pauli must be positive integers")
        if self.f_mag <= 0 or self.lambda_mag <= 0:
            raise ValueError("coefficient magnitudes must be positive")


@dataclass(frozen=True)
class BudgetRow:
    """One order's resource requirements; ``feasible`` is False when no
    shot count can reach the target at that order."""

    order: int
    stages: int
    n_steps: float
    n_shots: float | None
    cost: float
    circuit_evals: float | None
    circuits: float | None
    ratio: float
    feasible: bool = True


def min_steps_noiseless(pb: ProblemBounds, prof) -> float:
    """Minimal step count meeting the target error with exact evaluations.

    ``lip_time * T * (K * M * (e**(b_max*T*lip_state*s) - 1)
    / (target * b_max * s * lip_state))**(1/p)``, valid when the resulting
    count is large against ``lip_state * a_max * T``.
    """
    z = prof.b_max * pb.horizon * pb.lip_state * prof.stages
    base = (
        prof.error_const
        * pb.field_bound
        * _expm1_safe(z)
        / (pb.target_error * prof.b_max * prof.stages * pb.lip_state)
    )
    return pb.lip_time * pb.horizon * base ** (1.0 / prof.order)


def cost_noiseless(pb: ProblemBounds, prof) -> float:
    """Total field evaluations without noise: stages times minimal steps."""
    return prof.stages * min_steps_noiseless(pb, prof)


def min_steps_noisy(pb: ProblemBounds, prof) -> float:
    """Minimal step count under shot noise; carries the extra ``(2p+1)**(1/p)``
    factor relative to the noiseless count so that measurement error can be
    traded against truncation."""
    z = prof.b_max * prof.stages * pb.lip_state * pb.horizon
    base = (
        prof.error_const
        * pb.field_bound
        * _expm1_safe(z)
        * (2 * prof.order + 1)
        / (pb.target_error * prof.b_max * prof.stages * pb.lip_state)
    )
    return pb.horizon * pb.lip_time * base ** (1.0 / prof.order)


def min_shots(pb: ProblemBounds, prof, sigma: float, n_steps: float) -> float:
    """Measurements per evaluation needed at ``n_steps`` steps.

    ``(9 sigma^2 / lip_state^2) * (target/((1+F)**n - 1)
    - dt**(p+1) K lip_time**p M / F)**-2``.  Raises
    :class:`InfeasibleShotsError` when the bracket is non-positive, i.e.
    the truncation part alone already exhausts the target error.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    fac = f_factor(n_steps, prof, pb.lip_state, pb.horizon)
    growth = _expm1_safe(n_steps * math.log1p(fac))
    truncation = lte_bound(pb.horizon / n_steps, prof, pb.lip_time, pb.field_bound)
    bracket = pb.target_error / growth - truncation / fac
    if bracket <= 0:
        raise InfeasibleShotsError(
            f"infeasible: truncation already exceeds target at n_steps={n_steps:.6g}"
        )
    return 9.0 * sigma**2 / pb.lip_state**2 * bracket**-2


def cost_noisy(pb: ProblemBounds, prof, sigma: float) -> float:
    """Total field measurements under shot noise: ``s * n_steps * n_shots``."""
    n_steps = min_steps_noisy(pb, prof)
    return prof.stages * n_steps * min_shots(pb, prof, sigma, n_steps)


def circuit_budget(n_steps: float, stages: int, n_shots: float, dims: AnsatzDims) -> float:
    """Total circuit evaluations: every element of the linear system costs
    circuits, every circuit is measured ``n_shots`` times, at every stage of
    every step.

    ``n_steps * s * n_shots * n_params * n_strings * (n_params * n_strings + n_pauli)``
    """
    if n_steps <= 0 or stages < 1 or n_shots <= 0:
        raise ValueError("n_steps, stages and n_shots must be positive")
    nv, nd, nh = dims.n_params, dims.n_strings, dims.n_pauli
    return n_steps * stages * n_shots * nv * nd * (nv * nd + nh)


def distinct_circuits(n_steps: float, stages: int, dims: AnsatzDims) -> float:
    """Number of distinct circuits across the run (shot repetitions excluded)."""
    nv, nd, nh = dims.n_params, dims.n_strings, dims.n_pauli
    return n_steps * stages * (nv**2 * nd**2 + nv * nd * nh)


def sigma_bound(dims: AnsatzDims, eta: float, cap: float = 60.0, gamma: float = 3.0) -> float:
    """Upper bound on the aggregate single-shot deviation scale.

    ``(cap / sqrt(eta)) * n_params**gamma * (|sigma_k| / sqrt(n_params)
    + |sigma_kl| / n_params)`` using the worst-case norm surrogates
    ``|sigma_kl| <= n_params * n_strings**2`` and
    ``|sigma_k| <= n_params * n_strings * n_pauli``.  ``cap`` bounds the
    solution norm of the linear system and ``gamma`` is the exponent of
    the polynomial condition-number assumption.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    nv, nd, nh = dims.n_params, dims.n_strings, dims.n_pauli
    sigma_k_norm = nv * nd * nh
    sigma_kl_norm = nv * nd**2
    return cap / math.sqrt(eta) * nv**gamma * (sigma_k_norm / math.sqrt(nv) + sigma_kl_norm / nv)


def s_factor(f_mags, theta) -> float:
    """Bound on how strongly parameter error propagates into the prepared state.

    ``sum_k (sum_j 2 |f_kj|) |theta_k| / ||theta||_2``.  ``f_mags`` holds the
    per-layer coefficient magnitudes, one row per parameter.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    norm = float(np.linalg.norm(theta))
    if norm == 0.0:
        raise ValueError("theta must not be the zero vector")
    f_mags = np.atleast_2d(np.asarray(f_mags, dtype=float))
    if f_mags.shape[0] != theta.size:
        raise ValueError(f"f_mags must have one row per parameter, got {f_mags.shape[0]} rows for {theta.size}")
    per_layer = 2.0 * np.sum(np.abs(f_mags), axis=1)
    return float(np.sum(per_layer * np.abs(theta)) / norm)


def budget_table(
    pb: ProblemBounds,
    *,
    error_const: float,
    p_range: Iterable[int] = range(1, 11),
    a_max: float = 1.0,
    b_max: float = 1.0,
    sigma: float | None = None,
    dims: AnsatzDims | None = None,
) -> list[BudgetRow]:
    """One resource row per order, stages taken from the order/stage table.

    Noiseless mode (``sigma`` is None) leaves shot and circuit columns
    empty.  The ratio column compares every row's cost against the order-1
    cost, which is computed even when order 1 is not part of ``p_range``.
    Orders whose shot count is infeasible are flagged, not dropped.
    """
    orders = sorted(set(int(p) for p in p_range))
    if any(p < 1 or p > 10 for p in orders):
        raise ValueError("p_range must lie within 1..10")

    def prof_for(p: int) -> MethodProfile:
        return MethodProfile(order=p, stages=min_stages(p), a_max=a_max, b_max=b_max, error_const=error_const)

    def cost_for(p: int) -> float:
        prof = prof_for(p)
        if sigma is None:
            return cost_noiseless(pb, prof)
        return cost_noisy(pb, prof, sigma)

    try:
        anchor_cost = cost_for(1)
    except InfeasibleShotsError:
        anchor_cost = math.nan

    rows = []
    for p in orders:
        prof = prof_for(p)
        if sigma is None:
            n_steps = min_steps_noiseless(pb, prof)
            rows.append(
                BudgetRow(
                    order=p,
                    stages=prof.stages,
                    n_steps=n_steps,
                    n_shots=None,
                    cost=prof.stages * n_steps,
                    circuit_evals=None,
                    circuits=None if dims is None else distinct_circuits(n_steps, prof.stages, dims),
                    ratio=anchor_cost / (prof.stages * n_steps),
                )
            )
            continue
        n_steps = min_steps_noisy(pb, prof)
        try:
            n_shots = min_shots(pb, prof, sigma, n_steps)
        except InfeasibleShotsError:
            rows.append(
                BudgetRow(
                    order=p,
                    stages=prof.stages,
                    n_steps=n_steps,
                    n_shots=math.nan,
                    cost=math.nan,
                    circuit_evals=math.nan,
                    circuits=None if dims is None else distinct_circuits(n_steps, prof.stages, dims),
                    ratio=math.nan,
                    feasible=False,
                )
            )
            continue
        cost = prof.stages * n_steps * n_shots
        rows.append(
            BudgetRow(
                order=p,
                stages=prof.stages,
                n_steps=n_steps,
                n_shots=n_shots,
                cost=cost,
                circuit_evals=None if dims is None else circuit_budget(n_steps, prof.stages, n_shots, dims),
                circuits=None if dims is None else distinct_circuits(n_steps, prof.stages, dims),
                ratio=anchor_cost / cost,
            )
        )
    return rows


def argmin_order(rows: Sequence[BudgetRow]) -> int:
    """Order with the cheapest feasible row (total circuit evaluations when
    present, otherwise cost); ties break toward the smaller order."""
    candidates = [r for r in rows if r.feasible]
    if not candidates:
        raise ValueError("no feasible rows in budget table")
    best = min(candidates, key=lambda r: (r.circuit_evals if r.circuit_evals is not None else r.cost, r.order))
    return best.order


def _row_record(row: BudgetRow) -> dict:
    return {
        "p": row.order,
        "s": row.stages,
        "N_tau": row.n_steps,
        "N_r": row.n_shots,
        "cost": row.cost,
        "N_circ": row.circuit_evals,
        "circuits": row.circuits,
        "ratio": row.ratio,
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def rows_to_csv(rows: Sequence[BudgetRow]) -> str:
    """Budget table as CSV with the canonical column set."""
    out = io.StringIO()
    out.write(",".join(ROW_KEYS) + "\n")
    for row in rows:
        rec = _row_record(row)
        out.write(",".join(_csv_cell(rec[k]) for k in ROW_KEYS) + "\n")
    return out.getvalue()


def rows_to_json(rows: Sequence[BudgetRow]) -> str:
    """Budget table as a JSON array of row objects keyed like the CSV columns.

    Cells that do not apply (or are infeasible) serialize as null.
    """
    records = []
    for row in rows:
        rec = _row_record(row)
        records.append({k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in rec.items()})
    return json.dumps(records, indent=2)
