"""One-at-a-time parameter sweeps of the resource budgets.

Each sweep rescales a single scenario constant by a grid of multiplicative
factors and re-evaluates either the noiseless evaluation cost or the total
circuit-evaluation budget, holding everything else at the scenario
defaults (order 2 unless the order itself is swept).  Because some
constants enter the formulas only through products, several sweep curves
coincide exactly; :func:`overlap_check` detects those pairs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .budget import InfeasibleShotsError, circuit_budget, cost_noiseless, min_shots, min_steps_noisy
from .scenarios import Scenario
from .tableaux import MethodProfile, min_stages

__all__ = ["SweepSpec", "SweepPoint", "SWEEP_TARGETS", "default_factors", "sweep", "overlap_check", "curves_to_csv"]

SWEEP_TARGETS = ("p", "T", "K", "M", "L_fy", "L_ftau", "b_max", "a_max", "Sigma", "epsilon")
SWEEP_MODES = ("cost", "ncirc")
DEFAULT_ORDER = 2


def default_factors(num: int = 25) -> np.ndarray:
    """Log-spaced scaling factors between 1/8 and 8, including exactly 1."""
    if num < 3 or num % 2 == 0:
        raise ValueError("num must be an odd integer >= 3 so the grid contains factor 1")
    return 2.0 ** np.linspace(-3.0, 3.0, num)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base scenario, the constant to rescale and the mode."""

    base: Scenario
    target: str
    mode: str = "cost"
    factors: np.ndarray = field(default_factory=default_factors)
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.target not in SWEEP_TARGETS:
            raise ValueError(f"target must be one of {SWEEP_TARGETS}")
        if self.mode not in SWEEP_MODES:
            raise ValueError(f"mode must be one of {SWEEP_MODES}")
        if self.target == "Sigma" and self.mode != "ncirc":
            raise ValueError("Sigma can only be swept in ncirc mode")
        if self.mode == "ncirc" and (self.base.sigma is None or self.base.dims is None):
            raise ValueError("ncirc mode needs a scenario with sigma and ansatz dimensions")
        factors = np.asarray(self.factors, dtype=float)
        if np.any(factors <= 0):
            raise ValueError("scale factors must be positive")
        object.__setattr__(self, "factors", factors)


@dataclass(frozen=True)
class SweepPoint:
    factor: float
    value: float
    feasible: bool = True


def _scaled(base: Scenario, target: str, factor: float) -> Scenario:
    pb = base.pb
    if target == "T":
        pb = replace(pb, horizon=pb.horizon * factor)
    elif target == "M":
        pb = replace(pb, field_bound=pb.field_bound * factor)
    elif target == "L_fy":
        pb = replace(pb, lip_state=pb.lip_state * factor)
    elif target == "L_ftau":
        pb = replace(pb, lip_time=pb.lip_time * factor)
    elif target == "epsilon":
        pb = replace(pb, target_error=pb.target_error * factor)
    out = replace(base, pb=pb)
    if target == "K":
        out = replace(out, error_const=base.error_const * factor)
    elif target == "b_max":
        out = replace(out, b_max=base.b_max * factor)
    elif target == "a_max":
        out = replace(out, a_max=base.a_max * factor)
    elif target == "Sigma":
        out = replace(out, sigma=base.sigma * factor)
    return out


def _evaluate(sc: Scenario, order: int, mode: str) -> SweepPoint:
    prof = MethodProfile(
        order=order, stages=min_stages(order), a_max=sc.a_max, b_max=sc.b_max, error_const=sc.error_const
    )
    if mode == "cost":
        return SweepPoint(factor=1.0, value=cost_noiseless(sc.pb, prof))
    n_steps = min_steps_noisy(sc.pb, prof)
    try:
        n_shots = min_shots(sc.pb, prof, sc.sigma, n_steps)
    except InfeasibleShotsError:
        return SweepPoint(factor=1.0, value=math.nan, feasible=False)
    return SweepPoint(factor=1.0, value=circuit_budget(n_steps, prof.stages, n_shots, sc.dims))


def sweep(spec: SweepSpec) -> list[SweepPoint]:
    """Evaluate the sweep curve.

    For every target except ``p`` the x-axis is the multiplicative factor
    applied to that constant; for ``p`` the curve runs over the integer
    orders 1..10 (with matching minimal stage counts) and the factor column
    carries the order.  Infeasible points are flagged in place.
    """
    points = []
    if spec.target == "p":
        for p in range(1, 11):
            pt = _evaluate(spec.base, p, spec.mode)
            points.append(replace(pt, factor=float(p)))
        return points
    for factor in spec.factors:
        pt = _evaluate(_scaled(spec.base, spec.target, float(factor)), spec.order, spec.mode)
        points.append(replace(pt, factor=float(factor)))
    return points


def overlap_check(curves: Mapping[str, Sequence[SweepPoint]], rtol: float = 1e-9) -> list[tuple[str, str]]:
    """Report pairs of curves that agree pointwise within ``rtol``.

    Curves must share the factor grid.  Pairs are returned in sorted name
    order; a pair only matches if feasibility flags agree everywhere too.
    """
    names = sorted(curves)
    pairs = []
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            a, b = curves[first], curves[second]
            if len(a) != len(b):
                continue
            if any(not math.isclose(pa.factor, pb.factor, rel_tol=1e-12) for pa, pb in zip(a, b)):
                continue
            if any(pa.feasible != pb.feasible for pa, pb in zip(a, b)):
                continue
            values_a = np.array([p.value for p in a])
            values_b = np.array([p.value for p in b])
            finite = np.isfinite(values_a) & np.isfinite(values_b)
            if np.allclose(values_a[finite], values_b[finite], rtol=rtol, atol=0.0):
                pairs.append((first, second))
    return pairs


def curves_to_csv(curves: Mapping[str, Sequence[SweepPoint]]) -> str:
    """Curves as CSV with columns ``target,factor,value,feasible``."""
    out = io.StringIO()
    out.write("target,factor,value,feasible\n")
    for name in sorted(curves):
        for p in curves[name]:
            out.write(f"{name},{p.factor:.16e},{p.value:.16e},{str(p.feasible).lower()}\n")
    return out.getvalue()
