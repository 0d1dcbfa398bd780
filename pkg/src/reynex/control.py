"""Scalar control inequality for the distance to the true solution.

The certified Sobolev distance r(t) between the truncated expansion and
the true flow obeys

    r' <= -r + R*(G*D_n(t) + K*D_{n+1}(t))*r + R*G*r**2 + eps_n(t),
    r(0) = 0,

with D the growth estimators, eps the truncation-error estimator, and
G, K the pairing/bilinear Sobolev constants.  Integrating the equality
version gives a dominating radius: if it stays bounded and decays up to
the horizon, the true solution exists globally at that Reynolds number;
a finite-time divergence of the control variable is reported as a
blow-up of the bound (of the certificate, not of the flow).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .norms import EstimatorBundle, FrozenBundle


class Classification(enum.Enum):
    GLOBAL = "Global"
    BLOWUP = "BlowUp"
    INCONCLUSIVE = "Inconclusive"

    @property
    def exit_code(self) -> int:
        return {"Global": 0, "BlowUp": 2, "Inconclusive": 3}[self.value]


@dataclass
class ControlParams:
    """Inputs of one control-equation integration."""

    reynolds: float
    bundle: EstimatorBundle
    pairing_constant: float = 0.438  # G_n: |<bilinear(v,w)|w>_n| <= G ||v||_n ||w||_n^2
    bilinear_constant: float = 0.323  # K_n: ||bilinear(v,w)||_n <= K ||v||_n ||w||_{n+1}
    t_max: float = 50.0
    blowup_cap: float = 1e8
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    decay_threshold: float = 1e-6
    refine_cap_factor: float = 100.0
    sample_count: int = 2001


@dataclass
class ControlSolution:
    """A solved control trajectory plus its classification."""

    params: ControlParams
    scaled: bool
    classification: Classification
    times: np.ndarray
    values: np.ndarray
    blowup_time: Optional[float] = None
    blowup_uncertainty: Optional[float] = None
    diagnostics: Dict = field(default_factory=dict)
    _interpolant: Optional[Callable] = None

    def at(self, t: float) -> float:
        """Dense-output value of the control variable at time t."""
        if self._interpolant is None:
            raise ValueError("no dense interpolant stored")
        t_end = self.times[-1]
        if not 0.0 <= t <= t_end:
            raise ValueError(f"t={t} outside solved range [0, {t_end}]")
        return float(self._interpolant(t)[0])


def classify(sol: ControlSolution) -> Classification:
    return sol.classification


def _make_rhs(params: ControlParams, frozen: FrozenBundle, scaled: bool):
    r = params.reynolds
    g = params.pairing_constant
    k = params.bilinear_constant
    if scaled:
        quad = g * r ** (frozen.expansion_order + 2)
        eps = frozen.error_scaled
    else:
        quad = g * r
        eps = frozen.error

    def rhs(t, y):
        v = y[0]
        linear = r * (g * frozen.norm_n(t) + k * frozen.norm_next(t)) - 1.0
        return [linear * v + quad * v * v + eps(t)]

    return rhs


def _integrate(params: ControlParams, rhs, cap: float, rel_tol: float, abs_tol: float):
    def hit_cap(t, y):
        return y[0] - cap

    hit_cap.terminal = True
    hit_cap.direction = 1.0

    return solve_ivp(
        rhs,
        (0.0, params.t_max),
        [0.0],
        method="RK45",
        rtol=rel_tol,
        atol=abs_tol,
        dense_output=True,
        events=[hit_cap],
    )


def _solve(params: ControlParams, scaled: bool) -> ControlSolution:
    frozen = params.bundle.frozen(params.reynolds)
    rhs = _make_rhs(params, frozen, scaled)

    result = _integrate(params, rhs, params.blowup_cap, params.rel_tol, params.abs_tol)
    diagnostics = {
        "nfev": int(result.nfev),
        "solver_status": int(result.status),
        "solver_message": str(result.message),
        "steps": int(len(result.t) - 1),
    }

    blowup_time = None
    blowup_uncertainty = None
    if result.status == 1:  # terminal event: cap crossed
        t_first = float(result.t_events[0][0])
        # refine: higher cap and tighter tolerance move the crossing
        # time by at most the tail of the divergence
        refined = _integrate(
            params,
            rhs,
            params.blowup_cap * params.refine_cap_factor,
            params.rel_tol * 1e-2,
            params.abs_tol * 1e-2,
        )
        if refined.status == 1:
            t_second = float(refined.t_events[0][0])
        else:  # step underflow past the cap; last time reached is the estimate
            t_second = float(refined.t[-1])
        quad = params.pairing_constant * params.reynolds
        tail = 1.0 / (quad * params.blowup_cap * params.refine_cap_factor)
        blowup_time = t_second
        blowup_uncertainty = abs(t_second - t_first) + tail
        classification = Classification.BLOWUP
        result = refined if refined.status == 1 else result
        diagnostics["refined_nfev"] = int(refined.nfev)
    elif result.status == 0:  # reached the horizon
        y_end = float(result.y[0, -1])
        slope = rhs(params.t_max, [y_end])[0]
        diagnostics["value_at_horizon"] = y_end
        diagnostics["slope_at_horizon"] = slope
        if y_end < params.decay_threshold and slope <= 0.0:
            classification = Classification.GLOBAL
        else:
            classification = Classification.INCONCLUSIVE
    else:  # integration failure: step size underflow counts as divergence
        y_end = float(result.y[0, -1])
        if y_end > 0.01 * params.blowup_cap:
            classification = Classification.BLOWUP
            blowup_time = float(result.t[-1])
            quad = params.pairing_constant * max(params.reynolds, 1e-300)
            blowup_uncertainty = 1.0 / (quad * max(y_end, 1.0))
        else:
            classification = Classification.INCONCLUSIVE
        diagnostics["value_at_failure"] = y_end

    t_end = float(result.t[-1])
    times = np.linspace(0.0, t_end, params.sample_count)
    values = result.sol(times)[0]
    return ControlSolution(
        params,
        scaled,
        classification,
        times,
        values,
        blowup_time=blowup_time,
        blowup_uncertainty=blowup_uncertainty,
        diagnostics=diagnostics,
        _interpolant=result.sol,
    )


def solve_control(params: ControlParams) -> ControlSolution:
    """Integrate the control equation for the certified radius."""
    return _solve(params, scaled=False)


def solve_scaled_control(params: ControlParams) -> ControlSolution:
    """Integrate the R**-(N+1)-scaled control equation.

    The scaled variable stays order one as R -> 0 (the raw radius
    carries an R**(N+1) prefactor); thresholds apply to the scaled
    variable, and consumers rescale explicitly.
    """
    return _solve(params, scaled=True)


@dataclass
class CriticalResult:
    """Bisection bracket for the critical Reynolds number."""

    lower: float
    upper: float
    resolution: float
    evaluations: List[Tuple[float, Classification, float]]
    aborted: Optional[str] = None


def _classify_at(
    make_params: Callable[[float], ControlParams],
    reynolds: float,
    max_horizon_doublings: int,
    evaluations: List[Tuple[float, Classification, float]],
) -> Classification:
    params = make_params(reynolds)
    sol = solve_control(params)
    doublings = 0
    while (
        sol.classification is Classification.INCONCLUSIVE
        and doublings < max_horizon_doublings
    ):
        params = replace(params, t_max=params.t_max * 2.0)
        sol = solve_control(params)
        doublings += 1
    evaluations.append((reynolds, sol.classification, params.t_max))
    return sol.classification


def find_critical(
    make_params: Callable[[float], ControlParams],
    lo: float,
    hi: float,
    resolution: float,
    max_horizon_doublings: int = 4,
) -> CriticalResult:
    """Bisect the Global/BlowUp boundary down to the given bracket width.

    `make_params` builds the integration parameters for a given
    Reynolds number (the estimator bundle itself is R-independent and
    can be shared).  The endpoints must classify as Global (lo) and
    BlowUp (hi) or the bracket premise is wrong and a ValueError is
    raised; a midpoint that stays Inconclusive after the allowed
    horizon doublings aborts the narrowing and returns the bracket
    reached so far, with the abort reason recorded on the result.
    """
    if not (0.0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    evaluations: List[Tuple[float, Classification, float]] = []

    c_lo = _classify_at(make_params, lo, max_horizon_doublings, evaluations)
    if c_lo is not Classification.GLOBAL:
        raise ValueError(
            f"lower endpoint R={lo} classifies as {c_lo.value}, not global; "
            "classifications are not monotone on the requested bracket"
        )
    c_hi = _classify_at(make_params, hi, max_horizon_doublings, evaluations)
    if c_hi is not Classification.BLOWUP:
        raise ValueError(
            f"upper endpoint R={hi} classifies as {c_hi.value}, not blowup; "
            "classifications are not monotone on the requested bracket"
        )

    aborted = None
    # relative slack so a bracket already at the requested width terminates
    # even when the float subtraction lands a few ulps above it
    while hi - lo > resolution * (1.0 + 1e-9):
        mid = 0.5 * (lo + hi)
        c_mid = _classify_at(make_params, mid, max_horizon_doublings, evaluations)
        if c_mid is Classification.GLOBAL:
            lo = mid
        elif c_mid is Classification.BLOWUP:
            hi = mid
        else:
            aborted = (
                f"classification at R={mid} stayed inconclusive after "
                f"{max_horizon_doublings} horizon doublings"
            )
            break
    return CriticalResult(lo, hi, resolution, evaluations, aborted=aborted)
