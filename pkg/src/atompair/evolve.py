"""Time evolution of the master equation with a fixed-step RK4 integrator.

The step size is tied to the fastest frequency in the generator,
``h = min(step_cap, 0.01 / omega_max)`` with
``omega_max = max(|delta|, Omega, |chi|, gamma)``: the generator is stiff at
small distances where |chi| >> gamma, and bounding h by the largest frequency
bounds the per-step phase error.  Output states are produced by stepping
exactly onto each requested sample time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._backend import backend_name, propagate_samples
from .errors import InvariantViolationError, StepBudgetError, StepUnderflowError
from .liouville import Liouvillian
from .states import dicke_populations_batch, validate_density_matrix, vec

#: The integrator step never exceeds STEP_SCALE / omega_max.
STEP_SCALE = 1e-2

# Physicality tolerances enforced along trajectories.
TRAJ_TRACE_TOL = 1e-9
TRAJ_HERM_TOL = 1e-9
TRAJ_EIG_FLOOR = -1e-8


@dataclass(frozen=True)
class IntegratorSettings:
    """Fixed-step RK4 control parameters.

    ``step_cap`` is the user ceiling on the step (units 1/gamma); the
    effective step is further reduced by the generator's fastest frequency.
    ``max_steps`` bounds the total work of a single evolution.
    """

    step_cap: float = 1e-2
    max_steps: int = 50_000_000

    def __post_init__(self) -> None:
        if not (self.step_cap > 0.0 and math.isfinite(self.step_cap)):
            raise ValueError(f"step_cap must be positive, got {self.step_cap!r}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps!r}")


DEFAULT_SETTINGS = IntegratorSettings()


def step_size(liouv: Liouvillian, settings: IntegratorSettings = DEFAULT_SETTINGS) -> float:
    """Effective RK4 step for this generator under the given settings."""
    return min(settings.step_cap, STEP_SCALE / liouv.omega_max)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the master equation."""

    times: np.ndarray   # (n,), monotonically non-decreasing
    states: np.ndarray  # (n, 4, 4) complex density matrices

    @cached_property
    def populations(self) -> np.ndarray:
        """Dicke populations at each sample, shape (n, 4) ordered (e, s, a, g)."""
        return dicke_populations_batch(self.states)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.times)


def _plan_segments(
    times: np.ndarray, h: float, max_steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """Split [0, times[-1]] into per-sample segments of RK4 steps.

    Each segment from the previous sample time to the next is covered by
    ``ceil(span / h)`` equal steps, so every sample time is hit exactly.
    """
    starts = np.concatenate(([0.0], times[:-1]))
    spans = times - starts
    steps = np.zeros(len(times), dtype=np.int64)
    positive = spans > 0.0
    steps[positive] = np.ceil(spans[positive] / h - 1e-12).astype(np.int64)
    steps[positive] = np.maximum(steps[positive], 1)
    seg_h = np.zeros(len(times), dtype=float)
    seg_h[positive] = spans[positive] / steps[positive]
    # A step that cannot advance the clock would silently freeze the solution.
    stuck = positive & (starts + seg_h == starts)
    if np.any(stuck):
        t_bad = float(starts[stuck][0])
        raise StepUnderflowError(
            f"step {float(seg_h[stuck][0]):.3e} underflows at t={t_bad:.6g}; "
            "the requested sampling is finer than float64 time resolution"
        )
    total = int(steps.sum())
    if total > max_steps:
        raise StepBudgetError(
            f"evolution needs {total} RK4 steps (step {h:.3e}), exceeding the "
            f"budget of {max_steps}; raise max_steps or shorten the evolution"
        )
    return steps, seg_h


def evolve(
    rho0: np.ndarray,
    liouv: Liouvillian,
    duration: float,
    settings: IntegratorSettings = DEFAULT_SETTINGS,
    *,
    samples: int = 201,
    sample_times: np.ndarray | None = None,
    check: bool = True,
) -> Trajectory:
    """Propagate ``rho0`` under the generator for ``duration`` (units 1/gamma).

    Samples are taken at ``sample_times`` (must be non-decreasing, within
    [0, duration], ending exactly at ``duration``) or at ``samples`` uniform
    times including both endpoints.  With ``check=True`` every returned state
    is validated against the trajectory physicality tolerances and a breach
    aborts with a diagnostic rather than being repaired.
    """
    if not (duration > 0.0 and math.isfinite(duration)):
        raise ValueError(f"duration must be positive and finite, got {duration!r}")
    rho0 = validate_density_matrix(np.asarray(rho0, dtype=complex), context="initial state")

    if sample_times is None:
        times = np.linspace(0.0, duration, samples)
    else:
        times = np.asarray(sample_times, dtype=float)
        if times.ndim != 1 or len(times) == 0:
            raise ValueError("sample_times must be a non-empty 1-d array")
        if np.any(np.diff(times) < 0.0) or times[0] < 0.0:
            raise ValueError("sample_times must be non-decreasing and non-negative")
        if not np.isclose(times[-1], duration, rtol=0.0, atol=1e-12 * max(1.0, duration)):
            raise ValueError(
                f"last sample time {times[-1]!r} must equal duration {duration!r}"
            )

    h = step_size(liouv, settings)
    seg_steps, seg_h = _plan_segments(times, h, settings.max_steps)
    flat = propagate_samples(
        np.ascontiguousarray(liouv.matrix),
        vec(rho0),
        seg_steps,
        seg_h,
    )
    # Column-stacked 16-vectors back to matrices: nth row -> 4x4 in F order.
    states = np.transpose(flat.reshape(-1, 4, 4), (0, 2, 1)).copy()

    if check:
        check_physicality(times, states)
    return Trajectory(times=times, states=states)


def check_physicality(times: np.ndarray, states: np.ndarray) -> None:
    """Validate a batch of states against the trajectory tolerances.

    Raises :class:`InvariantViolationError` naming the first offending time
    and metric.
    """
    traces = np.einsum("nii->n", states)
    trace_dev = np.abs(traces - 1.0)
    herm_dev = np.abs(states - np.conj(np.transpose(states, (0, 2, 1)))).max(axis=(1, 2))
    min_eigs = np.linalg.eigvalsh(states).min(axis=1)

    for dev, tol, metric in (
        (trace_dev, TRAJ_TRACE_TOL, "trace"),
        (herm_dev, TRAJ_HERM_TOL, "hermiticity"),
    ):
        if np.any(dev > tol):
            k = int(np.argmax(dev > tol))
            raise InvariantViolationError(
                f"trajectory {metric} deviation {float(dev[k]):.3e} exceeds "
                f"{tol:.1e} at t={float(times[k]):.6g}",
                time=float(times[k]),
                metric=metric,
                value=float(dev[k]),
            )
    if np.any(min_eigs < TRAJ_EIG_FLOOR):
        k = int(np.argmax(min_eigs < TRAJ_EIG_FLOOR))
        raise InvariantViolationError(
            f"trajectory minimum eigenvalue {float(min_eigs[k]):.3e} below "
            f"{TRAJ_EIG_FLOOR:.1e} at t={float(times[k]):.6g}",
            time=float(times[k]),
            metric="positivity",
            value=float(min_eigs[k]),
        )


__all__ = [
    "IntegratorSettings",
    "DEFAULT_SETTINGS",
    "Trajectory",
    "evolve",
    "check_physicality",
    "step_size",
    "backend_name",
    "STEP_SCALE",
    "TRAJ_TRACE_TOL",
    "TRAJ_HERM_TOL",
    "TRAJ_EIG_FLOOR",
]
