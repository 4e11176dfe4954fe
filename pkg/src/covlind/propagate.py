"""Time evolution of density matrices under static and time-dependent
Liouvillians, with trajectory records and observable series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError, IntegrationError, PositivityError
from .operators import (
    DensityMatrix,
    Superoperator,
    _as_matrix,
    matrix_exp,
    uhlmann_fidelity,
    unvec,
    vec,
)

TRACE_DRIFT_TOL = 1e-8
POSITIVITY_BREACH = 1e-6


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with ``steps`` intervals between t0 and t1."""

    t0: float
    t1: float
    steps: int

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise ContractError("TimeGrid requires t1 > t0")
        if self.steps < 1:
            raise ContractError("TimeGrid requires steps >= 1")

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.steps + 1)

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / self.steps


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.states)


def _check_trace_annihilating(l_mat: np.ndarray, d: int, where: str):
    left = vec(np.eye(d)).conj() @ l_mat
    scale = max(1.0, float(np.max(np.abs(l_mat))))
    if np.max(np.abs(left)) > 1e-10 * scale:
        raise ContractError(f"generator at {where} is not trace-annihilating "
                            f"({np.max(np.abs(left)):.2e})")


def _state_from_vec(y: np.ndarray, d: int, dims, t: float) -> DensityMatrix:
    rho = unvec(y, d)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_DRIFT_TOL:
        raise IntegrationError(f"trace drifted to {tr} at t={t}")
    wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if wmin < -POSITIVITY_BREACH:
        raise PositivityError(
            f"state eigenvalue {wmin:.2e} at t={t}; step too large or invalid generator")
    return DensityMatrix.from_matrix(rho, dims, trace_tol=TRACE_DRIFT_TOL,
                                     herm_tol=1e-9, eig_tol=POSITIVITY_BREACH)


def evolve_static(l_super: Superoperator, rho0: DensityMatrix, grid: TimeGrid) -> Trajectory:
    """Propagate under a constant generator with one exponential per grid.

    Uses the semigroup property: a single step matrix exp(L dt) is applied
    repeatedly.
    """
    d = rho0.data.shape[0]
    if l_super.source_dim != d:
        raise DimensionError("generator dimension does not match the state")
    _check_trace_annihilating(l_super.data, d, "t=const")
    step = matrix_exp(l_super.data * grid.dt)
    y = vec(rho0.data)
    states = [rho0]
    times = grid.times()
    for t in times[1:]:
        y = step @ y
        states.append(_state_from_vec(y, d, rho0.dims, t))
    return Trajectory(times, states, {"mode": "static-expm", "dt": grid.dt})


def _lsuper_matrix(l_of_t, t: float) -> np.ndarray:
    l = l_of_t(t)
    return l.data if isinstance(l, Superoperator) else np.asarray(l, dtype=complex)


def evolve_timedep(l_of_t, rho0: DensityMatrix, grid: TimeGrid,
                   mode: str = "rk4") -> Trajectory:
    """Propagate under a time-dependent generator.

    ``mode='rk4'`` integrates vec(rho) with a fixed-step classical RK4 using
    midpoint evaluations; ``mode='expm'`` uses a piecewise-constant
    exponential at each midpoint.  A step-halving (Richardson-style) error
    estimate from a coarse companion run is stored in
    ``metadata['step_halving_error']``.
    """
    d = rho0.data.shape[0]
    times = grid.times()
    _check_trace_annihilating(_lsuper_matrix(l_of_t, grid.t0), d, f"t={grid.t0}")

    def sweep(ts):
        y = vec(rho0.data)
        out = [y.copy()]
        for i in range(len(ts) - 1):
            t, dt = ts[i], ts[i + 1] - ts[i]
            if mode == "expm":
                lm = _lsuper_matrix(l_of_t, t + dt / 2)
                y = matrix_exp(lm * dt) @ y
            else:
                l1 = _lsuper_matrix(l_of_t, t)
                l2 = _lsuper_matrix(l_of_t, t + dt / 2)
                l3 = _lsuper_matrix(l_of_t, t + dt)
                k1 = l1 @ y
                k2 = l2 @ (y + dt / 2 * k1)
                k3 = l2 @ (y + dt / 2 * k2)
                k4 = l3 @ (y + dt * k3)
                y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            out.append(y.copy())
        return out

    ys = sweep(times)
    coarse = sweep(times[::2]) if grid.steps >= 2 else ys
    err = float(np.max(np.abs(ys[-1] - coarse[-1]))) / 15.0

    states = [rho0]
    for t, y in zip(times[1:], ys[1:]):
        states.append(_state_from_vec(y, d, rho0.dims, t))
    return Trajectory(times, states,
                      {"mode": mode, "dt": grid.dt, "step_halving_error": err})


def expectation_series(traj: Trajectory, ops) -> list:
    """tr(O rho(t)) per grid point for each operator in ``ops``.

    Hermitian observables yield real series; a residual imaginary part
    above 1e-10 raises.
    """
    single = not isinstance(ops, (list, tuple))
    op_list = [ops] if single else list(ops)
    out = []
    for op in op_list:
        om = _as_matrix(op)
        if om.shape[0] != traj.states[0].data.shape[0]:
            raise DimensionError("observable dimension does not match trajectory")
        vals = np.array([np.trace(om @ st.data) for st in traj.states])
        if np.max(np.abs(om - om.conj().T)) <= 1e-12:
            if np.max(np.abs(vals.imag)) > 1e-10:
                raise IntegrationError("Hermitian expectation developed an imaginary part")
            vals = vals.real
        out.append(vals)
    return out[0] if single else out


def fidelity_series(a: Trajectory, b: Trajectory) -> np.ndarray:
    """Pointwise Uhlmann fidelity between two aligned trajectories."""
    if len(a.times) != len(b.times) or np.max(np.abs(a.times - b.times)) > 1e-12:
        raise DimensionError("trajectories are not on the same grid")
    return np.array([uhlmann_fidelity(x, y) for x, y in zip(a.states, b.states)])
