"""Deterministic fixed-step integration of the coupled system.

Classical RK4 is the production scheme; forward Euler is kept alongside as an
independent low-order cross-check. After every step each coordinate is
projected back onto [0, 1]: the exact dynamics leave the cube invariant, so
only rounding-scale overshoot is legitimate and anything larger aborts the
run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import BlowupError, EnvParams, GamePair, SystemState, TrustMatrix, make_rhs

METHODS = ("rk4", "euler")


@dataclass(frozen=True)
class IntegratorSettings:
    """Fixed-step integration controls.

    Convergence is declared once the sup norm of the derivative stays below
    eps_stationary for hold_time consecutive time units. States are recorded
    every record_every steps plus the final state.
    """

    dt: float = 0.01
    t_max: float = 500.0
    record_every: int = 10
    eps_stationary: float = 1e-8
    hold_time: float = 1.0
    projection_tolerance: float = 1e-9

    def __post_init__(self):
        for name in ("dt", "t_max", "eps_stationary", "hold_time", "projection_tolerance"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.t_max < self.dt:
            raise ValueError(f"t_max={self.t_max!r} must be at least dt={self.dt!r}")
        if not isinstance(self.record_every, int) or self.record_every < 1:
            raise ValueError(f"record_every must be a positive integer, got {self.record_every!r}")
        if self.eps_stationary <= 0.0:
            raise ValueError(f"eps_stationary must be positive, got {self.eps_stationary!r}")
        if self.hold_time < 0.0:
            raise ValueError(f"hold_time must be nonnegative, got {self.hold_time!r}")
        if self.projection_tolerance <= 0.0:
            raise ValueError(
                f"projection_tolerance must be positive, got {self.projection_tolerance!r}"
            )


@dataclass(frozen=True)
class DerivedSample:
    """Per-sample payoffs and protocol rates.

    u1 and u2 are the pure-strategy payoffs under the replicator's
    opinion-interpolated matrix, u_avg their population average; p12 and p21
    are the clamped imitation rates under the scenario's protocol matrix.
    """

    u1: float
    u2: float
    u_avg: float
    p12: float
    p21: float


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered samples of a single deterministic run."""

    times: tuple[float, ...]
    states: tuple[SystemState, ...]
    derived: tuple[DerivedSample, ...]
    converged: bool
    t_converged: float | None

    @property
    def terminal(self) -> SystemState:
        return self.states[-1]


def _project(value: float, tol: float, component: str, t: float | None):
    if value < 0.0:
        if value < -tol:
            raise BlowupError(
                f"component {component} overshot the cube by {-value:.3e}"
                + (f" at t={t:g}" if t is not None else "")
                + "; reduce dt",
                component=component,
                t=t,
            )
        return 0.0
    if value > 1.0:
        if value > 1.0 + tol:
            raise BlowupError(
                f"component {component} overshot the cube by {value - 1.0:.3e}"
                + (f" at t={t:g}" if t is not None else "")
                + "; reduce dt",
                component=component,
                t=t,
            )
        return 1.0
    return value


def _check_stage(kx: float, kn: float, ky: float, t: float | None) -> None:
    for component, value in (("x", kx), ("n", kn), ("y", ky)):
        if not math.isfinite(value):
            raise BlowupError(
                f"non-finite derivative in component {component}"
                + (f" at t={t:g}" if t is not None else ""),
                component=component,
                t=t,
            )


def _rk4_raw(f, x, n, y, dt, k1, t=None):
    """One unprojected RK4 update; k1 is the already-evaluated derivative at
    (x, n, y)."""
    k1x, k1n, k1y = k1[0], k1[1], k1[2]
    _check_stage(k1x, k1n, k1y, t)
    h2 = 0.5 * dt
    k2 = f(x + h2 * k1x, n + h2 * k1n, y + h2 * k1y)
    k2x, k2n, k2y = k2[0], k2[1], k2[2]
    _check_stage(k2x, k2n, k2y, t)
    k3 = f(x + h2 * k2x, n + h2 * k2n, y + h2 * k2y)
    k3x, k3n, k3y = k3[0], k3[1], k3[2]
    _check_stage(k3x, k3n, k3y, t)
    k4 = f(x + dt * k3x, n + dt * k3n, y + dt * k3y)
    k4x, k4n, k4y = k4[0], k4[1], k4[2]
    _check_stage(k4x, k4n, k4y, t)
    s = dt / 6.0
    return (
        x + s * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        n + s * (k1n + 2.0 * k2n + 2.0 * k3n + k4n),
        y + s * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )


def _euler_raw(x, n, y, dt, k1, t=None):
    k1x, k1n, k1y = k1[0], k1[1], k1[2]
    _check_stage(k1x, k1n, k1y, t)
    return (x + dt * k1x, n + dt * k1n, y + dt * k1y)


def rk4_step(state: SystemState, pair: GamePair, env: EnvParams, trust: TrustMatrix,
             dt: float, protocol_matrix_mode: str = "env",
             projection_tolerance: float = 1e-9) -> SystemState:
    """One classical fourth-order step of the coupled system, then cube
    projection."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    f = make_rhs(pair, env, trust, protocol_matrix_mode)
    k1 = f(state.x, state.n, state.y)
    nx, nn, ny = _rk4_raw(f, state.x, state.n, state.y, dt, k1)
    return SystemState(
        _project(nx, projection_tolerance, "x", None),
        _project(nn, projection_tolerance, "n", None),
        _project(ny, projection_tolerance, "y", None),
    )


def euler_step(state: SystemState, pair: GamePair, env: EnvParams, trust: TrustMatrix,
               dt: float, protocol_matrix_mode: str = "env",
               projection_tolerance: float = 1e-9) -> SystemState:
    """One forward-Euler step, then cube projection; the low-order oracle for
    cross-checking rk4_step."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    f = make_rhs(pair, env, trust, protocol_matrix_mode)
    k1 = f(state.x, state.n, state.y)
    nx, nn, ny = _euler_raw(state.x, state.n, state.y, dt, k1)
    return SystemState(
        _project(nx, projection_tolerance, "x", None),
        _project(nn, projection_tolerance, "n", None),
        _project(ny, projection_tolerance, "y", None),
    )


def simulate(scenario, method: str = "rk4") -> Trajectory:
    """Integrate a scenario until t_max or stationarity.

    Stationarity: the sup norm of the derivative stays below
    settings.eps_stationary for settings.hold_time consecutive time units;
    the time at which the hold completes is reported as t_converged. The run
    is fully deterministic: identical inputs produce bit-identical
    trajectories.

    Raises BlowupError, with the partial trajectory attached, if the state
    overshoots the cube by more than settings.projection_tolerance or any
    derivative turns non-finite.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    st = scenario.settings
    dt = st.dt
    tol = st.projection_tolerance
    f = make_rhs(scenario.pair, scenario.env, scenario.trust, scenario.protocol_matrix_mode)

    x, n, y = scenario.initial.x, scenario.initial.n, scenario.initial.y
    for name, value in (("x", x), ("n", n), ("y", y)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"initial {name}={value!r} outside [0, 1]")

    n_steps = int(math.floor(st.t_max / dt + 1e-9))
    hold_steps = int(math.ceil(st.hold_time / dt - 1e-9)) if st.hold_time > 0.0 else 0
    use_rk4 = method == "rk4"
    eps = st.eps_stationary
    record_every = st.record_every

    times: list[float] = []
    states: list[SystemState] = []
    derived: list[DerivedSample] = []

    def record(t, x, n, y, ev):
        times.append(t)
        states.append(SystemState(x, n, y))
        derived.append(DerivedSample(ev[3], ev[4], x * ev[3] + (1.0 - x) * ev[4], ev[5], ev[6]))

    def partial_trajectory():
        return Trajectory(tuple(times), tuple(states), tuple(derived), False, None)

    cur = f(x, n, y)
    record(0.0, x, n, y, cur)
    streak = 1 if max(abs(cur[0]), abs(cur[1]), abs(cur[2])) < eps else 0
    converged = streak > hold_steps
    t_converged = 0.0 if converged else None
    k = 0
    last_recorded = 0

    while k < n_steps and not converged:
        t_prev = k * dt
        try:
            if use_rk4:
                nx, nn, ny = _rk4_raw(f, x, n, y, dt, cur, t_prev)
            else:
                nx, nn, ny = _euler_raw(x, n, y, dt, cur, t_prev)
            x = nx if 0.0 <= nx <= 1.0 else _project(nx, tol, "x", t_prev)
            n = nn if 0.0 <= nn <= 1.0 else _project(nn, tol, "n", t_prev)
            y = ny if 0.0 <= ny <= 1.0 else _project(ny, tol, "y", t_prev)
        except BlowupError as err:
            err.t = t_prev
            err.partial = partial_trajectory()
            raise
        k += 1
        t = k * dt
        cur = f(x, n, y)
        if max(abs(cur[0]), abs(cur[1]), abs(cur[2])) < eps:
            streak += 1
        else:
            streak = 0
        if k % record_every == 0:
            record(t, x, n, y, cur)
            last_recorded = k
        if streak > hold_steps:
            converged = True
            t_converged = t
    if last_recorded != k:
        record(k * dt, x, n, y, cur)

    return Trajectory(tuple(times), tuple(states), tuple(derived), converged, t_converged)
