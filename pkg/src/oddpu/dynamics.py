"""Equations of motion on the jet phase space and their propagation.

The model's (2n+1)-order equation of motion is realized as a linear
first-order system ``du/dt = M u`` on the jet vector of all derivatives.
Linear flows are propagated exactly by fitting modal amplitudes; nonlinear
(deformed) flows use a fixed-step classical RK4 integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectrum import FrequencySpectrum, elementary_sigma


class IntegrationError(RuntimeError):
    """Raised when a vector field turns non-finite during integration."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


def jet_index(s: int, i: int) -> int:
    """Index of x_i^{(s)} in the jet vector; derivative-major, i in {1, 2}."""
    return 2 * s + (i - 1)


@dataclass(frozen=True)
class PhaseState:
    """Jet vector u (length 4n+2, layout ``jet_index``) at time t."""

    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 1 or u.size < 6 or (u.size - 2) % 4 != 0:
            raise ValueError("jet vector must have length 4n+2 for some n >= 1")
        if not np.all(np.isfinite(u)):
            raise ValueError("jet vector entries must be finite")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return (self.u.size - 2) // 4

    def component(self, i: int) -> np.ndarray:
        """Derivative stack (x_i, x_i', ..., x_i^{(2n)}) of one component."""
        return self.u[(i - 1)::2]


def companion_matrix(spec: FrequencySpectrum) -> np.ndarray:
    """Matrix M with du/dt = M u equivalent to the (2n+1)-order EOM.

    Shift rows move each derivative slot up one order; the top-order rows
    implement x_i^{(2n+1)} = -sum_k sigma_k x_i^{(2k+1)}.
    """
    n = spec.n
    dim = spec.jet_dim
    M = np.zeros((dim, dim))
    for i in (1, 2):
        for s in range(2 * n):
            M[jet_index(s, i), jet_index(s + 1, i)] = 1.0
        for k in range(n):
            M[jet_index(2 * n, i), jet_index(2 * k + 1, i)] = -elementary_sigma(spec, k)
    return M


def _basis_derivatives(spec: FrequencySpectrum, tau: float, smax: int) -> np.ndarray:
    """B[s, j] = s-th time derivative, at tau, of the j-th basis function
    of the solution space {1, cos(w_k t), sin(w_k t)}."""
    d = 2 * spec.n + 1
    B = np.zeros((smax + 1, d))
    B[0, 0] = 1.0
    for k, w in enumerate(spec.omegas):
        c, s = np.cos(w * tau), np.sin(w * tau)
        cos_cycle = (c, -s, -c, s)
        sin_cycle = (s, c, -s, -c)
        for sder in range(smax + 1):
            f = w ** sder
            B[sder, 2 * k + 1] = f * cos_cycle[sder % 4]
            B[sder, 2 * k + 2] = f * sin_cycle[sder % 4]
    return B


class ModalSolution:
    """Closed-form solution of the linear EOM through a given state.

    The 2n+1 amplitudes per spatial component are fitted once against the
    initial derivative stack; evaluation at any time is then exact per mode.
    """

    def __init__(self, spec: FrequencySpectrum, state: PhaseState):
        if state.n != spec.n:
            raise ValueError("state dimension does not match spectrum")
        self.spec = spec
        self.t0 = state.t
        d = 2 * spec.n + 1
        B0 = _basis_derivatives(spec, 0.0, d - 1)
        rhs = np.column_stack([state.component(1), state.component(2)])
        self.amps = np.linalg.solve(B0, rhs)

    def derivatives(self, t: float, smax: int) -> np.ndarray:
        """Derivative stacks up to order smax at absolute time t; (smax+1, 2)."""
        Bt = _basis_derivatives(self.spec, t - self.t0, smax)
        return Bt @ self.amps

    def eval(self, t: float) -> PhaseState:
        stacks = self.derivatives(t, 2 * self.spec.n)
        u = np.empty(self.spec.jet_dim)
        u[0::2] = stacks[:, 0]
        u[1::2] = stacks[:, 1]
        return PhaseState(u, t)


def exact_propagate(spec: FrequencySpectrum, state: PhaseState, t: float) -> PhaseState:
    """Exact solution of the linear EOM at time state.t + t."""
    return ModalSolution(spec, state).eval(state.t + t)


def rk4_step(field, state: PhaseState, h: float) -> PhaseState:
    """One classical fourth-order Runge-Kutta step; local error O(h^5).

    ``field(t, u)`` returns du/dt.
    """
    if h <= 0.0:
        raise ValueError("step size must be positive")
    t, u = state.t, state.u
    k1 = field(t, u)
    k2 = field(t + h / 2, u + (h / 2) * k1)
    k3 = field(t + h / 2, u + (h / 2) * k2)
    k4 = field(t + h, u + h * k3)
    for k in (k1, k2, k3, k4):
        if not np.all(np.isfinite(k)):
            raise IntegrationError("non-finite vector field near t=%g" % t, t=t)
    return PhaseState(u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4), t + h)


def modal_flow(spec: FrequencySpectrum, state: PhaseState):
    """Flow callable backed by a single modal fit through ``state``.

    Fitting once and evaluating per grid time avoids accumulating
    round-off over long trajectories.
    """
    sol = ModalSolution(spec, state)

    def flow(_state, t):
        return sol.eval(t)

    return flow


def rk4_flow(field, h: float):
    """Flow callable advancing by fixed RK4 steps of size <= h."""

    def flow(state, t):
        span = t - state.t
        if span == 0.0:
            return state
        steps = max(1, int(np.ceil(span / h - 1e-12)))
        dt = span / steps
        for _ in range(steps):
            state = rk4_step(field, state, dt)
        return PhaseState(state.u, t)  # pin t against step round-off

    return flow


@dataclass(frozen=True)
class TrajectoryTable:
    """Sampled states and named observable values along a flow."""

    times: np.ndarray
    states: np.ndarray          # (len(times), 4n+2)
    observable_names: tuple
    observable_values: np.ndarray  # (len(times), len(names))

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("time grid must be strictly increasing")


def trajectory(flow, state: PhaseState, grid, observables=()) -> TrajectoryTable:
    """Tabulate a flow on a strictly increasing grid starting at state.t.

    ``observables`` is a sequence of (name, QuadraticObservable) pairs,
    evaluated from the same state row they annotate.
    """
    grid = np.asarray(grid, dtype=float)
    names = tuple(name for name, _ in observables)
    if grid.size == 0:
        dim = state.u.size
        return TrajectoryTable(grid, np.empty((0, dim)), names, np.empty((0, len(names))))
    if abs(grid[0] - state.t) > 1e-12:
        raise ValueError("grid must start at the state's time")
    rows = [state.u.copy()]
    current = state
    for t in grid[1:]:
        current = flow(current, t)
        rows.append(current.u.copy())
    states = np.array(rows)
    values = np.empty((grid.size, len(names)))
    for col, (_, obs) in enumerate(observables):
        values[:, col] = [obs.value(u) for u in states]
    return TrajectoryTable(grid, states, names, values)
