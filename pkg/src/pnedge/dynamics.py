"""Gradient-flow dynamics of the slip-plane displacement.

The overdamped evolution

    ``d_t u1 = -c0 (-d_xx)^{1/2} u1 - W'(u1)``

relaxes the trace toward the static core while the bulk stays slaved to
it (quasi-static half-planes: fields are re-derived from the trace on
demand).  Two integrators share the splitting ``A = c0 (-d_xx)^{1/2} + I``,
``T(v) = v - W'(v + u1*) + W'(u1*)``:

* semi-implicit: stiff linear part implicit, potential force explicit;
* ETD1: exact integrating factor ``e^{-A dt}`` with the Duhamel term
  frozen over the step.

Both have the static solution as an exact fixed point of the discrete
update.  The free energy relative to a reference static profile,

    ``F(v) = (c0/2) |v|^2_{H^1/2} - int v W'(u1*) + int [W(v+u1*) - W(u1*)]``,

decays along trajectories with rate ``Q = int R^2 dx`` (squared residual
of the force balance).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import TimeStepUnderflowError
from .operators import hs_seminorm_grid
from .potential import PotentialSpec, eval_potential
from .profile import Profile
from .static import residual


@dataclass(frozen=True)
class DynamicsState:
    """Trace state at time t; the background of ``p`` is fixed, v evolves."""

    t: float
    p: Profile
    spec: PotentialSpec
    reference: Optional[Profile] = None  # static profile u1* for F, Q and ETD

    def deviation(self) -> np.ndarray:
        """v = u1 - u1* on the grid (requires matching backgrounds)."""
        if self.reference is None:
            raise ValueError("no reference static profile set")
        ref = self.reference
        if ref.zeta_bg != self.p.zeta_bg or ref.x0 != self.p.x0:
            raise ValueError("reference background differs from the state background")
        return self.p.v - ref.v


@dataclass
class DynamicsTrace:
    """Per-accepted-step series of the monitored quantities."""

    times: list = field(default_factory=list)
    F_values: list = field(default_factory=list)
    Q_values: list = field(default_factory=list)
    residual_norms: list = field(default_factory=list)
    dt_history: list = field(default_factory=list)

    def record(self, t, F, Q, res, dt):
        self.times.append(t)
        self.F_values.append(F)
        self.Q_values.append(Q)
        self.residual_norms.append(res)
        self.dt_history.append(dt)

    def as_arrays(self):
        return {k: np.asarray(getattr(self, k), dtype=float)
                for k in ("times", "F_values", "Q_values", "residual_norms", "dt_history")}


@dataclass(frozen=True)
class RunOptions:
    dt: float = 0.1
    adapt: bool = True
    method: str = "semi_implicit"  # or "etd"
    f_increase_tol: Optional[float] = None  # default 1e-10 * G b^2 / d
    max_halvings: int = 20


def free_energy(s: DynamicsState) -> float:
    """F relative to the reference static profile; F(u1*) = 0."""
    if s.reference is None:
        raise ValueError("free energy needs a reference static profile")
    v = s.deviation()
    grid, prm = s.p.grid, s.p.params
    u_star = s.reference.u1
    wp_star = eval_potential(s.spec, u_star, 1)
    quad = 0.5 * prm.c0 * hs_seminorm_grid(grid, v, 0.5)
    lin = -grid.h * float(np.sum(v * wp_star))
    mis = grid.h * float(np.sum(
        eval_potential(s.spec, u_star + v, 0) - eval_potential(s.spec, u_star, 0)
    ))
    return quad + lin + mis


def dissipation_rate(s: DynamicsState) -> float:
    """Q = squared L2 norm of the force-balance residual; nonnegative."""
    r = residual(s.p, s.spec).samples
    return float(s.p.grid.h * np.sum(r * r))


# ---------------------------------------------------------------------------
# single steps
# ---------------------------------------------------------------------------

def semi_implicit_update(v_hat, g_hat, dt, c0, q):
    """Kernel: ``v+ = (v - dt g) / (1 + dt c0 |xi|)`` in Fourier space."""
    return (v_hat - dt * g_hat) / (1.0 + dt * c0 * q)


def etd_update(v_hat, T_hat, dt, c0, q):
    """Kernel: exact integrating factor with T frozen over the step.

    ``v+ = e^{-a dt} v + (1 - e^{-a dt})/a T``, ``a = c0 |xi| + 1 >= 1``.
    """
    a = c0 * q + 1.0
    decay = np.exp(-a * dt)
    return decay * v_hat + (1.0 - decay) / a * T_hat


def step_semi_implicit(s: DynamicsState, dt: float) -> DynamicsState:
    """One semi-implicit step; first order, unconditionally stable in the
    linear part, static profile exactly stationary."""
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    p, prm = s.p, s.p.params
    g = eval_potential(s.spec, p.u1, 1) + prm.c0 * p.half_laplacian_background()
    v_hat = semi_implicit_update(
        np.fft.fft(p.v), np.fft.fft(g), dt, prm.c0, p.grid.q
    )
    return replace(s, t=s.t + dt, p=p.with_correction(np.fft.ifft(v_hat).real))


def step_etd(s: DynamicsState, dt: float) -> DynamicsState:
    """One ETD1 step on the deviation from the reference static profile.

    Exact when the nonlinear remainder T is constant over the step;
    requires ``reference`` (whose background must match the state's).
    """
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    if s.reference is None:
        raise ValueError("ETD stepping requires a reference static profile")
    p, prm = s.p, s.p.params
    v = s.deviation()
    u_star = s.reference.u1
    T = v - eval_potential(s.spec, v + u_star, 1) + eval_potential(s.spec, u_star, 1)
    v_hat = etd_update(np.fft.fft(v), np.fft.fft(T), dt, prm.c0, p.grid.q)
    v_new = np.fft.ifft(v_hat).real + s.reference.v
    return replace(s, t=s.t + dt, p=p.with_correction(v_new))


_STEPPERS = {"semi_implicit": step_semi_implicit, "etd": step_etd}


def run_dynamics(
    s0: DynamicsState, T_end: float, opts: RunOptions | None = None
) -> tuple[DynamicsState, DynamicsTrace]:
    """March to T_end recording F, Q and the residual per accepted step.

    With ``adapt`` on, a step that raises F beyond the tolerance is
    halved and retried (at most ``max_halvings`` times; underflow raises
    :class:`TimeStepUnderflowError` carrying the partial trace).
    """
    if T_end <= 0:
        raise ValueError(f"T_end must be positive, got {T_end}")
    opts = opts or RunOptions()
    stepper = _STEPPERS.get(opts.method)
    if stepper is None:
        raise ValueError(f"unknown method {opts.method!r}")
    prm = s0.p.params
    f_tol = (opts.f_increase_tol if opts.f_increase_tol is not None
             else 1e-10 * prm.G * prm.b**2 / prm.d)
    monitor = s0.reference is not None

    def norms(state):
        r = residual(state.p, state.spec)
        q = float(state.p.grid.h * np.sum(r.samples**2))
        return q, r.linf

    trace = DynamicsTrace()
    s = s0
    F = free_energy(s) if monitor else np.nan
    Q, res_linf = norms(s)
    trace.record(s.t, F, Q, res_linf, 0.0)

    dt = opts.dt
    while s.t < T_end - 1e-12:
        step_dt = min(dt, T_end - s.t)
        accepted = None
        for _ in range(opts.max_halvings + 1):
            cand = stepper(s, step_dt)
            if not monitor or not opts.adapt:
                accepted = cand
                break
            F_new = free_energy(cand)
            if F_new <= F + f_tol:
                accepted = cand
                break
            step_dt *= 0.5
        else:
            raise TimeStepUnderflowError(
                f"time step underflow at t={s.t:.6g} after {opts.max_halvings} halvings",
                trace=trace,
            )
        s = accepted
        dt = min(opts.dt, 2.0 * step_dt)  # regrow gently after any halving
        F = free_energy(s) if monitor else np.nan
        Q, res_linf = norms(s)
        trace.record(s.t, F, Q, res_linf, step_dt)
    return s, trace
