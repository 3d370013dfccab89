"""Time stepping with the Haar collocation / quasilinearization scheme.

Each step linearizes the nonlinear terms about the previous time level,
averages advection and diffusion between the two levels, and expands the
new second derivative in Haar wavelets. Integrating twice and imposing the
Dirichlet data gives the first derivative and the solution, so a single
dense ``2M x 2M`` solve per step yields ``w``, ``w_x`` and ``w_xx``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import ConfigError, DivergenceError, SingularSystemError
from .haar_basis import HaarBasis, build_basis, reconstruct
from .problems import ProblemSpec, sample_initial

logger = logging.getLogger(__name__)

TIME_TOL = 1e-9
PIVOT_TOL = 1e-13


@dataclass(frozen=True)
class SolverConfig:
    """Resolution level, time step and final time of a run."""

    J: int
    dt: float
    T: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"time step dt must be positive, got {self.dt!r}")

    def n_steps(self, t0: float) -> int:
        """Number of steps from ``t0`` to ``T``; ``T - t0`` must be a multiple of ``dt``."""
        span = self.T - t0
        if not span > 0:
            raise ConfigError(f"final time T={self.T} must exceed t0={t0}")
        n = round(span / self.dt)
        if n < 1 or abs(n * self.dt - span) > TIME_TOL:
            raise ConfigError(
                f"T - t0 = {span} is not an integer multiple of dt = {self.dt}"
            )
        return n


@dataclass
class SolutionState:
    """Collocation values at one time level (derivatives in the mapped coordinate)."""

    t: float
    w: np.ndarray
    wx: np.ndarray
    wxx: np.ndarray
    coeffs: np.ndarray = field(default_factory=lambda: np.empty(0))


@dataclass
class LinearSystem:
    A: np.ndarray
    rhs: np.ndarray


@dataclass
class RunResult:
    """Outcome of :func:`run`: final state, requested snapshots and the basis used."""

    final: SolutionState
    snapshots: list[SolutionState]
    basis: HaarBasis
    spec: ProblemSpec


def _ipow(w: np.ndarray, p: int) -> np.ndarray:
    # w**0 == 1 everywhere, including w == 0
    if p == 0:
        return np.ones_like(w)
    out = w.copy()
    for _ in range(p - 1):
        out = out * w
    return out


def _coefficients(state: SolutionState, spec: ProblemSpec, dt: float):
    """Row-wise factors of the linearized equation at the collocation points.

    Returns ``(diff, adv, G, base_rhs)`` where the linearized operator on the
    new level reads ``diff * w_xx - adv * w_x + G * w`` and ``base_rhs`` is
    its right-hand side before boundary lifting.
    """
    w, wx, wxx = state.w, state.wx, state.wxx
    mu, de = spec.mu, spec.delta
    alpha = spec.nu * dt / (2.0 * spec.L**2)
    beta = dt / (2.0 * spec.L)
    w_mu = _ipow(w, mu)
    w_de = _ipow(w, de)

    G = -np.ones_like(w)
    # explicit mu/delta factors drop the term entirely when zero
    if de:
        G = G + alpha * de * _ipow(w, de - 1) * wxx
    if mu:
        G = G - beta * mu * _ipow(w, mu - 1) * wx

    diff = alpha * w_de
    adv = beta * w_mu
    base_rhs = -w + beta * (1 - mu) * w_mu * wx - alpha * (1 - de) * w_de * wxx
    return diff, adv, G, base_rhs


def assemble_system(
    state: SolutionState,
    spec: ProblemSpec,
    basis: HaarBasis,
    dt: float,
    t_next: float,
) -> LinearSystem:
    """Collocation system for the wavelet coefficients of the next level."""
    for arr in (state.w, state.wx, state.wxx):
        if not np.all(np.isfinite(arr)):
            raise DivergenceError(
                f"non-finite solution values at t={state.t:.6g}", t=state.t
            )
    diff, adv, G, base_rhs = _coefficients(state, spec, dt)
    g1, g2 = spec.f1(t_next), spec.f2(t_next)
    jump = g2 - g1
    x = basis.x

    A = diff[:, None] * basis.H - adv[:, None] * basis.Q1 + G[:, None] * basis.Q2
    rhs = base_rhs + adv * jump - G * (x * jump + g1)
    return LinearSystem(A, rhs)


def solve_dense(system: LinearSystem, t: float | None = None) -> np.ndarray:
    """LU with partial pivoting; rejects numerically singular matrices."""
    A = np.asarray(system.A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = np.abs(A).sum(axis=1).max() if A.size else 0.0
    with warnings.catch_warnings():
        # singularity is reported below with the time level attached
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=True)
    pivot = np.abs(np.diag(lu)).min()
    if scale == 0.0 or pivot < PIVOT_TOL * scale:
        where = "" if t is None else f" at t={t:.6g}"
        raise SingularSystemError(
            f"singular collocation system{where} (pivot {pivot:.3e}, norm {scale:.3e})",
            t=t,
        )
    return lu_solve((lu, piv), np.asarray(system.rhs, dtype=float))


def reconstruct_state(
    coeffs: np.ndarray, spec: ProblemSpec, basis: HaarBasis, t: float
) -> SolutionState:
    """``w``, ``w_x``, ``w_xx`` at the collocation points from coefficients at time ``t``."""
    g1, g2 = spec.f1(t), spec.f2(t)
    jump = g2 - g1
    wxx = basis.H @ coeffs
    wx = basis.Q1 @ coeffs + jump
    w = basis.Q2 @ coeffs + basis.x * jump + g1
    return SolutionState(t, w, wx, wxx, coeffs)


def evaluate_state(
    state: SolutionState,
    spec: ProblemSpec,
    basis: HaarBasis,
    x,
    derivative: int = 0,
):
    """Reconstructed solution (or its 1st/2nd mapped derivative) at mapped ``x``.

    Unlike ``state.w`` this works anywhere in ``[0, 1]``, including the ends.
    """
    c = state.coeffs
    if c.size != basis.n:
        raise ValueError("state carries no wavelet coefficients (initial state?)")
    g1, g2 = spec.f1(state.t), spec.f2(state.t)
    jump = g2 - g1
    tail = float(c @ basis.p2_one)
    xa = np.asarray(x, dtype=float)
    if derivative == 0:
        out = reconstruct(c, basis, "second", xa) - xa * tail + xa * jump + g1
    elif derivative == 1:
        out = reconstruct(c, basis, "first", xa) - tail + jump
    elif derivative == 2:
        out = reconstruct(c, basis, "value", xa)
    else:
        raise ValueError(f"derivative order must be 0, 1 or 2, got {derivative!r}")
    return float(out) if np.ndim(x) == 0 else np.asarray(out)


def advance(
    state: SolutionState, spec: ProblemSpec, basis: HaarBasis, dt: float
) -> SolutionState:
    """One step from ``state.t`` to ``state.t + dt``."""
    t_next = state.t + dt
    system = assemble_system(state, spec, basis, dt, t_next)
    coeffs = solve_dense(system, t=t_next)
    return reconstruct_state(coeffs, spec, basis, t_next)


def initial_state(spec: ProblemSpec, basis: HaarBasis) -> SolutionState:
    w, wx, wxx = sample_initial(spec, basis)
    return SolutionState(spec.t0, w, wx, wxx)


def run(
    spec: ProblemSpec,
    config: SolverConfig,
    snapshot_times=(),
    basis: HaarBasis | None = None,
) -> RunResult:
    """Integrate from ``spec.t0`` to ``config.T``.

    Args:
        spec: problem instance.
        config: resolution, time step and final time.
        snapshot_times: times at which to keep a copy of the state; each
            must land on a step boundary. ``spec.t0`` yields the initial state.
        basis: prebuilt basis to share across runs; must match ``config.J``.

    Raises:
        ConfigError: bad configuration or snapshot time off the step grid.
        DivergenceError: non-finite values, carrying the step index.
        SingularSystemError: singular collocation system.
    """
    n = config.n_steps(spec.t0)
    if basis is None:
        basis = build_basis(config.J)
    elif basis.J != config.J:
        raise ConfigError(f"basis level {basis.J} does not match config J={config.J}")

    wanted = {}
    for ts in snapshot_times:
        k = round((ts - spec.t0) / config.dt)
        if k < 0 or k > n or abs(spec.t0 + k * config.dt - ts) > TIME_TOL:
            raise ConfigError(
                f"snapshot time {ts} is not on the step grid t0 + k*dt within [t0, T]"
            )
        wanted[k] = ts

    state = initial_state(spec, basis)
    snapshots = []
    if 0 in wanted:
        snapshots.append(state)
    for step in range(1, n + 1):
        try:
            state = advance(state, spec, basis, config.dt)
        except DivergenceError as exc:
            raise DivergenceError(
                f"divergence before step {step}: {exc}", step=step, t=exc.t
            ) from exc
        # pin the clock to the grid to avoid drift from repeated addition
        state.t = spec.t0 + step * config.dt
        if not (
            np.all(np.isfinite(state.w))
            and np.all(np.isfinite(state.wx))
            and np.all(np.isfinite(state.wxx))
        ):
            raise DivergenceError(
                f"non-finite values after step {step} (t={state.t:.6g})",
                step=step,
                t=state.t,
            )
        if step in wanted:
            snapshots.append(state)
    logger.debug("%s: %d steps at J=%d, dt=%g", spec.name, n, config.J, config.dt)
    return RunResult(state, snapshots, basis, spec)


def linearized_residual(
    prev: SolutionState, new: SolutionState, spec: ProblemSpec, dt: float
) -> np.ndarray:
    """Residual of the linearized equation for ``new`` linearized about ``prev``."""
    diff, adv, G, base_rhs = _coefficients(prev, spec, dt)
    lhs = diff * new.wxx - adv * new.wx + G * new.w
    return lhs - base_rhs
