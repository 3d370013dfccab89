"""Second-order finite-difference reference solver.

Crank-Nicolson in time, central differences in space, Dirichlet ends. The
nonlinear coefficients ``w**mu`` and ``nu * w**delta`` are frozen per step
at the half level, extrapolated from the two previous levels, so every
step is a single tridiagonal solve. This module deliberately depends only
on :mod:`haarburgers.problems`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import CannotCertifyError, ConfigError, DivergenceError
from .problems import ProblemSpec

logger = logging.getLogger(__name__)

MAX_NODES = 2**15
# consecutive growing refinement gaps that count as divergence
MAX_GROWING_GAPS = 3


@dataclass(frozen=True)
class FdGrid:
    """Uniform grid with ``n`` interior nodes on ``[a, b]`` and time step ``dt``."""

    n: int
    a: float
    b: float
    dt: float

    def __post_init__(self):
        if self.n < 3:
            raise ConfigError(f"need at least 3 interior nodes, got {self.n}")
        if not self.b > self.a or not self.dt > 0:
            raise ConfigError("grid needs b > a and dt > 0")

    @classmethod
    def for_spec(cls, spec: ProblemSpec, n: int, dt: float) -> "FdGrid":
        return cls(n, spec.a, spec.b, dt)

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior nodes ``a + i h``, ``i = 1..n``."""
        return self.a + self.h * np.arange(1, self.n + 1)

    @property
    def all_nodes(self) -> np.ndarray:
        """Nodes including both boundary points."""
        return self.a + self.h * np.arange(self.n + 2)


def _ipow(w: np.ndarray, p: int) -> np.ndarray:
    return np.ones_like(w) if p == 0 else w**p


def fd_solve(spec: ProblemSpec, grid: FdGrid, T: float) -> np.ndarray:
    """Values at ``grid.nodes`` at time ``T``.

    ``T - spec.t0`` must be an integer multiple of ``grid.dt``.

    Raises:
        DivergenceError: if the solution stops being finite.
    """
    span = T - spec.t0
    steps = round(span / grid.dt)
    if steps < 1 or abs(steps * grid.dt - span) > 1e-9:
        raise ConfigError(f"T - t0 = {span} is not a positive multiple of dt = {grid.dt}")

    h, dt = grid.h, grid.dt
    x = grid.all_nodes
    w = np.asarray(spec.f(x), dtype=float).copy()
    w[0], w[-1] = spec.f1(spec.t0), spec.f2(spec.t0)
    w_prev = None
    for s in range(1, steps + 1):
        t_new = spec.t0 + s * dt
        # half-level extrapolation keeps the frozen coefficients second order
        ws = w if w_prev is None else 1.5 * w - 0.5 * w_prev
        adv = _ipow(ws[1:-1], spec.mu)
        dif = spec.nu * _ipow(ws[1:-1], spec.delta)

        lo = -adv / (4.0 * h) - dif / (2.0 * h * h)
        di = 1.0 / dt + dif / (h * h)
        up = adv / (4.0 * h) - dif / (2.0 * h * h)
        wc, wl, wr = w[1:-1], w[:-2], w[2:]
        rhs = wc / dt - adv * (wr - wl) / (4.0 * h) + dif * (wr - 2.0 * wc + wl) / (2.0 * h * h)
        left, right = spec.f1(t_new), spec.f2(t_new)
        rhs[0] -= lo[0] * left
        rhs[-1] -= up[-1] * right

        bands = np.zeros((3, grid.n))
        bands[0, 1:] = up[:-1]
        bands[1] = di
        bands[2, :-1] = lo[1:]
        w_new = np.empty_like(w)
        w_new[1:-1] = solve_banded((1, 1), bands, rhs, check_finite=False)
        w_new[0], w_new[-1] = left, right
        if not np.all(np.isfinite(w_new)):
            raise DivergenceError(
                f"finite-difference oracle diverged at step {s} (t={t_new:.6g}, n={grid.n})",
                step=s,
                t=t_new,
            )
        w_prev, w = w, w_new
    return w[1:-1]


def _refinements(spec: ProblemSpec, T: float, n0: int, steps0: int):
    span = T - spec.t0
    n, steps = n0, steps0
    while n <= MAX_NODES:
        yield FdGrid.for_spec(spec, n, span / steps)
        n = 2 * (n + 1) - 1
        steps *= 2


@dataclass(frozen=True)
class OracleResult:
    """Certified oracle values and the grid that produced them."""

    values: np.ndarray
    grid: FdGrid
    refinements: int
    gap: float


def fd_reference(
    spec: ProblemSpec,
    x_star,
    T: float,
    accuracy_target: float,
    *,
    n0: int = 31,
    steps0: int | None = None,
) -> OracleResult:
    """Refine until successive runs agree to ``accuracy_target`` at ``x_star``.

    Grid spacing and time step are halved together, starting from ``n0``
    interior nodes and ``steps0`` steps (default ``n0 + 1``). The finest run
    is linearly interpolated, boundary data included, to the query points.

    Refinement also stops once the gap has grown ``MAX_GROWING_GAPS`` times in
    a row, since a convergent second-order sequence shrinks it about 4x per
    level.

    Raises:
        CannotCertifyError: refinement cap reached, or the refinements diverge.
    """
    if not accuracy_target > 0:
        raise ConfigError("accuracy_target must be positive")
    xq = np.atleast_1d(np.asarray(x_star, dtype=float))
    if steps0 is None:
        steps0 = n0 + 1
    previous = None
    last_gap = np.inf
    growing = 0
    prev_gap = np.inf
    for count, grid in enumerate(_refinements(spec, T, n0, steps0)):
        try:
            inner = fd_solve(spec, grid, T)
        except DivergenceError as exc:
            raise CannotCertifyError(
                f"oracle refinement diverged at n={grid.n}: {exc}"
            ) from exc
        full = np.concatenate(([spec.f1(T)], inner, [spec.f2(T)]))
        values = np.interp(xq, grid.all_nodes, full)
        if previous is not None:
            last_gap = float(np.max(np.abs(values - previous)))
            logger.debug("oracle n=%d dt=%g gap=%.3e", grid.n, grid.dt, last_gap)
            if last_gap <= accuracy_target:
                return OracleResult(values, grid, count, last_gap)
            growing = growing + 1 if last_gap > prev_gap else 0
            if growing >= MAX_GROWING_GAPS:
                raise CannotCertifyError(
                    f"oracle refinements diverge: gap grew {growing} times in a row, "
                    f"reaching {last_gap:.3e} at n={grid.n}"
                )
            prev_gap = last_gap
        previous = values
    raise CannotCertifyError(
        f"oracle could not reach {accuracy_target:g} before n > {MAX_NODES} "
        f"(last refinement gap {last_gap:.3e})"
    )


def fd_reference_at(spec: ProblemSpec, x_star, T: float, accuracy_target: float, **kw):
    """Certified oracle values at physical points ``x_star``; see :func:`fd_reference`."""
    res = fd_reference(spec, x_star, T, accuracy_target, **kw)
    return res.values if np.ndim(x_star) else float(res.values[0])
