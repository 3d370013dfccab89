"""Error norms, convergence studies and the a-priori error bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .haar_basis import build_basis
from .problems import ProblemSpec, evaluate_exact
from .stepper import SolverConfig, run


@dataclass(frozen=True)
class ErrorReport:
    l_inf: float
    l_2: float
    n_points: int
    t: float = math.nan


@dataclass(frozen=True)
class ConvergenceRow:
    """Errors at one resolution level; ratio/order are NaN on the first row."""

    J: int
    l_inf: float
    l_2: float
    ratio_to_previous: float = math.nan
    observed_order: float = math.nan
    K: float = math.nan
    bound: float = math.nan

    @property
    def dx(self) -> float:
        return 1.0 / 2 ** (self.J + 1)


def error_norms(numeric, reference, dx: float, t: float = math.nan) -> ErrorReport:
    """Max norm and ``sqrt(dx * sum(e**2))`` of ``numeric - reference``."""
    u = np.asarray(numeric, dtype=float)
    v = np.asarray(reference, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    e = np.abs(u - v)
    if e.size == 0:
        return ErrorReport(0.0, 0.0, 0, t)
    return ErrorReport(float(e.max()), float(math.sqrt(dx * float(np.sum(e * e)))), e.size, t)


def theoretical_bound(J: int, K: float) -> float:
    """``2K 2**-(5(J+1)/2 + 1) / (1 - 2**-5/2)``, an upper bound on the L2 error."""
    if not K > 0:
        raise ConfigError(f"derivative bound K must be positive, got {K!r}")
    return 2.0 * K * 2.0 ** (-(2.5 * (J + 1) + 1.0)) / (1.0 - 2.0**-2.5)


def run_errors(spec: ProblemSpec, J: int, dt: float, T: float, reference=None) -> tuple[ErrorReport, float]:
    """Solve once and compare with the closed form (or ``reference(x_star)``).

    Returns the error report and ``max |w_x|`` of the final state.
    """
    result = run(spec, SolverConfig(J, dt, T))
    basis = result.basis
    xs = spec.a + spec.L * basis.x
    if reference is None:
        ref = evaluate_exact(spec, xs, T)
    else:
        ref = np.asarray(reference(xs), dtype=float)
    report = error_norms(result.final.w, ref, basis.dx, t=T)
    return report, float(np.max(np.abs(result.final.wx)))


def convergence_study(
    spec: ProblemSpec,
    dt: float,
    T: float,
    J_list: Sequence[int],
    reference=None,
) -> list[ConvergenceRow]:
    """Errors for each level in ``J_list`` with ratios and observed orders.

    Args:
        spec: problem; must have a closed form unless ``reference`` is given.
        dt, T: time step and final time shared by every run.
        J_list: resolution levels, in the order the rows are produced.
        reference: optional callable mapping physical points to reference
            values at ``T`` (e.g. a certified oracle).
    """
    if not J_list:
        raise ConfigError("J_list is empty")
    if reference is None and not spec.has_exact:
        raise ConfigError(f"{spec.name} has no closed form; pass a reference")
    rows: list[ConvergenceRow] = []
    for J in J_list:
        build_basis(J)  # validate before spending time on earlier levels
    prev = None
    for J in J_list:
        rep, K = run_errors(spec, J, dt, T, reference)
        ratio = order = math.nan
        if prev is not None and rep.l_inf > 0:
            ratio = prev.l_inf / rep.l_inf
            order = math.log2(ratio) if ratio > 0 else math.nan
        bound = theoretical_bound(J, K) if K > 0 else math.nan
        row = ConvergenceRow(J, rep.l_inf, rep.l_2, ratio, order, K, bound)
        rows.append(row)
        prev = row
    return rows


def l2_orders(rows: Sequence[ConvergenceRow]) -> list[float]:
    """``log2(e_J / e_{J+1})`` of the L2 column between consecutive rows."""
    return [math.log2(a.l_2 / b.l_2) for a, b in zip(rows, rows[1:])]
