"""Published benchmark settings and their reported errors for this scheme.

Each :class:`TableCell` is one printed number together with everything
needed to recompute it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .problems import ProblemSpec, make_test_problem


@dataclass(frozen=True)
class TableCell:
    table: int
    problem: int
    nu: float
    J: int
    dt: float
    T: float
    norm: str  # "l_inf" or "l_2"
    printed: float
    params: dict = field(default_factory=dict)

    def make_problem(self) -> ProblemSpec:
        return make_test_problem(self.problem, self.nu, **self.params)

    @property
    def run_key(self) -> tuple:
        return (self.problem, self.nu, tuple(sorted(self.params.items())), self.J, self.dt, self.T)


def _cells(table, problem, nu, params, rows):
    return [
        TableCell(table, problem, nu, J, dt, T, norm, value, dict(params))
        for J, dt, T, norm, value in rows
    ]


TABLES: dict[int, list[TableCell]] = {
    1: _cells(1, 1, 0.01, {"c0": 0.5}, [
        (3, 0.01, 2.0, "l_inf", 0.76e-03),
        (3, 0.01, 2.0, "l_2", 0.347e-03),
        (3, 0.01, 4.0, "l_inf", 0.582e-03),
        (3, 0.01, 4.0, "l_2", 0.311e-03),
    ]),
    2: _cells(2, 1, 0.001, {"c0": 0.5}, [
        (4, 0.01, 2.0, "l_inf", 0.2236e-03),
        (4, 0.01, 2.0, "l_2", 0.054998e-03),
        (4, 0.01, 4.0, "l_inf", 0.1823e-03),
        (4, 0.01, 4.0, "l_2", 0.575806e-03),
    ]),
    3: _cells(3, 2, 1.0, {"sigma": 2.0}, [
        (2, 0.001, 0.01, "l_inf", 1.1533e-06),
        (2, 0.001, 0.01, "l_2", 8.18486e-07),
        (2, 0.01, 0.1, "l_inf", 9.9506e-06),
        (2, 0.01, 0.1, "l_2", 7.00077e-06),
        (2, 0.01, 0.2, "l_inf", 1.73036e-05),
        (2, 0.01, 0.2, "l_2", 1.22587e-05),
        (4, 0.001, 0.01, "l_inf", 7.31654e-08),
        (4, 0.001, 0.01, "l_2", 5.12615e-08),
        (4, 0.01, 0.1, "l_inf", 6.26645e-07),
        (4, 0.01, 0.1, "l_2", 4.40074e-07),
        (4, 0.01, 0.2, "l_inf", 1.09634e-06),
        (4, 0.01, 0.2, "l_2", 7.72171e-07),
    ]),
    4: _cells(4, 3, 0.01, {"sigma": 100.0}, [
        (2, 0.01, 1.0, "l_2", 2.52147e-07),
        (2, 0.01, 1.0, "l_inf", 3.58275e-07),
        (3, 0.01, 1.0, "l_2", 6.35077e-08),
        (3, 0.01, 1.0, "l_inf", 9.02969e-08),
        (4, 0.01, 1.0, "l_2", 1.59079e-08),
        (4, 0.01, 1.0, "l_inf", 2.26455e-08),
        (5, 0.01, 1.0, "l_2", 3.98117e-09),
        (5, 0.01, 1.0, "l_inf", 5.66586e-09),
    ]),
}


@dataclass(frozen=True)
class FigureSetting:
    """Profile run behind one figure, with the stated error ceiling if any."""

    figure: int
    problem: int
    nu: float
    J: int
    dt: float
    snapshots: tuple[float, ...]
    params: dict = field(default_factory=dict)
    max_abs_error: float | None = None

    @property
    def T(self) -> float:
        return max(self.snapshots)


# Captions give no snapshot times; the tables' times for the same problem are used.
FIGURES: dict[int, FigureSetting] = {
    1: FigureSetting(1, 1, 0.005, 3, 0.01, (2.0, 4.0), {"c0": 0.5}, 5e-4),
    2: FigureSetting(2, 2, 1.0, 4, 0.001, (0.01,), {"sigma": 1.0}, 1.2e-6),
    3: FigureSetting(3, 3, 0.005, 4, 0.01, (1.0,), {"sigma": 4.0}, 1.0e-6),
    4: FigureSetting(4, 4, 0.005, 4, 0.01, (0.1,), {}, None),
}
