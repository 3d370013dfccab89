"""Generalized Burgers problem instances and the four benchmark problems.

The PDE is ``w_t + w**mu w_x = nu w**delta w_xx`` on ``[a, b]`` with
Dirichlet data ``w(a, t) = f1(t)``, ``w(b, t) = f2(t)`` and ``w(x, t0) = f(x)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import ConfigError, NoExactSolutionError
from .haar_basis import HaarBasis

ScalarFn = Callable[[float], float]
ProfileFn = Callable[[np.ndarray], np.ndarray]
ExactFn = Callable[[np.ndarray, float], np.ndarray]

CORNER_TOL = 1e-10
FD_STEP = 1e-6
FD_STEP_2 = 1e-3


def _zero(t: float) -> float:
    return 0.0


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """One instance of the generalized Burgers equation.

    ``f``, ``fx`` and ``fxx`` take physical coordinates. ``exact`` takes
    ``(x_star, t)``. ``params`` holds the named problem constants.
    """

    mu: int
    delta: int
    nu: float
    a: float
    b: float
    t0: float
    f: ProfileFn
    f1: ScalarFn = _zero
    f2: ScalarFn = _zero
    fx: ProfileFn | None = None
    fxx: ProfileFn | None = None
    exact: ExactFn | None = None
    params: dict = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        for label, p in (("mu", self.mu), ("delta", self.delta)):
            if int(p) != p or p < 0:
                raise ConfigError(f"{label} must be a nonnegative integer, got {p!r}")
        if self.mu + self.delta < 1:
            raise ConfigError("mu + delta must be at least 1")
        if not self.nu > 0:
            raise ConfigError(f"viscosity nu must be positive, got {self.nu!r}")
        if not self.b > self.a:
            raise ConfigError(f"empty domain [{self.a}, {self.b}]")
        ends = np.array([self.a, self.b], dtype=float)
        fa, fb = np.asarray(self.f(ends), dtype=float)
        gap = max(abs(fa - self.f1(self.t0)), abs(fb - self.f2(self.t0)))
        if gap > CORNER_TOL:
            warnings.warn(
                f"{self.name}: initial data and boundary data disagree at the "
                f"corners by {gap:.3e}",
                stacklevel=3,
            )

    @property
    def L(self) -> float:
        return self.b - self.a

    @property
    def has_exact(self) -> bool:
        return self.exact is not None


def _tp1(nu: float, c0: float) -> ProblemSpec:
    # w = (x/t) g with g = 1 / (1 + (sqrt(t)/c0) exp(x^2 / (4 nu t))) = expit(-z)
    def parts(x, t):
        x = np.asarray(x, dtype=float)
        q1 = x / (2.0 * nu * t)
        z = x * x / (4.0 * nu * t) + 0.5 * math.log(t) - math.log(c0)
        g = expit(-z)
        one_minus_g = expit(z)
        return x, q1, g, one_minus_g

    def exact(x, t):
        x, _, g, _ = parts(x, t)
        return x / t * g

    def wx(x, t):
        x, q1, g, gc = parts(x, t)
        dg = -q1 * g * gc
        return g / t + x / t * dg

    def wxx(x, t):
        x, q1, g, gc = parts(x, t)
        dg = -q1 * g * gc
        d2g = -g * gc / (2.0 * nu * t) - q1 * dg * (gc - g)
        return 2.0 * dg / t + x / t * d2g

    t0 = 1.0
    return ProblemSpec(
        mu=2, delta=0, nu=nu, a=0.0, b=1.0, t0=t0,
        f=lambda x: exact(x, t0),
        fx=lambda x: wx(x, t0),
        fxx=lambda x: wxx(x, t0),
        exact=exact,
        params={"c0": c0},
        name="TP1",
    )


def _tp2(nu: float, sigma: float) -> ProblemSpec:
    # numerator and denominator divided through by exp(1/nu)
    em = math.exp(-1.0 / nu)
    one_m = -math.expm1(-1.0 / nu)

    def den(t):
        return one_m * t + sigma * em

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        return (em - np.exp((x - 1.0) / nu) + one_m * x) / den(t)

    def wx(x, t):
        x = np.asarray(x, dtype=float)
        return (one_m - np.exp((x - 1.0) / nu) / nu) / den(t)

    def wxx(x, t):
        x = np.asarray(x, dtype=float)
        return -np.exp((x - 1.0) / nu) / (nu * nu) / den(t)

    return ProblemSpec(
        mu=1, delta=1, nu=nu, a=0.0, b=1.0, t0=0.0,
        f=lambda x: exact(x, 0.0),
        fx=lambda x: wx(x, 0.0),
        fxx=lambda x: wxx(x, 0.0),
        exact=exact,
        params={"sigma": sigma},
        name="TP2",
    )


def _tp3(nu: float, sigma: float) -> ProblemSpec:
    pi = math.pi

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        e = math.exp(-pi * pi * nu * t)
        return 2.0 * pi * nu * e * np.sin(pi * x) / (sigma + e * np.cos(pi * x))

    def wx(x, t):
        x = np.asarray(x, dtype=float)
        e = math.exp(-pi * pi * nu * t)
        d = sigma + e * np.cos(pi * x)
        return 2.0 * pi * pi * nu * e * (sigma * np.cos(pi * x) + e) / (d * d)

    def wxx(x, t):
        x = np.asarray(x, dtype=float)
        e = math.exp(-pi * pi * nu * t)
        c, s = np.cos(pi * x), np.sin(pi * x)
        d = sigma + e * c
        return 2.0 * pi**3 * nu * e * s * (sigma * e * c + 2.0 * e * e - sigma * sigma) / d**3

    return ProblemSpec(
        mu=1, delta=0, nu=nu, a=0.0, b=1.0, t0=0.0,
        f=lambda x: exact(x, 0.0),
        fx=lambda x: wx(x, 0.0),
        fxx=lambda x: wxx(x, 0.0),
        exact=exact,
        params={"sigma": sigma},
        name="TP3",
    )


def _tp4(nu: float) -> ProblemSpec:
    pi = math.pi
    return ProblemSpec(
        mu=2, delta=1, nu=nu, a=0.0, b=5.0, t0=0.0,
        f=lambda x: np.sin(pi * np.asarray(x, dtype=float)),
        fx=lambda x: pi * np.cos(pi * np.asarray(x, dtype=float)),
        fxx=lambda x: -pi * pi * np.sin(pi * np.asarray(x, dtype=float)),
        name="TP4",
    )


def make_test_problem(
    problem_id: int,
    nu: float,
    *,
    c0: float | None = None,
    sigma: float | None = None,
) -> ProblemSpec:
    """Build benchmark problem 1-4.

    Problem 1 needs ``0 < c0 < 1``, problem 2 needs ``sigma > 0`` and
    problem 3 needs ``sigma > 1``. Problem 4 takes no extra parameter.
    """
    if not (isinstance(nu, (int, float)) and nu > 0):
        raise ConfigError(f"viscosity nu must be positive, got {nu!r}")
    nu = float(nu)
    if problem_id == 1:
        if c0 is None or not 0.0 < c0 < 1.0:
            raise ConfigError(f"problem 1 requires 0 < c0 < 1, got c0={c0!r}")
        return _tp1(nu, float(c0))
    if problem_id == 2:
        if sigma is None or not sigma > 0.0:
            raise ConfigError(f"problem 2 requires sigma > 0, got sigma={sigma!r}")
        return _tp2(nu, float(sigma))
    if problem_id == 3:
        if sigma is None or not sigma > 1.0:
            raise ConfigError(f"problem 3 requires sigma > 1, got sigma={sigma!r}")
        return _tp3(nu, float(sigma))
    if problem_id == 4:
        return _tp4(nu)
    raise ConfigError(f"unknown test problem {problem_id!r}; expected 1-4")


def evaluate_exact(spec: ProblemSpec, x_star, t: float):
    """Closed-form solution at physical coordinate(s) ``x_star`` and time ``t``."""
    if spec.exact is None:
        raise NoExactSolutionError(f"{spec.name} has no closed-form solution")
    xa = np.asarray(x_star, dtype=float)
    slack = 1e-12 * spec.L
    if np.any(xa < spec.a - slack) or np.any(xa > spec.b + slack):
        raise ValueError(f"x_star outside [{spec.a}, {spec.b}]")
    if t < spec.t0:
        raise ValueError(f"t={t} precedes the initial time {spec.t0}")
    out = np.asarray(spec.exact(xa, t), dtype=float)
    return float(out) if np.ndim(x_star) == 0 else out


def _fd_first(f: ProfileFn, x: np.ndarray, h: float, a: float, b: float) -> np.ndarray:
    out = (f(x + h) - f(x - h)) / (2.0 * h)
    lo, hi = x - h < a, x + h > b
    if lo.any():
        xs = x[lo]
        out[lo] = (-3.0 * f(xs) + 4.0 * f(xs + h) - f(xs + 2 * h)) / (2.0 * h)
    if hi.any():
        xs = x[hi]
        out[hi] = (3.0 * f(xs) - 4.0 * f(xs - h) + f(xs - 2 * h)) / (2.0 * h)
    return out


def _fd_second(f: ProfileFn, x: np.ndarray, h: float, a: float, b: float) -> np.ndarray:
    # five-point stencil; second-order one-sided stencils near the ends
    out = (
        -f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)
    ) / (12.0 * h * h)
    lo, hi = x - 2 * h < a, x + 2 * h > b
    if lo.any():
        xs = x[lo]
        out[lo] = (2.0 * f(xs) - 5.0 * f(xs + h) + 4.0 * f(xs + 2 * h) - f(xs + 3 * h)) / (h * h)
    if hi.any():
        xs = x[hi]
        out[hi] = (2.0 * f(xs) - 5.0 * f(xs - h) + 4.0 * f(xs - 2 * h) - f(xs - 3 * h)) / (h * h)
    return out


def sample_initial(spec: ProblemSpec, basis: HaarBasis):
    """Initial ``(w, w_x, w_xx)`` at the collocation points.

    Derivatives are taken with respect to the mapped coordinate
    ``x = (x_star - a) / L``. Analytic derivatives are used when the problem
    provides them, finite differences otherwise.
    """
    L = spec.L
    xs = spec.a + L * basis.x
    f = lambda z: np.asarray(spec.f(z), dtype=float)  # noqa: E731
    w = f(xs).copy()
    if spec.fx is not None:
        wx = np.asarray(spec.fx(xs), dtype=float)
    else:
        wx = _fd_first(f, xs, FD_STEP * L, spec.a, spec.b)
    if spec.fxx is not None:
        wxx = np.asarray(spec.fxx(xs), dtype=float)
    else:
        wxx = _fd_second(f, xs, FD_STEP_2 * L, spec.a, spec.b)
    return w, L * wx, L * L * wxx
