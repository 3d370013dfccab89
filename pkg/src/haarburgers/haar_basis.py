"""Haar wavelets on [0, 1], their repeated integrals and collocation matrices.

Ordinal ``i = 1`` is the scaling function. For ``i >= 2`` the wavelet has
dilation ``m = 2**j`` and translation ``k`` with ``i = m + k + 1`` and is
supported on ``[k/m, (k+1)/m)``.

Example:
    >>> basis = build_basis(1)
    >>> basis.x.tolist()
    [0.125, 0.375, 0.625, 0.875]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigError

MAX_LEVEL = 12


@dataclass(frozen=True)
class WaveletIndex:
    """Dilation/translation data of one Haar wavelet."""

    i: int
    j: int
    m: int
    k: int
    eta1: float
    eta2: float
    eta3: float


def index_from_ordinal(i: int) -> WaveletIndex:
    """Decode ordinal ``i >= 2`` into level, translation and breakpoints.

    Raises:
        ConfigError: if ``i < 2`` (ordinal 1 is the scaling function).
    """
    if int(i) != i or i < 2:
        raise ConfigError(f"invalid wavelet index {i!r}: wavelets start at i=2")
    i = int(i)
    j = (i - 1).bit_length() - 1
    m = 1 << j
    k = i - m - 1
    return WaveletIndex(i, j, m, k, k / m, (k + 0.5) / m, (k + 1) / m)


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("coordinate outside [0, 1]")
    return arr


def _as_output(arr: np.ndarray, x):
    return float(arr) if np.ndim(x) == 0 else arr


def haar_eval(i: int, x):
    """Value of ``h_i`` at ``x`` (scalar or array), half-open branches."""
    xa = _check_x(x)
    if i == 1:
        out = np.where(xa < 1.0, 1.0, 0.0)
    else:
        w = index_from_ordinal(i)
        out = np.where((xa >= w.eta1) & (xa < w.eta2), 1.0, 0.0)
        out = np.where((xa >= w.eta2) & (xa < w.eta3), -1.0, out)
    return _as_output(out, x)


def p_eval(sigma: int, i: int, x):
    """``sigma``-fold integral of ``h_i`` from 0 to ``x``, for ``sigma`` in {1, 2}.

    For the scaling function the integrals are ``x`` and ``x**2 / 2``.
    """
    if sigma not in (1, 2):
        raise ConfigError(f"unsupported integration order {sigma!r}; only 1 and 2")
    xa = _check_x(x)
    if i == 1:
        out = xa.copy() if sigma == 1 else 0.5 * xa * xa
        return _as_output(out, x)
    w = index_from_ordinal(i)
    left = (xa >= w.eta1) & (xa < w.eta2)
    right = (xa >= w.eta2) & (xa < w.eta3)
    out = np.zeros_like(xa)
    if sigma == 1:
        out = np.where(left, xa - w.eta1, out)
        out = np.where(right, w.eta3 - xa, out)
    else:
        top = 1.0 / (4.0 * w.m * w.m)
        out = np.where(left, 0.5 * (xa - w.eta1) ** 2, out)
        out = np.where(right, top - 0.5 * (w.eta3 - xa) ** 2, out)
        out = np.where(xa >= w.eta3, top, out)
    return _as_output(out, x)


def p2_at_one(i: int) -> float:
    """``p_{2,i}(1)``: 1/2 for the scaling function, ``1/(4 m^2)`` otherwise."""
    if i == 1:
        return 0.5
    m = index_from_ordinal(i).m
    return 1.0 / (4.0 * m * m)


@dataclass(frozen=True, eq=False)
class HaarBasis:
    """Collocation grid and precomputed matrices at resolution level ``J``.

    Matrices are indexed ``[point, ordinal - 1]``.

    Attributes:
        J: maximum resolution level.
        M: ``2**J``.
        n: number of basis functions and collocation points, ``2M``.
        x: collocation points ``(k - 0.5) / 2M``.
        H: wavelet values.
        P1: first integrals.
        P2: second integrals.
        p2_one: ``p_{2,i}(1)`` for every ordinal.
        levels: dilation level of every ordinal (0 for the scaling function).
    """

    J: int
    M: int
    n: int
    x: np.ndarray
    H: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    p2_one: np.ndarray
    levels: np.ndarray

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def Q1(self) -> np.ndarray:
        """Columns ``p_{1,i}(x_k) - p_{2,i}(1)``, the first-derivative map."""
        return self.P1 - self.p2_one[None, :]

    @property
    def Q2(self) -> np.ndarray:
        """Columns ``p_{2,i}(x_k) - x_k p_{2,i}(1)``, the value map."""
        return self.P2 - np.outer(self.x, self.p2_one)

    def __repr__(self) -> str:
        return f"HaarBasis(J={self.J}, n={self.n})"


def build_basis(J: int) -> HaarBasis:
    """Build the Haar basis with ``2**(J+1)`` functions and collocation points."""
    if int(J) != J or not 0 <= J <= MAX_LEVEL:
        raise ConfigError(f"resolution level J={J!r} outside [0, {MAX_LEVEL}]")
    J = int(J)
    M = 1 << J
    n = 2 * M
    x = (np.arange(1, n + 1) - 0.5) / n

    H = np.empty((n, n))
    P1 = np.empty((n, n))
    P2 = np.empty((n, n))
    p2_one = np.empty(n)
    levels = np.zeros(n, dtype=int)
    for i in range(1, n + 1):
        H[:, i - 1] = haar_eval(i, x)
        P1[:, i - 1] = p_eval(1, i, x)
        P2[:, i - 1] = p_eval(2, i, x)
        p2_one[i - 1] = p2_at_one(i)
        if i > 1:
            levels[i - 1] = index_from_ordinal(i).j

    for arr in (x, H, P1, P2, p2_one, levels):
        arr.setflags(write=False)
    return HaarBasis(J, M, n, x, H, P1, P2, p2_one, levels)


def expand(samples, basis: HaarBasis) -> np.ndarray:
    """Coefficients ``c`` with ``H @ c == samples`` at the collocation points.

    The columns of ``H`` are mutually orthogonal, so the square solve reduces
    to a scaled transpose product.
    """
    s = np.asarray(samples, dtype=float)
    if s.shape != (basis.n,):
        raise ValueError(f"expected {basis.n} samples, got shape {s.shape}")
    # squared column norms: n / 2**j at level j, n for the scaling function
    norms = basis.n / 2.0 ** basis.levels
    return (basis.H.T @ s) / norms


Which = Literal["value", "first", "second"]


def reconstruct(coeffs, basis: HaarBasis, which: Which, x):
    """Evaluate ``sum_i c_i g_i(x)`` with ``g`` = ``h``, ``p_1`` or ``p_2``."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (basis.n,):
        raise ValueError(f"expected {basis.n} coefficients, got shape {c.shape}")
    if which == "value":
        fn = haar_eval
    elif which == "first":
        fn = lambda i, xx: p_eval(1, i, xx)  # noqa: E731
    elif which == "second":
        fn = lambda i, xx: p_eval(2, i, xx)  # noqa: E731
    else:
        raise ValueError(f"unknown reconstruction mode {which!r}")
    xa = np.asarray(x, dtype=float)
    total = np.zeros_like(xa)
    for i in range(1, basis.n + 1):
        if c[i - 1] != 0.0:
            total = total + c[i - 1] * np.asarray(fn(i, xa))
    return float(total) if np.ndim(x) == 0 else total
