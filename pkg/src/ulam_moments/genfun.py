"""Generating-function routes to the diagonal sum alpha(w, x).

alpha(w, x) = sum_{N,j} A(N, j) x^{2N} w^j is the weighted diagonal of the
kernel-power array. Two independent evaluation routes live here:

 * alpha_series: truncated double sum over a cached table of normalized
   diagonal values A(N, j) / 16^N, with an a posteriori geometric tail
   estimate written back into the truncation record.
 * alpha_contour: the same quantity as a single contour mean over the unit
   circle, using the algebraic square root of the quartic Q1. On |xi| = 1
   the argument of the square root is real and positive, so the trapezoid
   mean converges geometrically in the number of nodes.

The closed-form route (complete elliptic integrals) lives in the companion
elliptic module; tests pin all routes against each other.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import exact_core

# Exact integers feed the table on this sub-rectangle; beyond it the float
# Toeplitz recursion takes over (verified against the exact values to a few
# ulps on overlapping ranges).
EXACT_ROWS = 30
EXACT_COLS = 60

DEFAULT_N_MAX = 90
DEFAULT_J_MAX = 160


def principal_sqrt(z: complex) -> complex:
    """Square root with the cut on the negative real axis mapped to +i*sqrt.

    Identical to the principal branch off the axis; on the negative real
    axis itself the value is +i*sqrt(|z|) regardless of the sign of the
    (zero) imaginary part, which protects callers from -0.0 surprises.
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real >= 0.0:
            return complex(math.sqrt(z.real), 0.0)
        return complex(0.0, math.sqrt(-z.real))
    return cmath.sqrt(z)


def kappa1(x: complex, y: complex) -> complex:
    """1 / (1 - x - y), the ordinary two-variable path kernel."""
    den = 1 - x - y
    if den == 0:
        raise ValueError(f"kappa1 pole at x={x}, y={y}")
    return 1 / den


def kappa2(x: complex, y: complex) -> complex:
    """1 / sqrt((1 - x - y)^2 - 4xy), the squared-kernel diagonal."""
    den = principal_sqrt((1 - x - y) ** 2 - 4 * x * y)
    if den == 0:
        raise ValueError(f"kappa2 branch point at x={x}, y={y}")
    return 1 / den


def kappa(w: complex, x: complex, y: complex) -> complex:
    """1 / (sqrt((1 - x - y)^2 - 4xy) - w), the w-deformed diagonal kernel."""
    den = principal_sqrt((1 - x - y) ** 2 - 4 * x * y) - w
    if den == 0:
        raise ValueError(f"kappa pole at w={w}, x={x}, y={y}")
    return 1 / den


@dataclass
class ContourSpec:
    """Trapezoid contour-mean controls: node doubling from initial_nodes
    until successive levels agree to tol, hard-capped at max_nodes."""

    radius: float = 1.0
    initial_nodes: int = 64
    max_nodes: int = 1 << 18
    tol: float = 1e-12


@dataclass
class SeriesTruncation:
    """Truncation rectangle for alpha_series; tail_bound is filled by the
    call with a measured-ratio geometric estimate of the dropped mass."""

    n_max: int = DEFAULT_N_MAX
    j_max: int = DEFAULT_J_MAX
    tail_bound: float | None = None


def diagonal_extract(f: Callable[[complex], complex], spec: ContourSpec | None = None) -> complex:
    """Mean of f over the circle |xi| = radius, i.e. (1/2 pi i) * closed
    integral of f(xi) dxi / xi.

    This is the constant Fourier coefficient, so for f built from a product
    of power series in xi and 1/xi it extracts the diagonal. Node doubling
    reuses previous evaluations; raises ArithmeticError if the cap is hit
    before two consecutive levels agree.
    """
    if spec is None:
        spec = ContourSpec()
    n = spec.initial_nodes
    r = spec.radius

    def level_sum(count: int, offset: float, step: float) -> complex:
        tot = 0j
        for k in range(count):
            theta = offset + k * step
            tot += f(r * cmath.exp(1j * theta))
        return tot

    step = 2 * math.pi / n
    total = level_sum(n, 0.0, step)
    prev = total / n
    while n < spec.max_nodes:
        # new nodes sit halfway between the old ones
        total += level_sum(n, step / 2, step)
        n *= 2
        step /= 2
        cur = total / n
        if abs(cur - prev) <= spec.tol * (1 + abs(cur)):
            return cur
        prev = cur
    raise ArithmeticError(
        f"contour mean did not converge within {spec.max_nodes} nodes"
    )


def _check_alpha_domain(w: float, x: float) -> None:
    if x < 0 or w < 0:
        raise ValueError(f"alpha needs w >= 0 and x >= 0, got (w={w}, x={x})")
    if 4 * x >= 1:
        raise ValueError(f"alpha needs x < 1/4, got x={x}")
    if w * w >= 1 - 4 * x:
        raise ValueError(
            f"alpha singular at w^2 >= 1 - 4x: got w={w}, x={x}"
        )


_DIAG_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _float_diag_table(n_max: int, j_max: int) -> np.ndarray:
    """tab[N, j] = A(N, j) / 16^N by Toeplitz matrix powers of the scaled
    kernel C(l+m, l)^2 / 4^(l+m). All entries are positive, so the float
    recursion is cancellation-free."""
    n1 = n_max + 1
    that = np.zeros((n1, n1))
    for l in range(n1):
        for m in range(n1):
            that[l, m] = math.comb(l + m, l) ** 2 / 4.0 ** (l + m)
    toeps = []
    for dl in range(n1):
        tp = np.zeros((n1, n1))
        for m in range(n1):
            tp[m, m:] = that[dl, : n1 - m]
        toeps.append(tp)
    K = that.copy()
    out = np.zeros((n1, j_max + 1))
    out[:, 0] = np.diag(K)
    for j in range(1, j_max + 1):
        knew = np.zeros_like(K)
        for dl in range(n1):
            knew[dl:, :] += K[: n1 - dl, :] @ toeps[dl]
        K = knew
        out[:, j] = np.diag(K)
    return out


def diag_table(n_max: int, j_max: int) -> np.ndarray:
    """Cached normalized table, exact-integer entries on the small
    sub-rectangle and float recursion beyond it."""
    key = (n_max, j_max)
    cached = _DIAG_CACHE.get(key)
    if cached is not None:
        return cached
    tab = _float_diag_table(n_max, j_max)
    ne = min(n_max, EXACT_ROWS)
    je = min(j_max, EXACT_COLS)
    exact = exact_core.ensure_table(ne, je)
    for N in range(ne + 1):
        scale = 16**N
        for j in range(je + 1):
            tab[N, j] = exact.a(N, j) / scale
    _DIAG_CACHE[key] = tab
    return tab


def _geom_tail(last: float, ratio: float) -> float:
    if last == 0.0:
        return 0.0
    if ratio >= 0.97:
        return math.inf
    return last * ratio / (1 - ratio)


def alpha_series(w: float, x: float, trunc: SeriesTruncation | None = None) -> float:
    """Truncated double sum over the normalized diagonal table.

    Row N contributes (16 x^2)^N * sum_j tab[N, j] w^j. When a truncation
    record is supplied, its tail_bound field receives the sum of two
    measured-ratio geometric estimates (row tail in N, column tail in j).
    """
    _check_alpha_domain(w, x)
    if trunc is None:
        trunc = SeriesTruncation()
    if trunc.n_max < 1 or trunc.j_max < 1:
        raise ValueError("truncation needs n_max >= 1 and j_max >= 1")
    tab = diag_table(trunc.n_max, trunc.j_max)
    ws = w ** np.arange(trunc.j_max + 1)
    rows = tab @ ws
    base = (16.0 * x * x) ** np.arange(trunc.n_max + 1)
    shells = rows * base
    total = float(shells.sum())

    n_tail = 0.0
    if shells[-2] > 0:
        n_tail = _geom_tail(float(shells[-1]), float(shells[-1] / shells[-2]))
    j_tail = 0.0
    if w > 0:
        last_col = tab[:, -1] * w ** trunc.j_max * base
        prev_col = tab[:, -2] * w ** (trunc.j_max - 1) * base
        for lc, pc in zip(last_col, prev_col):
            if pc > 0:
                j_tail += _geom_tail(float(lc), float(lc / pc))
    trunc.tail_bound = n_tail + j_tail
    return total


def alpha_contour(w: float, x: float, spec: ContourSpec | None = None) -> float:
    """alpha as the contour mean of 1 / (sqrt(Q1(x, xi) / xi^2) - w) on
    |xi| = 1, where Q1 is the spectral quartic.

    On the unit circle Q1/xi^2 = (1 - 2x cos(theta))^2 - 4x^2 is real and
    positive for x < 1/4, so the square root is smooth there and the
    trapezoid mean converges geometrically. The imaginary part of the mean
    must vanish to 1e-10 or the evaluation is rejected.
    """
    _check_alpha_domain(w, x)
    from .elliptic_engine import q1_eval

    def f(xi: complex) -> complex:
        return 1 / (principal_sqrt(q1_eval(x, xi) / (xi * xi)) - w)

    val = diagonal_extract(f, spec)
    if abs(val.imag) >= 1e-10:
        raise ArithmeticError(
            f"contour mean has non-vanishing imaginary part {val.imag:.3e}"
        )
    return val.real
