"""Arbitrary-precision combinatorics behind the increasing-subsequence moments.

Everything here is exact: integers are Python ints (arbitrary precision) and
rationals are ``fractions.Fraction`` (always reduced, positive denominator).
Floats never appear; the numeric layers live in ``genfun`` and
``elliptic_engine``.

The central objects are the kernel T(l, m) = C(l+m, l)^2, its truncated
(j+1)-fold 2D convolution K(L, M, j), the triangular array A(N, j) = K(N, N, j),
the weight B(N, j) = C(N, j)/j!, and the exact second moment

    E[Z_{n,k}^2] = sum_{i=0}^{k} A(k-i, i) * B(n, 2k-i)

for the number Z_{n,k} of increasing length-k subsequences of a uniform random
permutation of size n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

ExactInt = int
ExactRational = Fraction

__all__ = [
    "ExactInt",
    "ExactRational",
    "MomentTriangle",
    "a_array",
    "a_array_direct",
    "b_coefficient",
    "bell_polynomial",
    "binomial",
    "check_square_identity",
    "elementary_from_power_sums",
    "falling_factorial",
    "first_moment",
    "k_array",
    "kernel",
    "multinomial",
    "second_moment",
]


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer; 0 when k is outside 0..n.

    The out-of-range-gives-zero convention is load-bearing: the moment and
    bracket sums index past their support and rely on those terms vanishing.
    Negative n is a caller bug, not a convention.
    """
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def multinomial(n: int, parts: Sequence[int]) -> int:
    """n!/(p1! * ... * pm!) when all parts are >= 0 and sum to n, else 0."""
    if len(parts) == 0:
        raise ValueError("multinomial needs a nonempty parts list")
    if any(p < 0 for p in parts) or sum(parts) != n:
        return 0
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def falling_factorial(z: Fraction | int, n: int) -> Fraction:
    """(z)_n = z (z-1) ... (z-n+1), with (z)_0 = 1."""
    if n < 0:
        raise ValueError(f"falling_factorial needs n >= 0, got n={n}")
    z = Fraction(z)
    out = Fraction(1)
    for k in range(n):
        out *= z - k
    return out


def bell_polynomial(r: int, x: Sequence[Fraction | int]) -> Fraction:
    """Normalized partition polynomial B_r of the weights x_1..x_r.

    Defined by B_0 = 1 and the recurrence

        B_r = (1/r) * sum_{m=1}^{r} (-1)^m * (x_m / (m-1)!) * B_{r-m}.

    The defining property (and the oracle the tests use) is the specialization
    B_r(-0!*z, -1!*z, ..., -(r-1)!*z) = (z)_r / r! for every z.
    """
    if r < 0:
        raise ValueError(f"bell_polynomial needs r >= 0, got r={r}")
    if len(x) < r:
        raise ValueError(f"bell_polynomial needs at least r={r} weights, got {len(x)}")
    vals = [Fraction(1)]
    for rr in range(1, r + 1):
        acc = Fraction(0)
        for m in range(1, rr + 1):
            sign = -1 if m % 2 else 1
            acc += sign * Fraction(x[m - 1]) / factorial(m - 1) * vals[rr - m]
        vals.append(acc / rr)
    return vals[r]


def elementary_from_power_sums(r: int, indicator_sum: Fraction | int) -> Fraction:
    """Elementary symmetric function e_r of 0/1 variables with common power sum Z.

    For indicator variables every power sum equals their count Z, and
    e_r = C(Z, r) = (Z)_r / r!. Computed through the partition-polynomial
    route (weights x_m = -(m-1)! * Z) so it independently cross-checks
    ``falling_factorial``.
    """
    if r < 0:
        raise ValueError(f"elementary_from_power_sums needs r >= 0, got r={r}")
    z = Fraction(indicator_sum)
    weights = [-factorial(m - 1) * z for m in range(1, r + 1)]
    return bell_polynomial(r, weights)


def b_coefficient(n: int, j: int) -> Fraction:
    """B(N, j) = C(N, j)/j!, zero when j > N."""
    if j < 0 or j > n:
        return Fraction(0)
    return Fraction(binomial(n, j), factorial(j))


def kernel(l: int, m: int) -> int:
    """Convolution kernel T(l, m) = C(l+m, l)^2."""
    return comb(l + m, l) ** 2


def k_array(L: int, M: int, j: int) -> int:
    """K(L, M, j): (j+1)-fold truncated 2D self-convolution of the kernel.

    Equals the sum over all pairs of compositions (l_0..l_j) of L and
    (m_0..m_j) of M of the product of T(l_r, m_r). Computed by dynamic
    programming: j repeated truncated convolutions, O(j * L^2 * M^2)
    exact-integer multiplications, instead of the exponential literal
    enumeration (kept as ``a_array_direct`` for cross-checking).
    """
    if L < 0 or M < 0 or j < 0:
        raise ValueError(f"k_array needs nonnegative arguments, got ({L},{M},{j})")
    T = [[kernel(l, m) for m in range(M + 1)] for l in range(L + 1)]
    K = [row[:] for row in T]
    for _ in range(j):
        K = _convolve_truncated(K, T, L, M)
    return K[L][M]


def _convolve_truncated(
    K: list[list[int]], T: list[list[int]], L: int, M: int
) -> list[list[int]]:
    out = [[0] * (M + 1) for _ in range(L + 1)]
    for a in range(L + 1):
        for b in range(M + 1):
            s = 0
            for l in range(a + 1):
                Krow = K[l]
                Trow = T[a - l]
                for m in range(b + 1):
                    s += Krow[m] * Trow[b - m]
            out[a][b] = s
    return out


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def a_array_direct(N: int, j: int) -> int:
    """A(N, j) by literal double-composition enumeration. Slow oracle.

    Exponential in j; guarded to the desk sizes the cross-check suite uses.
    """
    if N > 6 or j > 6:
        raise ValueError(f"a_array_direct is an oracle for N,j <= 6, got ({N},{j})")
    ls = list(_compositions(N, j + 1))
    total = 0
    for l_tuple in ls:
        for m_tuple in ls:
            prod = 1
            for l, m in zip(l_tuple, m_tuple):
                prod *= kernel(l, m)
            total += prod
    return total


@dataclass
class MomentTriangle:
    """Dense exact table of A(N, j) for 0 <= N <= n_max, 0 <= j <= j_max.

    ``entries[N][j]`` holds A(N, j). When ``keep_layers`` was requested at
    build time, ``layers[j]`` retains the full intermediate K(., ., j) grid.
    Build once, read from anywhere: construction is single-writer and the
    finished table is immutable by convention.
    """

    n_max: int
    j_max: int
    entries: list[list[int]]
    layers: list[list[list[int]]] | None = field(default=None, repr=False)

    @classmethod
    def build(cls, n_max: int, j_max: int, keep_layers: bool = False) -> "MomentTriangle":
        if n_max < 0 or j_max < 0:
            raise ValueError(f"table sizes must be nonnegative, got ({n_max},{j_max})")
        n1 = n_max + 1
        T = [[kernel(l, m) for m in range(n1)] for l in range(n1)]
        K = [row[:] for row in T]
        entries = [[0] * (j_max + 1) for _ in range(n1)]
        layers: list[list[list[int]]] | None = [] if keep_layers else None
        for N in range(n1):
            entries[N][0] = K[N][N]
        if layers is not None:
            layers.append([row[:] for row in K])
        for j in range(1, j_max + 1):
            K = _convolve_truncated(K, T, n_max, n_max)
            for N in range(n1):
                entries[N][j] = K[N][N]
            if layers is not None:
                layers.append([row[:] for row in K])
        return cls(n_max=n_max, j_max=j_max, entries=entries, layers=layers)

    def a(self, N: int, j: int) -> int:
        if not (0 <= N <= self.n_max and 0 <= j <= self.j_max):
            raise ValueError(
                f"A({N},{j}) outside table bounds ({self.n_max},{self.j_max})"
            )
        return self.entries[N][j]

    def to_csv(self) -> str:
        lines = ["N,j,A"]
        for N in range(self.n_max + 1):
            for j in range(self.j_max + 1):
                lines.append(f"{N},{j},{self.entries[N][j]}")
        return "\n".join(lines) + "\n"


DEFAULT_N_MAX = 30
DEFAULT_J_MAX = 60

_TABLE: MomentTriangle | None = None


def ensure_table(n_max: int = DEFAULT_N_MAX, j_max: int = DEFAULT_J_MAX) -> MomentTriangle:
    """Return the shared exact table, growing it if the request is larger."""
    global _TABLE
    if _TABLE is None or _TABLE.n_max < n_max or _TABLE.j_max < j_max:
        grow_n = max(n_max, _TABLE.n_max if _TABLE else 0)
        grow_j = max(j_max, _TABLE.j_max if _TABLE else 0)
        _TABLE = MomentTriangle.build(grow_n, grow_j)
    return _TABLE


def a_array(N: int, j: int) -> int:
    """A(N, j) = K(N, N, j) from the shared exact table, grown on demand."""
    if N < 0 or j < 0:
        raise ValueError(f"a_array needs nonnegative arguments, got ({N},{j})")
    if _TABLE is not None and N <= _TABLE.n_max and j <= _TABLE.j_max:
        return _TABLE.a(N, j)
    return ensure_table(N, j).a(N, j)


def second_moment(n: int, k: int) -> Fraction:
    """E[Z_{n,k}^2] = sum_{i=0}^{k} A(k-i, i) * B(n, 2k-i), exactly."""
    if not (1 <= k <= n):
        raise ValueError(f"second_moment needs 1 <= k <= n, got (n,k)=({n},{k})")
    total = Fraction(0)
    for i in range(k + 1):
        total += a_array(k - i, i) * b_coefficient(n, 2 * k - i)
    return total


def first_moment(n: int, k: int) -> Fraction:
    """E[Z_{n,k}] = C(n, k)/k!."""
    if not (1 <= k <= n):
        raise ValueError(f"first_moment needs 1 <= k <= n, got (n,k)=({n},{k})")
    return Fraction(binomial(n, k), factorial(k))


def check_square_identity(l: int, m: int) -> bool:
    """Whether sum_n multinomial(l+m; n, n, l-n, m-n) equals C(l+m, l)^2.

    The distinguishable-rearrangements identity that collapses the squared
    binomial into a single multinomial sum; evaluated exactly.
    """
    if l < 0 or m < 0:
        raise ValueError(f"check_square_identity needs l, m >= 0, got ({l},{m})")
    lhs = sum(
        multinomial(l + m, [n, n, l - n, m - n]) for n in range(min(l, m) + 1)
    )
    return lhs == binomial(l + m, l) ** 2
