"""Random-walk realization of the A(N, j) array.

A 2D simple random walk (U_t, V_t) takes 2N unit steps from
{(1,0), (0,1), (-1,0), (0,-1)}. With

    tau = #{t in {0, ..., 2N} : U_t = 0}   (endpoints included),
    Q_{N,j} = C(tau + j - 1, j),
    R_N = [ (U_{2N}, V_{2N}) = (0, 0) ],

the array identity is A(N, j) = 16^N * E[Q_{N,j} * R_N]. Because 16^N equals
the number 4^{2N} of equally likely paths, the exact-mode value is the plain
integer sum of Q*R over all paths, which this module computes by vectorized
base-4 enumeration. A counter-based generator drives the Monte Carlo mode so
the sample stream is a pure function of (seed, sample index), independent of
chunking and worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt

import numpy as np

from .exact_core import binomial

UNIT_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))

ENUMERATION_GUARD = 6
_ENUM_CHUNK = 1 << 20
_MC_CHUNK = 1 << 16

_SM64_GOLDEN = 0x9E3779B97F4A7C15
_SM64_MIX1 = 0xBF58476D1CE4E5B9
_SM64_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class WalkPath:
    """A fixed walk of 2N unit steps."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.steps) % 2 != 0:
            raise ValueError(f"walk length must be even, got {len(self.steps)}")
        for s in self.steps:
            if s not in UNIT_STEPS:
                raise ValueError(f"invalid step {s}")

    @property
    def N(self) -> int:
        return len(self.steps) // 2


@dataclass(frozen=True)
class WalkStats:
    """Occupation count of the U = 0 line and the return indicator."""

    tau: int
    returned: bool


@dataclass
class WalkEnsembleStats:
    """Per-j mean of Q_{N,j} * R_N over the path ensemble.

    Exact mode: q_r_mean[j] is the exact rational (sum over all 4^{2N}
    paths) / 4^{2N}. Monte Carlo mode: q_r_mean[j] is (estimate, stderr) for
    the 16^N-scaled mean, and seed records the generator key.
    """

    N: int
    mode: str
    samples: int
    q_r_mean: dict
    seed: int | None = None


def walk_stats(path: WalkPath) -> WalkStats:
    """tau counts t in {0, ..., 2N} with U_t = 0, including both endpoints."""
    u = 0
    v = 0
    tau = 1  # t = 0 always has U = 0
    for du, dv in path.steps:
        u += du
        v += dv
        if u == 0:
            tau += 1
    return WalkStats(tau=tau, returned=(u == 0 and v == 0))


def q_statistic(stats: WalkStats, j: int) -> int:
    """Q_{N,j} = C(tau + j - 1, j): weakly increasing j-tuples of axis-visit times."""
    if j < 0:
        raise ValueError(f"q_statistic needs j >= 0, got j={j}")
    return binomial(stats.tau + j - 1, j)


@dataclass
class _Enumeration:
    """Aggregates from one exhaustive sweep of all 4^{2N} paths."""

    N: int
    tau_hist_returned: list[int]  # tau_hist_returned[tau] over returning paths
    returned_count: int
    x_zero_count: int  # paths with U_{2N} + V_{2N} = 0 (the rotated marginal)
    total: int


_ENUM_CACHE: dict[int, _Enumeration] = {}


def _decode_steps(codes: np.ndarray, two_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Base-4 digits of each code -> (du, dv) step arrays of shape (m, 2N)."""
    shifts = (2 * np.arange(two_n, dtype=np.uint64))[None, :]
    digs = (codes[:, None] >> shifts) & np.uint64(3)
    digs = digs.astype(np.int8)
    du = (digs == 0).astype(np.int8) - (digs == 2).astype(np.int8)
    dv = (digs == 1).astype(np.int8) - (digs == 3).astype(np.int8)
    return du, dv


def _sweep_chunk(N: int, start: int, stop: int) -> tuple[np.ndarray, int, int]:
    two_n = 2 * N
    codes = np.arange(start, stop, dtype=np.uint64)
    du, dv = _decode_steps(codes, two_n)
    m = codes.size
    U = np.zeros((m, two_n + 1), dtype=np.int16)
    np.cumsum(du, axis=1, dtype=np.int16, out=U[:, 1:])
    tau = (U == 0).sum(axis=1)
    uf = U[:, -1]
    vf = dv.sum(axis=1, dtype=np.int16)
    ret = (uf == 0) & (vf == 0)
    hist = np.bincount(tau[ret], minlength=two_n + 2)
    return hist, int(ret.sum()), int(((uf + vf) == 0).sum())


def enumerate_walks(N: int, workers: int = 1) -> _Enumeration:
    """Exhaustive sweep over all 4^{2N} paths, cached per N.

    Work is split into fixed-size chunks merged by addition, so the result
    (and anything derived from it) cannot depend on the worker count.
    """
    if N < 0:
        raise ValueError(f"enumerate_walks needs N >= 0, got N={N}")
    if N > ENUMERATION_GUARD:
        raise ValueError(
            f"exhaustive enumeration guarded to N <= {ENUMERATION_GUARD}, got N={N}"
        )
    cached = _ENUM_CACHE.get(N)
    if cached is not None:
        return cached
    total = 4 ** (2 * N)
    bounds = [(s, min(s + _ENUM_CHUNK, total)) for s in range(0, total, _ENUM_CHUNK)]
    hist = np.zeros(2 * N + 2, dtype=np.int64)
    returned = 0
    x_zero = 0
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _sweep_chunk(N, *b), bounds))
    else:
        parts = [_sweep_chunk(N, *b) for b in bounds]
    for h, r, xz in parts:
        hist += h
        returned += r
        x_zero += xz
    enum = _Enumeration(
        N=N,
        tau_hist_returned=[int(c) for c in hist],
        returned_count=returned,
        x_zero_count=x_zero,
        total=total,
    )
    _ENUM_CACHE[N] = enum
    return enum


def a_from_walk_exact(N: int, j: int, workers: int = 1) -> int:
    """A(N, j) = 16^N * (sum of Q*R over all paths) / 4^{2N}, an exact integer.

    The two scale factors cancel, so this is the integer sum of
    C(tau + j - 1, j) over returning paths, taken from the cached
    occupation-count histogram.
    """
    if j < 0:
        raise ValueError(f"a_from_walk_exact needs j >= 0, got j={j}")
    enum = enumerate_walks(N, workers=workers)
    return sum(
        cnt * binomial(tau + j - 1, j)
        for tau, cnt in enumerate(enum.tau_hist_returned)
        if cnt
    )


def exact_ensemble(N: int, js: list[int], workers: int = 1) -> WalkEnsembleStats:
    """Exact-mode ensemble statistics: q_r_mean[j] = (sum Q*R)/4^{2N}."""
    enum = enumerate_walks(N, workers=workers)
    means = {
        j: Fraction(a_from_walk_exact(N, j), enum.total) for j in js
    }
    return WalkEnsembleStats(
        N=N, mode="exact", samples=enum.total, q_r_mean=means, seed=None
    )


def return_probability(N: int) -> Fraction:
    """P((U_{2N}, V_{2N}) = (0,0)) = C(2N,N)^2 / 16^N."""
    return Fraction(comb(2 * N, N) ** 2, 16**N)


def x_marginal_probability(N: int) -> Fraction:
    """P(U_{2N} + V_{2N} = 0) = C(2N,N) / 4^N.

    U + V is one of the two independent +-1 walks under the 45-degree
    rotation, so its return probability is the 1D central binomial weight.
    """
    return Fraction(comb(2 * N, N), 4**N)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """Finalizer of the splitmix64 stream, vectorized over uint64."""
    z = x.astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_SM64_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_SM64_MIX2)
    z ^= z >> np.uint64(31)
    return z


def _counter_words(seed: int, counters: np.ndarray) -> np.ndarray:
    """64-bit word for each counter: splitmix64 state seed + (ctr+1)*golden."""
    with np.errstate(over="ignore"):
        state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (
            (counters + np.uint64(1)) * np.uint64(_SM64_GOLDEN)
        )
        return _splitmix64(state)


def _mc_chunk(
    N: int, j: int, seed: int, start: int, stop: int, qtab: np.ndarray
) -> tuple[int, int]:
    """Integer (sum QR, sum (QR)^2) for samples start..stop-1."""
    two_n = 2 * N
    words_per = (two_n + 31) // 32
    idx = np.arange(start, stop, dtype=np.uint64)
    m = idx.size
    digs = np.empty((m, two_n), dtype=np.int8)
    for w in range(words_per):
        with np.errstate(over="ignore"):
            ctrs = idx * np.uint64(words_per) + np.uint64(w)
        word = _counter_words(seed, ctrs)
        lo = 32 * w
        hi = min(32 * (w + 1), two_n)
        shifts = (2 * np.arange(hi - lo, dtype=np.uint64))[None, :]
        digs[:, lo:hi] = ((word[:, None] >> shifts) & np.uint64(3)).astype(np.int8)
    du = (digs == 0).astype(np.int8) - (digs == 2).astype(np.int8)
    dv = (digs == 1).astype(np.int8) - (digs == 3).astype(np.int8)
    U = np.zeros((m, two_n + 1), dtype=np.int16)
    np.cumsum(du, axis=1, dtype=np.int16, out=U[:, 1:])
    tau = (U == 0).sum(axis=1)
    ret = (U[:, -1] == 0) & (dv.sum(axis=1, dtype=np.int16) == 0)
    qr = np.where(ret, qtab[tau], 0)
    return int(qr.sum()), int((qr * qr).sum())


def a_monte_carlo(
    N: int, j: int, samples: int, seed: int, workers: int = 1
) -> tuple[float, float]:
    """Monte Carlo estimate of A(N, j) with its standard error.

    Scales the sample mean of Q*R by 16^N. Q*R accumulates as exact integers
    per fixed-size chunk; chunks merge by addition, so results are identical
    for any worker count and reproducible for a given (seed, samples).
    """
    if N < 0 or j < 0:
        raise ValueError(f"a_monte_carlo needs N, j >= 0, got ({N},{j})")
    if samples < 1:
        raise ValueError(f"a_monte_carlo needs samples >= 1, got {samples}")
    two_n = 2 * N
    if N == 0:
        return 1.0, 0.0
    # tau = 0 cannot occur (t = 0 is always on the axis); keep a 0 placeholder
    # so the lookup table stays indexed by tau directly
    qvals = [0] + [binomial(tau + j - 1, j) for tau in range(1, two_n + 2)]
    if max(qvals) > 10**6:
        raise ValueError(
            "Q statistic too large for the exact integer fast path; "
            f"reduce j (Q max = {max(qvals)})"
        )
    qtab = np.array(qvals, dtype=np.int64)
    bounds = [(s, min(s + _MC_CHUNK, samples)) for s in range(0, samples, _MC_CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _mc_chunk(N, j, seed, *b, qtab), bounds))
    else:
        parts = [_mc_chunk(N, j, seed, *b, qtab) for b in bounds]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    scale = 16**N
    estimate = float(Fraction(scale * s1, samples))
    if samples > 1:
        var_num = samples * s2 - s1 * s1  # samples*(samples-1)*sample variance
        var = Fraction(var_num, samples * (samples - 1))
        stderr = scale * sqrt(float(var) / samples)
    else:
        stderr = 0.0
    return estimate, stderr


def monte_carlo_ensemble(
    N: int, js: list[int], samples: int, seed: int, workers: int = 1
) -> WalkEnsembleStats:
    """Monte Carlo ensemble: q_r_mean[j] = (estimate, stderr) at scale 16^N."""
    means = {j: a_monte_carlo(N, j, samples, seed, workers=workers) for j in js}
    return WalkEnsembleStats(
        N=N, mode="monte_carlo", samples=samples, q_r_mean=means, seed=seed
    )


def polya_series(z: float, n_terms: int) -> float:
    """Partial sum of the return-probability series sum_N 16^{-N} C(2N,N)^2 z^{2N}.

    Converges (for |z| < 1) to (2/pi) * K(z), the first-kind complete elliptic
    integral normalization fixed by this very series.
    """
    if not abs(z) < 1:
        raise ValueError(f"polya_series needs |z| < 1, got z={z}")
    if n_terms < 1:
        raise ValueError(f"polya_series needs n_terms >= 1, got {n_terms}")
    total = 0.0
    central = 1.0  # C(2N,N)/4^N, updated by the ratio (2N+1)/(2N+2)
    zpow = 1.0
    for N in range(n_terms):
        total += central * central * zpow
        central *= (2 * N + 1) / (2 * N + 2)
        zpow *= z * z
    return total
