"""Bonferroni brackets, Stirling approximation, ratio tables, Chebyshev bounds."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest

from ulam_moments import bounds, exact_core, perm_oracle


# ---------------------------------------------------------------- Bonferroni


def test_bracket_worked_example() -> None:
    """(n,k,r) = (4,2,1): T(1) = E[Z] = 3 bounds above, T(2) = 3 - E[C(Z,2)]
    = -13/12 below, and the exact tail is 23/24 (only 4321 has Z = 0)."""
    br = bounds.bonferroni_bracket(4, 2, 1, R_even=2, R_odd=1)
    assert br.upper == 3
    assert br.lower == Fraction(-13, 12)
    assert br.exact == Fraction(23, 24)
    assert br.lower <= br.exact <= br.upper


def test_bracket_three_two() -> None:
    br = bounds.bonferroni_bracket(3, 2, 1, R_even=2, R_odd=3)
    assert br.exact == Fraction(5, 6)
    assert br.lower <= Fraction(5, 6) <= br.upper


def _parity_pairs(r: int) -> list[tuple[int, int]]:
    first_even = r if r % 2 == 0 else r + 1
    first_odd = r if r % 2 == 1 else r + 1
    return [
        (first_even, first_odd),
        (first_even + 2, first_odd),
        (first_even, first_odd + 2),
        (first_even + 2, first_odd + 2),
    ]


@pytest.mark.parametrize("n", range(2, 7))
def test_bracketing_inequalities(n: int) -> None:
    """lower <= P(Z >= r) <= upper for every truncation parity pair (small n
    here; the acceptance suite extends to n = 7)."""
    for k in range(1, n + 1):
        for r in (1, 2, 3):
            for R_even, R_odd in _parity_pairs(r):
                br = bounds.bonferroni_bracket(n, k, r, R_even, R_odd)
                assert br.lower <= br.exact <= br.upper


@pytest.mark.parametrize("n", range(2, 6))
def test_pie_closure_at_full_depth(n: int) -> None:
    """Truncating at the full support depth recovers the exact probability
    from both parities: inclusion-exclusion closes."""
    for k in range(1, n + 1):
        full = math.comb(n, k)
        for r in (1, 2, 3):
            R_even = full if full % 2 == 0 else full + 1
            R_odd = full if full % 2 == 1 else full + 1
            if R_even < r or R_odd < r:
                continue
            br = bounds.bonferroni_bracket(n, k, r, R_even, R_odd)
            assert br.lower == br.upper == br.exact


def test_bracket_guards() -> None:
    with pytest.raises(ValueError):
        bounds.bonferroni_bracket(4, 2, 0, 2, 1)
    with pytest.raises(ValueError):
        bounds.bonferroni_bracket(4, 2, 1, 3, 1)  # R_even odd
    with pytest.raises(ValueError):
        bounds.bonferroni_bracket(4, 2, 1, 2, 2)  # R_odd even
    with pytest.raises(ValueError):
        bounds.bonferroni_bracket(4, 2, 3, 2, 3)  # R_even below r


def test_bonferroni_csv_shape() -> None:
    rows = [bounds.bonferroni_bracket(4, 2, 1, 2, 1)]
    text = bounds.bonferroni_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "n,k,r,R_even,R_odd,lower,upper,exact"
    assert lines[1] == "4,2,1,2,1,-13/12,3/1,23/24"


# ------------------------------------------------------------------ Stirling


REGIME_GRID = [(100, 5), (400, 10), (2500, 50), (10000, 100)]


@pytest.mark.parametrize("n,k", REGIME_GRID)
def test_stirling_log_first_moment_accuracy(n: int, k: int) -> None:
    approx, _ = bounds.stirling_log_first_moment(n, k)
    truth = math.log(math.comb(n, k)) - math.log(math.factorial(k))
    assert abs(approx - truth) / abs(truth) <= 0.02


def test_stirling_remainder_decays() -> None:
    _, delta = bounds.stirling_log_first_moment(10000, 10)
    assert abs(delta) < 1e-2


def test_stirling_guards() -> None:
    with pytest.raises(ValueError):
        bounds.stirling_log_first_moment(100, 99)  # k/n too close to 1
    with pytest.raises(ValueError):
        bounds.stirling_log_first_moment(100, 100)
    with pytest.raises(ValueError):
        bounds.stirling_log_first_moment(5, 0)


# --------------------------------------------------------------- ratio table


def test_ratio_table_values() -> None:
    rows = bounds.ratio_table([(4, 2)])
    assert rows[0].ratio == pytest.approx(67 / 54, rel=1e-15)
    for n in (2, 10, 1000):
        assert bounds.ratio_table([(n, 1)])[0].ratio == 1.0


def test_ratio_table_nonnegative_variance() -> None:
    rows = bounds.ratio_table([(30, k) for k in range(2, 7)])
    for row in rows:
        assert math.isfinite(row.ratio)
        assert row.ratio >= 1


def test_ratio_table_guards() -> None:
    with pytest.raises(ValueError):
        bounds.ratio_table([(100, 61)])
    with pytest.raises(ValueError):
        bounds.ratio_table([(2 * 10**6, 2)])


# ----------------------------------------------------------- Chebyshev bound


def test_chebyshev_bound_examples(warm_tables: None) -> None:
    slack = 1 - 1e-9
    for N, j in [(1, 0), (1, 1), (6, 3)]:
        bound, (x_star, w_star) = bounds.chebyshev_a_bound(N, j)
        exact = exact_core.a_array(N, j)
        assert math.isfinite(bound)
        assert bound >= exact * slack
        assert 0 < x_star < bounds.X_MAX
        assert 4 * x_star + w_star * w_star < 1
        if j > 0:
            assert w_star > 0
        else:
            assert w_star == 0.0


def test_chebyshev_guards() -> None:
    with pytest.raises(ValueError):
        bounds.chebyshev_a_bound(0, 1)
    with pytest.raises(ValueError):
        bounds.chebyshev_a_bound(2, -1)


def test_chebyshev_csv_shape() -> None:
    text = bounds.chebyshev_csv([(1, 1, 12.5, 0.1, 0.2, 10)])
    lines = text.strip().split("\n")
    assert lines[0] == "N,j,bound,x_star,w_star,exact_A"
    assert lines[1].startswith("1,1,12.5,")
    assert lines[1].endswith(",10")


# --------------------------------------------------- cross-module spot check


def test_bracket_depths_use_oracle_moments() -> None:
    """T(R) rebuilt literally from factorial moments must match the bracket."""
    n, k, r = 5, 2, 2
    br = bounds.bonferroni_bracket(n, k, r, R_even=4, R_odd=3)
    t3 = sum(
        (-1) ** (s - r) * math.comb(s - 1, r - 1) * perm_oracle.factorial_moment(n, k, s)
        for s in range(r, 4)
    )
    t4 = sum(
        (-1) ** (s - r) * math.comb(s - 1, r - 1) * perm_oracle.factorial_moment(n, k, s)
        for s in range(r, 5)
    )
    # R - r odd gives the lower endpoint, even the upper
    assert br.lower == t3
    assert br.upper == t4
