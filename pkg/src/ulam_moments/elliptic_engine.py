"""Closed-form evaluation of alpha(w, x) through quartic roots and
complete elliptic integrals.

The contour mean of 1 / (g(xi)/xi - w) deforms onto the branch cut of the
quartic Q1, picking up one residue on the way:

    alpha(w, x) = A1 + A2,
    A1 = residue at the unique root a2 of g(xi) = w*xi inside the unit disk,
    A2 = (1/pi) * integral over (c1, c2) of sqrt(-Q1(r)) / (-Q2(r)) dr,

with Q2 = Q1 - w^2 xi^2. Both quartics are self-inversive, so their roots
come in reciprocal pairs; the roots are computed from the outer (additive,
cancellation-free) closed forms and the inner ones as exact reciprocals,
which makes the inversive products hold to the last bit.

A2 has three independent evaluators: the direct Gauss-Legendre quadrature
(reference), the same integral on the Moebius-transformed interval
(checkpoint), and the reduction to Legendre normal form yielding an exact
combination of complete elliptic integrals K and Pi (the headline identity).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import pi, sqrt

import numpy as np

from .genfun import principal_sqrt

# Roots c2 and d1 collide as x -> 1/4 and the reduction's conditioning
# collapses, so the whole module stays 4% inside the open domain.
X_MAX = 0.24


def _check_x(x: float) -> None:
    if not 0 < x <= X_MAX:
        raise ValueError(f"x must lie in (0, {X_MAX}], got x={x}")


def q1_eval(x: float, xi: complex) -> complex:
    """Q1(x, xi) = (xi - x(xi^2 + 1))^2 - 4 x^2 xi^2."""
    return (xi - x * (xi * xi + 1)) ** 2 - 4 * x * x * xi * xi


def q2_eval(x: float, w: float, xi: complex) -> complex:
    """Q2 = Q1 - w^2 xi^2."""
    return q1_eval(x, xi) - w * w * xi * xi


@dataclass(frozen=True)
class QuarticRootSet:
    """Ordered real roots of one of the two self-inversive quartics.

    For Q1 the roots are (c1, c2, d1, d2) with c1*d2 = c2*d1 = 1; for Q2
    they are (a1, a2, b1, b2) with a1*b2 = a2*b1 = 1. w is None for Q1.
    """

    x: float
    w: float | None
    roots: tuple[float, float, float, float]


def q1_roots(x: float) -> QuarticRootSet:
    """Roots of Q1: the two outer roots from their additive closed forms,
    the two inner ones as exact reciprocals (self-inversive pairing)."""
    _check_x(x)
    d1 = (1 - 2 * x + sqrt(1 - 4 * x)) / (2 * x)
    d2 = (1 + 2 * x + sqrt(1 + 4 * x)) / (2 * x)
    return QuarticRootSet(x=x, w=None, roots=(1 / d2, 1 / d1, d1, d2))


def q2_roots(x: float, w: float) -> QuarticRootSet:
    """Roots of Q2 with s = sqrt(4x^2 + w^2); same reciprocal construction."""
    _check_x(x)
    if not 0 <= w <= sqrt(1 - 4 * x):
        raise ValueError(f"w must lie in [0, sqrt(1-4x)], got w={w}, x={x}")
    s = sqrt(4 * x * x + w * w)
    b1 = (1 - s + sqrt(1 + w * w - 2 * s)) / (2 * x)
    b2 = (1 + s + sqrt(1 + w * w + 2 * s)) / (2 * x)
    return QuarticRootSet(x=x, w=w, roots=(1 / b2, 1 / b1, b1, b2))


def g_tilde(x: float, xi: complex) -> complex:
    """The algebraic square root of Q1 fixed by its branch data:

        g(xi) = x * sqrt(xi - c1) * sqrt(xi - c2) * sqrt(d1 - xi) * sqrt(d2 - xi)

    with each factor taken as the principal square root (negative reals to
    +i*sqrt). Real and positive between the cuts, and on the cut (c1, c2)
    the value equals the upper-side limit +i*sqrt(-Q1)."""
    c1, c2, d1, d2 = q1_roots(x).roots
    return (
        x
        * principal_sqrt(xi - c1)
        * principal_sqrt(xi - c2)
        * principal_sqrt(d1 - xi)
        * principal_sqrt(d2 - xi)
    )


def _log_deriv_factor(x: float, xi: float) -> float:
    """L(xi) = g'(xi)/g(xi) as a sum of half poles."""
    c1, c2, d1, d2 = q1_roots(x).roots
    return 0.5 * (
        1 / (xi - c1) + 1 / (xi - c2) - 1 / (d1 - xi) - 1 / (d2 - xi)
    )


def a1_residue(x: float, w: float) -> float:
    """A1 as the residue of 1/(g(xi) - w*xi) at xi = a2.

    g(a1) = -w*a1, so a1 is not a pole of the deformed integrand; the
    residue term is the single contribution 1/(g'(a2) - w)."""
    _check_x(x)
    if w == 0:
        return 0.0
    a2 = q2_roots(x, w).roots[1]
    gp = (w * a2) * _log_deriv_factor(x, a2)  # g(a2) = +w*a2
    return 1 / (gp - w)


def a1_closed(x: float, w: float) -> float:
    """A1 in explicit root-product form: 2*w*a2 / Q2'(a2)."""
    _check_x(x)
    if w == 0:
        return 0.0
    a1, a2, b1, b2 = q2_roots(x, w).roots
    return 2 * w * a2 / (x * x * (a2 - a1) * (a2 - b1) * (a2 - b2))


def a1_reduced(x: float, w: float) -> float:
    """A1 with the outer roots eliminated via b1 = 1/a2, b2 = 1/a1."""
    _check_x(x)
    if w == 0:
        return 0.0
    a1, a2, _, _ = q2_roots(x, w).roots
    return (
        2 * w * a1 * a2 * a2
        / (x * x * (a2 - a1) * (1 - a2 * a2) * (1 - a1 * a2))
    )


@lru_cache(maxsize=None)
def _gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, wts = np.polynomial.legendre.leggauss(n)
    return nodes, wts


def _gl_theta(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to theta in (0, pi/2)."""
    nodes, wts = _gl_nodes(n)
    return (nodes + 1) * (pi / 4), wts * (pi / 4)


def a2_quadrature(
    x: float, w: float, tol: float = 1e-12, max_nodes: int = 6400
) -> float:
    """Reference evaluator: A2 = (1/pi) * int_{c1}^{c2} sqrt(-Q1)/(-Q2) dr.

    The substitution r = c1 + (c2 - c1) sin^2(theta) absorbs both inverse
    square-root endpoint singularities, leaving a smooth integrand for
    Gauss-Legendre; nodes double until two levels agree to tol."""
    _check_x(x)
    c1, c2, d1, d2 = q1_roots(x).roots
    a1, a2, b1, b2 = q2_roots(x, w).roots
    delta = c2 - c1
    # Distances from r to the nearby Q2 roots, assembled as sums of
    # nonnegative pieces: near the interval ends delta*sin^2 collapses and
    # the naive r - a1 would be pure cancellation.
    gap1 = c1 - a1
    gap2 = a2 - c2
    prev = None
    n = 200
    while n <= max_nodes:
        th, wth = _gl_theta(n)
        st2 = np.sin(th) ** 2
        ct2 = np.cos(th) ** 2
        r = c1 + delta * st2
        mq2 = x * x * (delta * st2 + gap1) * (gap2 + delta * ct2) \
            * (b1 - r) * (b2 - r)
        integ = (
            (2 * x * delta**2 / pi)
            * st2
            * ct2
            * np.sqrt((d1 - r) * (d2 - r))
            / mq2
        )
        cur = float(integ @ wth)
        if prev is not None and abs(cur - prev) <= tol * (1 + abs(cur)):
            return cur
        prev = cur
        n *= 2
    raise ArithmeticError(
        f"A2 quadrature did not converge within {max_nodes} nodes at (x={x}, w={w})"
    )


def a2_checkpoint(
    x: float, w: float, tol: float = 1e-12, max_nodes: int = 6400
) -> float:
    """A2 on the (z-1)/(z+1)-transformed interval, as an independent check:

        A2 = (2 / (pi sqrt(1+4x))) * int_{-u1}^{-u2} (Q1/Q2)(z(s)) ds /
             sqrt((u1^2 - s^2)(u2^2 - s^2)) * smooth rest,

    with u1 = 1/sqrt(1+4x), u2 = sqrt(1-4x), z(s) = (1+s)/(1-s)."""
    _check_x(x)
    if not 0 <= w <= sqrt(1 - 4 * x):
        raise ValueError(f"w must lie in [0, sqrt(1-4x)], got w={w}, x={x}")
    u1 = 1 / sqrt(1 + 4 * x)
    u2 = sqrt(1 - 4 * x)
    _, _, d1, d2 = q1_roots(x).roots
    lo, hi = -u1, -u2
    width = hi - lo
    prev = None
    n = 200
    while n <= max_nodes:
        th, wth = _gl_theta(n)
        st2 = np.sin(th) ** 2
        s = lo + width * st2
        z = (1 + s) / (1 - s)
        # -Q1(z) in product form, with the endpoint factors z - c1 and
        # c2 - z written through s - lo and hi - s (exact by construction):
        # z - c1 = 2 (s - lo) / ((1 - s)(1 - lo)), and likewise at c2.
        mq1 = (
            x * x
            * (2 * width * st2 / ((1 - s) * (1 - lo)))
            * (2 * width * np.cos(th) ** 2 / ((1 - s) * (1 - hi)))
            * (d1 - z)
            * (d2 - z)
        )
        mq2 = mq1 + (w * z) ** 2
        smooth = np.sqrt((u1 - s) * (u2 - s))
        integrand = 2.0 * (mq1 / mq2) / smooth  # ds/sqrt((s-lo)(hi-s)) = 2 dth
        cur = (2 / (pi * sqrt(1 + 4 * x))) * float(wth @ integrand)
        if prev is not None and abs(cur - prev) <= tol * (1 + abs(cur)):
            return cur
        prev = cur
        n *= 2
    raise ArithmeticError(
        f"checkpoint quadrature did not converge at (x={x}, w={w})"
    )


def alpha_closed(w: float, x: float) -> float:
    """alpha(w, x) = A1 + A2 via the residue term and the cut integral."""
    if w < 0:
        raise ValueError(f"alpha_closed needs w >= 0, got w={w}")
    _check_x(x)
    if w * w >= 1 - 4 * x:
        raise ValueError(f"alpha singular at w^2 >= 1 - 4x: w={w}, x={x}")
    return a1_closed(x, w) + a2_quadrature(x, w)


def elliptic_K(k: float) -> float:
    """Complete elliptic integral K(k) by the arithmetic-geometric mean.

    The iteration contracts quadratically; the loop is capped because the
    |a - b| gap can stall within a few ulps of the fixed point."""
    if not 0 <= k < 1:
        raise ValueError(f"elliptic_K needs k in [0, 1), got k={k}")
    a, b = 1.0, sqrt(1 - k * k)
    for _ in range(60):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = (a + b) / 2, sqrt(a * b)
    return pi / (2 * a)


def elliptic_Pi(
    k: float, lam: float, tol: float = 3e-12, max_nodes: int = 6400
) -> float:
    """Third-kind integral with a linear denominator:

        Pi(k; lam) = int_0^1 dt / (sqrt((1-t^2)(1-k^2 t^2)) * (1 - lam*t)).

    (The conventional form has 1 - lam*t^2; the even part in lam recovers
    it.) Evaluated by t = sin(theta) and Gauss-Legendre node doubling."""
    if not 0 <= k < 1:
        raise ValueError(f"elliptic_Pi needs k in [0, 1), got k={k}")
    if not abs(lam) < 1:
        raise ValueError(f"elliptic_Pi needs |lam| < 1, got lam={lam}")
    prev = None
    n = 200
    while n <= max_nodes:
        th, wth = _gl_theta(n)
        t = np.sin(th)
        vals = 1.0 / (np.sqrt(1 - k * k * t * t) * (1 - lam * t))
        cur = float(wth @ vals)
        if prev is not None and abs(cur - prev) <= tol * (1 + abs(cur)):
            return cur
        prev = cur
        n *= 2
    raise ArithmeticError(f"Pi quadrature did not converge at (k={k}, lam={lam})")


def moebius_L(z: complex) -> complex:
    """L(z) = (z - 1)/(z + 1); odd under z -> 1/z."""
    if z == -1:
        raise ValueError("moebius_L pole at z = -1")
    return (z - 1) / (z + 1)


def moebius_Lambda(k: float, z: complex) -> complex:
    """The root-cycling map for modulus k, with p = k^(-1/2):

        Lambda(k; z) = ((p+1) z - p(p+1)) / ((p-1) z + p(p-1)),

    sending 1/k -> 1, 1 -> -1, -1 -> -1/J(k), -1/k -> 1/J(k)."""
    if not 0 < k < 1:
        raise ValueError(f"moebius_Lambda needs k in (0, 1), got k={k}")
    p = 1 / sqrt(k)
    den = (p - 1) * z + p * (p - 1)
    if den == 0:
        raise ValueError(f"moebius_Lambda pole at z={z}")
    return ((p + 1) * z - p * (p + 1)) / den


def involution_J(k: float) -> float:
    """J(k) = (1 - sqrt(k))^2 / (1 + sqrt(k))^2, an involution on (0, 1)."""
    if not 0 < k < 1:
        raise ValueError(f"involution_J needs k in (0, 1), got k={k}")
    return ((1 - sqrt(k)) / (1 + sqrt(k))) ** 2


@dataclass
class EllipticReduction:
    """Moebius reduction of the cut integral to Legendre normal form.

    moebius holds (A, B, C, D) of Phi(z) = (Az + B)/(Cz + D), which maps
    the Q1 roots (c1, c2, d1, d2) to (-1, 1, 1/k, -1/k) for the modulus
    k = modulus_k. xi_constant is the quartic rescaling constant Xi in

        -Q1(Phi^{-1}(s)) * (-C s + A)^4 = Xi * (1 - s^2)(1 - k^2 s^2).

    pf_constant and raw_pf_terms give the partial fractions of Q1/Q2 in the
    original variable (constant + sum residue/(z - pole)); pf_terms carries
    each pole transported through Phi as (pole_image, coefficient) with
    coefficient = residue * det / (C*pole + D)^2."""

    moebius: tuple[float, float, float, float]
    modulus_k: float
    xi_constant: float
    pf_constant: float
    pf_terms: list[tuple[float, float]]
    raw_pf_terms: list[tuple[float, float]]
    det: float


def _phi_apply(m: np.ndarray, z: complex) -> complex:
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def legendre_reduce(x: float, w: float) -> EllipticReduction:
    """Builds the interval-to-[-1,1] Moebius map and the partial fractions.

    Stage 1, L(z) = (z-1)/(z+1), sends the four Q1 roots to the symmetric
    quadruple (-u1, -u2, u2, u1) with u1 = 1/sqrt(1+4x), u2 = sqrt(1-4x),
    whose modulus u2/u1 equals ktil = sqrt(1 - 16 x^2). Rescaling by -1/u2
    and applying the root-cycling map for ktil then lands the roots on
    (-1, 1, 1/k, -1/k) with final modulus k = J(ktil)."""
    _check_x(x)
    if w <= 0:
        raise ValueError(f"legendre_reduce needs w > 0, got w={w}")
    if 4 * x + w * w >= 1:
        raise ValueError(f"legendre_reduce needs 4x + w^2 < 1, got x={x}, w={w}")
    c1, c2, d1, d2 = q1_roots(x).roots
    u2 = sqrt(1 - 4 * x)
    ktil = sqrt(1 - 16 * x * x)
    k2 = involution_J(ktil)
    p = 1 / sqrt(ktil)
    m_l = np.array([[1.0, -1.0], [1.0, 1.0]])
    m_scale = np.array([[-1.0 / u2, 0.0], [0.0, 1.0]])
    m_lam = np.array([[p + 1, -p * (p + 1)], [p - 1, p * (p - 1)]])
    m_neg = np.array([[-1.0, 0.0], [0.0, 1.0]])
    m = m_neg @ m_lam @ m_scale @ m_l

    targets = ((c1, -1.0), (c2, 1.0), (d1, 1 / k2), (d2, -1 / k2))
    worst = max(abs(_phi_apply(m, r) - t) for r, t in targets)
    if worst > 1e-8:
        raise ArithmeticError(
            f"Moebius reduction ill-conditioned at (x={x}, w={w}): "
            f"root-image error {worst:.3e}"
        )

    ma, mb, mc, md = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = float(ma * md - mb * mc)
    xi_constant = float(
        -(x * x / k2**2)
        * (md + mc * c1)
        * (md + mc * c2)
        * (md + mc * d1)
        * (md + mc * d2)
    )
    if xi_constant <= 0:
        raise ArithmeticError(f"nonpositive quartic constant {xi_constant}")

    raw_terms: list[tuple[float, float]] = []
    pf_terms: list[tuple[float, float]] = []
    roots2 = q2_roots(x, w).roots
    for rho in roots2:
        res = w * w * rho * rho / (x * x)
        for sg in roots2:
            if sg != rho:
                res /= rho - sg
        raw_terms.append((rho, float(res)))
        sigma = float(_phi_apply(m, rho))
        if abs(sigma) <= 1:
            raise ArithmeticError(
                f"pole image {sigma} inside [-1, 1] at (x={x}, w={w})"
            )
        pf_terms.append((sigma, float(res * det / (mc * rho + md) ** 2)))

    return EllipticReduction(
        moebius=(float(ma), float(mb), float(mc), float(md)),
        modulus_k=float(k2),
        xi_constant=xi_constant,
        pf_constant=1.0,
        pf_terms=pf_terms,
        raw_pf_terms=raw_terms,
        det=det,
    )


def a2_pi_combination(
    x: float, w: float
) -> tuple[float, float, list[tuple[float, float]]]:
    """A2 as a finite combination of complete elliptic integrals.

    Through the reduction, each transported pole sigma contributes

        integral_{-1}^{1} ds / ((s - sigma) sqrt((1-s^2)(1-k^2 s^2)))
            = -(1/sigma) [Pi(k; 1/sigma) + Pi(k; -1/sigma)],

    and the partial-fraction constant contributes 2K(k). The overall scale
    is det / (pi * sqrt(Xi)); the change of variables contributes the same
    determinant once more inside each transported coefficient.

    Returns (value, K-coefficient, terms) with terms = [(coefficient, lam)]
    meaning value = K-coeff * 2K(k) + sum coeff * (Pi(k; lam) + Pi(k; -lam)).
    """
    red = legendre_reduce(x, w)
    _, _, mc, md = red.moebius
    k2 = red.modulus_k
    pref = red.det / (pi * sqrt(red.xi_constant))

    chat = red.pf_constant
    for rho, res in red.raw_pf_terms:
        chat += res * (-mc / (mc * rho + md))
    k_coefficient = pref * chat

    value = k_coefficient * 2 * elliptic_K(k2)
    terms: list[tuple[float, float]] = []
    for sigma, coef in red.pf_terms:
        lam = 1.0 / sigma
        c = pref * coef * (-lam)
        value += c * (elliptic_Pi(k2, lam) + elliptic_Pi(k2, -lam))
        terms.append((c, lam))
    return value, k_coefficient, terms
