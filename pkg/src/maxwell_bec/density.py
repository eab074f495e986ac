"""Density evolution on the BEC: fixed points, elementary thresholds and the
three-valued (0 / ? / g) recursion of the guessing decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .poly import DDPair

DE_TOL = 1e-12
DE_MAX_ITER = 10**6
THRESHOLD_GRID = 10**4


class ConvergenceError(RuntimeError):
    """Iteration did not settle; ``last`` holds the final iterate."""

    def __init__(self, msg, last=None):
        super().__init__(msg)
        self.last = last


@dataclass(frozen=True)
class DEFixedPoint:
    epsilon: float
    x: float
    y: float
    iterations: int = 0


@dataclass(frozen=True)
class ThreeValuedState:
    left: tuple  # (a_0, a_?, a_g), variable-to-check
    right: tuple  # (b_0, b_?, b_g), check-to-variable
    epsilon: float
    gamma: float
    iterations: int = 0


def _leading(coeffs) -> tuple[int, float]:
    for k, c in enumerate(coeffs):
        if c != 0.0:
            return k, c
    return len(coeffs), 0.0


def stability_limit(pair: DDPair) -> float:
    """lim_{x->0} x / lambda(y(x)); ``inf`` when lambda(y(x)) = o(x)."""
    k, lam_k = _leading(pair.lambda_edge.coeffs)
    if pair.right_exit is not None:
        m, y_m = _leading(pair.right_exit.coeffs)
    else:
        m, y_m = 1, pair.rho_edge.deriv()(1.0)
    if k * m > 1 or lam_k * y_m == 0.0:
        return math.inf
    return 1.0 / (lam_k * y_m**k)


def stability_threshold(pair: DDPair) -> float:
    return stability_limit(pair)


def shannon_threshold(pair: DDPair) -> float:
    return pair.check_ratio


def epsilon_of_x(pair: DDPair, x):
    """Channel parameter for which x is a DE fixed point."""
    if np.isscalar(x):
        if x == 0:
            return stability_limit(pair)
        return x / pair.lambda_edge(pair.y(x))
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = x / pair.lambda_edge(pair.y(x))
    out[x == 0] = stability_limit(pair)
    return out


def epsilon_slope_numerator(pair: DDPair, x):
    """Numerator of d epsilon / dx; same sign as the derivative."""
    y = pair.y(x)
    lam = pair.lambda_edge
    return lam(y) - x * lam.deriv()(y) * pair.dy(x)


def epsilon_prime(pair: DDPair, x):
    lam_y = pair.lambda_edge(pair.y(x))
    return epsilon_slope_numerator(pair, x) / lam_y**2


def de_fixed_point(
    pair: DDPair, epsilon: float, tol: float = DE_TOL, max_iter: int = DE_MAX_ITER
) -> DEFixedPoint:
    """Largest fixed point of x -> eps * lambda(y(x)), iterated from x = 1."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    lam = pair.lambda_edge

    def f(t):
        # (t - eps * lambda(y(t))) / t: same sign, no cancellation near 0
        return 1.0 - epsilon * lam(pair.y(t)) / t

    x = 1.0
    for it in range(1, max_iter + 1):
        x_new = epsilon * lam(pair.y(x))
        step = x - x_new
        x = x_new
        if x == 0.0:
            return DEFixedPoint(epsilon, 0.0, 0.0, it)
        if abs(step) < 1e-9:
            # slow contraction (tangency or geometric decay towards 0):
            # locate the largest root below the iterate directly
            root = _largest_root_below(f, x, xtol=min(tol, 1e-16))
            return DEFixedPoint(epsilon, root, float(pair.y(root)) if root else 0.0, it)
    raise ConvergenceError(f"DE did not converge at eps={epsilon}", last=x)


def _largest_root_below(f, x_hi: float, xtol: float = 1e-16, grid: int = 4000) -> float:
    """Largest zero of f in (0, x_hi] given f(x_hi) > 0, or 0.0 if f > 0 there.

    The iterate sits above every root, so the scan walks downward; local
    minima of the samples are refined so that narrow dips are not missed.
    """
    if f(x_hi) <= 0.0:
        return x_hi
    ts = np.concatenate([np.linspace(x_hi, 0.0, grid + 1)[:-1], x_hi * np.logspace(-4, -250, 250)])
    ts = ts[ts > 0.0]
    vals = f(ts)
    for k in range(len(ts) - 1):
        if vals[k + 1] <= 0.0:
            if vals[k + 1] == 0.0:
                return float(ts[k + 1])
            return float(brentq(f, ts[k + 1], ts[k], xtol=xtol))
        if k > 0 and vals[k] <= vals[k - 1] and vals[k] <= vals[k + 1]:
            res = minimize_scalar(f, bounds=(ts[k + 1], ts[k - 1]), method="bounded",
                                  options={"xatol": 1e-15})
            if res.fun <= 0.0:
                return float(brentq(f, res.x, ts[k - 1], xtol=xtol))
    return 0.0


def bp_threshold_point(pair: DDPair, tol: float = 1e-13, grid: int = THRESHOLD_GRID):
    """(eps_BP, x_BP): infimum of eps(x) over (0, 1], x_BP = 0 for the
    stability-limited case."""
    xs = np.linspace(0.0, 1.0, grid + 1)[1:]
    eps = epsilon_of_x(pair, xs)
    i = int(np.argmin(eps))
    stab = stability_limit(pair)
    if i == 0:
        return stab, 0.0
    lo, hi = xs[i - 1], xs[min(i + 1, len(xs) - 1)]
    res = minimize_scalar(
        lambda t: epsilon_of_x(pair, t), bounds=(lo, hi), method="bounded",
        options={"xatol": tol},
    )
    x_bp, e_bp = float(res.x), float(res.fun)
    if stab <= e_bp:
        return stab, 0.0
    return e_bp, x_bp


def bp_threshold(pair: DDPair, tol: float = 1e-13) -> float:
    return bp_threshold_point(pair, tol)[0]


def three_valued_de(
    pair: DDPair,
    epsilon: float,
    gamma: float,
    tol: float = DE_TOL,
    max_iter: int = DE_MAX_ITER,
) -> ThreeValuedState:
    """Iterate the 0/?/g message densities from the all-erasure start."""
    if not (0.0 <= epsilon <= 1.0 and 0.0 <= gamma <= 1.0):
        raise ValueError("epsilon and gamma must lie in [0, 1]")
    lam, rho = pair.lambda_edge, pair.rho_edge
    if rho is None:
        raise ValueError("three-valued DE needs a check-node distribution")
    a0, aq, ag = 0.0, 1.0, 0.0
    for it in range(1, max_iter + 1):
        b0 = rho(a0)
        bq = 1.0 - rho(1.0 - aq)
        bg = 1.0 - b0 - bq
        erased = epsilon * lam(bg + bq)
        nq = (1.0 - gamma) * epsilon * lam(bq)
        ng = erased - nq
        n0 = 1.0 - erased
        done = abs(nq - aq) < tol and abs(ng - ag) < tol
        a0, aq, ag = n0, nq, ng
        if done:
            b0 = rho(a0)
            bq = 1.0 - rho(1.0 - aq)
            return ThreeValuedState(
                (a0, aq, ag), (b0, bq, 1.0 - b0 - bq), epsilon, gamma, it
            )
    raise ConvergenceError("three-valued DE did not converge", last=(a0, aq, ag))
