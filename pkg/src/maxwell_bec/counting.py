"""Residual graphs after BP, the weight-enumerator exponent Psi and the
counting certificate for the conditional entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import comb, expit

from .density import DEFixedPoint, de_fixed_point
from .exit import trial_entropy
from .poly import DDPair, Poly

PSI_GRID = 10**4
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class NodeDDP:
    """Node-perspective pair (Lambda, Gamma); need not be normalized."""

    Lambda: Poly
    Gamma: Poly

    @property
    def is_empty(self) -> bool:
        return self.Lambda(1.0) <= 0.0 or self.Gamma(1.0) <= 0.0

    def normalized(self) -> "NodeDDP":
        return NodeDDP(self.Lambda.scale(1.0 / self.Lambda(1.0)),
                       self.Gamma.scale(1.0 / self.Gamma(1.0)))

    @property
    def rate(self) -> float:
        """Design rate normalized to the variable count Lambda(1)."""
        return self.Lambda(1.0) - self.Lambda.deriv()(1.0) / self.Gamma.deriv()(1.0) * self.Gamma(1.0)

    @classmethod
    def from_pair(cls, pair: DDPair) -> "NodeDDP":
        if pair.gamma_node is None:
            raise ValueError("counting needs a check-node distribution")
        return cls(pair.lambda_node, pair.gamma_node)


@dataclass(frozen=True)
class ResidualEnsemble:
    lambda_node_res: Poly
    gamma_node_res: Poly
    epsilon: float
    fixed_point: DEFixedPoint

    @property
    def ddp(self) -> NodeDDP:
        return NodeDDP(self.lambda_node_res, self.gamma_node_res)

    @property
    def rate(self) -> float:
        d = self.ddp
        return 0.0 if d.is_empty else d.rate


@dataclass(frozen=True)
class PsiEvaluation:
    u: float
    v: float
    value: float


@dataclass(frozen=True)
class Tightness:
    verdict: str  # certified, violated, marginal
    u_max: float  # location of the largest Psi on [0, 1)
    psi_max: float
    psi2_at_one: float


def residual_ensemble(pair: DDPair, epsilon: float) -> ResidualEnsemble:
    fp = de_fixed_point(pair, epsilon)
    x, y = fp.x, fp.y
    Lam, Gam = pair.lambda_node, NodeDDP.from_pair(pair).Gamma
    lam_res = Poly([epsilon * c * y**k for k, c in enumerate(Lam.coeffs)])
    g = [0.0] * len(Gam.coeffs)
    for r, Gr in enumerate(Gam.coeffs):
        for k in range(2, r + 1):
            g[k] += Gr * comb(r, k, exact=True) * x**k * (1.0 - x) ** (r - k)
    return ResidualEnsemble(lam_res, Poly(g), epsilon, fp)


def _v_of_u(lam_edge: Poly, u: float) -> float:
    num = den = 0.0
    for k, c in enumerate(lam_edge.coeffs):
        if c == 0.0:
            continue
        l = k + 1
        ul = u**l
        num += c * u**k / (1.0 + ul)
        den += c / (1.0 + ul)
    return num / den


def psi(ddp: NodeDDP, u: float) -> PsiEvaluation:
    """Psi(u) of a node-perspective pair (normalized internally); base 2."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    d = ddp.normalized()
    L, G = d.Lambda, d.Gamma
    L1, G1 = L.deriv()(1.0), G.deriv()(1.0)
    lam_edge = L.deriv().scale(1.0 / L1)
    v = _v_of_u(lam_edge, u)
    val = -L1 * math.log2((1.0 + u * v) / ((1.0 + u) * (1.0 + v)))
    for l, c in enumerate(L.coeffs):
        if c:
            val += c * (math.log2(1.0 + u**l) - 1.0 - l * math.log2(1.0 + u))
    w = (1.0 - v) / (1.0 + v)
    for r, c in enumerate(G.coeffs):
        if c:
            val += L1 / G1 * c * math.log2(1.0 + w**r)
    return PsiEvaluation(u, v, val)


def psi_values(ddp: NodeDDP, us) -> np.ndarray:
    return np.array([psi(ddp, float(u)).value for u in us])


def psi_second_derivative_at_one(ddp: NodeDDP, h: float = 1e-4) -> float:
    """Richardson-extrapolated central difference."""
    f = lambda t: psi(ddp, t).value
    d1 = (f(1 + h) - 2 * f(1.0) + f(1 - h)) / h**2
    h2 = h / 2
    d2 = (f(1 + h2) - 2 * f(1.0) + f(1 - h2)) / h2**2
    return (4 * d2 - d1) / 3


def check_tightness(pair: DDPair, epsilon: float, grid_size: int = PSI_GRID) -> Tightness:
    """Scan Psi of the residual pair on u in [0, 1]."""
    res = residual_ensemble(pair, epsilon)
    if res.ddp.is_empty:
        # BP succeeds: the residual graph is empty and the entropy is 0
        return Tightness("certified", 0.0, -math.inf, -math.inf)
    ddp = res.ddp
    us = np.linspace(0.0, 1.0, grid_size + 1)[:-1]
    vals = psi_values(ddp, us)
    k = int(np.argmax(vals))
    u_max, p_max = float(us[k]), float(vals[k])
    # refine interior maxima
    if 0 < k < len(us) - 1:
        r = minimize_scalar(lambda t: -psi(ddp, t).value, bounds=(us[k - 1], us[k + 1]),
                            method="bounded", options={"xatol": 1e-12})
        if -r.fun > p_max:
            u_max, p_max = float(r.x), float(-r.fun)
    d2 = psi_second_derivative_at_one(ddp)
    # grid points hugging u = 1 are dominated by the quadratic decay there
    far = us < 1.0 - 1e-2
    far_max = float(np.max(vals[far])) if np.any(far) else -math.inf
    far_max = max(far_max, p_max if u_max < 1.0 - 1e-2 else -math.inf)
    if p_max < -1e-12 and d2 < 0:
        verdict = "certified"
    elif far_max > 1e-9:
        verdict = "violated"
    elif d2 < 0 and far_max < -1e-9 and p_max < 0:
        verdict = "certified"
    else:
        verdict = "marginal"
    return Tightness(verdict, u_max, p_max, d2)


def conditional_entropy(pair: DDPair, epsilon: float) -> tuple[float, bool]:
    fp = de_fixed_point(pair, epsilon)
    val = max(0.0, float(trial_entropy(pair, epsilon, fp.x, fp.y)))
    return val, check_tightness(pair, epsilon).verdict == "certified"


def certification_boundary(pair: DDPair, lo: float, hi: float, tol: float = 1e-5) -> float:
    """Smallest eps in [lo, hi] certified, assuming a single crossover."""
    ok = lambda e: check_tightness(pair, e, grid_size=2000).verdict == "certified"
    if not ok(hi):
        raise ValueError("upper end not certified")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# growth rate of the expected weight enumerator


def _entropy2(e: float) -> float:
    return -(e * math.log2(e) + (1 - e) * math.log2(1 - e))


def growth_rate(ddp, e: float, tol: float = 1e-13) -> float:
    """(1/n) log2 E[number of codewords with e * n * Lambda'(1) edges].

    The exponent is convex and separable in (log u, log v), so the infimum
    is found by two independent one-dimensional root searches.
    """
    if not 0.0 < e < 1.0:
        raise ValueError("e must lie strictly inside (0, 1)")
    if isinstance(ddp, DDPair):
        ddp = NodeDDP.from_pair(ddp)
    d = ddp.normalized()
    L, G = d.Lambda, d.Gamma
    L1, G1 = L.deriv()(1.0), G.deriv()(1.0)
    lterms = [(l, c) for l, c in enumerate(L.coeffs) if c]
    rterms = [(r, c) for r, c in enumerate(G.coeffs) if c]

    def fu(s):  # in nats
        return sum(c * np.logaddexp(0.0, l * s) for l, c in lterms) - L1 * e * s

    def du(s):
        return sum(c * l * expit(l * s) for l, c in lterms) - L1 * e

    def log_q(r, t):
        v = math.exp(t)
        return r * math.log1p(v) + math.log(_one_plus_wpow(v, r, 1.0)) - LOG2

    def dlog_q(r, t):
        # v q'(v) / q(v) with q = ((1+v)^r + (1-v)^r) / 2
        v = math.exp(t)
        return r * v / (1.0 + v) * _one_plus_wpow(v, r - 1, -1.0) / _one_plus_wpow(v, r, 1.0)

    def fv(t):
        return L1 / G1 * sum(c * log_q(r, t) for r, c in rterms) - L1 * e * t

    def dv(t):
        return L1 / G1 * sum(c * dlog_q(r, t) for r, c in rterms) - L1 * e

    s = _convex_root(du, tol)
    t = _convex_root(dv, tol)
    if s is None or t is None:
        return -math.inf
    return (fu(s) + fv(t)) / LOG2 - L1 * _entropy2(e)


def _convex_root(deriv, tol, span: float = 60.0):
    lo, hi = -span, span
    if deriv(lo) > 0:
        return None
    if deriv(hi) < 0:
        return None
    return brentq(deriv, lo, hi, xtol=tol)


def _one_plus_wpow(v: float, k: int, sign: float) -> float:
    """1 + sign * w**k with w = (1 - v) / (1 + v), accurate as w -> -1."""
    if v <= 1.0:
        return 1.0 + sign * ((1.0 - v) / (1.0 + v)) ** k
    m = math.log1p(-2.0 / (1.0 + v))  # log |w|
    s = sign * (-1.0) ** k
    if s > 0:
        return 1.0 + math.exp(k * m)
    return -math.expm1(k * m)
