"""Real-coefficient polynomials and LDPC degree-distribution pairs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

SUM_TOL = 1e-9


class EnsembleError(ValueError):
    """Raised for malformed or unsupported degree distributions."""


@dataclass(frozen=True)
class Poly:
    """Dense polynomial, ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[float]):
        c = [float(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        if not all(math.isfinite(v) for v in c):
            raise EnsembleError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, power: int, coeff: float = 1.0) -> "Poly":
        return cls([0.0] * power + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            out = np.zeros_like(x, dtype=float)
            for c in reversed(self.coeffs):
                out = out * x + c
            return out
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:] or [0.0])

    def antideriv(self) -> "Poly":
        """Antiderivative vanishing at zero."""
        return Poly([0.0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def integral_zero_to(self, x: float) -> float:
        return self.antideriv()(x)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return Poly([u + v for u, v in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Poly") -> "Poly":
        return Poly(np.convolve(self.coeffs, other.coeffs))

    def scale(self, s: float) -> "Poly":
        return Poly([s * c for c in self.coeffs])

    def compose(self, inner: "Poly") -> "Poly":
        """Return ``self(inner(x))`` as a polynomial."""
        out = Poly([0.0])
        for c in reversed(self.coeffs):
            out = out * inner + Poly([c])
        return out

    def __repr__(self) -> str:
        terms = [f"{c:g}x^{k}" for k, c in enumerate(self.coeffs) if c != 0.0]
        return "Poly(" + (" + ".join(terms) or "0") + ")"


def _normalized(p: Poly, name: str) -> Poly:
    if any(c < 0 for c in p.coeffs):
        raise EnsembleError(f"{name}: negative coefficient")
    s = sum(p.coeffs)
    if abs(s - 1.0) > SUM_TOL:
        raise EnsembleError(f"{name}: coefficients sum to {s!r}, expected 1")
    if p.coeffs[0] != 0.0:
        raise EnsembleError(f"{name}: degree-1 nodes are not supported")
    return p.scale(1.0 / s)


def edge_to_node(edge: Poly) -> Poly:
    """Node-perspective distribution ``int_0^x edge / int_0^1 edge``."""
    a = edge.antideriv()
    total = a(1.0)
    if total <= 0.0:
        raise EnsembleError("degree distribution integrates to zero")
    return a.scale(1.0 / total)


def node_to_edge(node: Poly) -> Poly:
    d = node.deriv()
    return d.scale(1.0 / d(1.0))


@dataclass(frozen=True)
class DDPair:
    """Edge-perspective pair (lambda, rho), optionally with a generalized
    check-side EXIT function ``right_exit`` replacing ``1 - rho(1 - x)``."""

    lambda_edge: Poly
    rho_edge: Optional[Poly] = None
    right_exit: Optional[Poly] = None
    lambda_node: Poly = field(init=False)
    gamma_node: Optional[Poly] = field(init=False)

    def __post_init__(self):
        lam = _normalized(self.lambda_edge, "lambda")
        object.__setattr__(self, "lambda_edge", lam)
        object.__setattr__(self, "lambda_node", edge_to_node(lam))
        if self.rho_edge is not None:
            rho = _normalized(self.rho_edge, "rho")
            object.__setattr__(self, "rho_edge", rho)
            object.__setattr__(self, "gamma_node", edge_to_node(rho))
        else:
            object.__setattr__(self, "gamma_node", None)
        if self.right_exit is None:
            if self.rho_edge is None:
                raise EnsembleError("need rho or a right EXIT function")
        else:
            _check_exit_function(self.right_exit)

    @property
    def generalized(self) -> bool:
        return self.right_exit is not None

    # The check-side EXIT function and its companions. All accept floats or arrays.
    def y(self, x):
        if self.right_exit is not None:
            return self.right_exit(x)
        # sum_i rho_i (1 - (1-x)^i), written to avoid cancellation at small x
        x = np.asarray(x, dtype=float)
        plain = 1.0 - self.rho_edge(1.0 - x)
        with np.errstate(divide="ignore", invalid="ignore"):
            lg = np.log1p(-x)
            out = sum(-c * np.expm1(i * lg) for i, c in enumerate(self.rho_edge.coeffs) if c)
        out = np.where(x < 0.5, out + (1.0 - sum(self.rho_edge.coeffs)), plain)
        return float(out) if out.ndim == 0 else out

    def dy(self, x):
        if self.right_exit is not None:
            return self.right_exit.deriv()(x)
        return self.rho_edge.deriv()(1.0 - x)

    def y_integral(self, x):
        """``int_0^x y(u) du``."""
        if self.right_exit is not None:
            return self.right_exit.antideriv()(x)
        R = self.rho_edge.antideriv()
        return x - R(1.0) + R(1.0 - x)

    @property
    def int_lambda(self) -> float:
        return self.lambda_edge.integral_zero_to(1.0)

    @property
    def int_y(self) -> float:
        return float(self.y_integral(1.0))

    @property
    def avg_left_degree(self) -> float:
        """Lambda'(1) = 1 / int lambda."""
        return 1.0 / self.int_lambda

    @property
    def design_rate(self) -> float:
        return 1.0 - self.check_ratio

    @property
    def check_ratio(self) -> float:
        """Checks per variable, int rho / int lambda (or (1 - int y) / int lambda)."""
        if self.right_exit is None:
            return self.rho_edge.integral_zero_to(1.0) / self.int_lambda
        return (1.0 - self.int_y) / self.int_lambda

    @property
    def max_left_degree(self) -> int:
        return self.lambda_node.degree

    def describe(self) -> dict:
        out = {"lambda": _to_degree_map(self.lambda_edge)}
        if self.rho_edge is not None:
            out["rho"] = _to_degree_map(self.rho_edge)
        if self.right_exit is not None:
            out["right_exit"] = {str(k): c for k, c in enumerate(self.right_exit.coeffs) if c}
        return out


def _check_exit_function(y: Poly) -> None:
    if abs(y(0.0)) > 1e-12 or abs(y(1.0) - 1.0) > 1e-9:
        raise EnsembleError("right EXIT function must satisfy y(0)=0, y(1)=1")
    grid = np.linspace(0.0, 1.0, 2001)
    # evaluation error grows with the coefficient magnitudes
    slack = 1e-13 * max(1.0, sum(abs(c) for c in y.coeffs))
    if np.any(np.diff(y(grid)) < -slack):
        raise EnsembleError("right EXIT function must be nondecreasing on [0,1]")


def design_rate(pair: DDPair) -> float:
    return pair.design_rate


def _to_degree_map(p: Poly) -> dict:
    return {str(k + 1): c for k, c in enumerate(p.coeffs) if c}


def poly_from_degrees(degrees: Mapping) -> Poly:
    """Edge distribution from ``{degree: coeff}``; ``x**(degree-1)`` terms."""
    terms = {}
    for key, coeff in degrees.items():
        d = int(key)
        if d < 1:
            raise EnsembleError(f"invalid degree {key!r}")
        terms[d - 1] = terms.get(d - 1, 0.0) + float(coeff)
    c = [0.0] * (max(terms) + 1)
    for k, v in terms.items():
        c[k] = v
    return Poly(c)


def poly_from_powers(powers: Mapping) -> Poly:
    terms = {int(k): float(v) for k, v in powers.items()}
    if any(k < 0 for k in terms):
        raise EnsembleError("negative power in right_exit")
    c = [0.0] * (max(terms) + 1)
    for k, v in terms.items():
        c[k] += v
    return Poly(c)


def regular(l: int, r: int) -> DDPair:
    """The (l, r)-regular pair (x^(l-1), x^(r-1))."""
    return DDPair(Poly.monomial(l - 1), Poly.monomial(r - 1))


def ensemble_from_dict(spec: Mapping) -> DDPair:
    if "lambda" not in spec:
        raise EnsembleError("missing field 'lambda'")
    lam = poly_from_degrees(spec["lambda"])
    rho = poly_from_degrees(spec["rho"]) if spec.get("rho") else None
    y = poly_from_powers(spec["right_exit"]) if spec.get("right_exit") else None
    return DDPair(lam, rho, y)


def load_ensemble(path) -> DDPair:
    text = Path(path).read_text()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EnsembleError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(spec, dict):
        raise EnsembleError(f"{path}: top level must be an object")
    return ensemble_from_dict(spec)
