"""Exhaustive oracles for tiny codes: list decoding and exact EXIT functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .decoder import _as_mask
from .graph import TannerGraph

LIST_DIM_LIMIT = 25
EXIT_DIM_LIMIT = 15
EXIT_LENGTH_LIMIT = 24
EXHAUSTIVE_LIMIT = 20


class OracleSizeError(ValueError):
    pass


def gf2_rank(H) -> int:
    H = np.asarray(H)
    return H.shape[1] - len(nullspace_basis(H))


def nullspace_basis(H) -> list:
    """Basis of {x : H x = 0} over GF(2), as 0/1 numpy vectors."""
    A = (np.asarray(H, dtype=np.uint8) % 2).copy()
    m, n = A.shape
    pivots = []
    r = 0
    for col in range(n):
        hit = next((i for i in range(r, m) if A[i, col]), None)
        if hit is None:
            continue
        A[[r, hit]] = A[[hit, r]]
        for i in range(m):
            if i != r and A[i, col]:
                A[i] ^= A[r]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.uint8)
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = A[i, f]
        basis.append(x)
    return basis


def codewords(H) -> np.ndarray:
    """All codewords as rows; refuses dimensions above the list bound."""
    basis = nullspace_basis(H)
    k = len(basis)
    n = np.asarray(H).shape[1]
    if k > LIST_DIM_LIMIT:
        raise OracleSizeError(f"code dimension {k} exceeds {LIST_DIM_LIMIT}")
    if k == 0:
        return np.zeros((1, n), dtype=np.uint8)
    B = np.array(basis, dtype=np.uint8)
    coeffs = ((np.arange(2**k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    return (coeffs @ B) % 2


def brute_force_list(graph: TannerGraph, erased) -> np.ndarray:
    """Codewords compatible with zeros on the received positions."""
    er = _as_mask(erased, graph.n)
    H = graph.parity_check_matrix()
    idx = np.nonzero(er)[0]
    if len(idx) <= EXHAUSTIVE_LIMIT:
        # try every assignment of the erased bits
        k = len(idx)
        assign = ((np.arange(2**k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
        synd = (assign.astype(np.int64) @ H[:, idx].T.astype(np.int64)) % 2
        ok = assign[~synd.any(axis=1)] if H.shape[0] else assign
        words = np.zeros((len(ok), graph.n), dtype=np.uint8)
        words[:, idx] = ok
        return words
    sub = codewords(H[:, idx])
    words = np.zeros((len(sub), graph.n), dtype=np.uint8)
    words[:, idx] = sub
    return words


@dataclass(frozen=True)
class ExactExit:
    n: int
    k: int
    counts: tuple  # counts[i][s]: subsets S of size s leaving bit i undetermined
    average: tuple  # monomial coefficients of the average EXIT polynomial (Fractions)
    integral: Fraction

    def per_bit_monomial(self, i: int) -> tuple:
        return _bernstein_to_monomial(self.counts[i], self.n - 1)

    @property
    def area_ok(self) -> bool:
        return self.integral == Fraction(self.k, self.n)


def _bernstein_to_monomial(c, N) -> tuple:
    """sum_s c_s x^s (1-x)^(N-s) in the monomial basis, exact."""
    out = [Fraction(0)] * (N + 1)
    for s, cs in enumerate(c):
        if not cs:
            continue
        for j in range(N - s + 1):
            out[s + j] += Fraction(cs * comb(N - s, j) * (-1) ** j)
    return tuple(out)


def exact_exit_polynomial(code) -> ExactExit:
    """Per-bit EXIT functions h_i(eps) = P(bit i not recoverable from the
    other positions), with all coefficients as exact integers/rationals."""
    H = code.parity_check_matrix() if isinstance(code, TannerGraph) else np.asarray(code) % 2
    n = H.shape[1]
    basis = nullspace_basis(H)
    k = len(basis)
    if k > EXIT_DIM_LIMIT or n > EXIT_LENGTH_LIMIT:
        raise OracleSizeError(f"exact EXIT needs k <= {EXIT_DIM_LIMIT} and n <= {EXIT_LENGTH_LIMIT}")
    words = codewords(H)
    # bit masks of the codeword supports
    weights = (1 << np.arange(n, dtype=np.int64))
    supp = (words.astype(np.int64) * weights).sum(axis=1)
    N = n - 1
    pop = np.array([bin(s).count("1") for s in range(2**N)], dtype=np.int64)
    counts = []
    for i in range(n):
        hit = np.zeros(2**N, dtype=bool)
        for w in supp[(supp >> i) & 1 == 1]:
            rest = int(w) & ~(1 << i)
            low = rest & ((1 << i) - 1)
            high = rest >> (i + 1)
            hit[low | (high << i)] = True
        # close upward: S is bad once it contains a bad set
        for b in range(N):
            step = 1 << b
            view = hit.reshape(-1, 2 * step)
            view[:, step:] |= view[:, :step]
        counts.append(tuple(int(v) for v in np.bincount(pop[hit], minlength=N + 1)))
    avg = [Fraction(0)] * (N + 1)
    for c in counts:
        for j, v in enumerate(_bernstein_to_monomial(c, N)):
            avg[j] += v
    avg = tuple(a / n for a in avg)
    # int_0^1 x^s (1-x)^(N-s) dx = 1 / (n * C(N, s))
    integral = sum(
        (Fraction(cs, n * comb(N, s)) for c in counts for s, cs in enumerate(c)),
        Fraction(0),
    ) / n
    return ExactExit(n, k, tuple(counts), avg, integral)


def hamming_parity_check(r: int) -> np.ndarray:
    """Columns are all nonzero r-bit vectors: the [2^r - 1, 2^r - 1 - r] code."""
    n = 2**r - 1
    return np.array([[(j >> b) & 1 for j in range(1, n + 1)] for b in range(r)], dtype=np.uint8)


def single_parity_check(n: int) -> np.ndarray:
    return np.ones((1, n), dtype=np.uint8)


def repetition_code(n: int) -> np.ndarray:
    return np.array([[1 if j in (i, i + 1) else 0 for j in range(n)] for i in range(n - 1)], dtype=np.uint8)


def component_exit_poly(H):
    """Average exact EXIT polynomial of a component code as a float Poly."""
    from ..poly import Poly

    ex = exact_exit_polynomial(H)
    return Poly([float(c) for c in ex.average]), ex
