"""Peeling and Maxwell decoding on a finite Tanner graph (all-zero codeword).

Every determined bit carries a GF(2) expression in the guesses, stored as
(constant bit, integer bitmask of guess indices). A second resolution of the
same bit yields a linear condition on the guesses; the number of copies the
decoder keeps alive is 2 ** (guesses - rank(conditions)).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import TannerGraph

DECODE, GUESS, CONDITION = "decode", "guess", "condition"


@dataclass(frozen=True)
class GuessExpr:
    constant: int
    mask: int

    @property
    def support(self) -> tuple:
        m, out, k = self.mask, [], 0
        while m:
            if m & 1:
                out.append(k)
            m >>= 1
            k += 1
        return tuple(out)

    def __xor__(self, other: "GuessExpr") -> "GuessExpr":
        return GuessExpr(self.constant ^ other.constant, self.mask ^ other.mask)


class GF2Basis:
    """Incremental row echelon form over GF(2); rows are Python ints."""

    def __init__(self):
        self.rows = {}  # pivot bit -> row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row: int) -> bool:
        while row:
            p = row.bit_length() - 1
            piv = self.rows.get(p)
            if piv is None:
                self.rows[p] = row
                return True
            row ^= piv
        return False


@dataclass
class MaxwellRun:
    n: int
    erased: int
    events: list = field(default_factory=list)  # (time, kind, bit, entropy, determined)
    conditions: list = field(default_factory=list)
    trajectory: list = field(default_factory=list)  # (determined, entropy)
    guesses: int = 0
    rank: int = 0
    cancellations: int = 0
    guessed: list = field(default_factory=list)
    residual: list = field(default_factory=list)  # stopping set after the first BP phase

    @property
    def final_entropy(self) -> int:
        return self.guesses - self.rank


def _as_mask(erased, n: int) -> np.ndarray:
    if isinstance(erased, np.ndarray) and erased.dtype == bool:
        return erased.copy()
    out = np.zeros(n, dtype=bool)
    out[list(erased)] = True
    return out


def peel_bp(graph: TannerGraph, erased):
    """Peeling decoder; returns (residual mask, number of bits recovered)."""
    er = _as_mask(erased, graph.n)
    chk = graph.reduced_chk_adj()
    var = [[] for _ in range(graph.n)]
    for c, nbrs in enumerate(chk):
        for v in nbrs:
            var[v].append(c)
    count = [0] * graph.m
    xor = [0] * graph.m
    for c, nbrs in enumerate(chk):
        for v in nbrs:
            if er[v]:
                count[c] += 1
                xor[c] ^= v
    queue = deque(c for c in range(graph.m) if count[c] == 1)
    decoded = 0
    while queue:
        c = queue.popleft()
        if count[c] != 1:
            continue
        v = xor[c]
        er[v] = False
        decoded += 1
        for d in var[v]:
            count[d] -= 1
            xor[d] ^= v
            if count[d] == 1:
                queue.append(d)
    return er, decoded


def maxwell_decode(graph: TannerGraph, erased, strategy="sequential", seed=None,
                   delta_gamma: float = 0.01, record_events: bool = True) -> MaxwellRun:
    """Run the Maxwell decoder until every bit is determined.

    ``strategy`` is ``"sequential"`` (one uniformly random undetermined bit per
    stall) or ``"rounds"`` (each undetermined bit is guessed with probability
    delta_gamma / (1 - gamma) per round).
    """
    if strategy not in ("sequential", "rounds"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(seed)
    n = graph.n
    er = _as_mask(erased, n)
    chk = graph.reduced_chk_adj()
    var = [[] for _ in range(n)]
    for c, nbrs in enumerate(chk):
        for v in nbrs:
            var[v].append(c)

    expr = [None] * n
    zero = GuessExpr(0, 0)
    for v in range(n):
        if not er[v]:
            expr[v] = zero
    und = [v for v in range(n) if er[v]]
    pos = {v: i for i, v in enumerate(und)}
    count = [0] * graph.m
    xor_idx = [0] * graph.m
    acc_c = [0] * graph.m
    acc_m = [0] * graph.m
    for c, nbrs in enumerate(chk):
        for v in nbrs:
            if er[v]:
                count[c] += 1
                xor_idx[c] ^= v

    run = MaxwellRun(n, int(er.sum()))
    basis = GF2Basis()
    state = {"t": 0, "det": n - len(und)}

    def log(kind, bit):
        state["t"] += 1
        S = run.guesses - basis.rank
        if record_events:
            run.events.append((state["t"], kind, bit, S, state["det"]))
        run.trajectory.append((state["det"], S))

    def remove_und(v):
        i = pos.pop(v)
        last = und.pop()
        if last != v:
            und[i] = last
            pos[last] = i

    def assign(v, e, source, kind):
        expr[v] = e
        remove_und(v)
        state["det"] += 1
        pending = []
        for d in var[v]:
            acc_c[d] ^= e.constant
            acc_m[d] ^= e.mask
            count[d] -= 1
            xor_idx[d] ^= v
            if count[d] == 1:
                queue.append(d)
            elif count[d] == 0 and d != source:
                # the check now fixes v a second time
                pending.append(GuessExpr(acc_c[d], acc_m[d]))
        log(kind, v)
        for cond in pending:
            if cond.mask == 0:
                run.cancellations += 1
                continue
            run.conditions.append(cond)
            if basis.add(cond.mask):
                run.rank = basis.rank
                log(CONDITION, v)

    queue = deque(c for c in range(graph.m) if count[c] == 1)

    def propagate():
        while queue:
            c = queue.popleft()
            if count[c] != 1:
                continue
            assign(xor_idx[c], GuessExpr(acc_c[c], acc_m[c]), c, DECODE)

    def guess(v):
        g = run.guesses
        run.guesses += 1
        run.guessed.append(v)
        assign(v, GuessExpr(0, 1 << g), None, GUESS)

    run.trajectory.append((state["det"], 0))
    propagate()
    run.residual = sorted(und)
    gamma = 0.0
    while und:
        if strategy == "sequential":
            guess(und[int(rng.integers(len(und)))])
        else:
            p = 1.0 if gamma + delta_gamma >= 1.0 else delta_gamma / (1.0 - gamma)
            gamma = min(1.0, gamma + delta_gamma)
            picks = [v for v in sorted(und) if rng.random() < p]
            for v in picks:
                if expr[v] is None:
                    guess(v)
        propagate()
    return run


def guess_count_lower_bound(graph: TannerGraph, run: MaxwellRun) -> int:
    """G - sum_i (l_i^g - 1) + sum_{C_g} (r_i - 1) on the residual system,
    from the final g/? message state."""
    res = set(run.residual)
    chk = [[v for v in nbrs if v in res] for nbrs in graph.reduced_chk_adj()]
    chk = [nb for nb in chk if nb]
    guessed = set(run.guessed)
    # edge messages; a message is g once it can be expressed in the guesses
    edges = [(c, v) for c, nb in enumerate(chk) for v in nb]
    var_edges = {v: [] for v in res}
    for k, (c, v) in enumerate(edges):
        var_edges[v].append(k)
    chk_edges = [[] for _ in chk]
    for k, (c, v) in enumerate(edges):
        chk_edges[c].append(k)
    v2c = [False] * len(edges)
    c2v = [False] * len(edges)
    changed = True
    while changed:
        changed = False
        for k, (c, v) in enumerate(edges):
            if not v2c[k]:
                if v in guessed or any(c2v[j] for j in var_edges[v] if j != k):
                    v2c[k] = changed = True
            if not c2v[k]:
                if all(v2c[j] for j in chk_edges[c] if j != k):
                    c2v[k] = changed = True
    total = run.guesses
    for v in res:
        lg = sum(c2v[j] for j in var_edges[v]) + (v in guessed)
        total -= lg - 1
    for c, ks in enumerate(chk_edges):
        if all(v2c[j] for j in ks):
            total += len(ks) - 1
    return total
