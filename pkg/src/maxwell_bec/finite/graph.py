"""Tanner graphs drawn from the configuration model."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..poly import DDPair

log = logging.getLogger(__name__)


@dataclass
class TannerGraph:
    n: int
    m: int
    var_adj: list  # per variable, incident checks (repeated on multi-edges)
    chk_adj: list  # per check, incident variables
    seed: int | None = None

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.var_adj)

    def reduced_chk_adj(self) -> list:
        """Check neighbourhoods with multi-edges reduced mod 2."""
        out = []
        for nbrs in self.chk_adj:
            odd = {}
            for v in nbrs:
                odd[v] = not odd.get(v, False)
            out.append(sorted(v for v, keep in odd.items() if keep))
        return out

    def reduced_var_adj(self) -> list:
        out = [[] for _ in range(self.n)]
        for c, nbrs in enumerate(self.reduced_chk_adj()):
            for v in nbrs:
                out[v].append(c)
        return out

    def parity_check_matrix(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        for c, nbrs in enumerate(self.chk_adj):
            for v in nbrs:
                H[c, v] ^= 1
        return H

    def has_multi_edges(self) -> bool:
        return any(len(set(a)) != len(a) for a in self.var_adj)

    def is_forest(self) -> bool:
        """True when the (simple) graph has no cycles."""
        parent = list(range(self.n + self.m))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        if self.has_multi_edges():
            return False
        for v, checks in enumerate(self.var_adj):
            for c in checks:
                a, b = find(v), find(self.n + c)
                if a == b:
                    return False
                parent[a] = b
        return True

    def to_text(self) -> str:
        lines = [f"# n={self.n} m={self.m}"]
        for v, checks in enumerate(self.var_adj):
            lines.append(f"v {v}: " + " ".join(str(c) for c in checks))
        return "\n".join(lines) + "\n"


def from_edges(n: int, m: int, edges, seed=None) -> TannerGraph:
    var_adj = [[] for _ in range(n)]
    chk_adj = [[] for _ in range(m)]
    for v, c in edges:
        var_adj[v].append(c)
        chk_adj[c].append(v)
    return TannerGraph(n, m, var_adj, chk_adj, seed)


def from_matrix(H) -> TannerGraph:
    H = np.asarray(H) % 2
    m, n = H.shape
    edges = [(v, c) for c in range(m) for v in range(n) if H[c, v]]
    return from_edges(n, m, edges)


def parse_adjacency(text: str) -> TannerGraph:
    """Parse lines ``v <var>: <check> <check> ...``; ``#`` starts a comment,
    an optional ``# n=.. m=..`` header fixes the sizes."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("n="):
                    n = int(tok[2:])
                elif tok.startswith("m="):
                    m = int(tok[2:])
            continue
        if not line:
            continue
        head, sep, rest = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "v":
            raise ValueError(f"line {lineno}: expected 'v <index>: <checks>'")
        v = int(parts[1])
        edges.extend((v, int(c)) for c in rest.split())
    n = n if n is not None else 1 + max((v for v, _ in edges), default=-1)
    m = m if m is not None else 1 + max((c for _, c in edges), default=-1)
    return from_edges(n, m, edges)


def load_graph(path) -> TannerGraph:
    return parse_adjacency(Path(path).read_text())


def largest_remainder(weights, total: int) -> np.ndarray:
    """Integer counts summing to ``total`` and within one of total * weights."""
    w = np.asarray(weights, dtype=float)
    raw = w / w.sum() * total
    counts = np.floor(raw).astype(int)
    short = total - counts.sum()
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def degree_counts(pair: DDPair, n: int):
    """Node counts per degree for variables and checks; the check side is
    repaired by a single-node degree change when the socket totals differ."""
    if pair.gamma_node is None:
        raise ValueError("finite graphs need a check-node distribution")
    Lam, Gam = pair.lambda_node.coeffs, pair.gamma_node.coeffs
    vdeg = [d for d, c in enumerate(Lam) if c > 0]
    cdeg = [d for d, c in enumerate(Gam) if c > 0]
    vcnt = largest_remainder([Lam[d] for d in vdeg], n)
    E = int(sum(d * k for d, k in zip(vdeg, vcnt)))
    m = max(int(round(E / pair.gamma_node.deriv()(1.0))), 1)
    ccnt = largest_remainder([Gam[d] for d in cdeg], m)
    checks = {d: int(k) for d, k in zip(cdeg, ccnt)}
    diff = E - sum(d * k for d, k in checks.items())
    if diff:
        # move one node of the most common degree, or spread the change by
        # one socket per node when a single move would go below degree 2
        d0 = max(checks, key=lambda d: (checks[d], d))
        moves = [(d0, d0 + diff)] if d0 + diff >= 2 else [(d0, d0 - 1)] * -diff
        if d0 - 1 < 2 or len(moves) > checks[d0]:
            raise ValueError("degree sequence not realizable at this length")
        for a, b in moves:
            checks[a] -= 1
            checks[b] = checks.get(b, 0) + 1
        log.info("check degree repair: %d node(s) %d -> %d", len(moves), d0, moves[0][1])
    variables = {d: int(k) for d, k in zip(vdeg, vcnt)}
    return variables, {d: k for d, k in checks.items() if k}


def sample_graph(pair: DDPair, n: int, seed=None) -> TannerGraph:
    if n < pair.max_left_degree:
        raise ValueError("n must be at least the maximum variable degree")
    rng = np.random.default_rng(seed)
    vc, cc = degree_counts(pair, n)
    vsock = np.repeat(np.arange(n), _expand(vc))
    cdegs = _expand(cc)
    m = len(cdegs)
    csock = np.repeat(np.arange(m), cdegs)
    rng.shuffle(csock)
    return from_edges(n, m, zip(vsock.tolist(), csock.tolist()), seed)


def _expand(counts: dict) -> np.ndarray:
    return np.array([d for d in sorted(counts) for _ in range(counts[d])], dtype=int)


def random_tree(n_checks: int, rng, max_check_degree: int = 4) -> TannerGraph:
    """Random Tanner tree whose leaves are all variables (checks have degree >= 2)."""
    edges = []
    # grow check by check; each new check hangs off an existing variable
    n = 1
    for c in range(n_checks):
        anchor = int(rng.integers(n)) if c else 0
        deg = int(rng.integers(2, max_check_degree + 1))
        edges.append((anchor, c))
        for _ in range(deg - 1):
            edges.append((n, c))
            n += 1
    return from_edges(n, n_checks, edges)
