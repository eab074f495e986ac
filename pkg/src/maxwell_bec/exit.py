"""EXIT curves of LDPC ensembles on the BEC and the Maxwell construction.

Everything here is parametrized by the variable-to-check erasure fraction
``x``: every x in (0, 1] is a DE fixed point for the channel ``eps(x)``.
The trial entropy evaluated along that curve,

    P(x) = Lambda'(1) * (Y(x) - x y(x)) + eps(x) * Lambda(y(x)),
    Y(x) = int_0^x y,

is an antiderivative of h dε along the EBP curve, so every area in this
module is a difference of ``P`` values. Quadrature is kept only as an
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .density import (
    bp_threshold_point,
    de_fixed_point,
    epsilon_of_x,
    epsilon_slope_numerator,
    stability_limit,
)
from .poly import DDPair, Poly

PARTITION_GRID = 10**4
ROOT_XTOL = 1e-14


class PartitionError(RuntimeError):
    pass


class BalanceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# trial entropy


def trial_entropy(pair: DDPair, epsilon, x, y):
    """P_eps(x, y) for arbitrary (not necessarily fixed-point) arguments."""
    L1 = pair.avg_left_degree
    if pair.gamma_node is not None and pair.right_exit is None:
        G = pair.gamma_node
        check_term = L1 / G.deriv()(1.0) * (1.0 - G(1.0 - x))
    else:
        check_term = L1 * (x - pair.y_integral(x))
    return L1 * x * (1.0 - y) - check_term + epsilon * pair.lambda_node(y)


def trial_entropy_grad(pair: DDPair, epsilon, x, y):
    """(dP/dx, dP/dy); both vanish at DE fixed points."""
    L1 = pair.avg_left_degree
    return (
        L1 * (pair.y(x) - y),
        L1 * (epsilon * pair.lambda_edge(y) - x),
    )


def curve_entropy(pair: DDPair, x):
    """P(x) = P_{eps(x)}(x, y(x)); the x -> 0 limit is 0."""
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    y = pair.y(xa)
    out = np.zeros_like(xa)
    nz = xa > 0
    L1 = pair.avg_left_degree
    eps = xa[nz] / pair.lambda_edge(y[nz])
    out[nz] = L1 * (pair.y_integral(xa[nz]) - xa[nz] * y[nz]) + eps * pair.lambda_node(y[nz])
    return float(out[0]) if scalar else out


def check_exit_polynomial(pair: DDPair) -> Poly:
    """y(x) as a polynomial."""
    if pair.right_exit is not None:
        return pair.right_exit
    return Poly([1.0]) - pair.rho_edge.compose(Poly([1.0, -1.0]))


def curve_entropy_polynomial(pair: DDPair) -> Poly:
    """P(x) as a polynomial; exists when lambda divides Lambda (e.g. regular
    left degree), since eps(x) Lambda(y) = x Lambda(y) / lambda(y)."""
    lam, Lam = pair.lambda_edge, pair.lambda_node
    q, rem = np.polydiv(np.array(Lam.coeffs[::-1]), np.array(lam.coeffs[::-1]))
    if np.max(np.abs(rem), initial=0.0) > 1e-12:
        raise ValueError("Lambda / lambda is not a polynomial; P(x) is rational")
    y = check_exit_polynomial(pair)
    X = Poly([0.0, 1.0])
    base = (y.antideriv() - X * y).scale(pair.avg_left_degree)
    return base + X * Poly(q[::-1]).compose(y)


# ---------------------------------------------------------------------------
# branch partition


@dataclass(frozen=True)
class BranchPartition:
    intervals: tuple  # ((x_low, x_high), ...) ascending in x
    jump_epsilons: tuple  # eps(x_low) for each interval

    @property
    def J(self) -> int:
        return len(self.intervals)

    @property
    def x_bp(self) -> float:
        return self.intervals[0][0]

    @property
    def eps_bp(self) -> float:
        return self.jump_epsilons[0]


def _critical_points(pair: DDPair, grid: int):
    """Local minima and maxima of eps(x) on (0, 1), ascending."""
    xs = np.linspace(0.0, 1.0, grid + 1)
    num = epsilon_slope_numerator(pair, xs)
    # N(0) = 0 identically; take the sign just to the right
    num[0] = num[1]
    sgn = np.sign(num)
    minima, maxima = [], []
    f = lambda t: epsilon_slope_numerator(pair, t)
    for k in range(grid):
        a, b = sgn[k], sgn[k + 1]
        if a < 0 and b >= 0 and k + 1 < grid:
            minima.append(brentq(f, xs[k], xs[k + 1], xtol=ROOT_XTOL))
        elif a > 0 and b <= 0 and k + 1 < grid:
            maxima.append(brentq(f, xs[k], xs[k + 1], xtol=ROOT_XTOL))
    crit = sorted(minima + maxima)
    h = 1.0 / grid
    if any(b - a < 2 * h for a, b in zip(crit, crit[1:])):
        raise PartitionError("critical points of eps(x) closer than the grid; refine grid")
    return minima, maxima


def compute_partition(pair: DDPair, grid_size: int = PARTITION_GRID) -> BranchPartition:
    """Intervals of x on which the BP fixed point moves, built downward from x=1."""
    if grid_size < 1000:
        raise ValueError("grid_size must be at least 1000")
    minima, maxima = _critical_points(pair, grid_size)
    xs = np.linspace(0.0, 1.0, grid_size + 1)
    eps_grid = epsilon_of_x(pair, xs)
    intervals = []
    x_hi = 1.0
    while True:
        below = [m for m in minima if m < x_hi]
        x_lo = max(below) if below else 0.0
        intervals.append((x_lo, x_hi))
        if x_lo == 0.0:
            break
        e = epsilon_of_x(pair, x_lo)
        peaks = [m for m in maxima if m < x_lo]
        if not peaks:
            break
        peak = max(peaks)
        idx = np.nonzero((xs < peak) & (eps_grid <= e))[0]
        if len(idx) == 0:
            break
        k = idx[-1]
        g = lambda t: epsilon_of_x(pair, t) - e
        lo = xs[k]
        hi = min(xs[k + 1], peak)
        if lo == 0.0 and g(0.0) == 0.0:
            x_hi = 0.0
        else:
            x_hi = brentq(g, lo, hi, xtol=ROOT_XTOL)
        if x_hi == 0.0:
            break
    intervals = [(a, b) for a, b in reversed(intervals) if b - a > 0.0]
    jumps = tuple(float(epsilon_of_x(pair, a)) for a, _ in intervals)
    return BranchPartition(tuple(intervals), jumps)


def increasing_pieces(pair: DDPair, grid_size: int = PARTITION_GRID):
    """All maximal x-intervals on which eps(x) increases (the stable branches)."""
    minima, maxima = _critical_points(pair, grid_size)
    pts = [0.0] + sorted(minima + maxima) + [1.0]
    pieces = []
    for a, b in zip(pts, pts[1:]):
        mid = 0.5 * (a + b)
        if epsilon_slope_numerator(pair, mid) > 0:
            pieces.append((a, b))
    return pieces


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class ExitCurve:
    kind: str  # "BP", "EBP" or "MAP"
    samples: np.ndarray  # rows (epsilon, h, x)
    jumps: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def epsilon(self):
        return self.samples[:, 0]

    @property
    def h(self):
        return self.samples[:, 1]


def exit_value(pair: DDPair, x):
    """h = Lambda(y(x)) at the fixed point x."""
    return pair.lambda_node(pair.y(x))


def ebp_curve(pair: DDPair, grid_size: int = 2001) -> ExitCurve:
    part = compute_partition(pair)
    xs = np.union1d(np.linspace(0.0, 1.0, grid_size), np.ravel(part.intervals))
    rows = np.column_stack([epsilon_of_x(pair, xs), exit_value(pair, xs), xs])
    return ExitCurve("EBP", rows, meta={"partition": part})


def bp_exit(pair: DDPair, epsilon: float, eps_bp: float | None = None) -> float:
    if eps_bp is None:
        eps_bp = bp_threshold_point(pair)[0]
    if epsilon < eps_bp:
        return 0.0
    fp = de_fixed_point(pair, epsilon)
    return float(pair.lambda_node(fp.y))


def bp_curve(pair: DDPair, grid_size: int = 2001) -> ExitCurve:
    """Parametric BP EXIT curve; each interval is half-open so the vertical
    jump segments are represented by their upper endpoint only."""
    part = compute_partition(pair)
    per = max(grid_size // part.J, 16)
    rows = []
    eps_bp = part.eps_bp
    if math.isfinite(eps_bp) and eps_bp > 0:
        for e in np.linspace(0.0, eps_bp, 16, endpoint=False):
            rows.append((e, 0.0, 0.0))
    for i, (a, b) in enumerate(part.intervals):
        last = i == part.J - 1
        xs = np.linspace(a, b, per, endpoint=last)
        for x in xs:
            rows.append((float(epsilon_of_x(pair, x)), float(exit_value(pair, x)), float(x)))
    jumps = tuple(
        (part.jump_epsilons[i], part.intervals[i - 1][1] if i else 0.0, part.intervals[i][0])
        for i in range(part.J)
    )
    return ExitCurve("BP", np.array(rows), jumps, {"partition": part})


# ---------------------------------------------------------------------------
# areas


def _ebp_integrand(pair: DDPair, x):
    lam_y = pair.lambda_edge(pair.y(x))
    return exit_value(pair, x) * epsilon_slope_numerator(pair, x) / lam_y**2


def ebp_segment_area(pair: DDPair, xa: float, xb: float, breaks=()) -> float:
    """int h dε(x) from xa to xb by adaptive quadrature."""
    pts = [p for p in breaks if xa < p < xb]
    val, _ = quad(lambda t: _ebp_integrand(pair, t), xa, xb, points=pts or None,
                  epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


@dataclass(frozen=True)
class EBPArea:
    numeric: float
    closed_form: float


def ebp_area(pair: DDPair) -> EBPArea:
    minima, maxima = _critical_points(pair, PARTITION_GRID)
    numeric = ebp_segment_area(pair, 0.0, 1.0, breaks=sorted(minima + maxima))
    closed = curve_entropy(pair, 1.0) - curve_entropy(pair, 0.0)
    return EBPArea(numeric, closed)


@dataclass(frozen=True)
class BPArea:
    area: float
    deficits: tuple  # D_i per jump, ascending in x
    numeric: float


def bp_area(pair: DDPair, partition: BranchPartition | None = None) -> BPArea:
    """Area under the BP EXIT curve and the per-jump deficits D_i."""
    part = partition or compute_partition(pair)
    P = lambda t: curve_entropy(pair, t)
    area = sum(P(b) - P(a) for a, b in part.intervals)
    numeric = sum(ebp_segment_area(pair, a, b) for a, b in part.intervals)
    lam_int = pair.lambda_edge.antideriv()
    deficits = []
    prev_hi = 0.0
    for (a, _), e in zip(part.intervals, part.jump_epsilons):
        if a == 0.0:
            prev_hi = _
            continue
        ya, yb = pair.y(prev_hi), pair.y(a)
        A = a * yb - prev_hi * ya
        B = e * (lam_int(yb) - lam_int(ya))
        C = pair.y_integral(a) - pair.y_integral(prev_hi)
        deficits.append(float(A - B - C))
        prev_hi = _
    return BPArea(float(area), tuple(deficits), float(numeric))


def bp_tail_area(pair: DDPair, epsilon: float, partition: BranchPartition | None = None) -> float:
    """int_eps^1 h^BP."""
    part = partition or compute_partition(pair)
    P = lambda t: curve_entropy(pair, t)
    total = 0.0
    for (a, b), e_lo in zip(part.intervals, part.jump_epsilons):
        if epsilon <= e_lo:
            total += P(b) - P(a)
            continue
        e_hi = epsilon_of_x(pair, b)
        if epsilon >= e_hi:
            continue
        x = _invert_on(pair, epsilon, a, b)
        total += P(b) - P(x)
    return float(total)


def _invert_on(pair: DDPair, epsilon: float, a: float, b: float) -> float:
    """x in [a, b] with eps(x) = epsilon on an increasing piece."""
    g = lambda t: epsilon_of_x(pair, t) - epsilon
    if a == 0.0:
        ga = stability_limit(pair) - epsilon
        if not ga < 0:
            return 0.0
        a = 1e-12 * b
    if g(b) <= 0:
        return b
    if g(a) >= 0:
        return a
    return brentq(g, a, b, xtol=ROOT_XTOL)


def first_upper_bound(pair: DDPair, tol: float = 1e-13, partition: BranchPartition | None = None) -> float:
    """Smallest eps with int_eps^1 h^BP = design rate."""
    part = partition or compute_partition(pair)
    r = pair.design_rate
    if bp_tail_area(pair, 0.0, part) - r <= 1e-12:
        return part.eps_bp
    P = lambda t: curve_entropy(pair, t)
    # tail above the start of interval i
    tails = [bp_tail_area(pair, e, part) for e in part.jump_epsilons]
    for i in range(part.J - 1, -1, -1):
        if tails[i] >= r:
            a, b = part.intervals[i]
            above = tails[i + 1] if i + 1 < part.J else 0.0
            # tail(x) = above + P(b) - P(x) on this interval
            target = above + P(b) - r
            g = lambda t: P(t) - target
            if g(a) >= 0:
                return float(epsilon_of_x(pair, a))
            x = brentq(g, max(a, 1e-12 * b), b, xtol=tol)
            return float(epsilon_of_x(pair, x))
    return part.eps_bp


# ---------------------------------------------------------------------------
# MAP threshold and MAP EXIT curve


@dataclass(frozen=True)
class MapThreshold:
    epsilon_map: float
    x_star: float
    tight: bool
    roots: tuple = ()
    tangencies: tuple = ()


def curve_entropy_roots(pair: DDPair, grid: int = PARTITION_GRID):
    """Sign-change roots of P(x) in (0, 1] and near-tangent touch points."""
    xs = np.linspace(0.0, 1.0, grid + 1)[1:]
    P = curve_entropy(pair, xs)
    roots, tangencies = [], []
    f = lambda t: curve_entropy(pair, t)
    for k in range(len(xs) - 1):
        if P[k] == 0.0:
            roots.append(float(xs[k]))
        elif P[k] * P[k + 1] < 0:
            roots.append(brentq(f, xs[k], xs[k + 1], xtol=ROOT_XTOL))
    for k in range(1, len(xs) - 1):
        if abs(P[k]) < 1e-10 and (P[k] - P[k - 1]) * (P[k + 1] - P[k]) < 0 and P[k - 1] * P[k + 1] > 0:
            tangencies.append(float(xs[k]))
    return roots, tangencies


def _no_later_repeat(pair: DDPair, x_star: float, grid: int = PARTITION_GRID) -> bool:
    """True when no x' in (x*, 1] has eps(x') = eps(x*)."""
    e = epsilon_of_x(pair, x_star)
    xs = np.linspace(x_star, 1.0, grid + 1)[1:]
    eps = epsilon_of_x(pair, xs)
    # right after x* eps increases (x* sits on a stable branch)
    return bool(np.all(eps > e - 1e-13))


def map_threshold(pair: DDPair, tol: float = 1e-13) -> MapThreshold:
    """Smallest eps at which some stable fixed point has positive trial entropy."""
    pieces = increasing_pieces(pair)
    roots, tangencies = curve_entropy_roots(pair)
    candidates = []
    for a, b in pieces:
        Pa = 0.0 if a == 0.0 else curve_entropy(pair, a)
        Pb = curve_entropy(pair, b)
        if Pb <= 0.0:
            continue
        if Pa >= 0.0:
            candidates.append((float(epsilon_of_x(pair, a)), a))
            continue
        f = lambda t: curve_entropy(pair, t)
        x = brentq(f, a, b, xtol=tol)
        candidates.append((float(epsilon_of_x(pair, x)), x))
    eps_map, x_star = min(candidates)
    if x_star == 0.0:
        eps_bp, _ = bp_threshold_point(pair)
        tight = abs(eps_map - eps_bp) < 1e-12
    else:
        tight = _no_later_repeat(pair, x_star)
    return MapThreshold(eps_map, x_star, tight, tuple(roots), tuple(tangencies))


@dataclass(frozen=True)
class MapJump:
    epsilon: float
    x_low: float  # branch point before the jump (0 for the threshold jump)
    x_high: float  # branch point after the jump
    certified: bool | None = None


@dataclass
class MapCurve:
    """Piecewise description: segments (eps_start, eps_end, x_lo_piece, x_hi_piece)."""

    pair: DDPair
    epsilon_map: float
    segments: list
    jumps: list

    def h(self, epsilon: float) -> float:
        if epsilon < self.epsilon_map:
            return 0.0
        for e0, e1, a, b in self.segments:
            if e0 <= epsilon <= e1:
                x = _invert_on(self.pair, epsilon, a, b)
                return float(exit_value(self.pair, x))
        return 1.0

    def area(self) -> tuple[float, float]:
        """(closed form, quadrature) of int h^MAP dε."""
        closed = numeric = 0.0
        for e0, e1, a, b in self.segments:
            x0 = _invert_on(self.pair, e0, a, b)
            x1 = _invert_on(self.pair, e1, a, b)
            closed += curve_entropy(self.pair, x1) - curve_entropy(self.pair, x0)
            numeric += ebp_segment_area(self.pair, x0, x1)
        return closed, numeric

    def to_exit_curve(self, grid_size: int = 2001) -> ExitCurve:
        rows = []
        if self.epsilon_map > 0:
            for e in np.linspace(0.0, self.epsilon_map, 32, endpoint=False):
                rows.append((e, 0.0, 0.0))
        for k, (e0, e1, a, b) in enumerate(self.segments):
            last = k == len(self.segments) - 1
            n = max(int(grid_size * (e1 - e0)), 16)
            x0 = _invert_on(self.pair, e0, a, b)
            x1 = _invert_on(self.pair, e1, a, b)
            for x in np.linspace(x0, x1, n, endpoint=last):
                rows.append((float(epsilon_of_x(self.pair, x)), float(exit_value(self.pair, x)), float(x)))
        jumps = tuple((j.epsilon, j.x_low, j.x_high) for j in self.jumps)
        return ExitCurve("MAP", np.array(rows), jumps,
                         {"certified": [j.certified for j in self.jumps]})


def _piece_table(pair: DDPair, pieces, n: int = 4000):
    tables = []
    for a, b in pieces:
        xs = np.linspace(a, b, n)
        eps = epsilon_of_x(pair, xs)
        P = curve_entropy(pair, xs)
        if b == 1.0:
            eps[-1] = 1.0  # rounding in x / lambda(y(x)) at x = 1
        ok = np.isfinite(eps)
        tables.append((eps[ok], P[ok]))
    return tables


def map_exit_curve(pair: DDPair, grid_size: int = 4000, certify: bool = True) -> MapCurve:
    """MAP EXIT curve as the branch of largest trial entropy (Maxwell
    construction); jumps located where two branches balance."""
    thr = map_threshold(pair)
    pieces = increasing_pieces(pair)
    tables = _piece_table(pair, pieces)
    e_grid = np.linspace(thr.epsilon_map, 1.0, grid_size)

    def branch_P(i, e):
        a, b = pieces[i]
        return curve_entropy(pair, _invert_on(pair, e, a, b))

    def in_range(i, e):
        eps, _ = tables[i]
        return eps[0] <= e <= eps[-1]

    def best(e):
        vals = [
            (np.interp(e, tables[i][0], tables[i][1]), i)
            for i in range(len(pieces)) if in_range(i, e)
        ]
        return max(vals)[1]

    start = next(i for i, (a, b) in enumerate(pieces) if a <= thr.x_star <= b)
    current = start
    segs_raw = []  # (eps_start, piece)
    seg_start = thr.epsilon_map
    jumps = [MapJump(thr.epsilon_map, 0.0, thr.x_star)]
    for e in e_grid[1:]:
        if not in_range(current, e) or best(e) != current:
            nxt = best(e)
            if nxt == current:
                continue
            lo = max(seg_start, tables[nxt][0][0])
            hi = min(e, tables[current][0][-1])
            g = lambda t: branch_P(nxt, t) - branch_P(current, t)
            if g(lo) > 0 or g(hi) < 0:
                raise BalanceError(f"balance between branches {pieces[current]} and {pieces[nxt]} not bracketed")
            ej = brentq(g, lo, hi, xtol=1e-14)
            segs_raw.append((seg_start, ej, current))
            jumps.append(MapJump(
                ej,
                _invert_on(pair, ej, *pieces[current]),
                _invert_on(pair, ej, *pieces[nxt]),
            ))
            current, seg_start = nxt, ej
    segs_raw.append((seg_start, 1.0, current))
    segments = [(e0, e1, *pieces[i]) for e0, e1, i in segs_raw]
    curve = MapCurve(pair, thr.epsilon_map, segments, jumps)
    if certify:
        _certify_jumps(curve, thr)
    return curve


def _certify_jumps(curve: MapCurve, thr: MapThreshold, delta: float = 1e-3) -> None:
    from .counting import check_tightness

    def ok(e):
        return 0.0 < e < 1.0 and check_tightness(curve.pair, e).verdict == "certified"

    out = []
    for k, j in enumerate(curve.jumps):
        if k == 0:
            cert = thr.tight and ok(j.epsilon + delta)
        else:
            cert = ok(j.epsilon - delta) and ok(j.epsilon + delta)
        out.append(MapJump(j.epsilon, j.x_low, j.x_high, cert))
    curve.jumps = out


# ---------------------------------------------------------------------------
# Maxwell decoder trajectory (asymptotic)


def maxwell_trajectory(pair: DDPair, epsilon: float, grid_size: int = 400):
    """Rows (gamma, determined_fraction, entropy) of the guessing decoder.

    Guessing phases follow the BP fixed point at eps' = eps (1 - gamma);
    at each BP jump the decoder peels at fixed eps' and confirmations are
    counted with the trial entropy along the peeling path.
    """
    part = compute_partition(pair)
    if epsilon <= part.eps_bp:
        return [(0.0, 1.0, 0.0)]
    P = lambda t: curve_entropy(pair, t)
    Lam, lam = pair.lambda_node, pair.lambda_edge
    fp = de_fixed_point(pair, epsilon)
    rows = []
    S = 0.0
    x_top = fp.x
    top = max(i for i, (a, b) in enumerate(part.intervals) if a <= x_top + 1e-15)
    for i in range(top, -1, -1):
        a, b = part.intervals[i]
        hi = x_top if i == top else b
        xs = np.linspace(hi, a, grid_size)
        prev_P = P(hi)
        for x in xs:
            e_here = float(epsilon_of_x(pair, x)) if x > 0 else stability_limit(pair)
            cur_P = P(x)
            S = max(0.0, S + prev_P - cur_P)
            prev_P = cur_P
            gamma = 1.0 - min(e_here, epsilon) / epsilon
            rows.append((gamma, 1.0 - min(e_here, epsilon) * Lam(pair.y(x)), S))
        if a == 0.0:
            break
        # contradiction phase at eps_j: peel from y(a) down to y(x_u^{i-1})
        ej = part.jump_epsilons[i]
        x_below = part.intervals[i - 1][1] if i > 0 else 0.0
        ys = np.linspace(pair.y(a), pair.y(x_below), grid_size)[1:]
        gamma = 1.0 - ej / epsilon
        prev = trial_entropy(pair, ej, a, pair.y(a))
        for yv in ys:
            cur = trial_entropy(pair, ej, ej * lam(yv), yv)
            S = max(0.0, S - (cur - prev))
            prev = cur
            rows.append((gamma, 1.0 - ej * Lam(yv), S))
        if i == 0:
            break
    rows.append((1.0, 1.0, S))
    return rows


def total_guesses(pair: DDPair, epsilon: float) -> float:
    """Fraction of guesses before the first contradiction phase."""
    part = compute_partition(pair)
    if epsilon <= part.eps_bp:
        return 0.0
    fp = de_fixed_point(pair, epsilon)
    top = max(i for i, (a, b) in enumerate(part.intervals) if a <= fp.x + 1e-15)
    return float(curve_entropy(pair, fp.x) - curve_entropy(pair, part.intervals[top][0]))


# ---------------------------------------------------------------------------
# generalized ensembles and gap geometry


def gldpc_map_bound(lam: Poly, y: Poly, tol: float = 1e-13) -> tuple[float, float]:
    pair = DDPair(lam, None, y)
    return bp_threshold_point(pair)[0], first_upper_bound(pair, tol)


def _lambda_inverse(pair: DDPair, t: float) -> float:
    if t >= 1.0:
        return 1.0
    if t <= 0.0:
        return 0.0
    return brentq(lambda u: pair.lambda_edge(u) - t, 0.0, 1.0, xtol=1e-15)


def component_gap_areas(pair: DDPair) -> tuple[float, float]:
    """(total gap, MAP-BP gap) from the component EXIT chart at eps^BP."""
    eps_bp, _ = bp_threshold_point(pair)
    f = lambda x: min(1.0, _lambda_inverse(pair, x / eps_bp)) - pair.y(x)
    area, _ = quad(f, 0.0, 1.0, points=[min(eps_bp, 1.0)], epsabs=1e-12, epsrel=1e-12, limit=400)
    total = area / pair.int_lambda
    map_bp = sum(bp_area(pair).deficits) / pair.int_lambda
    return total, map_bp
