"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numeric non-convergence,
4 oracle size bound exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .counting import PSI_GRID, check_tightness, conditional_entropy, psi, residual_ensemble
from .density import (
    DE_MAX_ITER,
    DE_TOL,
    THRESHOLD_GRID,
    ConvergenceError,
    bp_threshold_point,
    shannon_threshold,
    stability_threshold,
)
from .exit import (
    PARTITION_GRID,
    BalanceError,
    PartitionError,
    bp_area,
    bp_curve,
    compute_partition,
    ebp_area,
    ebp_curve,
    first_upper_bound,
    gldpc_map_bound,
    map_exit_curve,
    map_threshold,
    maxwell_trajectory,
)
from .finite.oracle import OracleSizeError, exact_exit_polynomial, hamming_parity_check
from .poly import DDPair, EnsembleError, load_ensemble, poly_from_degrees

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGENCE, EXIT_ORACLE = 0, 2, 3, 4


class ValidationError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def write_csv(header, rows, out) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def write_sidecar(out, payload) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if out:
        Path(str(out) + ".json").write_text(text)
    else:
        sys.stderr.write(text)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name.replace('_', '-')} is required for '{args.command}'")


def _epsilon(args, lo_open=False):
    _need(args, "epsilon")
    e = args.epsilon
    if not (0.0 <= e <= 1.0) or (lo_open and e == 0.0):
        raise ValidationError("--epsilon must lie in [0, 1]" if not lo_open else "--epsilon must lie in (0, 1]")
    return e


def _pair(args) -> DDPair:
    _need(args, "ensemble")
    return load_ensemble(args.ensemble)


def _grid(args, default, minimum=2):
    g = args.grid if args.grid is not None else default
    if g < minimum:
        raise ValidationError(f"--grid must be at least {minimum}")
    return g


# ---------------------------------------------------------------------------
# commands


def cmd_thresholds(args):
    pair = _pair(args)
    tol = args.tol if args.tol is not None else 1e-13
    eps_bp, x_bp = bp_threshold_point(pair)
    part = compute_partition(pair)
    thr = map_threshold(pair, tol)
    upper = first_upper_bound(pair, tol, part)
    row = [pair.design_rate, eps_bp, x_bp, stability_threshold(pair), shannon_threshold(pair),
           upper, thr.epsilon_map, thr.x_star, thr.tight]
    header = ["design_rate", "eps_bp", "x_bp", "eps_stab", "eps_sh", "eps_map_upper",
              "eps_map", "x_map", "map_tight"]
    write_csv(header, [row], args.out)


def cmd_curve(args):
    pair = _pair(args)
    grid = _grid(args, 2001, 16)
    if args.kind == "ebp":
        curve = ebp_curve(pair, grid)
        area = ebp_area(pair)
        meta = {"area_numeric": area.numeric, "area_closed_form": area.closed_form}
    elif args.kind == "bp":
        curve = bp_curve(pair, grid)
        ba = bp_area(pair, curve.meta["partition"])
        meta = {"area": ba.area, "deficits": list(ba.deficits)}
    else:
        mc = map_exit_curve(pair)
        curve = mc.to_exit_curve(grid)
        closed, numeric = mc.area()
        meta = {"area_closed_form": closed, "area_numeric": numeric,
                "certified": curve.meta["certified"]}
    meta.update({"kind": curve.kind, "design_rate": pair.design_rate,
                 "jumps": [{"epsilon": e, "x_low": a, "x_high": b} for e, a, b in curve.jumps]})
    write_csv(["epsilon", "h", "x"], curve.samples.tolist(), args.out)
    write_sidecar(args.out, meta)


def cmd_partition(args):
    pair = _pair(args)
    part = compute_partition(pair, _grid(args, PARTITION_GRID, 1000))
    rows = [(i + 1, a, b, e) for i, ((a, b), e) in enumerate(zip(part.intervals, part.jump_epsilons))]
    write_csv(["index", "x_low", "x_high", "epsilon_jump"], rows, args.out)


def cmd_trajectory(args):
    pair = _pair(args)
    eps = _epsilon(args)
    rows = maxwell_trajectory(pair, eps, _grid(args, 400))
    write_csv(["gamma", "determined", "entropy"], rows, args.out)


def cmd_psi(args):
    pair = _pair(args)
    eps = _epsilon(args, lo_open=True)
    grid = _grid(args, 1000)
    res = residual_ensemble(pair, eps)
    if res.ddp.is_empty:
        raise ValidationError("residual graph is empty at this epsilon (BP succeeds)")
    us = np.linspace(0.0, 1.0, grid + 1)
    rows = [(u, psi(res.ddp, float(u)).value) for u in us]
    write_csv(["u", "psi"], rows, args.out)
    t = check_tightness(pair, eps)
    write_sidecar(args.out, {"epsilon": eps, "verdict": t.verdict, "u_max": t.u_max,
                             "psi_max": t.psi_max, "psi2_at_one": t.psi2_at_one})


def cmd_entropy_sweep(args):
    pair = _pair(args)
    grid = _grid(args, 101)
    rows = []
    for e in np.linspace(0.0, 1.0, grid)[1:]:
        val, cert = conditional_entropy(pair, float(e))
        rows.append((e, val, cert))
    write_csv(["epsilon", "entropy", "certified"], rows, args.out)


def cmd_simulate(args):
    from .finite.stats import run_trials, trajectory_stats

    pair = _pair(args)
    eps = _epsilon(args)
    _need(args, "n", "trials")
    if args.n < 1 or args.trials < 2:
        raise ValidationError("--n must be positive and --trials at least 2")
    seed = args.seed if args.seed is not None else 0
    if seed < 0 or seed >= 2**64:
        raise ValidationError("--seed must be an unsigned 64-bit integer")
    if args.strategy == "rounds" and not 0.0 < args.delta_gamma <= 1.0:
        raise ValidationError("--delta-gamma must lie in (0, 1]")
    bins = _grid(args, 200)
    runs = run_trials(pair, args.n, eps, args.trials, seed, args.strategy, args.delta_gamma,
                      record_events=bool(args.log_dir))
    st = trajectory_stats(runs, bins)
    rows = [(b, c, m, lo, hi) for b, (c, m, lo, hi) in
            enumerate(zip(st.centers, st.mean, st.q05, st.q95)) if st.support[b]]
    write_csv(["bin", "determined_frac", "mean", "q05", "q95"], rows, args.out)
    finals = [r.final_entropy for r in runs]
    write_sidecar(args.out, {"n": args.n, "epsilon": eps, "trials": args.trials, "seed": seed,
                             "strategy": args.strategy, "final_entropy": finals})
    if args.log_dir:
        d = Path(args.log_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, r in enumerate(runs):
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["time", "kind", "bit", "entropy", "determined"])
            w.writerows(r.events)
            (d / f"run_{i:05d}.csv").write_text(buf.getvalue())


def _code_matrix(args):
    from .finite.graph import load_graph
    from .finite.oracle import repetition_code, single_parity_check

    if args.graph:
        return load_graph(args.graph).parity_check_matrix()
    code = args.code or "hamming3"
    table = {"spc3": lambda: single_parity_check(3), "rep2": lambda: repetition_code(2)}
    if code in table:
        return table[code]()
    if code.startswith("hamming"):
        try:
            r = int(code[len("hamming"):])
        except ValueError:
            raise ValidationError(f"unknown code {code!r}") from None
        if r < 2:
            raise ValidationError("hamming needs r >= 2")
        return hamming_parity_check(r)
    raise ValidationError(f"unknown code {code!r}")


def cmd_exact_exit(args):
    H = _code_matrix(args)
    ex = exact_exit_polynomial(H)
    rows = [(j, str(c)) for j, c in enumerate(ex.average)]
    write_csv(["power", "coefficient"], rows, args.out)
    write_sidecar(args.out, {"n": ex.n, "k": ex.k, "integral": str(ex.integral),
                             "expected": f"{ex.k}/{ex.n}", "area_identity": ex.area_ok})


def cmd_gldpc(args):
    from .finite.oracle import component_exit_poly

    H = _code_matrix(args)
    y, ex = component_exit_poly(H)
    if args.ensemble:
        spec = json.loads(Path(args.ensemble).read_text())
        if "lambda" not in spec:
            raise EnsembleError("missing field 'lambda'")
        lam = poly_from_degrees(spec["lambda"])
    else:
        lam = poly_from_degrees({2: 1.0})
    pair = DDPair(lam, None, y)
    eps_bp, upper = gldpc_map_bound(pair.lambda_edge, y, args.tol or 1e-13)
    write_csv(["design_rate", "eps_bp", "eps_map_upper", "eps_sh"],
              [(pair.design_rate, eps_bp, upper, 1.0 - pair.design_rate)], args.out)


COMMANDS = {
    "thresholds": cmd_thresholds,
    "curve": cmd_curve,
    "partition": cmd_partition,
    "trajectory": cmd_trajectory,
    "psi": cmd_psi,
    "entropy-sweep": cmd_entropy_sweep,
    "simulate": cmd_simulate,
    "exact-exit": cmd_exact_exit,
    "gldpc": cmd_gldpc,
}


def version_text() -> str:
    return (
        f"maxwell-bec {__version__}\n"
        f"de_tol={DE_TOL:g} de_max_iter={DE_MAX_ITER} threshold_grid={THRESHOLD_GRID} "
        f"partition_grid={PARTITION_GRID} psi_grid={PSI_GRID} csv_digits=12"
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ensemble", help="ensemble JSON file")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--grid", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="output CSV path (stdout when omitted)")

    p = argparse.ArgumentParser(prog="maxwell-bec", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=version_text())
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "curve":
            sp.add_argument("--kind", choices=["bp", "ebp", "map"], required=True)
        if name == "simulate":
            sp.add_argument("--strategy", choices=["sequential", "rounds"], default="sequential")
            sp.add_argument("--delta-gamma", type=float, default=0.01)
            sp.add_argument("--log-dir", help="write one event CSV per run here")
        if name in ("exact-exit", "gldpc"):
            sp.add_argument("--graph", help="adjacency-list file 'v <i>: <checks>'")
            sp.add_argument("--code", help="spc3, rep2 or hammingR (default hamming3)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        COMMANDS[args.command](args)
    except (ConvergenceError, PartitionError, BalanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ValidationError, EnsembleError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
