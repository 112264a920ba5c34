"""Command-line experiment runner: ``ldpc-sense <command> [options]``.

Every command writes CSV (``construct`` writes alist) to ``--out`` or stdout.
Floats are written with 12 significant digits. Trials draw from independent
generators seeded by ``SeedSequence([seed, trial])``, so results do not depend
on the number of threads.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import json
import math
import os
import sys
import time

import numpy as np

from .bridge import bridge_map
from .cclpd import ChannelModel, cclpd_decode, llr, mld_bruteforce, transmit
from .cover import cclpd_graphcover_check, csrel_lower_bound_check, thm15_check
from .cslpd import MeasurementInstance, cs_lpd
from .errors import LdpcSenseError
from .gf2 import as_binary_matrix
from .nsp import check_nsp_k
from .pseudoweight import WEIGHT_KINDS, min_pseudoweight_enumerated, weights
from .tanner import (
    KINDS,
    ConstructionSpec,
    check_expansion,
    chain_matrix,
    construct,
    girth,
    girth_nonbacktracking,
    hamming_matrix,
    read_alist,
    write_alist,
)

__all__ = ["main", "build_parser", "run", "recover_cs_sweep", "load_config", "ConfigError",
           "RESULT_COLUMNS"]

SCHEMA_VERSION = 1
# columns of the recover-cs / experiment result rows
RESULT_COLUMNS = ["k", "trials", "success_rate", "mean_error_l1", "mean_error_l2",
                  "mean_error_linf", "seed"]


class ConfigError(LdpcSenseError, ValueError):
    pass


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    if isinstance(v, (np.floating,)):
        return _fmt(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return _fmt(float(v))
    return str(v)


def write_csv(stream, columns, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])


def trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def _threads(args):
    n = args.threads
    if n is None:
        n = int(os.environ.get("LDPC_SENSE_THREADS", "1"))
    if n < 1:
        raise ConfigError("--threads must be at least 1")
    return n


def _map_trials(fn, trials, threads):
    if threads == 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def _matrix(args):
    if args.alist:
        return read_alist(args.alist)
    if args.builtin == "chain":
        return chain_matrix()
    if args.builtin == "hamming":
        return hamming_matrix()
    if args.kind is None:
        raise ConfigError("give a matrix with --alist, --builtin or --kind/--n")
    if args.n is None:
        raise ConfigError("--kind needs --n")
    spec = ConstructionSpec(args.kind, args.n, args.dv, args.dc, args.matrix_seed, args.m)
    return construct(spec)


def _floats(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


# ----------------------------------------------------------------- commands

def cmd_construct(args, out):
    H = _matrix(args)
    write_alist(out, H)


def cmd_girth(args, out):
    H = _matrix(args)
    row = {"n": H.shape[1], "m": H.shape[0], "girth": girth(H)}
    cols = ["n", "m", "girth"]
    if args.oracle:
        row["girth_trace"] = girth_nonbacktracking(H)
        cols.append("girth_trace")
    write_csv(out, cols, [row])


def cmd_expand_check(args, out):
    if args.gamma is None or args.delta is None:
        raise ConfigError("expand-check needs --gamma and --delta")
    H = _matrix(args)
    rep = check_expansion(H, args.gamma, args.delta, cap=args.cap)
    witness = "" if rep.witness is None else " ".join(str(i) for i in rep.witness)
    write_csv(out, ["dv", "gamma", "delta", "passed", "subsets_checked", "witness"],
              [{"dv": rep.dv, "gamma": float(rep.gamma), "delta": float(rep.delta),
                "passed": rep.passed, "subsets_checked": rep.subsets_checked, "witness": witness}])


def cmd_pseudoweight(args, out):
    cols = ["source"] + list(WEIGHT_KINDS)
    if args.omega is not None:
        vals = [float(x) for x in args.omega.split(",")]
        if all(v.is_integer() for v in vals):
            vals = [int(v) for v in vals]
        rep = weights(vals)
        write_csv(out, cols, [dict(source="omega", **{k: rep[k] for k in WEIGHT_KINDS})])
        return
    H = _matrix(args)
    row = {"source": "min_over_polytope_vertices"}
    for k in WEIGHT_KINDS:
        row[k] = min_pseudoweight_enumerated(H, k, cap=args.cap)
    write_csv(out, cols, [row])


def cmd_nsp_check(args, out):
    if args.k is None:
        raise ConfigError("nsp-check needs --k")
    H = _matrix(args)
    cert = check_nsp_k(H, args.k, args.C, strict=not args.non_strict, mode=args.mode)
    margin = "" if cert.worst_case is None else cert.worst_case[2]
    S = "" if cert.worst_case is None else " ".join(str(i) for i in cert.worst_case[0])
    write_csv(out, ["k", "C", "strict", "holds", "worst_set", "margin", "lp_count"],
              [{"k": args.k, "C": float(args.C), "strict": cert.strict, "holds": cert.holds,
                "worst_set": S, "margin": margin, "lp_count": cert.lp_count}])


def decode_cc_sweep(H, channel, params, trials, seed, threads=1, mode="float", ml=False):
    """Transmit the all-zero codeword and LP-decode; one row per parameter."""
    A = as_binary_matrix(H)
    n = A.shape[1]
    rows = []
    for p in params:
        ch = ChannelModel(channel, p)

        def one(t):
            rng = trial_rng(seed, t)
            y = transmit(ch, np.zeros(n, dtype=np.int64), rng)
            lam = llr(ch, y)
            res = cclpd_decode(A, lam, mode=mode)
            pt = np.asarray(res.point, dtype=np.float64)
            ok = res.is_integral and np.abs(pt).max(initial=0.0) <= 1e-6
            ml_ok = None
            if ml:
                ml_ok = not mld_bruteforce(A, lam).any()
            return ok, res.is_integral, ml_ok

        outs = _map_trials(one, trials, threads)
        row = {"channel": channel, "param": float(p), "trials": trials,
               "success_rate": float(np.mean([o[0] for o in outs])),
               "integral_rate": float(np.mean([o[1] for o in outs])), "seed": seed}
        if ml:
            row["ml_success_rate"] = float(np.mean([o[2] for o in outs]))
        rows.append(row)
    return rows


def cmd_decode_cc(args, out):
    H = _matrix(args)
    rows = decode_cc_sweep(H, args.channel, _floats(args.param), args.trials, args.seed,
                           _threads(args), args.mode, args.ml)
    cols = ["channel", "param", "trials", "success_rate", "integral_rate"]
    if args.ml:
        cols.append("ml_success_rate")
    write_csv(out, cols + ["seed"], rows)


def _sparse_signal(n, k, rng):
    e = np.zeros(n)
    S = rng.choice(n, size=k, replace=False)
    vals = rng.standard_normal(k)
    vals[vals == 0] = 1.0
    e[S] = vals
    return e


def recover_cs_sweep(H, ks, trials, seed, threads=1, mode="float", timing=False):
    """Basis pursuit on random k-sparse signals (uniform support, Gaussian values).

    Returns one result row per k with the exact-recovery rate (infinity-norm
    error <= 1e-6) and mean l1/l2/linf errors.
    """
    A = np.asarray(H, dtype=np.float64)
    n = A.shape[1]
    rows = []
    for k in ks:
        if not 0 <= k <= n:
            raise ConfigError(f"k = {k} is outside [0, {n}]")

        def one(t):
            e = _sparse_signal(n, k, trial_rng(seed, t))
            res = cs_lpd(MeasurementInstance(A, e, A @ e), mode=mode)
            return res.exact, res.error["l1"], res.error["l2"], res.error["linf"]

        start = time.perf_counter()
        outs = np.array(_map_trials(one, trials, threads), dtype=np.float64).reshape(-1, 4)
        row = {"k": k, "trials": trials, "success_rate": float(outs[:, 0].mean()),
               "mean_error_l1": float(outs[:, 1].mean()), "mean_error_l2": float(outs[:, 2].mean()),
               "mean_error_linf": float(outs[:, 3].mean()), "seed": seed}
        if timing:
            row["wall_time"] = time.perf_counter() - start
        rows.append(row)
    return rows


def _k_grid(args, n):
    ks = _ints(args.k) if args.k is not None else []
    if args.alpha is not None:
        ks += [max(1, int(round(a * n))) for a in _floats(args.alpha)]
    if not ks:
        raise ConfigError("give a sparsity grid with --k or --alpha")
    return ks


def cmd_recover_cs(args, out):
    H = _matrix(args)
    if args.trials < 1:
        raise ConfigError("trials must be at least 1")
    rows = recover_cs_sweep(H, _k_grid(args, H.shape[1]), args.trials, args.seed,
                            _threads(args), args.mode, args.timing)
    write_csv(out, RESULT_COLUMNS + (["wall_time"] if args.timing else []), rows)


def cmd_bridge_check(args, out):
    import scipy.linalg

    H = _matrix(args)
    if not np.isin(H, (0, 1)).all():
        raise ConfigError("bridge-check needs a zero-one matrix")
    N = scipy.linalg.null_space(H.astype(np.float64))
    margins = []
    for t in range(args.samples):
        rng = trial_rng(args.seed, t)
        nu = N @ rng.standard_normal(N.shape[1]) if N.shape[1] else np.zeros(H.shape[1])
        margins.append(bridge_map(H, nu).margin)
    write_csv(out, ["samples", "nullity", "passed", "min_margin"],
              [{"samples": args.samples, "nullity": N.shape[1], "passed": True,
                "min_margin": float(min(margins, default=0.0))}])


def cmd_cover_check(args, out):
    H = _matrix(args)
    Ms = _ints(args.M)
    rows = []
    rng = trial_rng(args.seed, 0)
    if args.s is not None:
        s = np.array(_floats(args.s))
    else:
        s = H.astype(np.float64) @ _sparse_signal(H.shape[1], 1, rng)
    rows.append({"check": "basis_pursuit_covers", "holds":
                 thm15_check(H, s, args.covers, Ms, args.seed, mode=args.mode), "detail": ""})
    rows.append({"check": "zero_infinity_lower_bound", "holds":
                 csrel_lower_bound_check(H, s, args.covers, Ms, args.seed), "detail": ""})
    if args.lam is not None:
        b = cclpd_graphcover_check(H, _floats(args.lam), args.covers, Ms, args.seed)
        rows.append({"check": "graph_cover_decoding", "holds": b.holds,
                     "detail": f"lp={_fmt(b.lp_cost)} cover={_fmt(b.cover_cost)} ml={_fmt(b.ml_cost)}"})
    write_csv(out, ["check", "holds", "detail"], rows)


def cmd_experiment(args, out):
    if args.sweep == "recover-cs":
        cmd_recover_cs(args, out)
    elif args.sweep == "decode-cc":
        cmd_decode_cc(args, out)
    else:
        raise ConfigError("experiment needs sweep = 'recover-cs' or 'decode-cc'")


COMMANDS = {
    "construct": cmd_construct,
    "girth": cmd_girth,
    "expand-check": cmd_expand_check,
    "pseudoweight": cmd_pseudoweight,
    "nsp-check": cmd_nsp_check,
    "decode-cc": cmd_decode_cc,
    "recover-cs": cmd_recover_cs,
    "bridge-check": cmd_bridge_check,
    "cover-check": cmd_cover_check,
    "experiment": cmd_experiment,
}


# ------------------------------------------------------------------ parsing

def _common(p):
    p.add_argument("--config", help="JSON config file (schema 1)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $LDPC_SENSE_THREADS or 1)")
    p.add_argument("--mode", choices=("float", "rational"), default="float")
    p.add_argument("--timing", action="store_true", help="add a wall_time column")


def _matrix_args(p):
    g = p.add_argument_group("matrix")
    g.add_argument("--alist", help="read the matrix from an alist file")
    g.add_argument("--builtin", choices=("chain", "hamming"))
    g.add_argument("--kind", choices=KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--dv", type=int, default=3)
    g.add_argument("--dc", type=int, default=6)
    g.add_argument("--matrix-seed", type=int, default=0)


def _recover_args(p):
    p.add_argument("--k", help="comma-separated sparsity levels")
    p.add_argument("--alpha", help="comma-separated sparsity fractions k/n")
    p.add_argument("--trials", type=int, default=100)


def _decode_args(p):
    p.add_argument("--channel", choices=("bsc", "awgn", "bec"), default="bsc")
    p.add_argument("--param", default="0.05", help="comma-separated channel parameters")
    p.add_argument("--ml", action="store_true", help="also run ML decoding (small codes)")


def build_parser():
    parser = argparse.ArgumentParser(prog="ldpc-sense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        _matrix_args(p)
        if name == "girth":
            p.add_argument("--oracle", action="store_true", help="also report the trace oracle")
        elif name == "expand-check":
            p.add_argument("--gamma", type=float)
            p.add_argument("--delta", type=float)
            p.add_argument("--cap", type=int, default=1 << 20)
        elif name == "pseudoweight":
            p.add_argument("--omega", help="comma-separated nonnegative vector")
            p.add_argument("--cap", type=int, default=10_000)
        elif name == "nsp-check":
            p.add_argument("--k", type=int)
            p.add_argument("--C", type=float, default=1.0)
            p.add_argument("--non-strict", action="store_true")
        elif name == "decode-cc":
            _decode_args(p)
            p.add_argument("--trials", type=int, default=100)
        elif name == "recover-cs":
            _recover_args(p)
        elif name == "bridge-check":
            p.add_argument("--samples", type=int, default=100)
        elif name == "cover-check":
            p.add_argument("--covers", type=int, default=20)
            p.add_argument("--M", default="2,3", help="comma-separated cover degrees")
            p.add_argument("--s", help="comma-separated syndrome (default: random 1-sparse)")
            p.add_argument("--lam", help="comma-separated LLRs for the decoding check")
        elif name == "experiment":
            p.add_argument("--sweep", choices=("recover-cs", "decode-cc"))
            _recover_args(p)
            _decode_args(p)
    return parser


def _subparser(parser, command):
    action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return action.choices[command]


def load_config(path, parser, command):
    """Read a schema-1 JSON config and return it as argparse defaults.

    Keys are option names (dashes or underscores); ``matrix`` may hold a
    nested object with ``alist``, ``builtin`` or construction fields. Lists
    become comma-separated grids. Unknown keys are an error.
    """
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if cfg.pop("schema", None) != SCHEMA_VERSION:
        raise ConfigError(f"config must declare \"schema\": {SCHEMA_VERSION}")
    cmd = cfg.pop("command", command)
    if cmd != command:
        raise ConfigError(f"config is for command {cmd!r}, not {command!r}")
    matrix = cfg.pop("matrix", {})
    if not isinstance(matrix, dict):
        raise ConfigError("matrix must be an object")
    matrix = dict(matrix)
    if "seed" in matrix:
        matrix["matrix_seed"] = matrix.pop("seed")
    known = {a.dest for a in _subparser(parser, command)._actions} - {"help", "config"}
    out = {}
    for key, val in list(cfg.items()) + list(matrix.items()):
        dest = key.replace("-", "_")
        if dest not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        out[dest] = val
    return out


def run(argv=None, stdout=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # config values become defaults, so explicit options still win
        _subparser(parser, args.command).set_defaults(**load_config(args.config, parser, args.command))
        args = parser.parse_args(argv)
    if getattr(args, "trials", None) is not None and int(args.trials) < 1:
        raise ConfigError("trials must be at least 1")
    fn = COMMANDS[args.command]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fn(args, fh)
    else:
        fn(args, stdout or sys.stdout)
    return 0


def main(argv=None):
    try:
        return run(argv)
    except (LdpcSenseError, ValueError, OSError) as exc:
        print(f"ldpc-sense: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
