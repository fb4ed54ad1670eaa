"""Command-line interface: ``sl3k sum|enumerate|verify|table``.

Exit status is 0 on success, 1 when a verification finds a counterexample
and 2 on bad usage.  Streams are JSON lines; single results are one JSON
object.  Negative numbers go after an equals sign: ``--m=-1,2``.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import divisor, oracle, strata, sums
from .arith import kloosterman
from .slmat import canonical_rep, coset_equal, dagger, stratum_invariants_braid

JOBS_ENV = "SL3K_JOBS"


class UsageError(Exception):
    """Invalid arguments; reported with exit status 2."""


def _ints(text, count=None, name="value"):
    try:
        vals = tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"--{name} expects {count} integer(s), got {text!r}")
    return vals


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required here")


def _emit(obj, fmt, out):
    if fmt == "text":
        if isinstance(obj, dict):
            out.write(" ".join(f"{k}={_text(v)}" for k, v in obj.items()) + "\n")
        else:
            out.write(f"{obj}\n")
    else:
        out.write(json.dumps(obj, sort_keys=False) + "\n")


def _text(v):
    if isinstance(v, list):
        return ",".join(map(str, v))
    return str(v)


def _value_json(result, exact):
    k = result.value.is_integer()
    z = result.approx
    obj = {"value": k if k is not None else [z.real, z.imag]}
    obj["approx"] = [z.real, z.imag]
    obj["formula"] = result.formula
    obj["terms"] = result.terms
    if exact:
        obj["exact"] = result.value.to_json()
    return obj


# --------------------------------------------------------------------------
# sum


def cmd_sum(args, out):
    kind = args.kind
    if kind == "classical":
        _need(args, "m", "n", "c")
        (m,), (n,), (c,) = _ints(args.m, 1, "m"), _ints(args.n, 1, "n"), _ints(args.c, 1, "c")
        if c < 1:
            raise UsageError("--c must be positive")
        result = sums.SumResult(kloosterman(m, n, c), "classical", c)
    elif kind in ("fine", "fine-braid"):
        _need(args, "m", "n", "d1", "d2", "f")
        ch = (_ints(args.m, 2, "m"), _ints(args.n, 2, "n"))
        if args.d1 == 0 or args.d2 == 0 or args.f < 1:
            raise UsageError("need nonzero --d1, --d2 and positive --f")
        fn = sums.fine_kloosterman if kind == "fine" else sums.fine_kloosterman_braid
        result = fn(ch, (args.d1, args.d2, args.f))
    elif kind == "coarse":
        _need(args, "m", "n", "c")
        ch = (_ints(args.m, 2, "m"), _ints(args.n, 2, "n"))
        c1, c2 = _ints(args.c, 2, "c")
        if c1 == 0 or c2 == 0:
            raise UsageError("moduli must be nonzero")
        result = sums.coarse_kloosterman(ch, c1, c2, args.word, args.level)
    elif kind in ("hyper-ab", "hyper-ba"):
        _need(args, "m", "n", "d1", "d2")
        if args.d1 < 1 or args.d2 < 1:
            raise UsageError("--d1 and --d2 must be positive")
        try:
            if kind == "hyper-ab":
                (m1,), (n1, n2) = _ints(args.m, 1, "m"), _ints(args.n, 2, "n")
                result = sums.hyper_kloosterman_ab(m1, n1, n2, args.d1, args.d2, strict=True)
            else:
                (m1, m2), (n1,) = _ints(args.m, 2, "m"), _ints(args.n, 1, "n")
                result = sums.hyper_kloosterman_ba(m1, m2, n1, args.d1, args.d2, strict=True)
        except sums.IncompatibleCharacters as exc:
            raise UsageError(f"incompatible characters: {exc}") from None
    elif kind == "ramanujan":
        _need(args, "n", "c")
        c1, c2 = _ints(args.c, 2, "c")
        n1, n2 = _ints(args.n, 2, "n")
        if c1 < 1 or c2 < 1:
            raise UsageError("moduli must be positive")
        result = sums.ramanujan_general(c1, c2, n1, n2)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown sum kind {kind}")
    obj = _value_json(result, args.exact)
    if args.format == "text":
        v = obj["value"]
        out.write((f"{v}" if isinstance(v, int) else f"{complex(*v)}") + "\n")
    else:
        _emit({"kind": kind, **obj}, "json", out)
    return 0


# --------------------------------------------------------------------------
# enumerate


def _stratum_lines(key):
    for p, A in zip(strata.enumerate_cosets(key), strata.stratum_matrices(key)):
        yield {"key": key.to_json(), "params": p.to_json(), "matrix": A.to_json()["rows"]}


def cmd_enumerate(args, out):
    kind = args.kind
    if kind == "stratum":
        _need(args, "d1", "d2", "f")
        key = strata.StratumKey(args.d1, args.d2, args.f, args.word)
        keys = list(strata.level_filter([key], args.level))
        lines = itertools.chain.from_iterable(_stratum_lines(k) for k in keys)
    elif kind == "cosets":
        _need(args, "c")
        c1, c2 = _ints(args.c, 2, "c")
        if c1 < 1 or c2 < 1:
            raise UsageError("moduli must be positive")
        keys = strata.level_filter(strata.strata_of(c1, c2, args.word), args.level)
        lines = itertools.chain.from_iterable(_stratum_lines(k) for k in keys)
    elif kind == "plucker":
        _need(args, "c")
        c1, c2 = _ints(args.c, 2, "c")
        if c1 < 1 or c2 < 1:
            raise UsageError("moduli must be positive")
        pairs = ((s, oracle.realize_matrix(s)) for s in oracle.enumerate_plucker(c1, c2))
        lines = (
            {"sextuple": list(s.as_tuple()), "matrix": A.to_json()["rows"]}
            for s, A in pairs
            if strata.in_level(A, args.level)
        )
    elif kind == "kuznetsov-indices":
        _need(args, "m", "n", "cutoff")
        m, n = _ints(args.m, 2, "m"), _ints(args.n, 2, "n")
        if min(m + n) < 1 or args.cutoff < 1:
            raise UsageError("kuznetsov indices need positive characters and cutoff")
        lines = (t.to_json() for t in sums.kuznetsov_geometric_indices(args.N, m, n, args.cutoff))
    else:  # pragma: no cover
        raise UsageError(f"unknown enumeration {kind}")
    for line in lines:
        if args.format == "csv":
            raise UsageError("enumerations are emitted as JSON lines or text")
        _emit(line, args.format, out)
    return 0


# --------------------------------------------------------------------------
# verify


def _char_range(k):
    r = range(-k, k + 1)
    return [((a, b), (c, d)) for a, b, c, d in itertools.product(r, r, r, r)]


def _oracle_row(job):
    c1, cmax, charmax = job
    for c2 in range(1, cmax + 1):
        for ch in _char_range(charmax):
            a = sums.coarse_kloosterman(ch, c1, c2).value
            b = oracle.oracle_coarse(ch, c1, c2).value
            if a != b:
                return {"c": [c1, c2], "m": list(ch[0]), "n": list(ch[1]),
                        "closed_form": a.to_json(), "oracle": b.to_json()}, 0
    return None, cmax * len(_char_range(charmax))


def _braid_row(job):
    c1, cmax, charmax = job
    for c2 in range(1, cmax + 1):
        for ch in _char_range(charmax):
            a = sums.coarse_kloosterman(ch, c1, c2, "aba").value
            b = sums.coarse_kloosterman(ch, c1, c2, "bab").value
            if a != b:
                return {"c": [c1, c2], "m": list(ch[0]), "n": list(ch[1]),
                        "aba": a.to_json(), "bab": b.to_json()}, 0
    return None, cmax * len(_char_range(charmax))


_BOUNDS = {
    "paper": sums.bound_paper,
    "stevens": sums.bound_stevens,
    "sweep": lambda ch, c1, c2: min(
        sums.bound_fine_sweep(ch, c1, c2, "aba"), sums.bound_fine_sweep(ch, c1, c2, "bab")
    ),
}


def _bounds_row(job):
    c1, cmax, charmax, names = job
    checked = 0
    for c2 in range(1, cmax + 1):
        for ch in _char_range(charmax):
            if ch[0] == (0, 0) or ch[1] == (0, 0):
                continue
            size = abs(sums.coarse_kloosterman(ch, c1, c2).approx)
            for name in names:
                bound = _BOUNDS[name](ch, c1, c2)
                checked += 1
                if size > bound * (1 + 1e-6) + 1e-9:
                    return {"bound": name, "c": [c1, c2], "m": list(ch[0]), "n": list(ch[1]),
                            "abs_sum": size, "bound_value": bound}, checked
    return None, checked


def _level_row(job):
    c1, cmax, charmax, levels = job
    checked = 0
    for c2 in range(1, cmax + 1):
        for ch in _char_range(charmax):
            for N in levels:
                checked += 1
                a = sums.coarse_kloosterman(ch, c1, c2, level=N).value
                b = oracle.oracle_level(ch, c1, c2, N).value
                if a != b:
                    return {"c": [c1, c2], "N": N, "m": list(ch[0]), "n": list(ch[1]),
                            "closed_form": a.to_json(), "oracle": b.to_json()}, checked
    return None, checked


def _run_grid(fn, jobs, workers):
    checked = 0
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, jobs))
    else:
        results = map(fn, jobs)
    for bad, n in results:
        checked += n
        if bad is not None:
            return bad, checked
    return None, checked


def _suite_count(args):
    checked = 0
    for c1 in range(1, args.cmax + 1):
        for c2 in range(1, args.cmax + 1):
            want = strata.coset_count(c1, c2)
            cells = sum(strata.stratum_size(k) for k in strata.strata_of(c1, c2))
            pl = sum(1 for _ in oracle.enumerate_plucker(c1, c2))
            checked += 1
            if not want == cells == pl:
                return {"c": [c1, c2], "formula": want, "cosets": cells, "plucker": pl}, checked
    return None, checked


def _suite_divisor(args):
    s1, s2 = (float(x) for x in str(args.s).split(","))
    checked = 0
    for n in range(1, args.nmax + 1):
        rep = divisor.verify_divisor_identity(s1, s2, n, args.D)
        checked += 1
        if not rep["abs_err"] < args.tol:
            return {"n": n, **rep}, checked
    return None, checked


def _suite_hecke(args):
    rng = random.Random(args.seed)
    for i in range(args.samples):
        p = rng.choice([2, 3, 5, 7, 11])
        n = p * rng.randint(1, 30)
        alpha = rng.choice([rng.randint(-3, 3), rng.uniform(-2, 2)])
        if not divisor.hecke_check(alpha, n, p):
            return {"alpha": alpha, "n": n, "p": p}, i + 1
    return None, args.samples


def _suite_collision(args):
    a = oracle.realize_matrix(oracle.PluckerSextuple(2, 1, 0, 2, 2, -1))
    b = oracle.realize_matrix(oracle.PluckerSextuple(2, 1, 1, 2, 0, -1))
    naive = sum(1 for _ in oracle.enumerate_plucker_naive(2, 2))
    ordered = sum(1 for _ in oracle.enumerate_plucker(2, 2))
    ok = coset_equal(a, b) and naive > ordered == strata.coset_count(2, 2)
    detail = {"same_coset": coset_equal(a, b), "naive_count": naive, "ordered_count": ordered}
    return (None if ok else detail), 1


def _suite_dagger(args):
    # the braid stratification of A-dagger swaps d1 and d2
    checked = 0
    for d1 in range(1, args.cmax + 1):
        for d2 in range(1, args.cmax // d1 + 1):
            for f in range(1, 4):
                key = strata.StratumKey(d1, d2, f)
                for p in strata.enumerate_cosets(key):
                    inv = stratum_invariants_braid(dagger(canonical_rep(p)))
                    checked += 1
                    if (inv.d1, inv.d2, inv.f) != (d2, d1, f):
                        return {"params": p.to_json()}, checked
    return None, checked


def cmd_verify(args, out):
    workers = args.jobs
    grid = range(1, args.cmax + 1)
    suite = args.suite
    if suite == "oracle":
        bad, checked = _run_grid(_oracle_row, [(c, args.cmax, args.charmax) for c in grid], workers)
    elif suite == "braid":
        bad, checked = _run_grid(_braid_row, [(c, args.cmax, args.charmax) for c in grid], workers)
    elif suite == "bounds":
        names = list(_BOUNDS) if args.bound == "all" else [args.bound]
        bad, checked = _run_grid(
            _bounds_row, [(c, args.cmax, args.charmax, names) for c in grid], workers
        )
    elif suite == "level":
        levels = _ints(args.levels, None, "levels")
        if min(levels) < 1:
            raise UsageError("levels must be positive")
        bad, checked = _run_grid(
            _level_row, [(c, args.cmax, args.charmax, levels) for c in grid], workers
        )
    elif suite == "count":
        bad, checked = _suite_count(args)
    elif suite == "divisor":
        bad, checked = _suite_divisor(args)
    elif suite == "hecke":
        bad, checked = _suite_hecke(args)
    elif suite == "plucker-collision":
        bad, checked = _suite_collision(args)
    elif suite == "dagger":
        bad, checked = _suite_dagger(args)
    else:  # pragma: no cover
        raise UsageError(f"unknown suite {suite}")
    report = {"suite": suite, "passed": bad is None, "checked": checked}
    if bad is not None:
        report["counterexample"] = bad
    _emit(report, args.format if args.format != "csv" else "json", out)
    return 0 if bad is None else 1


# --------------------------------------------------------------------------
# table


def _table_row(job):
    c1, cmax, ch, word = job
    rows = []
    for c2 in range(1, cmax + 1):
        r = sums.coarse_kloosterman(ch, c1, c2, word)
        k = r.value.is_integer()
        rows.append({
            "c1": c1, "c2": c2,
            "value": k if k is not None else round(r.approx.real, 12),
            "cosets": strata.coset_count(c1, c2),
            "bound": round(sums.bound_paper(ch, c1, c2), 6),
        })
    return rows


def cmd_table(args, out):
    _need(args, "m", "n")
    ch = (_ints(args.m, 2, "m"), _ints(args.n, 2, "n"))
    jobs = [(c1, args.cmax, ch, args.word) for c1 in range(1, args.cmax + 1)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            blocks = list(pool.map(_table_row, jobs))
    else:
        blocks = [_table_row(j) for j in jobs]
    rows = [r for b in blocks for r in b]
    if args.format == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    else:
        for r in rows:
            _emit(r, args.format, out)
    return 0


# --------------------------------------------------------------------------
# parser


def _default_jobs():
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("--jobs", type=int, default=_default_jobs(),
                        help=f"worker processes (default from ${JOBS_ENV}, else 1)")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="sl3k", description="SL3 Kloosterman sums, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", parents=[common], help="evaluate one sum")
    p.add_argument("kind", choices=("classical", "fine", "fine-braid", "coarse",
                                     "hyper-ab", "hyper-ba", "ramanujan"))
    p.add_argument("--m")
    p.add_argument("--n")
    p.add_argument("--c")
    p.add_argument("--d1", type=int)
    p.add_argument("--d2", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--word", choices=strata.WORDS, default="aba")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="include canonical coefficients")
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser("enumerate", parents=[common], help="stream cosets or indices")
    p.add_argument("kind", choices=("stratum", "cosets", "plucker", "kuznetsov-indices"))
    p.add_argument("--c")
    p.add_argument("--d1", type=int)
    p.add_argument("--d2", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--word", choices=strata.WORDS, default="aba")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--m")
    p.add_argument("--n")
    p.add_argument("--cutoff", type=int)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", choices=("oracle", "braid", "bounds", "count", "divisor", "hecke",
                                      "plucker-collision", "level", "dagger"))
    p.add_argument("--cmax", type=int, default=6)
    p.add_argument("--charmax", type=int, default=1)
    p.add_argument("--bound", choices=("all", *_BOUNDS), default="all")
    p.add_argument("--levels", default="2,3,4")
    p.add_argument("--s", default="2,2")
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--D", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="coarse sums over a grid of moduli")
    p.add_argument("--m")
    p.add_argument("--n")
    p.add_argument("--cmax", type=int, default=6)
    p.add_argument("--word", choices=strata.WORDS, default="aba")
    p.set_defaults(handler=cmd_table)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {known.config}: {exc}")
    if not isinstance(config, dict):
        parser.error("config must be a JSON object")
    for action in parser._subparsers._group_actions:
        for name, subparser in action.choices.items():
            dests = {a.dest for a in subparser._actions}
            unknown = set(config) - dests
            if name in argv and unknown:
                parser.error(f"unknown config keys for {name}: {sorted(unknown)}")
            subparser.set_defaults(**{k: v for k, v in config.items() if k in dests})


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            parser.error("--jobs must be positive")
    except SystemExit as exc:  # argparse reports usage errors (and --help) this way
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args, out)
    except (UsageError, ValueError) as exc:
        print(f"sl3k: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
