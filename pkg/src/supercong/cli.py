"""Command-line interface.

Usage::

    supercong seq apery --upto 10
    supercong verify thm1a --primes 5..31 --n 1..10 --include-ppowers 2
    supercong verify lemma:jacobsthal --primes 2..7 --r 1..2 --s 1..2 --a -3..3 --b 1..2
    supercong estimate thm1a --p 5 --base 1,2,3 --max-r 1
    supercong cache inspect

Exit codes: 0 success, 1 failed case, 2 bad arguments or violated
precondition, 3 cache error, 4 compute budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from supercong import identities, lemmas, report, theorems
from supercong.exactnum import primes_between
from supercong.seqcache import (
    KINDS,
    CacheError,
    SequenceKind,
    cache_path,
    load_or_extend_cache,
    read_cache_file,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CACHE, EXIT_BUDGET = 0, 1, 2, 3, 4

ENV_CACHE_DIR = "SUPERCONG_CACHE_DIR"

THEOREM_TARGETS = tuple(theorems.THEOREM_CHECKS)
ALL_TARGETS = (
    THEOREM_TARGETS
    + tuple(f"identity:{i}" for i in identities.IDENTITY_IDS)
    + tuple(f"lemma:{i}" for i in lemmas.LEMMA_IDS)
)
RANGE_OPTIONS = ("--primes", "--n", "--x", "--r", "--s", "--a", "--b", "--l", "--k", "--m", "--base")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    cache_dir: Path
    jobs: int = 1
    format: str = "json"
    budget_max_index: int = theorems.DEFAULT_BUDGET
    verify_cache: bool = False
    timestamp: bool = True

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.budget_max_index < 1:
            raise UsageError("--budget must be >= 1")


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    data_home = os.environ.get("XDG_DATA_HOME") or Path.home() / ".local" / "share"
    return Path(data_home) / "supercong"


_RANGE_RE = re.compile(r"-?\d+(\.\.-?\d+)?(,-?\d+(\.\.-?\d+)?)*")


def parse_range(text: str) -> list[int]:
    """``"1..5"``, ``"1,2,7"``, ``"-3..3,9"`` -> sorted distinct ints."""
    if not _RANGE_RE.fullmatch(text.strip()):
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use A..B or a,b,c")
    out: set[int] = set()
    for part in text.strip().split(","):
        lo, sep, hi = part.partition("..")
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
        if hi_i < lo_i:
            raise argparse.ArgumentTypeError(f"empty range {part!r}")
        out.update(range(lo_i, hi_i + 1))
    return sorted(out)


def _glue_negative_ranges(argv: list[str]) -> list[str]:
    # argparse would read "-3..3" as an option; bind it to its flag instead
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in RANGE_OPTIONS and nxt and nxt.startswith("-") and _RANGE_RE.fullmatch(nxt):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _add_globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--cache-dir", type=Path, default=d(None),
                        help=f"sequence cache directory (env {ENV_CACHE_DIR})")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes")
    parser.add_argument("--format", choices=sorted(report.EMITTERS), default=d("json"))
    parser.add_argument("--budget", type=int, default=d(theorems.DEFAULT_BUDGET),
                        help="largest sequence index any check may use")
    parser.add_argument("--no-timestamp", action="store_true", default=d(False),
                        help="emit generated_at as null for byte-stable reports")
    parser.add_argument("--verify-cache", action="store_true", default=d(False),
                        help="recompute persisted cache values before use")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supercong", description=__doc__.split("\n\n")[0])
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_seq = sub.add_parser("seq", parents=[common], help="print a sequence")
    p_seq.add_argument("kind", choices=KINDS)
    p_seq.add_argument("--upto", type=int, required=True)
    p_seq.add_argument("--x", type=int, default=None, help="argument of apery-poly / s1")

    p_ver = sub.add_parser("verify", parents=[common], help="run a verification grid")
    p_ver.add_argument("target", help="one of: " + ", ".join(ALL_TARGETS + ("all",)))
    for opt in RANGE_OPTIONS[:-1]:
        p_ver.add_argument(opt, type=parse_range, default=None)
    p_ver.add_argument("--include-ppowers", type=int, default=None, metavar="R",
                       help="add n = p^j (1 <= j <= R) and n = 2p to the n grid")

    p_est = sub.add_parser("estimate", parents=[common], help="valuation profile along n = m p^j")
    p_est.add_argument("check_id", choices=("thm1a", "thm1b", "thm2"))
    p_est.add_argument("--p", type=int, required=True)
    p_est.add_argument("--base", type=parse_range, default=[1])
    p_est.add_argument("--max-r", type=int, default=1)

    p_cache = sub.add_parser("cache", parents=[common], help="inspect, verify or clear the cache")
    p_cache.add_argument("action", choices=("inspect", "verify", "clear"))
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        cache_dir=args.cache_dir or default_cache_dir(),
        jobs=args.jobs,
        format=args.format,
        budget_max_index=args.budget,
        verify_cache=args.verify_cache,
        timestamp=not args.no_timestamp,
    )


# -- verify -----------------------------------------------------------------------


_THEOREM_DEFAULTS = {
    "thm1a": {"primes": (5, 31), "n": (1, 10), "ppowers": 2},
    "thm1b": {"primes": (5, 31), "n": (1, 10), "ppowers": 2},
    "thm2": {"primes": (2, 13), "n": (1, 10), "ppowers": 2},
    "sun-p5": {"primes": (5, 13)},
    "guozeng-p6": {"primes": (5, 13)},
    "guo-p5": {"primes": (5, 13)},
}


def _primes(selected, default) -> list[int]:
    if selected is None:
        return primes_between(*default)
    return [q for q in selected if q >= 2 and primes_between(q, q)]


def _theorem_cases(target: str, args) -> list[tuple[str, dict]]:
    defaults = _THEOREM_DEFAULTS.get(target, {})
    if target == "sun-mod-n":
        ns = args.n or list(range(1, 31))
        xs = args.x if args.x is not None else list(range(-5, 6))
        _check_positive(ns, "n")
        return [(target, {"n": n, "x": x}) for n in ns for x in xs]
    if target in ("guozeng-n3", "guo-n2"):
        ns = args.n or list(range(1, 31))
        _check_positive(ns, "n")
        return [(target, {"n": n}) for n in ns]

    primes = _primes(args.primes, defaults["primes"])
    if not primes:
        raise UsageError("no primes in the selected range")
    if target in theorems.NEEDS_P5 and min(primes) < 5:
        raise UsageError(f"{target} requires p >= 5 (got p = {min(primes)})")
    if target in ("sun-p5", "guozeng-p6", "guo-p5"):
        return [(target, {"p": p}) for p in primes]

    base_n = args.n or list(range(*(defaults["n"][0], defaults["n"][1] + 1)))
    _check_positive(base_n, "n")
    ppowers = args.include_ppowers
    if ppowers is None:
        ppowers = 0 if args.n else defaults["ppowers"]
    cases = []
    for p in primes:
        ns = set(base_n)
        if ppowers >= 1:
            ns.add(2 * p)
            ns.update(p**j for j in range(1, ppowers + 1))
        cases.extend((target, {"p": p, "n": n}) for n in sorted(ns))
    return cases


def _check_positive(values, name) -> None:
    if min(values) < 1:
        raise UsageError(f"--{name} values must be >= 1")


def _identity_cases(ident: str, args) -> list[tuple[str, dict]]:
    if ident not in identities.IDENTITY_IDS:
        raise UsageError(f"unknown identity {ident!r}")
    ns = args.n or list(range(1, 51))
    _check_positive(ns, "n")
    if ident == "sun":
        xs = args.x if args.x is not None else list(range(-10, 11))
        return [(f"identity:{ident}", {"n": n, "x": x}) for n in ns for x in xs]
    return [(f"identity:{ident}", {"n": n}) for n in ns]


def _lemma_cases(lemma_id: str, args) -> list[tuple[str, dict]]:
    if lemma_id not in lemmas.LEMMA_IDS:
        raise UsageError(f"unknown lemma {lemma_id!r}")
    sel = {k: getattr(args, k) for k in ("r", "s", "n", "k", "a", "b", "l", "m")}
    if args.primes is not None:
        sel["primes"] = [q for q in args.primes if q >= 2 and primes_between(q, q)]
        if not sel["primes"]:
            raise UsageError("no primes in the selected range")
    for name in ("r", "s", "m"):
        if sel[name] is not None and min(sel[name]) < (0 if name == "s" else 1):
            raise UsageError(f"--{name} out of range")
    if sel["l"] is not None and min(sel["l"]) < 0:
        raise UsageError("--l values must be >= 0")
    return [(f"lemma:{lemma_id}", prm) for prm in lemmas.default_grid(lemma_id, **sel)]


def plan_cases(target: str, args) -> list[tuple[str, dict]]:
    if target == "all":
        out = []
        for t in ALL_TARGETS:
            out.extend(plan_cases(t, args))
        return out
    if target in THEOREM_TARGETS:
        return _theorem_cases(target, args)
    kind, _, name = target.partition(":")
    if kind == "identity":
        return _identity_cases(name, args)
    if kind == "lemma":
        return _lemma_cases(name, args)
    raise UsageError(f"unknown target {target!r}")


def evaluate(item: tuple[str, dict], budget: int) -> dict:
    check_id, params = item
    if check_id in theorems.THEOREM_CHECKS:
        return theorems.run_check(check_id, params, budget).to_record()
    kind, _, name = check_id.partition(":")
    if kind == "identity":
        fn = {
            "sun": identities.check_sun_identity,
            "guo-zeng": identities.check_guo_zeng_identity,
            "guo-franel": identities.check_guo_franel_identity,
        }[name]
        return fn(**params).to_record()
    return lemmas.run_lemma(name, params).to_record()


def _evaluate_chunk(chunk: list[tuple[str, dict]], budget: int) -> list[dict]:
    return [evaluate(item, budget) for item in chunk]


def run_cases(cases: list[tuple[str, dict]], jobs: int, budget: int) -> list[dict]:
    """Evaluate every case; sequence tables are extended before any fan-out."""
    theorems.prefetch(c for c in cases if c[0] in theorems.THEOREM_CHECKS)
    if jobs == 1 or len(cases) < 2:
        return _evaluate_chunk(cases, budget)
    n_chunks = min(len(cases), jobs * 4)
    chunks = [cases[i::n_chunks] for i in range(n_chunks)]
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
    out: list[dict] = []
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
        for part in pool.map(_evaluate_chunk, chunks, [budget] * n_chunks):
            out.extend(part)
    return out


def _verify_cache_files(cfg: RunConfig, kinds) -> None:
    for kind in kinds:
        path = cache_path(cfg.cache_dir, kind)
        if path.exists():
            cache = read_cache_file(path, kind)
            load_or_extend_cache(kind, max(len(cache.values) - 1, 0), path, verify=True)


def cmd_verify(args, cfg: RunConfig) -> int:
    cases = plan_cases(args.target, args)
    needed = max(
        (theorems.max_index(c, prm) for c, prm in cases if c in theorems.THEOREM_CHECKS),
        default=0,
    )
    if needed > cfg.budget_max_index:
        raise theorems.BudgetExceeded(needed, cfg.budget_max_index)
    if cfg.verify_cache:
        _verify_cache_files(cfg, [SequenceKind(k) for k in ("apery", "franel", "bernoulli")])
    records = run_cases(cases, cfg.jobs, cfg.budget_max_index)
    rep = report.build_report(records, timestamp=cfg.timestamp)
    sys.stdout.write(report.emit(rep, cfg.format))
    return EXIT_FAIL if rep["summary"]["failed"] else EXIT_OK


# -- other subcommands -----------------------------------------------------------------


def cmd_seq(args, cfg: RunConfig) -> int:
    if args.upto < 0:
        raise UsageError("--upto must be >= 0")
    if args.upto > cfg.budget_max_index:
        raise theorems.BudgetExceeded(args.upto, cfg.budget_max_index)
    if args.x is not None and args.kind not in ("apery-poly", "s1"):
        raise UsageError(f"{args.kind} takes no --x")
    kind = SequenceKind(args.kind, args.x)
    cache = load_or_extend_cache(kind, args.upto, cache_path(cfg.cache_dir, kind), cfg.verify_cache)
    out = sys.stdout
    for i in range(kind.first_index, args.upto + 1):
        v = cache.values[i]
        text = f"{v.numerator}/{v.denominator}" if kind.rational else str(v)
        out.write(f"{i}\t{text}\n")
    return EXIT_OK


def cmd_estimate(args, cfg: RunConfig) -> int:
    profile = theorems.estimate_exponent(
        args.check_id, args.p, args.base, args.max_r, cfg.budget_max_index
    )
    sys.stdout.write(json.dumps(profile.to_json(), indent=2) + "\n")
    return EXIT_OK


def cmd_cache(args, cfg: RunConfig) -> int:
    files = sorted(cfg.cache_dir.glob("*.v1.tsv")) if cfg.cache_dir.is_dir() else []
    if args.action == "clear":
        for f in files:
            f.unlink()
            Path(str(f) + ".lock").unlink(missing_ok=True)
        print(f"removed {len(files)} cache file(s) from {cfg.cache_dir}")
        return EXIT_OK
    entries = []
    for f in files:
        cache = read_cache_file(f)
        if args.action == "verify":
            load_or_extend_cache(cache.kind, max(len(cache.values) - 1, 0), f, verify=True)
        entries.append({"kind": cache.kind.kind_id, "count": len(cache.values), "path": str(f)})
    if cfg.format == "json":
        print(json.dumps({"cache_dir": str(cfg.cache_dir), "files": entries}, indent=2))
    else:
        for e in entries:
            print(f"{e['kind']}\t{e['count']}\t{e['path']}")
    return EXIT_OK


COMMANDS = {"seq": cmd_seq, "verify": cmd_verify, "estimate": cmd_estimate, "cache": cmd_cache}


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_ranges(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except theorems.BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CacheError as exc:
        print(f"error: cache: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
