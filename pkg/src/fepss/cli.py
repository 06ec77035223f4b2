"""Batch harness: run instances x seeds and write one CSV row per run.

Example::

    fepss --instance data/mknapcb1.txt --format orlib --index 1 \\
          --seeds 1..5 --max-time 60 --best-known data/mkcbres.txt --out r.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .driver import run
from .instance import Instance, ParseError, load, read_best_known
from .params import Params

log = logging.getLogger("fepss")

HEADER = ["instance", "seed", "f_best", "time_to_best_s", "iterations", "gap"]


@dataclass
class BatchSpec:
    instances: list[Instance]
    seeds: list[int]
    params: Params
    out: Path | None = None
    best_known: dict[str, float] = field(default_factory=dict)
    dump_dir: Path | None = None

    def __post_init__(self):
        if not self.instances:
            raise ValueError("no instance selected")
        if not self.seeds:
            raise ValueError("no seed selected")


@dataclass
class ResultRow:
    instance: str
    seed: int
    f_best: float
    time_to_best: float
    iterations: int
    gap: float | None

    def cells(self) -> list[str]:
        gap = "" if self.gap is None else repr(self.gap)
        return [self.instance, str(self.seed), _num(self.f_best), repr(self.time_to_best),
                str(self.iterations), gap]


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def beasley_key(inst: Instance) -> str | None:
    """OR-Library results-table key (``"5.100-00"``) for a problem named ``stem#k``."""
    mt = re.search(r"#(\d+)$", inst.name)
    if not mt:
        return None
    return f"{inst.m}.{inst.n}-{int(mt.group(1)) - 1:02d}"


def lookup_best_known(inst: Instance, table: dict[str, float]) -> float | None:
    """Table entry by name, then by stem and OR-Library key, then the file's own value."""
    stem = inst.name.split("#")[0]
    for key in (inst.name, beasley_key(inst), stem if "#" not in inst.name else None):
        if key is not None and key in table:
            return table[key]
    return inst.best_known


def gap(bk: float | None, f: float) -> float | None:
    if bk is None or bk == 0:
        return None
    return float((bk - f) / bk)


def parse_seeds(spec: str) -> list[int]:
    mt = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", spec)
    if not mt:
        raise ValueError(f"bad seed range {spec!r}, expected A..B")
    a, b = int(mt.group(1)), int(mt.group(2))
    if b < a:
        raise ValueError(f"empty seed range {spec!r}")
    return list(range(a, b + 1))


def parse_deterministic(spec: str) -> tuple[int, int]:
    mt = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", spec)
    if not mt or int(mt.group(2)) == 0:
        raise ValueError(f"bad --deterministic value {spec!r}, expected ITERS:NODES with NODES > 0")
    return int(mt.group(1)), int(mt.group(2))


def _one_run(inst: Instance, params: Params, bk: float | None, want_dump: bool):
    res = run(inst, params, dump_pool=want_dump)
    row = ResultRow(inst.name, params.seed, float(res.best_objective), float(res.time_to_best), res.iterations,
                    gap(bk, res.best_objective))
    return row, res.pool_dump


def run_batch(spec: BatchSpec, jobs: int = 1, quiet: bool = False) -> list[ResultRow]:
    tasks = []
    for inst in spec.instances:
        bk = lookup_best_known(inst, spec.best_known)
        for seed in spec.seeds:
            p = Params(**{**spec.params.__dict__, "seed": seed})
            tasks.append((inst, p, bk, spec.dump_dir is not None))

    rows = []

    def collect(row, dump):
        rows.append(row)
        if not quiet:
            print(f"{row.instance} seed {row.seed}: {_num(row.f_best)} "
                  f"(best at {row.time_to_best:.3f}, {row.iterations} iterations)", file=sys.stderr)
        if dump is not None:
            spec.dump_dir.mkdir(parents=True, exist_ok=True)
            safe = row.instance.replace("#", "_")
            (spec.dump_dir / f"{safe}.seed{row.seed}.pool").write_text(dump)

    if jobs <= 1:
        for t in tasks:
            collect(*_one_run(*t))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for fut in [ex.submit(_one_run, *t) for t in tasks]:
                collect(*fut.result())
    rows.sort(key=lambda r: (r.instance, r.seed))
    return rows


def to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


def summarize(rows: list[ResultRow]) -> list[dict]:
    """Per-instance best, mean and mean time-to-best over seeds."""
    out = []
    for name in sorted({r.instance for r in rows}):
        rs = [r for r in rows if r.instance == name]
        f = [r.f_best for r in rs]
        out.append({
            "instance": name,
            "runs": len(rs),
            "f_best": float(max(f)),
            "f_avg": math.fsum(f) / len(f),
            "t_avg": math.fsum(r.time_to_best for r in rs) / len(rs),
        })
    return out


def format_summary(summary: list[dict]) -> str:
    lines = ["instance,runs,f_best,f_avg,t_avg"]
    for s in summary:
        lines.append(f"{s['instance']},{s['runs']},{_num(s['f_best'])},{s['f_avg']!r},{s['t_avg']!r}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fepss", description="Run the knapsack search over instances and seeds.")
    ap.add_argument("--instance", action="append", required=True, metavar="PATH",
                    help="instance file (repeatable)")
    ap.add_argument("--format", choices=("orlib", "mkgk"), default="orlib")
    ap.add_argument("--index", type=int, action="append", metavar="K",
                    help="1-based problem within a multi-problem file (repeatable; default all)")
    seeds = ap.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, action="append", metavar="S")
    seeds.add_argument("--seeds", metavar="A..B", help="inclusive seed range (default 1..30)")
    budget = ap.add_mutually_exclusive_group()
    budget.add_argument("--max-time", type=float, metavar="SECONDS")
    budget.add_argument("--deterministic", metavar="ITERS:NODES",
                        help="count iterations and subsolver nodes instead of seconds")
    ap.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    ap.add_argument("--out", metavar="CSV_PATH", help="CSV destination (default stdout)")
    ap.add_argument("--best-known", metavar="PATH", help="name/value table overriding file optima")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--dump-pool", metavar="DIR", help="write each run's final pool here")
    ap.add_argument("--quiet", action="store_true")
    ap.add_argument("--verbose", action="store_true")
    return ap


def spec_from_args(args) -> BatchSpec:
    instances = []
    for path in args.instance:
        probs = load(path, args.format)
        if args.index:
            for k in args.index:
                if not 1 <= k <= len(probs):
                    raise ValueError(f"{path}: problem index {k} outside 1..{len(probs)}")
            probs = [probs[k - 1] for k in args.index]
        instances.extend(probs)

    if args.seed:
        seeds = list(args.seed)
    else:
        seeds = parse_seeds(args.seeds or "1..30")

    overrides = {}
    for item in args.param:
        if "=" not in item:
            raise ValueError(f"bad --param {item!r}, expected NAME=VALUE")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    params = Params().with_overrides(overrides)
    if args.max_time is not None:
        params.max_time = args.max_time
    if args.deterministic:
        iters, nodes = parse_deterministic(args.deterministic)
        params.deterministic, params.max_time, params.T = True, iters, nodes
    params.validate()

    table = read_best_known(args.best_known) if args.best_known else {}
    return BatchSpec(instances, seeds, params, Path(args.out) if args.out else None, table,
                     Path(args.dump_pool) if args.dump_pool else None)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = spec_from_args(args)
        rows = run_batch(spec, jobs=args.jobs, quiet=args.quiet)
        text = to_csv(rows)
        if spec.out is None:
            sys.stdout.write(text)
        else:
            spec.out.write_text(text)
    except (OSError, ParseError, ValueError, KeyError) as exc:
        print(f"fepss: error: {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        out = sys.stderr if spec.out is None else sys.stdout
        out.write(format_summary(summarize(rows)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
