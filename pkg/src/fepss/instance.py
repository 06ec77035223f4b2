"""Benchmark instances: parsing, serialization, item scores and renumbering.

Two text formats are understood, both whitespace tokenized:

* OR-Library ``mknapcb`` files: ``K`` followed by ``K`` problems, each laid out
  as ``n m opt``, ``n`` profits, ``m*n`` coefficients (row per constraint) and
  ``m`` capacities.  ``opt == 0`` means unknown.
* Single-problem ``mk_gk`` style files: ``n m``, profits, coefficients,
  capacities, with an optional best-known token (see :func:`parse_mkgk`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ParseError(ValueError):
    """Raised when a token stream does not describe a valid instance."""


@dataclass(frozen=True)
class Instance:
    """A 0-1 multidimensional knapsack instance.

    ``r[j, i]`` is the amount of resource ``j`` consumed by item ``i``.
    """

    p: np.ndarray
    r: np.ndarray
    b: np.ndarray
    best_known: float | None = None
    name: str = ""

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=np.float64)
        b = np.ascontiguousarray(self.b, dtype=np.float64)
        r = np.ascontiguousarray(np.atleast_2d(np.asarray(self.r, dtype=np.float64)))
        if p.ndim != 1 or p.size < 1:
            raise ValueError("profits must be a non-empty vector")
        if b.ndim != 1 or b.size < 1:
            raise ValueError("capacities must be a non-empty vector")
        if r.shape != (b.size, p.size):
            raise ValueError(f"consumption matrix has shape {r.shape}, expected {(b.size, p.size)}")
        if np.any(p <= 0):
            raise ValueError("profits must be positive")
        if np.any(b <= 0):
            raise ValueError("capacities must be positive")
        if np.any(r < 0):
            raise ValueError("consumption must be non-negative")
        for arr in (p, r, b):
            arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.p.size

    @property
    def m(self) -> int:
        return self.b.size

    def objective(self, bits) -> float:
        return float(self.p @ np.asarray(bits, dtype=np.float64))

    def is_feasible(self, bits) -> bool:
        return bool(np.all(self.r @ np.asarray(bits, dtype=np.float64) <= self.b))


@dataclass(frozen=True)
class Renumbering:
    """Permutation between original and renumbered item indices.

    ``forward[orig] -> new`` and ``backward[new] -> orig``.
    """

    forward: np.ndarray
    backward: np.ndarray = field(repr=False)

    @classmethod
    def from_order(cls, order) -> "Renumbering":
        backward = np.asarray(order, dtype=np.int64)
        forward = np.empty_like(backward)
        forward[backward] = np.arange(backward.size)
        return cls(forward, backward)

    def to_renumbered(self, bits) -> np.ndarray:
        """Map a per-item vector from original to renumbered order."""
        return np.asarray(bits)[self.backward]

    def to_original(self, bits) -> np.ndarray:
        """Map a per-item vector from renumbered to original order."""
        return np.asarray(bits)[self.forward]


# --- tokenizing --------------------------------------------------------------


def _tokens(text: str) -> list[str]:
    return text.split()


def _number(tok: str, offset: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"non-numeric token {tok!r} at offset {offset}") from None


def _count(tok: str, offset: int, what: str) -> int:
    v = _number(tok, offset)
    if v != int(v) or v <= 0:
        raise ParseError(f"{what} must be a positive integer, got {tok!r} at offset {offset}")
    return int(v)


class _Cursor:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.pos = 0

    def take(self, k: int) -> np.ndarray:
        if self.pos + k > len(self.toks):
            raise ParseError(
                f"token shortage at offset {len(self.toks)}: needed {k} tokens from offset {self.pos}"
            )
        out = np.array([_number(t, self.pos + i) for i, t in enumerate(self.toks[self.pos:self.pos + k])])
        self.pos += k
        return out

    def count(self, what: str) -> int:
        if self.pos >= len(self.toks):
            raise ParseError(f"token shortage at offset {self.pos}: expected {what}")
        v = _count(self.toks[self.pos], self.pos, what)
        self.pos += 1
        return v


def _build(p, flat_r, b, n, m, best_known, name, offset) -> Instance:
    bad = np.flatnonzero(b <= 0)
    if bad.size:
        raise ParseError(f"capacity {b[bad[0]]:g} is not positive (token offset {offset + bad[0]})")
    try:
        return Instance(p, flat_r.reshape(m, n), b, best_known=best_known, name=name)
    except ValueError as exc:
        raise ParseError(f"{exc} (problem starting at token offset {offset})") from None


def parse_orlib(text: str, name: str = "") -> list[Instance]:
    """Parse an OR-Library ``mknapcb`` stream into its list of problems.

    Problems are named ``{name}#{k}`` with ``k`` counted from 1.
    """
    cur = _Cursor(_tokens(text))
    k_total = cur.count("problem count")
    out = []
    for k in range(k_total):
        start = cur.pos
        n = cur.count("item count n")
        m = cur.count("constraint count m")
        (opt,) = cur.take(1)
        p = cur.take(n)
        r = cur.take(n * m)
        b = cur.take(m)
        out.append(_build(p, r, b, n, m, opt if opt != 0 else None, f"{name}#{k + 1}", start))
    return out


_MKGK_LAYOUTS = (
    # (label, header length, index of n, index of m, index of best-known or None)
    ("n m", 2, 0, 1, None),
    ("n m best", 3, 0, 1, 2),
    ("best n m", 3, 1, 2, 0),
)


def parse_mkgk(text: str, name: str = "") -> Instance:
    """Parse a single-problem file.

    The best-known token is optional and may sit after ``n m`` or in front of
    them.  The layout is chosen by token-count arithmetic, trying the plain
    layout first.
    """
    toks = _tokens(text)
    attempted = []
    for label, head, i_n, i_m, i_bk in _MKGK_LAYOUTS:
        attempted.append(label)
        if len(toks) < head:
            continue
        try:
            n = _count(toks[i_n], i_n, "n")
            m = _count(toks[i_m], i_m, "m")
        except ParseError:
            continue
        if len(toks) != head + n + n * m + m:
            continue
        cur = _Cursor(toks)
        bk = None
        if i_bk is not None:
            bk = _number(toks[i_bk], i_bk)
            bk = bk if bk != 0 else None
        cur.pos = head
        p = cur.take(n)
        r = cur.take(n * m)
        b = cur.take(m)
        return _build(p, r, b, n, m, bk, name, 0)
    raise ParseError(
        f"{len(toks)} tokens match none of the layouts: " + "; ".join(f"[{a} ...]" for a in attempted)
    )


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def serialize_orlib(instances: list[Instance]) -> str:
    """Inverse of :func:`parse_orlib` up to whitespace."""
    lines = [str(len(instances))]
    for inst in instances:
        bk = inst.best_known if inst.best_known is not None else 0
        lines.append(f"{inst.n} {inst.m} {_fmt(bk)}")
        lines.append(" ".join(map(_fmt, inst.p)))
        for row in inst.r:
            lines.append(" ".join(map(_fmt, row)))
        lines.append(" ".join(map(_fmt, inst.b)))
    return "\n".join(lines) + "\n"


def serialize_mkgk(inst: Instance, with_best_known: bool = False) -> str:
    """Inverse of :func:`parse_mkgk`; the best-known token follows ``n m``."""
    head = f"{inst.n} {inst.m}"
    if with_best_known:
        head += f" {_fmt(inst.best_known or 0)}"
    lines = [head, " ".join(map(_fmt, inst.p))]
    lines += [" ".join(map(_fmt, row)) for row in inst.r]
    lines.append(" ".join(map(_fmt, inst.b)))
    return "\n".join(lines) + "\n"


def load(path, fmt: str) -> list[Instance]:
    """Read ``path`` in format ``"orlib"`` or ``"mkgk"``; always returns a list."""
    path = Path(path)
    text = path.read_text()
    if fmt == "orlib":
        return parse_orlib(text, name=path.stem)
    if fmt == "mkgk":
        return [parse_mkgk(text, name=path.stem)]
    raise ValueError(f"unknown format {fmt!r}")


_BK_LINE = re.compile(r"^\s*(\S+)[\s,;]+([-+]?\d+(?:\.\d*)?)\s*$")


def read_best_known(path) -> dict[str, float]:
    """Read a best-known table: one ``name value`` pair per line.

    Whitespace or comma separated; non-matching lines (headers, the LP section
    of ``mkcbres.txt``) are skipped.  The first value seen for a name wins.
    """
    table: dict[str, float] = {}
    for line in Path(path).read_text().splitlines():
        if "lp" in line.lower() and "optimal" in line.lower():
            break
        mt = _BK_LINE.match(line)
        if mt and mt.group(1).lower() not in ("instance", "problem"):
            table.setdefault(mt.group(1), float(mt.group(2)))
    return table


# --- scores and renumbering ----------------------------------------------------


def coarse_scores(inst: Instance) -> np.ndarray:
    """Profit per capacity-normalized total consumption; ``inf`` for free items."""
    denom = (inst.r / inst.b[:, None]).sum(axis=0)
    with np.errstate(divide="ignore"):
        c = np.where(denom > 0, inst.p / np.where(denom > 0, denom, 1.0), np.inf)
    return c


def renumber(inst: Instance) -> tuple[Instance, Renumbering]:
    """Reorder items by ascending coarse score, ties by original index."""
    order = np.argsort(coarse_scores(inst), kind="stable")
    ren = Renumbering.from_order(order)
    out = Instance(inst.p[order], inst.r[:, order], inst.b, best_known=inst.best_known, name=inst.name)
    return out, ren
