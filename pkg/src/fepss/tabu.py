"""Feasible-space tabu search over the one-flip and swap neighborhoods.

Visited solutions are remembered approximately by three independent
XOR signatures, each indexing its own boolean table.  A solution counts as
visited only when all three table entries are set.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .core import Solution
from .instance import Instance

DEFAULT_TABLE_BITS = 24

_NONE, _FLIP, _SWAP = -1, 0, 1


class VisitRecord:
    """Three signature tables of ``2**table_bits`` entries each."""

    def __init__(self, n: int, rng: np.random.Generator, table_bits: int = DEFAULT_TABLE_BITS):
        self.keys = rng.integers(0, np.iinfo(np.uint64).max, size=(3, n), dtype=np.uint64, endpoint=True)
        self.tables = np.zeros((3, 1 << table_bits), dtype=np.bool_)
        self.mask = np.uint64((1 << table_bits) - 1)

    def signature(self, bits) -> np.ndarray:
        sel = np.asarray(bits).astype(bool)
        return np.bitwise_xor.reduce(self.keys[:, sel], axis=1) if sel.any() else np.zeros(3, np.uint64)

    def add(self, sig: np.ndarray) -> None:
        idx = (sig & self.mask).astype(np.int64)
        self.tables[0, idx[0]] = True
        self.tables[1, idx[1]] = True
        self.tables[2, idx[2]] = True

    def __contains__(self, sig) -> bool:
        idx = (np.asarray(sig, dtype=np.uint64) & self.mask).astype(np.int64)
        return bool(self.tables[0, idx[0]] and self.tables[1, idx[1]] and self.tables[2, idx[2]])

    def mark(self, s: Solution) -> None:
        self.add(self.signature(s.bits))

    def seen(self, s: Solution) -> bool:
        return self.signature(s.bits) in self


@nb.njit(cache=True)
def _splitmix(state):
    state = (state + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    return state, z ^ (z >> np.uint64(31))


@nb.njit(cache=True)
def _visited(tables, mask, s0, s1, s2):
    return tables[0, np.int64(s0 & mask)] and tables[1, np.int64(s1 & mask)] and tables[2, np.int64(s2 & mask)]


@nb.njit(cache=True)
def _best_move(bits, slack, p, r, keys, sig, tables, mask, seed):
    """Best admissible move; returns (kind, out_item, in_item).

    Ties between equally good moves are broken uniformly by reservoir sampling.
    """
    n = bits.size
    m = slack.size
    best_kind = -1
    best_i = -1
    best_j = -1
    best_delta = -np.inf
    ties = 0
    state = seed
    ones = np.empty(n, np.int64)
    zeros = np.empty(n, np.int64)
    n1 = 0
    n0 = 0
    for i in range(n):
        if bits[i]:
            ones[n1] = i
            n1 += 1
        else:
            zeros[n0] = i
            n0 += 1
    # one-flip moves
    for i in range(n):
        if bits[i]:
            delta = -p[i]
        else:
            delta = p[i]
        if delta < best_delta:
            continue
        if not bits[i]:
            ok = True
            for k in range(m):
                if r[k, i] > slack[k]:
                    ok = False
                    break
            if not ok:
                continue
        if _visited(tables, mask, sig[0] ^ keys[0, i], sig[1] ^ keys[1, i], sig[2] ^ keys[2, i]):
            continue
        if delta > best_delta:
            best_delta = delta
            ties = 1
            best_kind, best_i, best_j = 0, i, -1
        else:
            ties += 1
            state, z = _splitmix(state)
            if z % np.uint64(ties) == 0:
                best_kind, best_i, best_j = 0, i, -1
    # swap moves: drop a selected item, add an unselected one
    for a in range(n1):
        i = ones[a]
        for c in range(n0):
            j = zeros[c]
            delta = p[j] - p[i]
            if delta < best_delta:
                continue
            ok = True
            for k in range(m):
                if r[k, j] - r[k, i] > slack[k]:
                    ok = False
                    break
            if not ok:
                continue
            if _visited(tables, mask,
                        sig[0] ^ keys[0, i] ^ keys[0, j],
                        sig[1] ^ keys[1, i] ^ keys[1, j],
                        sig[2] ^ keys[2, i] ^ keys[2, j]):
                continue
            if delta > best_delta:
                best_delta = delta
                ties = 1
                best_kind, best_i, best_j = 1, i, j
            else:
                ties += 1
                state, z = _splitmix(state)
                if z % np.uint64(ties) == 0:
                    best_kind, best_i, best_j = 1, i, j
    return best_kind, best_i, best_j


def _seed(rng: np.random.Generator) -> np.uint64:
    return rng.integers(0, np.iinfo(np.uint64).max, dtype=np.uint64, endpoint=True)


def _find_move(inst, s, rec, rng, sig):
    return _best_move(s.bits, s.slack, inst.p, inst.r, rec.keys, sig, rec.tables, rec.mask, _seed(rng))


def _apply(inst, s, sig, rec, kind, i, j):
    s.flip(inst, i)
    sig ^= rec.keys[:, i]
    if kind == _SWAP:
        s.flip(inst, j)
        sig ^= rec.keys[:, j]


def best_neighbor(inst: Instance, s: Solution, rec: VisitRecord, rng: np.random.Generator) -> Solution | None:
    """Best feasible, not-yet-visited member of N1(s) and N2(s), or ``None``."""
    sig = rec.signature(s.bits)
    kind, i, j = _find_move(inst, s, rec, rng, sig)
    if kind == _NONE:
        return None
    out = s.copy()
    _apply(inst, out, sig, rec, kind, i, j)
    return out


def tabu_search(
    inst: Instance,
    s: Solution,
    max_ite: int,
    rec: VisitRecord,
    rng: np.random.Generator,
    trace: list | None = None,
) -> Solution:
    """Refine feasible ``s`` for ``max_ite`` moves and return the best visited.

    Each iteration moves to the best admissible neighbor even when it is worse
    than the current solution.  Stops early when no admissible neighbor is
    left.  ``trace``, when given, receives the bit pattern of every accepted
    solution, which lets callers check for revisits exactly.
    """
    if not s.feasible:
        raise ValueError("tabu search needs a feasible start")
    cur = s.copy()
    best = s
    sig = rec.signature(cur.bits)
    for _ in range(max_ite):
        kind, i, j = _find_move(inst, cur, rec, rng, sig)
        if kind == _NONE:
            break
        _apply(inst, cur, sig, rec, kind, i, j)
        rec.add(sig)
        if trace is not None:
            trace.append(cur.key())
        if cur.objective > best.objective:
            best = cur.copy()
    return best
