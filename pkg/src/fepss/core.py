"""Complete 0/1 assignments with cached objective and slack."""

from __future__ import annotations

import numpy as np

from .instance import Instance


class Solution:
    """A complete assignment with its objective and per-constraint slack.

    ``bits`` is a ``uint8`` vector; ``slack[j] = b[j] - sum_i r[j, i] * bits[i]``.
    Instances are treated as values: the mutating helpers (:meth:`flip`,
    :meth:`swap`) are only used on private copies.
    """

    __slots__ = ("bits", "objective", "slack")

    def __init__(self, bits: np.ndarray, objective: float, slack: np.ndarray):
        self.bits = bits
        self.objective = objective
        self.slack = slack

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.slack >= 0))

    @property
    def n_selected(self) -> int:
        return int(self.bits.sum())

    def copy(self) -> "Solution":
        return Solution(self.bits.copy(), self.objective, self.slack.copy())

    def key(self) -> bytes:
        """Exact bit pattern, usable as a dict/set key."""
        return self.bits.tobytes()

    def flip(self, inst: Instance, i: int) -> None:
        d_obj, d_slack = flip_delta(inst, self, i)
        self.bits[i] ^= 1
        self.objective += d_obj
        self.slack += d_slack

    def swap(self, inst: Instance, i: int, j: int) -> None:
        """Drop selected item ``i`` and add unselected item ``j``."""
        assert self.bits[i] == 1 and self.bits[j] == 0
        self.flip(inst, i)
        self.flip(inst, j)

    def __eq__(self, other):
        return isinstance(other, Solution) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        s = "".join(map(str, self.bits[:40]))
        if self.bits.size > 40:
            s += "..."
        return f"Solution({s}, f={self.objective:g}, feasible={self.feasible})"


def evaluate(inst: Instance, bits) -> Solution:
    bits = np.asarray(bits, dtype=np.uint8).copy()
    if bits.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
    x = bits.astype(np.float64)
    return Solution(bits, float(inst.p @ x), inst.b - inst.r @ x)


def empty_solution(inst: Instance) -> Solution:
    return Solution(np.zeros(inst.n, dtype=np.uint8), 0.0, inst.b.copy())


def flip_delta(inst: Instance, s: Solution, i: int) -> tuple[float, np.ndarray]:
    """Objective and slack change caused by flipping item ``i``."""
    if s.bits[i]:
        return -float(inst.p[i]), inst.r[:, i].copy()
    return float(inst.p[i]), -inst.r[:, i]


def hamming(s1, s2) -> int:
    a = s1.bits if isinstance(s1, Solution) else np.asarray(s1)
    b = s2.bits if isinstance(s2, Solution) else np.asarray(s2)
    if a.shape != b.shape:
        raise ValueError("solutions differ in length")
    return int(np.count_nonzero(a != b))
