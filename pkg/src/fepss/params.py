"""Run parameters and their size-dependent defaults."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


@dataclass
class Params:
    """Every tunable of a run.

    ``None`` marks a size-dependent default filled in by :meth:`resolve`.
    In deterministic mode ``max_time`` counts main-loop iterations and
    ``T`` counts branch-and-bound nodes; otherwise both are seconds.
    """

    max_time: float | None = None
    T: float | None = None
    ns: int = 100
    max_ite: int = 500
    alpha: float = 0.7
    beta: float = 0.6
    P1: float = 0.1
    P2: float = 0.7
    t1: int = 10
    t2: int | None = None
    Delta: int | None = None
    cbs_interval: int = 100
    cbs_ite_num: int = 10
    seed: int = 1
    deterministic: bool = False
    # "profit" ranks released items by p_i / b_l as written; "profit-per-consumption" by p_i / r_il
    release_key: str = "profit"
    distinct_pool: bool = True
    shared_record: bool = True
    random_per_slot: int = 1000
    table_bits: int = 24
    pa_retry_cap: int = 1000

    def resolve(self, n: int) -> "Params":
        """Copy with every size-dependent default filled in for ``n`` items."""
        out = dataclasses.replace(self)
        if out.max_time is None:
            out.max_time = 360.0 if n <= 100 else 3600.0 if n <= 250 else 7200.0 if n <= 500 else 36000.0
        if out.T is None:
            out.T = 10.0 if n <= 500 else 20.0
        if out.t2 is None:
            out.t2 = math.ceil(n / 50)
        if out.Delta is None:
            out.Delta = math.ceil(n / 8)
        out.validate()
        return out

    def validate(self) -> None:
        for name in ("alpha", "beta", "P1", "P2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.ns < 2:
            raise ValueError("ns must be at least 2")
        for name in ("max_ite", "t1", "t2", "Delta", "cbs_interval", "cbs_ite_num", "random_per_slot"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.cbs_interval < 1:
            raise ValueError("cbs_interval must be positive")
        if self.release_key not in ("profit", "profit-per-consumption"):
            raise ValueError(f"unknown release_key {self.release_key!r}")

    def with_overrides(self, overrides: dict[str, str]) -> "Params":
        """Apply ``NAME=VALUE`` string overrides, coercing to the field type."""
        fields = {f.name: f for f in dataclasses.fields(self)}
        kw = {}
        for name, raw in overrides.items():
            if name not in fields:
                raise KeyError(f"unknown parameter {name!r}")
            kw[name] = _coerce(fields[name].type, raw)
        return dataclasses.replace(self, **kw)


def _coerce(annot: str, raw: str):
    if raw.lower() == "none" and "None" in annot:
        return None
    if annot.startswith("bool"):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if annot.startswith("int"):
        return int(raw)
    if annot.startswith("float"):
        return float(raw)
    return raw
