"""Exact per-binding reuse analysis over the enumerated access trace.

A single forward pass maintains, per data point, the index of its last
access, plus a Fenwick tree marking each element's most recent position.
The reuse interval of a warm access is the number of accesses in the
window from (exclusive) its immediate predecessor to (inclusive) itself;
the reuse distance is the number of distinct data points touched in that
window, which always includes the reused element, so both are >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .polyhedral import (
    AccessMap,
    DataPoint,
    build_access_map,
    walk_accesses,
)
from .semantics import ValidatedProgram


class _Fenwick:
    __slots__ = ("tree", "n")

    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)

    def add(self, i: int, delta: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & (-i)

    def prefix(self, i: int) -> int:
        # sum of positions [0, i]
        i += 1
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & (-i)
        return total


@dataclass
class ReuseRecord:
    """Per-access reuse facts; cold accesses have no predecessor/ri/rd."""

    timestamp: tuple[int, ...]
    element: DataPoint
    stmt_id: int
    predecessor: tuple[int, ...] | None
    ri: int | None
    rd: int | None

    @property
    def is_cold(self) -> bool:
        return self.predecessor is None


@dataclass
class ConcreteDistribution:
    """Warm accesses grouped by reuse-distance value, plus access counts."""

    groups: list[tuple[int, int]]  # (rd value, multiplicity), rd ascending
    n_total: int
    n_warm: int
    n_cold: int

    def to_json(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_warm": self.n_warm,
            "n_cold": self.n_cold,
            "groups": [{"rd": rd, "count": count} for rd, count in self.groups],
            "dmd": dmd_numeric(self),
        }


def analyze_concrete(
    program: ValidatedProgram,
    binding: dict[str, int],
    block_size: int = 1,
    num_sets: int = 1,
    cap: int | None = None,
) -> tuple[list[ReuseRecord], ConcreteDistribution]:
    """Exact reuse records and distribution for one parameter binding."""
    amap = build_access_map(program, block_size, num_sets)
    return analyze_trace_of(amap, binding, cap)


def analyze_trace_of(
    amap: AccessMap, binding: dict[str, int], cap: int | None = None
) -> tuple[list[ReuseRecord], ConcreteDistribution]:
    trace = list(walk_accesses(amap, binding, cap))
    records: list[ReuseRecord] = []
    fenwick = _Fenwick(len(trace))
    last_index: dict[DataPoint, int] = {}
    rd_counts: dict[int, int] = {}

    for i, (point, stmt_id, element) in enumerate(trace):
        prev = last_index.get(element)
        if prev is None:
            records.append(ReuseRecord(point, element, stmt_id, None, None, None))
        else:
            # Distinct elements strictly between prev and i, plus the element itself.
            rd = fenwick.prefix(i - 1) - fenwick.prefix(prev) + 1
            ri = i - prev
            records.append(
                ReuseRecord(point, element, stmt_id, trace[prev][0], ri, rd)
            )
            rd_counts[rd] = rd_counts.get(rd, 0) + 1
            fenwick.add(prev, -1)
        fenwick.add(i, 1)
        last_index[element] = i

    n_total = len(trace)
    n_warm = sum(rd_counts.values())
    dist = ConcreteDistribution(
        groups=sorted(rd_counts.items()),
        n_total=n_total,
        n_warm=n_warm,
        n_cold=n_total - n_warm,
    )
    return records, dist


def dmd_numeric(dist: ConcreteDistribution) -> float:
    """Data-movement distance: one unit per cold access plus sqrt(rd) per warm."""
    return dist.n_cold + sum(count * math.sqrt(rd) for rd, count in dist.groups)
