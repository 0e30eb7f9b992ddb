"""Tuning knobs for the sample-and-fit symbolic engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SymbolicConfig:
    """Sampling and fitting configuration; None lets the planner choose.

    The planner defaults: period = lcm of loop steps, block size, set count
    and constant divisors; degree bound = loop depth; grid base =
    max(4 * period, 2 * depth); one extra axis point per residue beyond the
    interpolation minimum, and two off-grid validation bindings.
    """

    base: int | None = None
    points_per_residue: int | None = None
    degree_bound: int | None = None
    period: int | None = None
    retries: int = 1
    validation_bindings: int = 2
    enumeration_cap: int | None = None
