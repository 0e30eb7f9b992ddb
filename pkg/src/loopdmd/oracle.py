"""Ground-truth LRU stack simulation, used for cross-validation in tests.

Deliberately naive: keeps the stack as a list ordered most-recent-first and
scans it per access. The 1-based stack depth of a reused element equals the
number of distinct elements accessed from just after its previous access up
to and including the current one (the reused element contributes exactly
once under either endpoint convention, since it sits at both ends).
"""

from __future__ import annotations

from typing import Hashable, Sequence


def stack_distances(trace: Sequence[Hashable]) -> list[int | None]:
    """Per access: None on first touch, else the element's LRU stack depth."""
    stack: list[Hashable] = []
    out: list[int | None] = []
    for element in trace:
        try:
            depth = stack.index(element)
        except ValueError:
            out.append(None)
            stack.insert(0, element)
        else:
            out.append(depth + 1)
            del stack[depth]
            stack.insert(0, element)
    return out


def lru_hits(trace: Sequence[Hashable], capacity: int) -> int:
    """Hit count of a fully associative LRU cache of ``capacity`` elements."""
    stack: list[Hashable] = []
    hits = 0
    for element in trace:
        try:
            depth = stack.index(element)
        except ValueError:
            stack.insert(0, element)
            if len(stack) > capacity:
                stack.pop()
        else:
            hits += 1
            del stack[depth]
            stack.insert(0, element)
    return hits
