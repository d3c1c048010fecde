"""Incremental parity (XOR) constraint propagation over GF(2).

Constraints are equations  v1 ^ v2 ^ ... ^ vk = rhs  over integer variable
ids.  A new row is reduced against every pivot installed so far, so a stored
row contains its own pivot, pivots installed later, and free variables only.
That keeps stored rows immutable: rollback pops pivots off a trail, and one
back-substitution pass in reverse installation order yields a model.
"""

from __future__ import annotations


class ParityConstraints:
    def __init__(self) -> None:
        self._rows: dict[int, tuple[frozenset[int], int]] = {}
        self._order: dict[int, int] = {}  # pivot -> trail index
        self._trail: list[int] = []

    def add(self, variables, rhs: int) -> bool:
        """Add one equation; returns False (and changes nothing) on conflict."""
        row = frozenset(variables)
        rhs &= 1
        while True:
            pivots_here = [v for v in row if v in self._rows]
            if not pivots_here:
                break
            # eliminating the earliest-installed pivot only ever introduces
            # later ones, so this terminates
            v = min(pivots_here, key=self._order.__getitem__)
            prow, prhs = self._rows[v]
            row = row ^ prow
            rhs ^= prhs
        if not row:
            return rhs == 0
        pivot = min(row)
        self._rows[pivot] = (row, rhs)
        self._order[pivot] = len(self._trail)
        self._trail.append(pivot)
        return True

    def checkpoint(self) -> int:
        return len(self._trail)

    def rollback(self, mark: int) -> None:
        while len(self._trail) > mark:
            pivot = self._trail.pop()
            del self._rows[pivot]
            del self._order[pivot]

    def solve(self) -> dict[int, int]:
        """One satisfying assignment; free variables default to 0."""
        values: dict[int, int] = {}
        for pivot in reversed(self._trail):
            row, rhs = self._rows[pivot]
            acc = rhs
            for v in row:
                if v != pivot:
                    acc ^= values.get(v, 0)
            values[pivot] = acc
        return values
