"""Directed acyclic reference graphs with signed arrows.

A non-sink node carries a formula over exactly its arrow successors.  Paths
carry a parity value: positive when the number of negative arrows is even.
Two paths with common endpoints and different values form a contradictory
cell; these are the building blocks everything else inspects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .formula import (
    And,
    Formula,
    NegVar,
    Sign,
    Var,
    frontier_tags_of,
    vars_of,
)


class GraphError(ValueError):
    pass


def compose_value(s1: Sign, s2: Sign) -> Sign:
    """Value of a concatenation: positive iff the parts agree."""
    return Sign.POSITIVE if s1 is s2 else Sign.NEGATIVE


@dataclass(frozen=True)
class Arrow:
    """Signed arrow; serialized with keys "from"/"to"."""

    src: str
    dst: str
    sign: Sign


def _literal_conjuncts(f: Formula) -> list[Formula] | None:
    """The literal list if ``f`` is a conjunction of distinct literals, else None."""
    items = list(f.items) if isinstance(f, And) else [f]
    if not all(isinstance(g, (Var, NegVar)) for g in items):
        return None
    names = [g.name for g in items]  # type: ignore[union-attr]
    if len(names) != len(set(names)):
        return None
    return items


class RefGraph:
    """Immutable acyclic graph with per-node formulas over successors."""

    def __init__(
        self,
        nodes: Iterable[str],
        arrows: Iterable[Arrow],
        formulas: Mapping[str, Formula],
    ):
        self._nodes = tuple(sorted(set(nodes)))
        node_set = set(self._nodes)
        if any(not n for n in self._nodes):
            raise GraphError("empty node identifier")

        seen: set[tuple[str, str]] = set()
        for a in arrows:
            if a.src == a.dst:
                raise GraphError(f"self-loop at {a.src}")
            if a.src not in node_set or a.dst not in node_set:
                raise GraphError(f"arrow endpoint not a node: {a.src} -> {a.dst}")
            if (a.src, a.dst) in seen:
                raise GraphError(f"duplicate arrow {a.src} -> {a.dst}")
            seen.add((a.src, a.dst))
        self._arrows = tuple(sorted(arrows, key=lambda a: (a.src, a.dst)))

        self._succ: dict[str, dict[str, Sign]] = {n: {} for n in self._nodes}
        for a in self._arrows:
            self._succ[a.src][a.dst] = a.sign

        self._topo = self._toposort()
        self._sinks = tuple(n for n in self._nodes if not self._succ[n])
        self._formulas = dict(formulas)
        self._validate_formulas()

    def _toposort(self) -> tuple[str, ...]:
        indeg = {n: 0 for n in self._nodes}
        for a in self._arrows:
            indeg[a.dst] += 1
        ready = sorted(n for n, d in indeg.items() if d == 0)
        order: list[str] = []
        queue = deque(ready)
        while queue:
            n = queue.popleft()
            order.append(n)
            added = []
            for m in self._succ[n]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    added.append(m)
            for m in sorted(added):
                queue.append(m)
        if len(order) != len(self._nodes):
            cyclic = sorted(n for n, d in indeg.items() if d > 0)
            raise GraphError(f"graph has a directed cycle involving: {', '.join(cyclic)}")
        return tuple(order)

    def _validate_formulas(self) -> None:
        for n, f in self._formulas.items():
            if n not in self._succ:
                raise GraphError(f"formula for unknown node {n}")
            if frontier_tags_of(f):
                raise GraphError(f"frontier leaf in graph formula at {n}")
            succ = frozenset(self._succ[n])
            if not succ:
                raise GraphError(f"sink {n} must not carry a formula")
            mentioned = vars_of(f)
            if mentioned != succ:
                extra = sorted(mentioned - succ)
                missing = sorted(succ - mentioned)
                raise GraphError(
                    f"formula of {n} must mention exactly its successors"
                    + (f"; not successors: {extra}" if extra else "")
                    + (f"; unmentioned: {missing}" if missing else "")
                )
            literals = _literal_conjuncts(f)
            if literals is not None:
                for g in literals:
                    want = Sign.POSITIVE if isinstance(g, Var) else Sign.NEGATIVE
                    if self._succ[n][g.name] is not want:
                        raise GraphError(
                            f"literal polarity of {g.name} in formula of {n} "
                            f"does not match the arrow sign"
                        )
        for n in self._nodes:
            if self._succ[n] and n not in self._formulas:
                raise GraphError(f"non-sink {n} has no formula")

    # -- read access --------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self._arrows

    @property
    def sinks(self) -> tuple[str, ...]:
        return self._sinks

    @property
    def formulas(self) -> dict[str, Formula]:
        return dict(self._formulas)

    def topo_order(self) -> tuple[str, ...]:
        return self._topo

    def has_node(self, n: str) -> bool:
        return n in self._succ

    def successors(self, n: str) -> tuple[str, ...]:
        self._require(n)
        return tuple(sorted(self._succ[n]))

    def arrow_sign(self, src: str, dst: str) -> Sign:
        self._require(src)
        try:
            return self._succ[src][dst]
        except KeyError:
            raise GraphError(f"no arrow {src} -> {dst}") from None

    def has_arrow(self, src: str, dst: str) -> bool:
        return src in self._succ and dst in self._succ[src]

    def formula(self, n: str) -> Formula | None:
        self._require(n)
        return self._formulas.get(n)

    def is_sink(self, n: str) -> bool:
        self._require(n)
        return not self._succ[n]

    def _require(self, n: str) -> None:
        if n not in self._succ:
            raise GraphError(f"unknown node: {n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RefGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._arrows == other._arrows
            and self._formulas == other._formulas
        )

    def __repr__(self) -> str:
        return f"RefGraph({len(self._nodes)} nodes, {len(self._arrows)} arrows)"


# --------------------------------------------------------------------------
# Paths and cells


@dataclass(frozen=True)
class Path:
    """Nonempty chained arrow sequence; acyclicity rules out repeated nodes."""

    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if not self.arrows:
            raise GraphError("empty path")
        for a, b in zip(self.arrows, self.arrows[1:]):
            if a.dst != b.src:
                raise GraphError(f"path breaks at {a.dst} / {b.src}")
        if len(set(self.node_sequence())) != len(self.arrows) + 1:
            raise GraphError("path repeats a node")

    def node_sequence(self) -> tuple[str, ...]:
        return (self.arrows[0].src,) + tuple(a.dst for a in self.arrows)

    @property
    def start(self) -> str:
        return self.arrows[0].src

    @property
    def end(self) -> str:
        return self.arrows[-1].dst

    def __len__(self) -> int:
        return len(self.arrows)


def path_value(p: Path) -> Sign:
    """Positive iff the number of negative arrows is even."""
    value = Sign.POSITIVE
    for a in p.arrows:
        value = compose_value(value, a.sign)
    return value


DEFAULT_MAX_PATH_LEN = 32


def enumerate_paths(g: RefGraph, src: str, dst: str, max_len: int = DEFAULT_MAX_PATH_LEN) -> list[Path]:
    """All simple paths src -> dst with at most ``max_len`` arrows, ordered
    lexicographically by node sequence."""
    g._require(src)
    g._require(dst)
    out: list[Path] = []
    stack: list[Arrow] = []
    on_path = {src}

    def walk(at: str) -> None:
        if at == dst and stack:
            out.append(Path(tuple(stack)))
            return
        if len(stack) >= max_len:
            return
        for nxt in g.successors(at):
            if nxt in on_path:
                continue
            stack.append(Arrow(at, nxt, g.arrow_sign(at, nxt)))
            on_path.add(nxt)
            walk(nxt)
            on_path.discard(nxt)
            stack.pop()

    walk(src)
    return out


@dataclass(frozen=True)
class Cell:
    """Two paths with common endpoints and different values."""

    sigma: Path
    sigma_prime: Path

    def __post_init__(self) -> None:
        if self.sigma.start != self.sigma_prime.start or self.sigma.end != self.sigma_prime.end:
            raise GraphError("cell paths must share both endpoints")
        if path_value(self.sigma) is path_value(self.sigma_prime):
            raise GraphError("cell paths must have different values")


def find_contradictory_cells(
    g: RefGraph, src: str, dst: str, max_len: int = DEFAULT_MAX_PATH_LEN
) -> list[Cell]:
    """All unordered pairs of src->dst paths with differing value, in the
    deterministic order induced by path enumeration."""
    paths = enumerate_paths(g, src, dst, max_len)
    values = [path_value(p) for p in paths]
    cells = []
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if values[i] is not values[j]:
                cells.append(Cell(paths[i], paths[j]))
    return cells


def accumulated_values(p: Path) -> dict[str, Sign]:
    """Sign accumulated from the origin at every node of the path."""
    out = {p.start: Sign.POSITIVE}
    value = Sign.POSITIVE
    for a in p.arrows:
        value = compose_value(value, a.sign)
        out[a.dst] = value
    return out


@dataclass(frozen=True)
class ContradictionLoopReport:
    contradicts: tuple[tuple[int, int], ...]
    odd_cycle_witness: tuple[int, ...] | None


def contradiction_loop_check(paths: Sequence[Path]) -> ContradictionLoopReport:
    """Build the "contradicts" relation over a set of paths with a common
    origin (two paths contradict when they share a node reached with opposite
    accumulated sign) and search it for an odd cycle."""
    if not paths:
        return ContradictionLoopReport((), None)
    origin = paths[0].start
    if any(p.start != origin for p in paths):
        raise GraphError("paths must share an origin")

    table = [accumulated_values(p) for p in paths]
    edges = []
    adj: dict[int, list[int]] = {i: [] for i in range(len(paths))}
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            shared = table[i].keys() & table[j].keys()
            if any(table[i][n] is not table[j][n] for n in shared):
                edges.append((i, j))
                adj[i].append(j)
                adj[j].append(i)

    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for root in range(len(paths)):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    queue.append(v)
                elif color[v] == color[u]:
                    return ContradictionLoopReport(
                        tuple(edges), _odd_cycle(u, v, parent)
                    )
    return ContradictionLoopReport(tuple(edges), None)


def _odd_cycle(u: int, v: int, parent: dict[int, int | None]) -> tuple[int, ...]:
    def ancestry(x: int) -> list[int]:
        chain = [x]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])  # type: ignore[arg-type]
        return chain

    au, av = ancestry(u), ancestry(v)
    common = set(au) & set(av)
    iu = next(i for i, x in enumerate(au) if x in common)
    iv = next(i for i, x in enumerate(av) if x in common)
    # path u..lca plus lca..v reversed, closed by the conflict edge (v, u)
    return tuple(au[: iu + 1] + av[:iv][::-1])
