"""Embedding search: inject a Yablo truncation into a bare acyclic graph.

An injection maps the truncation's nodes into the target so that every
ordered pair is joined by a chosen target path, and a single sign valuation
of the used arrows gives every chosen path negative composite value.  Since
each pair's path parity is a GF(2) linear form over arrow-sign bits, the
sign requirement is solved by parity constraint propagation while the
backtracking search picks image nodes (in topological order, lexicographic
tie-break) and chosen paths.

A search that exhausts its alternatives proves absence; running out of
budget, or truncating a path enumeration, is reported as inconclusive and
never as absence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .formula import (
    Formula,
    NegVar,
    Or,
    Sign,
    TruthValue3,
    Var,
    and3,
    conj,
    lit,
    not3,
    or3,
)
from .graph import Arrow, RefGraph
from .parity import ParityConstraints
from .semantics import StatusKind, check_status, eval3_graph


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class BareDag:
    """Unsigned acyclic digraph: the raw material an interpretation signs."""

    nodes: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]

    @classmethod
    def make(cls, nodes: Iterable[str], arrows: Iterable[tuple[str, str]]) -> "BareDag":
        node_tuple = tuple(sorted(set(nodes)))
        node_set = set(node_tuple)
        arrow_set = set()
        for src, dst in arrows:
            if src == dst:
                raise EmbeddingError(f"self-loop at {src}")
            if src not in node_set or dst not in node_set:
                raise EmbeddingError(f"arrow endpoint not a node: {src} -> {dst}")
            arrow_set.add((src, dst))
        dag = cls(node_tuple, tuple(sorted(arrow_set)))
        dag.topo_order()  # raises on cycles
        return dag

    def successors(self, n: str) -> tuple[str, ...]:
        return tuple(sorted(dst for src, dst in self.arrows if src == n))

    def predecessors(self, n: str) -> tuple[str, ...]:
        return tuple(sorted(src for src, dst in self.arrows if dst == n))

    def topo_order(self) -> tuple[str, ...]:
        indeg = {n: 0 for n in self.nodes}
        succ: dict[str, list[str]] = {n: [] for n in self.nodes}
        for src, dst in self.arrows:
            indeg[dst] += 1
            succ[src].append(dst)
        ready = sorted(n for n, d in indeg.items() if d == 0)
        order: list[str] = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            opened = []
            for m in succ[n]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    opened.append(m)
            ready = sorted(ready + opened)
        if len(order) != len(self.nodes):
            raise EmbeddingError("bare graph has a directed cycle")
        return tuple(order)

    def reachable_from(self, n: str) -> frozenset[str]:
        seen = {n}
        stack = [n]
        while stack:
            for m in self.successors(stack.pop()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return frozenset(seen - {n})

    def paths(self, src: str, dst: str, max_len: int, max_count: int = 512):
        """Simple paths as node sequences, lexicographic order.  Returns
        (paths, complete): complete is False when either cap truncated the
        enumeration."""
        out: list[tuple[str, ...]] = []
        complete = True
        prefix = [src]
        on_path = {src}

        def walk(at: str) -> None:
            nonlocal complete
            if at == dst and len(prefix) > 1:
                if len(out) >= max_count:
                    complete = False
                else:
                    out.append(tuple(prefix))
                return
            if len(prefix) > max_len:
                complete = False
                return
            for nxt in self.successors(at):
                if nxt in on_path:
                    continue
                prefix.append(nxt)
                on_path.add(nxt)
                walk(nxt)
                on_path.discard(nxt)
                prefix.pop()

        walk(src)
        return out, complete


def strip_signs(g: RefGraph) -> BareDag:
    return BareDag.make(g.nodes, [(a.src, a.dst) for a in g.arrows])


# --------------------------------------------------------------------------
# Injections


def _ys_node(i: int) -> str:
    return f"x{i}"


@dataclass(frozen=True)
class Injection:
    """Node map from a truncation into a target, the chosen target path per
    ordered pair, and the sign valuation of the arrows those paths use."""

    mu: tuple[tuple[str, str], ...]
    paths: tuple[tuple[tuple[str, str], tuple[str, ...]], ...]
    valuation: tuple[tuple[tuple[str, str], Sign], ...]

    @property
    def n(self) -> int:
        return len(self.mu) - 1

    def mu_map(self) -> dict[str, str]:
        return dict(self.mu)

    def path_map(self) -> dict[tuple[str, str], tuple[str, ...]]:
        return dict(self.paths)

    def valuation_map(self) -> dict[tuple[str, str], Sign]:
        return dict(self.valuation)


@dataclass(frozen=True)
class InjectionCheck:
    ok: bool
    failures: tuple[str, ...]


def _path_arrows(path: tuple[str, ...]) -> list[tuple[str, str]]:
    return list(zip(path, path[1:]))


def check_injection(target: BareDag, n: int, inj: Injection) -> InjectionCheck:
    """Verify the two embedding conditions: every ordered pair has a chosen
    target path, and the valuation gives every chosen path negative value,
    which preserves every triangle's contradiction."""
    failures: list[str] = []
    if n < 2:
        failures.append(f"truncation size must be >= 2, got {n}")
        return InjectionCheck(False, tuple(failures))
    mu = inj.mu_map()
    expected = [_ys_node(i) for i in range(n + 1)]
    if sorted(mu) != sorted(expected):
        failures.append(f"map must cover exactly x0..x{n}")
        return InjectionCheck(False, tuple(failures))
    if len(set(mu.values())) != len(mu):
        failures.append("map is not injective")
    for v in mu.values():
        if v not in set(target.nodes):
            failures.append(f"image node {v} is not in the target")
    if failures:
        return InjectionCheck(False, tuple(failures))

    paths = inj.path_map()
    valuation = inj.valuation_map()
    arrow_set = set(target.arrows)
    used_arrows: set[tuple[str, str]] = set()
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            key = (_ys_node(i), _ys_node(j))
            path = paths.get(key)
            if path is None:
                failures.append(f"no chosen path for ({key[0]}, {key[1]})")
                continue
            if path[0] != mu[key[0]] or path[-1] != mu[key[1]]:
                failures.append(f"chosen path for {key} has wrong endpoints")
                continue
            parity = 0
            broken = False
            for arrow in _path_arrows(path):
                if arrow not in arrow_set:
                    failures.append(f"chosen path for {key} uses missing arrow {arrow}")
                    broken = True
                    break
                if arrow not in valuation:
                    failures.append(f"arrow {arrow} on a chosen path has no sign")
                    broken = True
                    break
                used_arrows.add(arrow)
                parity ^= 1 if valuation[arrow] is Sign.NEGATIVE else 0
            if broken:
                continue
            if parity != 1:
                failures.append(
                    f"chosen path for {key} has positive value; contradiction not preserved"
                )
    extra = set(valuation) - used_arrows
    if not failures and extra:
        failures.append(f"valuation covers arrows off the chosen paths: {sorted(extra)}")
    return InjectionCheck(not failures, tuple(failures))


# --------------------------------------------------------------------------
# Search


@dataclass(frozen=True)
class SearchConfig:
    max_nodes_explored: int = 200_000
    path_length_cap: int = 16
    max_paths_per_pair: int = 512


class SearchOutcome(Enum):
    FOUND = "found"
    ABSENT = "absent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SearchResult:
    outcome: SearchOutcome
    injection: Injection | None
    explored: int


class _Budget(Exception):
    pass


class _Searcher:
    def __init__(self, target: BareDag, n: int, cfg: SearchConfig):
        self.target = target
        self.n = n
        self.cfg = cfg
        self.order = target.topo_order()
        self.reach = {v: target.reachable_from(v) for v in target.nodes}
        self.arrow_index = {a: k for k, a in enumerate(target.arrows)}
        self.parity = ParityConstraints()
        self.explored = 0
        self.truncated = False
        self._path_cache: dict[tuple[str, str], list[tuple[str, ...]]] = {}

    def _paths(self, src: str, dst: str) -> list[tuple[str, ...]]:
        key = (src, dst)
        if key not in self._path_cache:
            paths, complete = self.target.paths(
                src, dst, self.cfg.path_length_cap, self.cfg.max_paths_per_pair
            )
            if not complete:
                self.truncated = True
            self._path_cache[key] = paths
        return self._path_cache[key]

    def _tick(self) -> None:
        self.explored += 1
        if self.explored > self.cfg.max_nodes_explored:
            raise _Budget()

    def run(self) -> SearchResult:
        image: list[str] = []
        chosen: dict[tuple[str, str], tuple[str, ...]] = {}
        try:
            found = self._assign(0, image, chosen)
        except _Budget:
            return SearchResult(SearchOutcome.INCONCLUSIVE, None, self.explored)
        if found is None:
            if self.truncated:
                return SearchResult(SearchOutcome.INCONCLUSIVE, None, self.explored)
            return SearchResult(SearchOutcome.ABSENT, None, self.explored)
        return SearchResult(SearchOutcome.FOUND, found, self.explored)

    def _assign(self, k: int, image: list[str], chosen) -> Injection | None:
        if k == self.n + 1:
            return self._finish(image, chosen)
        for cand in self.order:
            if cand in image:
                continue
            if image and cand not in self.reach[image[-1]]:
                continue
            self._tick()
            image.append(cand)
            result = self._choose_paths(k, 0, image, chosen)
            image.pop()
            if result is not None:
                return result
        return None

    def _choose_paths(self, k: int, i: int, image: list[str], chosen) -> Injection | None:
        if i == k:
            return self._assign(k + 1, image, chosen)
        key = (_ys_node(i), _ys_node(k))
        for path in self._paths(image[i], image[k]):
            self._tick()
            variables = [self.arrow_index[a] for a in _path_arrows(path)]
            mark = self.parity.checkpoint()
            if self.parity.add(variables, 1):
                chosen[key] = path
                result = self._choose_paths(k, i + 1, image, chosen)
                if result is not None:
                    return result
                del chosen[key]
            self.parity.rollback(mark)
        return None

    def _finish(self, image: list[str], chosen) -> Injection:
        bits = self.parity.solve()
        used = sorted({a for path in chosen.values() for a in _path_arrows(path)})
        valuation = tuple(
            (a, Sign.NEGATIVE if bits.get(self.arrow_index[a], 0) else Sign.POSITIVE)
            for a in used
        )
        mu = tuple((_ys_node(i), image[i]) for i in range(self.n + 1))
        paths = tuple(sorted(chosen.items()))
        return Injection(mu, paths, valuation)


def find_injection(target: BareDag, n: int, cfg: SearchConfig | None = None) -> SearchResult:
    """Backtracking search for an embedding of the size-n truncation."""
    if n < 2:
        raise EmbeddingError(f"truncation size must be >= 2, got {n}")
    result = _Searcher(target, n, cfg or SearchConfig()).run()
    if result.outcome is SearchOutcome.FOUND:
        check = check_injection(target, n, result.injection)
        if not check.ok:  # pragma: no cover - internal consistency guard
            raise EmbeddingError(f"search produced an invalid injection: {check.failures}")
    return result


# --------------------------------------------------------------------------
# Extension of an interpretation to the whole target


def extend_interpretation(target: BareDag, inj: Injection) -> RefGraph:
    """Label every target node with a formula.

    Arrows on chosen paths keep their valuation sign and contribute signed
    literals; every other successor contributes the tautology conjunct
    (s | !s).  Sinks stay formula-free; the surrounding analysis assigns
    them true (or xi on the image frontier).
    """
    check = check_injection(target, inj.n, inj)
    if not check.ok:
        raise EmbeddingError(f"injection does not pass the checker: {check.failures}")
    valuation = inj.valuation_map()
    arrows = []
    formulas: dict[str, Formula] = {}
    for src, dst in target.arrows:
        arrows.append(Arrow(src, dst, valuation.get((src, dst), Sign.POSITIVE)))
    for node in target.nodes:
        succ = target.successors(node)
        if not succ:
            continue
        parts: list[Formula] = []
        for s in succ:
            if (node, s) in valuation:
                parts.append(lit(s, valuation[(node, s)]))
            else:
                parts.append(Or((Var(s), NegVar(s))))
        formulas[node] = conj(parts)
    return RefGraph(target.nodes, arrows, formulas)


@dataclass(frozen=True)
class ExtensionReport:
    node_values: dict[str, TruthValue3]
    image_all_xi: bool
    non_image_ok: bool
    image_complete: bool
    classical_c1: bool | None
    image_root_is_source: bool

    @property
    def ok(self) -> bool:
        return self.image_all_xi and self.non_image_ok


def verify_extension(g: RefGraph, inj: Injection, target: BareDag) -> ExtensionReport:
    """Three-valued check of an extended interpretation: pin the image
    frontier to xi and non-image sinks to true, then every image node must
    come out xi and every other node true-or-xi.

    When the image is arrow-complete (every chosen path is a single arrow)
    the classical status of the image root is checked as well.
    """
    mu = inj.mu_map()
    image = set(mu.values())
    frontier_node = mu[_ys_node(inj.n)]
    sink_values = {
        s: TruthValue3.T for s in g.sinks if s not in image
    }
    values = eval3_graph(g, sink_values, pinned={frontier_node: TruthValue3.XI})
    image_all_xi = all(values[v] is TruthValue3.XI for v in image)
    non_image_ok = all(
        values[v] in (TruthValue3.T, TruthValue3.XI)
        for v in g.nodes
        if v not in image
    )
    image_complete = all(len(p) == 2 for _, p in inj.paths)
    classical_c1 = None
    if image_complete:
        classical_c1 = check_status(g, mu[_ys_node(0)]).kind is StatusKind.C1_HOLDS
    root_image = mu[_ys_node(0)]
    return ExtensionReport(
        values,
        image_all_xi,
        non_image_ok,
        image_complete,
        classical_c1,
        not target.predecessors(root_image),
    )


# --------------------------------------------------------------------------
# Chains of tautology and contradiction links


class ChainLink(Enum):
    OR_TAUT = "or"  # v | !v
    AND_CONTRA = "and"  # v & !v


def tautology_chain_eval(links: Sequence[ChainLink], seed: TruthValue3) -> TruthValue3:
    """Fold a chain of (v | !v) and (v & !v) links from a seed value: a
    classical seed is decided by the last link's connective, xi survives."""
    if not links:
        raise EmbeddingError("chain must be nonempty")
    value = seed
    for link in links:
        if link is ChainLink.OR_TAUT:
            value = or3(value, not3(value))
        else:
            value = and3(value, not3(value))
    return value
