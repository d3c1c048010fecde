"""Model-theoretic engine over reference graphs.

A model assigns a boolean to every node so that each non-sink satisfies its
equation; sinks are free.  Models are therefore in bijection with sink
assignments, and enumeration walks the sink hypercube in lexicographic order
(False before True, sinks sorted by name) for reproducible output.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .formula import (
    And,
    ConstFalse,
    ConstTrue,
    Dnf,
    Formula,
    NegVar,
    Or,
    Sign,
    TruthValue3,
    Var,
    and_dnf,
    eval2,
    eval3,
    is_tautology_dnf,
    negate_dnf,
    or_dnf,
    simplify_dnf,
)
from .graph import GraphError, RefGraph

SINK_LIMIT_DEFAULT = 24


class SinkLimitError(GraphError):
    pass


@dataclass(frozen=True)
class ModelSet:
    """Sink assignments (as tuples aligned with ``sinks``) satisfying a query."""

    sinks: tuple[str, ...]
    members: tuple[tuple[bool, ...], ...]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_universe(self) -> bool:
        return len(self.members) == 2 ** len(self.sinks)

    def assignments(self) -> list[dict[str, bool]]:
        return [dict(zip(self.sinks, m)) for m in self.members]


def propagate(g: RefGraph, sink_assignment: Mapping[str, bool]) -> dict[str, bool]:
    """Extend a sink assignment to the unique satisfying full assignment."""
    values: dict[str, bool] = {}
    for n in reversed(g.topo_order()):
        f = g.formula(n)
        if f is None:
            if n not in sink_assignment:
                raise GraphError(f"missing sink value for {n}")
            values[n] = sink_assignment[n]
        else:
            values[n] = eval2(f, values)
    return values


def _sink_space(g: RefGraph, limit: int | None):
    sinks = tuple(sorted(g.sinks))
    cap = SINK_LIMIT_DEFAULT if limit is None else limit
    if len(sinks) > cap:
        raise SinkLimitError(
            f"{len(sinks)} sinks exceed the enumeration limit of {cap}"
        )
    return sinks


def _model_split(
    g: RefGraph, node: str, limit: int | None = None, jobs: int = 1
) -> tuple[ModelSet, ModelSet]:
    """One enumeration pass, split by the node's value."""
    g._require(node)
    sinks = _sink_space(g, limit)
    space = list(itertools.product((False, True), repeat=len(sinks)))

    def scan(chunk):
        pos, neg = [], []
        for member in chunk:
            values = propagate(g, dict(zip(sinks, member)))
            (pos if values[node] else neg).append(member)
        return pos, neg

    if jobs > 1 and len(space) > 1:
        step = (len(space) + jobs - 1) // jobs
        chunks = [space[i : i + step] for i in range(0, len(space), step)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(scan, chunks))
        pos = [m for p, _ in parts for m in p]
        neg = [m for _, n in parts for m in n]
    else:
        pos, neg = scan(space)
    return ModelSet(sinks, tuple(pos)), ModelSet(sinks, tuple(neg))


def models_of(
    g: RefGraph,
    node: str,
    polarity: str = "pos",
    limit: int | None = None,
    jobs: int = 1,
) -> ModelSet:
    """Sink assignments under which ``node`` is true ("pos") or false ("neg")."""
    if polarity not in ("pos", "neg"):
        raise ValueError(f"polarity must be 'pos' or 'neg', got {polarity!r}")
    pos, neg = _model_split(g, node, limit, jobs)
    return pos if polarity == "pos" else neg


def node_model_expression(g: RefGraph, node: str) -> Dnf:
    """Simplified DNF over sink literals equivalent to the node's model set.

    The empty DNF encodes the empty model set; a tautology encodes the whole
    universe of sink assignments.
    """
    g._require(node)
    cache: dict[str, Dnf] = {}

    def expr(n: str) -> Dnf:
        if n in cache:
            return cache[n]
        f = g.formula(n)
        if f is None:
            d = Dnf.literal(n, Sign.POSITIVE)
        else:
            d = simplify_dnf(convert(f))
        cache[n] = d
        return d

    def convert(f: Formula) -> Dnf:
        if isinstance(f, Var):
            return expr(f.name)
        if isinstance(f, NegVar):
            return negate_dnf(expr(f.name))
        if isinstance(f, And):
            out = Dnf.true()
            for part in f.items:
                out = simplify_dnf(and_dnf(out, convert(part)))
            return out
        if isinstance(f, Or):
            out = Dnf.false()
            for part in f.items:
                out = or_dnf(out, convert(part))
            return out
        if isinstance(f, ConstTrue):
            return Dnf.true()
        if isinstance(f, ConstFalse):
            return Dnf.false()
        raise GraphError(f"unsupported formula element in graph: {f!r}")

    return expr(node)


class StatusKind(Enum):
    C1_HOLDS = "C1Holds"  # the node cannot be true
    C2_HOLDS = "C2Holds"  # the node cannot be false
    OPEN = "Open"


@dataclass(frozen=True)
class NodeStatus:
    kind: StatusKind
    pos_witness: dict[str, bool] | None
    neg_witness: dict[str, bool] | None


def check_status(g: RefGraph, node: str, limit: int | None = None) -> NodeStatus:
    pos, neg = _model_split(g, node, limit)
    if pos.is_empty:
        kind = StatusKind.C1_HOLDS
    elif neg.is_empty:
        kind = StatusKind.C2_HOLDS
    else:
        kind = StatusKind.OPEN
    pick = lambda ms: dict(zip(ms.sinks, ms.members[0])) if ms.members else None
    return NodeStatus(kind, pick(pos), pick(neg))


@dataclass(frozen=True)
class EscapeWitness:
    """A model of the negated node, with the per-node trace of which conjunct
    fails at every false conjunction reachable from the node."""

    assignment: dict[str, bool]
    trace: tuple[tuple[str, Formula], ...]

    def __iter__(self):
        return iter((self.assignment, self.trace))


def _reachable(g: RefGraph, node: str) -> set[str]:
    seen = {node}
    stack = [node]
    while stack:
        for nxt in g.successors(stack.pop()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def escape_search(g: RefGraph, node: str, limit: int | None = None) -> EscapeWitness | None:
    """First sink assignment (in enumeration order) falsifying the node,
    or None when the negated node is contradictory."""
    neg = models_of(g, node, "neg", limit)
    if neg.is_empty:
        return None
    witness = dict(zip(neg.sinks, neg.members[0]))
    values = propagate(g, witness)
    region = _reachable(g, node)
    trace = []
    for n in g.topo_order():
        if n not in region or values[n]:
            continue
        f = g.formula(n)
        if f is None or isinstance(f, Or):
            continue
        conjuncts = f.items if isinstance(f, And) else (f,)
        for c in conjuncts:
            if not eval2(c, values):
                trace.append((n, c))
                break
    return EscapeWitness(witness, tuple(trace))


def partition_check(g: RefGraph, node: str, limit: int | None = None) -> bool:
    """The node's positive and negative model sets partition the universe."""
    pos, neg = _model_split(g, node, limit)
    p, n = set(pos.members), set(neg.members)
    return not (p & n) and len(p | n) == 2 ** len(pos.sinks)


def eval3_graph(
    g: RefGraph,
    sink_values: Mapping[str, TruthValue3],
    pinned: Mapping[str, TruthValue3] | None = None,
) -> dict[str, TruthValue3]:
    """Bottom-up three-valued propagation from sink values.

    ``pinned`` overrides the computed value of interior nodes, cutting
    evaluation there (used when a node stands for an appended construction).
    """
    pinned = pinned or {}
    values: dict[str, TruthValue3] = {}
    for n in reversed(g.topo_order()):
        if n in pinned:
            values[n] = pinned[n]
            continue
        f = g.formula(n)
        if f is None:
            if n not in sink_values:
                raise GraphError(f"missing sink value for {n}")
            values[n] = sink_values[n]
        else:
            values[n] = eval3(f, values)
    return values


class UnaryKind(Enum):
    IDENTITY = "Identity"
    NEGATION = "Negation"
    CONST_FALSE = "ConstFalse"
    CONST_TRUE = "ConstTrue"


def two_terminal_classify(g: RefGraph, in_node: str, out_sink: str) -> UnaryKind:
    """Classify the boolean function a single-sink graph induces from its sink
    to ``in_node``: there are just four possibilities."""
    g._require(in_node)
    if tuple(sorted(g.sinks)) != (out_sink,):
        raise GraphError(
            f"two-terminal classification needs {out_sink} as the unique sink, "
            f"got sinks {list(g.sinks)}"
        )
    on_true = propagate(g, {out_sink: True})[in_node]
    on_false = propagate(g, {out_sink: False})[in_node]
    if on_true and not on_false:
        return UnaryKind.IDENTITY
    if not on_true and on_false:
        return UnaryKind.NEGATION
    if on_true:
        return UnaryKind.CONST_TRUE
    return UnaryKind.CONST_FALSE


def expression_kind(d: Dnf) -> str:
    """Classify a sink expression as empty, universe, or proper."""
    if simplify_dnf(d).is_false:
        return "empty"
    if is_tautology_dnf(d):
        return "universe"
    return "proper"
