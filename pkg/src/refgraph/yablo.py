"""Yablo truncations and the stepwise construction that grows them.

The builder alternates between making a head unfalsifiable-positive and
repairing the escape routes this opens for the negated head: preparing a
knee with a fresh sink, finishing the new triangle, and closing ancestors
onto the fresh sink.  The symbolic ledger records every node's sink
expression after each step, so the whole history is replayable and
checkable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .formula import (
    And,
    Dnf,
    Formula,
    NegVar,
    Sign,
    Var,
    conj,
    negate_dnf,
    simplify_dnf,
    to_dnf,
)
from .graph import (
    Arrow,
    Path,
    RefGraph,
    enumerate_paths,
    find_contradictory_cells,
    path_value,
)
from .semantics import node_model_expression


class BuildError(ValueError):
    pass


def _x(i: int) -> str:
    return f"x{i}"


def yablo_truncation(n: int) -> RefGraph:
    """Nodes x0..xn, negative arrows x_i -> x_j for all i < j, and
    x_i = AND of !x_j for i < j <= n; x_n is the sink."""
    if n < 2:
        raise BuildError(f"truncation needs n >= 2, got {n}")
    nodes = [_x(i) for i in range(n + 1)]
    arrows = [
        Arrow(_x(i), _x(j), Sign.NEGATIVE)
        for i in range(n + 1)
        for j in range(i + 1, n + 1)
    ]
    formulas = {
        _x(i): conj([NegVar(_x(j)) for j in range(i + 1, n + 1)]) for i in range(n)
    }
    return RefGraph(nodes, arrows, formulas)


# --------------------------------------------------------------------------
# Build steps


@dataclass(frozen=True)
class SeedTriangle:
    pass


@dataclass(frozen=True)
class PrepareC2:
    at: str
    new_sink: str


@dataclass(frozen=True)
class FinishC2:
    at: str


@dataclass(frozen=True)
class CloseC1:
    src: str
    dst: str


BuildStep = Union[SeedTriangle, PrepareC2, FinishC2, CloseC1]


@dataclass
class BuildState:
    graph: RefGraph
    ledger: list[tuple[BuildStep, dict[str, Dnf]]] = field(default_factory=list)
    pending_sink: str | None = None


def _conjunct_literals(f: Formula) -> list[Formula]:
    items = list(f.items) if isinstance(f, And) else [f]
    if not all(isinstance(g, NegVar) or isinstance(g, Var) for g in items):
        raise BuildError("node formula is not a literal conjunction")
    return items


def _extend_conjunction(g: RefGraph, node: str, dst: str) -> RefGraph:
    """Add the conjunct !dst (and the matching negative arrow) to a node."""
    literals = _conjunct_literals(g.formula(node))
    formulas = g.formulas
    formulas[node] = conj(literals + [NegVar(dst)])
    arrows = list(g.arrows) + [Arrow(node, dst, Sign.NEGATIVE)]
    return RefGraph(set(g.nodes) | {dst}, arrows, formulas)


def apply_step(state: BuildState, step: BuildStep) -> BuildState:
    g = state.graph
    if isinstance(step, SeedTriangle):
        if g.nodes:
            raise BuildError("seed step requires an empty graph")
        graph = yablo_truncation(2)
        return BuildState(graph, state.ledger, None)
    if isinstance(step, PrepareC2):
        if state.pending_sink is not None:
            raise BuildError(f"prepared sink {state.pending_sink} is not finished yet")
        if not g.has_node(step.at) or g.is_sink(step.at):
            raise BuildError(f"prepare step needs an existing non-sink at {step.at}")
        if g.has_node(step.new_sink):
            raise BuildError(f"new sink {step.new_sink} already exists")
        graph = _extend_conjunction(g, step.at, step.new_sink)
        return BuildState(graph, state.ledger, step.new_sink)
    if isinstance(step, FinishC2):
        if state.pending_sink is None:
            raise BuildError("finish step without a prepared sink")
        if not g.has_node(step.at) or not g.is_sink(step.at):
            raise BuildError(f"finish step needs a sink node at {step.at}")
        if step.at == state.pending_sink:
            raise BuildError("finish step cannot target the prepared sink itself")
        formulas = g.formulas
        formulas[step.at] = NegVar(state.pending_sink)
        arrows = list(g.arrows) + [Arrow(step.at, state.pending_sink, Sign.NEGATIVE)]
        graph = RefGraph(g.nodes, arrows, formulas)
        return BuildState(graph, state.ledger, None)
    if isinstance(step, CloseC1):
        if state.pending_sink is not None:
            raise BuildError(f"prepared sink {state.pending_sink} is not finished yet")
        if not g.has_node(step.src) or g.is_sink(step.src):
            raise BuildError(f"close step needs an existing non-sink at {step.src}")
        if not g.has_node(step.dst):
            raise BuildError(f"close target {step.dst} does not exist")
        if g.has_arrow(step.src, step.dst):
            raise BuildError(f"arrow {step.src} -> {step.dst} already present")
        if enumerate_paths(g, step.dst, step.src, max_len=len(g.nodes)):
            raise BuildError(f"closing {step.src} -> {step.dst} would create a cycle")
        graph = _extend_conjunction(g, step.src, step.dst)
        return BuildState(graph, state.ledger, None)
    raise BuildError(f"unknown step {step!r}")


def inductive_build(steps: Sequence[BuildStep]) -> BuildState:
    """Replay a step sequence, recording every node's sink expression after
    each step."""
    state = BuildState(RefGraph((), (), {}))
    for step in steps:
        state = apply_step(state, step)
        snapshot = {n: node_model_expression(state.graph, n) for n in state.graph.nodes}
        state.ledger.append((step, snapshot))
    return state


def canonical_script(depth: int) -> list[BuildStep]:
    """Step sequence growing the seed triangle into the truncation of size
    depth + 2: each round prepares a knee with a fresh sink, finishes the new
    triangle, and closes every older head onto the fresh sink."""
    if depth < 1:
        raise BuildError(f"depth must be >= 1, got {depth}")
    steps: list[BuildStep] = [SeedTriangle()]
    for m in range(3, depth + 3):
        steps.append(PrepareC2(_x(m - 2), _x(m)))
        steps.append(FinishC2(_x(m - 1)))
        for i in range(m - 3, -1, -1):
            steps.append(CloseC1(_x(i), _x(m)))
    return steps


# --------------------------------------------------------------------------
# Diagnostics


@dataclass(frozen=True)
class PairRichness:
    positive_paths: int
    negative_paths: int

    @property
    def unique_path(self) -> bool:
        return self.positive_paths + self.negative_paths == 1

    @property
    def lacks_negative(self) -> bool:
        return self.negative_paths == 0


def richness_check(g: RefGraph, max_len: int = 32) -> dict[tuple[str, str], PairRichness]:
    """Path polarity counts for every connected ordered pair.  A pair with a
    unique path can never host a contradictory cell; a pair without a
    negative path cannot flip a truth value."""
    out: dict[tuple[str, str], PairRichness] = {}
    for src in g.nodes:
        for dst in g.nodes:
            if src == dst:
                continue
            paths = enumerate_paths(g, src, dst, max_len)
            if not paths:
                continue
            pos = sum(1 for p in paths if path_value(p) is Sign.POSITIVE)
            out[(src, dst)] = PairRichness(pos, len(paths) - pos)
    return out


@dataclass(frozen=True)
class Obligation:
    target: str
    polarity: str  # "pos" | "neg"
    reason: str


def dnf_head_obligations(head: Dnf) -> tuple[tuple[tuple[str, ...], ...], tuple[tuple[str, ...], ...]]:
    """Contradiction obligations imposed by a DNF head.

    For the positive head every disjunct must be made contradictory as a
    whole, so each disjunct's variable set is one group.  For the negated
    head every choice-function component of the complement must be
    falsified; the groups are the inclusion-minimal variable sets hitting
    every component.
    """
    c1 = tuple(tuple(sorted({n for n, _ in c})) for c in head.disjuncts)
    components = [
        frozenset(n for n, _ in c) for c in negate_dnf(head).disjuncts
    ]
    components = sorted(set(components), key=sorted)
    universe = sorted(set().union(*components)) if components else []
    if len(universe) > 16:
        raise BuildError(f"obligation search over {len(universe)} variables is out of desk scale")
    minimal: list[frozenset[str]] = []
    for size in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            group = frozenset(combo)
            if any(found <= group for found in minimal):
                continue
            if all(group & comp for comp in components):
                minimal.append(group)
    c2 = tuple(sorted(tuple(sorted(group)) for group in minimal))
    return c1, c2


def head_obligation_records(head: Dnf) -> tuple[Obligation, ...]:
    c1, c2 = dnf_head_obligations(head)
    records = []
    for k, group in enumerate(c1):
        for target in group:
            records.append(Obligation(target, "pos", f"disjunct {k} must fail together"))
    for k, group in enumerate(c2):
        for target in group:
            records.append(Obligation(target, "neg", f"alternative group {k} kills the complement"))
    return tuple(records)


# --------------------------------------------------------------------------
# Composition audit


class CellLabel(Enum):
    SAFE = "Safe"
    ESCAPE_HAZARD = "EscapeHazard"


@dataclass(frozen=True)
class BlockedAt:
    path_index: int
    node: str


@dataclass(frozen=True)
class CellAudit:
    meet: str
    sigma: tuple[str, ...]
    sigma_prime: tuple[str, ...]
    label: CellLabel
    blocks: tuple[BlockedAt, ...]


def _walk_blocks(g: RefGraph, path: Path, meet: str) -> str | None:
    """First intermediate node the falsified-root walk enters positively whose
    own equation forces the meeting point false (or cannot hold at all).

    Walking under a false root, the entered value alternates with arrow
    signs; a node entered positively must hold outright, and if its formula
    entails the negation of the meeting point, the path cannot deliver the
    meeting point as a live positive possibility: it is blocked there.
    """
    nodes = path.node_sequence()
    entered_true = False
    negatives = 0
    for idx in range(1, len(nodes) - 1):
        negatives += 1 if path.arrows[idx - 1].sign is Sign.NEGATIVE else 0
        entered_true = negatives % 2 == 1
        if not entered_true:
            continue
        f = g.formula(nodes[idx])
        if f is None:
            continue
        d = simplify_dnf(to_dnf(f))
        if d.is_false or all((meet, Sign.NEGATIVE) in c for c in d.disjuncts):
            return nodes[idx]
    return None


def composition_audit(g: RefGraph, root: str, max_len: int = 32) -> tuple[CellAudit, ...]:
    """Label every contradictory cell reachable from the root.

    Under a false root, a cell is safe to graft onto when at least one of
    its paths is blocked before the meeting point, so the meeting point is
    only ever entered at one polarity.  When both paths stay unblocked the
    meeting point behaves like the target of a positive arrow: both
    polarities stay available and grafting opens an escape.
    """
    g._require(root)
    audits = []
    for meet in g.topo_order():
        if meet == root:
            continue
        for cell in find_contradictory_cells(g, root, meet, max_len):
            blocks = []
            for k, path in enumerate((cell.sigma, cell.sigma_prime)):
                node = _walk_blocks(g, path, meet)
                if node is not None:
                    blocks.append(BlockedAt(k, node))
            label = CellLabel.SAFE if blocks else CellLabel.ESCAPE_HAZARD
            audits.append(
                CellAudit(
                    meet,
                    cell.sigma.node_sequence(),
                    cell.sigma_prime.node_sequence(),
                    label,
                    tuple(blocks),
                )
            )
    return tuple(audits)
