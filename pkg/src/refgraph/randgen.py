"""Seeded random instances for property tests and demo runs."""

from __future__ import annotations

import random

from .embedding import BareDag
from .formula import And, Dnf, Formula, NegVar, Or, Sign, Var, conj, disj, lit
from .graph import Arrow, RefGraph


def random_ref_graph(
    rng: random.Random,
    max_nodes: int = 8,
    arrow_prob: float = 0.45,
    max_sinks: int = 10,
) -> RefGraph:
    """Random acyclic reference graph; literal polarity always matches the
    arrow sign, with the successors combined by a random and/or shape."""
    n = rng.randint(2, max_nodes)
    names = [f"n{i}" for i in range(n)]
    arrows = []
    succ: dict[str, list[tuple[str, Sign]]] = {m: [] for m in names}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < arrow_prob:
                sign = Sign.NEGATIVE if rng.random() < 0.6 else Sign.POSITIVE
                arrows.append(Arrow(names[i], names[j], sign))
                succ[names[i]].append((names[j], sign))
    formulas: dict[str, Formula] = {}
    for m in names:
        if succ[m]:
            formulas[m] = _random_shape(rng, succ[m])
    g = RefGraph(names, arrows, formulas)
    if len(g.sinks) > max_sinks:
        return random_ref_graph(rng, max_nodes, arrow_prob, max_sinks)
    return g


def _random_shape(rng: random.Random, literals: list[tuple[str, Sign]]) -> Formula:
    parts = [lit(name, sign) for name, sign in literals]
    if len(parts) == 1:
        return parts[0]
    if rng.random() < 0.6:
        return And(tuple(parts))
    # random two-level and-of-or shape over a partition of the successors
    rng.shuffle(parts)
    cut = rng.randint(1, len(parts) - 1) if len(parts) > 1 else 1
    left, right = parts[:cut], parts[cut:]
    if rng.random() < 0.5:
        return conj([disj(left) if len(left) > 1 else left[0], *right])
    return Or((conj(left), conj(right)))


def random_dnf(rng: random.Random, max_vars: int = 6, max_disjuncts: int = 5) -> Dnf:
    names = [f"v{i}" for i in range(rng.randint(1, max_vars))]
    disjuncts = []
    for _ in range(rng.randint(1, max_disjuncts)):
        size = rng.randint(1, len(names))
        chosen = rng.sample(names, size)
        disjuncts.append(
            [(m, Sign.NEGATIVE if rng.random() < 0.5 else Sign.POSITIVE) for m in chosen]
        )
    return Dnf.make(disjuncts)


def random_bare_dag(rng: random.Random, max_nodes: int = 8, arrow_prob: float = 0.45) -> BareDag:
    n = rng.randint(3, max_nodes)
    names = [f"t{i}" for i in range(n)]
    arrows = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < arrow_prob
    ]
    return BareDag.make(names, arrows)
