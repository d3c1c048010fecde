"""Shared independent oracles for the test suite.

These deliberately avoid the code paths they check: truth tables come from
direct AST evaluation over the full assignment cube, graph models from
enumeration of all full assignments, and embedding verdicts from exhaustive
enumeration of maps and sign vectors.
"""

from __future__ import annotations

import itertools

from refgraph import BareDag, Dnf, RefGraph, Sign, eval2, eval2_dnf
from refgraph.formula import Formula, vars_of


def truth_table_equal(f: Formula, d: Dnf) -> bool:
    names = sorted(vars_of(f) | d.vars())
    for bits in itertools.product((False, True), repeat=len(names)):
        assignment = dict(zip(names, bits))
        if eval2(f, assignment) != eval2_dnf(d, assignment):
            return False
    return True


def dnf_table_equal(a: Dnf, b: Dnf) -> bool:
    names = sorted(a.vars() | b.vars())
    for bits in itertools.product((False, True), repeat=len(names)):
        assignment = dict(zip(names, bits))
        if eval2_dnf(a, assignment) != eval2_dnf(b, assignment):
            return False
    return True


def brute_force_models(g: RefGraph, node: str, want: bool) -> set[tuple[bool, ...]]:
    """Sink assignments extendable to a full assignment satisfying every node
    equation with the queried node at ``want`` - checked over all full
    assignments, not by propagation."""
    sinks = tuple(sorted(g.sinks))
    names = list(g.nodes)
    out = set()
    for bits in itertools.product((False, True), repeat=len(names)):
        assignment = dict(zip(names, bits))
        ok = all(
            eval2(g.formula(n), assignment) == assignment[n]
            for n in names
            if g.formula(n) is not None
        )
        if ok and assignment[node] == want:
            out.add(tuple(assignment[s] for s in sinks))
    return out


def simple_paths_arrowless(dag: BareDag, src: str, dst: str) -> list[tuple[str, ...]]:
    out = []

    def walk(prefix: list[str]) -> None:
        at = prefix[-1]
        if at == dst and len(prefix) > 1:
            out.append(tuple(prefix))
            return
        for nxt in dag.successors(at):
            if nxt not in prefix:
                walk(prefix + [nxt])

    walk([src])
    return out


def exhaustive_injection_exists(dag: BareDag, n: int) -> bool:
    """Ground-truth embedding verdict: some injective, path-preserving map of
    x0..xn plus some global sign vector gives every pair an odd path."""
    arrows = list(dag.arrows)
    index = {a: k for k, a in enumerate(arrows)}
    # per ordered node pair, the arrow bitmasks of all simple paths
    masks: dict[tuple[str, str], list[int]] = {}
    for src in dag.nodes:
        for dst in dag.nodes:
            if src == dst:
                continue
            mask_list = []
            for path in simple_paths_arrowless(dag, src, dst):
                m = 0
                for a, b in zip(path, path[1:]):
                    m |= 1 << index[(a, b)]
                mask_list.append(m)
            if mask_list:
                masks[(src, dst)] = mask_list

    for image in itertools.permutations(dag.nodes, n + 1):
        pairs = list(itertools.combinations(range(n + 1), 2))
        if any((image[i], image[j]) not in masks for i, j in pairs):
            continue
        pair_masks = [masks[(image[i], image[j])] for i, j in pairs]
        for signs in range(1 << len(arrows)):
            if all(
                any(bin(signs & m).count("1") % 2 == 1 for m in option)
                for option in pair_masks
            ):
                return True
    return False
