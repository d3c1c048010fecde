"""Propositional formulas in negation normal form, DNF algebra, and the
three-valued truth lattice F < xi < T.

The third value ``xi`` marks a node for which neither the node nor its
negation is consistent.  It is a fixed point of negation and sits strictly
between F and T, so conjunction and disjunction are infimum and supremum in
the lattice order.

Formulas keep negation on variables only; general negation is a derived
constructor that pushes through conjunction and disjunction.  ``FrontierXi``
leaves stand for appended constructions of value xi and are only legal in
standalone formulas, never inside a reference graph.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Sequence, Union


class FormulaError(ValueError):
    pass


class DnfSizeError(ValueError):
    """Raised when a DNF operation would exceed the materialization cap."""


#: Product-size cap for choice-function negation and conjunction products.
DNF_SIZE_CAP = 1_000_000


class TruthValue3(IntEnum):
    """Three truth values, totally ordered F < XI < T."""

    F = 0
    XI = 1
    T = 2

    @classmethod
    def from_bool(cls, value: bool) -> "TruthValue3":
        return cls.T if value else cls.F

    def __str__(self) -> str:
        return {0: "F", 1: "xi", 2: "T"}[int(self)]


def and3(a: TruthValue3, b: TruthValue3) -> TruthValue3:
    """Infimum in the order F < xi < T."""
    return TruthValue3(min(a, b))


def or3(a: TruthValue3, b: TruthValue3) -> TruthValue3:
    """Supremum in the order F < xi < T."""
    return TruthValue3(max(a, b))


def not3(a: TruthValue3) -> TruthValue3:
    """Swap T and F; xi is a fixed point."""
    return TruthValue3(2 - a)


class Sign(Enum):
    """Polarity of an arrow or a literal."""

    POSITIVE = "pos"
    NEGATIVE = "neg"

    def flip(self) -> "Sign":
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE

    def __repr__(self) -> str:
        return f"Sign.{self.name}"


# --------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NegVar:
    name: str


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise FormulaError("empty conjunction")


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise FormulaError("empty disjunction")


@dataclass(frozen=True)
class ConstTrue:
    pass


@dataclass(frozen=True)
class ConstFalse:
    pass


@dataclass(frozen=True)
class FrontierXi:
    """Leaf standing for an appended xi-valued construction."""

    tag: str
    negated: bool = False


Formula = Union[Var, NegVar, And, Or, ConstTrue, ConstFalse, FrontierXi]


def conj(items: Sequence[Formula]) -> Formula:
    """Conjunction; a single item is left unwrapped."""
    items = tuple(items)
    if not items:
        raise FormulaError("empty conjunction")
    return items[0] if len(items) == 1 else And(items)


def disj(items: Sequence[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        raise FormulaError("empty disjunction")
    return items[0] if len(items) == 1 else Or(items)


def lit(name: str, sign: Sign) -> Formula:
    return Var(name) if sign is Sign.POSITIVE else NegVar(name)


def negate(f: Formula) -> Formula:
    """Negation pushed to the leaves (De Morgan)."""
    if isinstance(f, Var):
        return NegVar(f.name)
    if isinstance(f, NegVar):
        return Var(f.name)
    if isinstance(f, And):
        return Or(tuple(negate(g) for g in f.items))
    if isinstance(f, Or):
        return And(tuple(negate(g) for g in f.items))
    if isinstance(f, ConstTrue):
        return ConstFalse()
    if isinstance(f, ConstFalse):
        return ConstTrue()
    if isinstance(f, FrontierXi):
        return FrontierXi(f.tag, not f.negated)
    raise FormulaError(f"not a formula: {f!r}")


def vars_of(f: Formula) -> frozenset[str]:
    """Names of the plain propositional variables (frontier tags excluded)."""
    if isinstance(f, (Var, NegVar)):
        return frozenset((f.name,))
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for g in f.items:
            out |= vars_of(g)
        return out
    return frozenset()


def frontier_tags_of(f: Formula) -> frozenset[str]:
    if isinstance(f, FrontierXi):
        return frozenset((f.tag,))
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for g in f.items:
            out |= frontier_tags_of(g)
        return out
    return frozenset()


def subst_vars(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace variables by formulas; a negative literal negates the image."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, NegVar):
        return negate(mapping[f.name]) if f.name in mapping else f
    if isinstance(f, And):
        return And(tuple(subst_vars(g, mapping) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(subst_vars(g, mapping) for g in f.items))
    return f


def subst_frontier(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace frontier leaves by formulas; negated leaves negate the image."""
    if isinstance(f, FrontierXi) and f.tag in mapping:
        g = mapping[f.tag]
        return negate(g) if f.negated else g
    if isinstance(f, And):
        return And(tuple(subst_frontier(g, mapping) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(subst_frontier(g, mapping) for g in f.items))
    return f


def eval2(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Classical evaluation.  Frontier leaves and unassigned variables are errors."""
    if isinstance(f, Var):
        if f.name not in assignment:
            raise FormulaError(f"unassigned variable: {f.name}")
        return assignment[f.name]
    if isinstance(f, NegVar):
        if f.name not in assignment:
            raise FormulaError(f"unassigned variable: {f.name}")
        return not assignment[f.name]
    if isinstance(f, And):
        return all(eval2(g, assignment) for g in f.items)
    if isinstance(f, Or):
        return any(eval2(g, assignment) for g in f.items)
    if isinstance(f, ConstTrue):
        return True
    if isinstance(f, ConstFalse):
        return False
    if isinstance(f, FrontierXi):
        raise FormulaError("frontier leaf in classical evaluation")
    raise FormulaError(f"not a formula: {f!r}")


def eval3(
    f: Formula,
    assignment: Mapping[str, TruthValue3],
    frontier: Mapping[str, TruthValue3] | None = None,
) -> TruthValue3:
    """Three-valued evaluation over the lattice F < xi < T."""
    frontier = frontier or {}
    if isinstance(f, Var):
        if f.name not in assignment:
            raise FormulaError(f"unassigned variable: {f.name}")
        return assignment[f.name]
    if isinstance(f, NegVar):
        if f.name not in assignment:
            raise FormulaError(f"unassigned variable: {f.name}")
        return not3(assignment[f.name])
    if isinstance(f, And):
        out = TruthValue3.T
        for g in f.items:
            out = and3(out, eval3(g, assignment, frontier))
        return out
    if isinstance(f, Or):
        out = TruthValue3.F
        for g in f.items:
            out = or3(out, eval3(g, assignment, frontier))
        return out
    if isinstance(f, ConstTrue):
        return TruthValue3.T
    if isinstance(f, ConstFalse):
        return TruthValue3.F
    if isinstance(f, FrontierXi):
        if f.tag not in frontier:
            raise FormulaError(f"unassigned frontier tag: {f.tag}")
        value = frontier[f.tag]
        return not3(value) if f.negated else value
    raise FormulaError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# Disjunctive normal form

Literal = tuple[str, Sign]


def _literal_key(literal: Literal) -> tuple[str, int]:
    name, sign = literal
    return (name, 0 if sign is Sign.POSITIVE else 1)


@dataclass(frozen=True)
class Dnf:
    """Canonical DNF: sorted conjuncts of sorted, duplicate-free literals.

    The empty disjunction encodes falsity; a single empty conjunct encodes
    truth.  Complementary literal pairs are kept until ``simplify_dnf``.
    """

    disjuncts: tuple[tuple[Literal, ...], ...]

    @classmethod
    def make(cls, disjuncts: Iterable[Iterable[Literal]]) -> "Dnf":
        normalized = set()
        for conjunct in disjuncts:
            normalized.add(tuple(sorted(set(conjunct), key=_literal_key)))
        return cls(tuple(sorted(normalized, key=lambda c: tuple(map(_literal_key, c)))))

    @classmethod
    def false(cls) -> "Dnf":
        return cls(())

    @classmethod
    def true(cls) -> "Dnf":
        return cls(((),))

    @classmethod
    def literal(cls, name: str, sign: Sign = Sign.POSITIVE) -> "Dnf":
        return cls((((name, sign),),))

    @property
    def is_false(self) -> bool:
        return not self.disjuncts

    def vars(self) -> frozenset[str]:
        return frozenset(name for c in self.disjuncts for name, _ in c)


def and_dnf(a: Dnf, b: Dnf) -> Dnf:
    if len(a.disjuncts) * len(b.disjuncts) > DNF_SIZE_CAP:
        raise DnfSizeError(
            f"conjunction product {len(a.disjuncts)}x{len(b.disjuncts)} exceeds cap {DNF_SIZE_CAP}"
        )
    return Dnf.make(ca + cb for ca in a.disjuncts for cb in b.disjuncts)


def or_dnf(a: Dnf, b: Dnf) -> Dnf:
    return Dnf.make(a.disjuncts + b.disjuncts)


def to_dnf(f: Formula) -> Dnf:
    """Convert to canonical DNF.  Frontier leaves become opaque literals
    keyed by their tag."""
    if isinstance(f, Var):
        return Dnf.literal(f.name, Sign.POSITIVE)
    if isinstance(f, NegVar):
        return Dnf.literal(f.name, Sign.NEGATIVE)
    if isinstance(f, FrontierXi):
        return Dnf.literal(f.tag, Sign.NEGATIVE if f.negated else Sign.POSITIVE)
    if isinstance(f, ConstTrue):
        return Dnf.true()
    if isinstance(f, ConstFalse):
        return Dnf.false()
    if isinstance(f, And):
        out = Dnf.true()
        for g in f.items:
            out = and_dnf(out, to_dnf(g))
        return out
    if isinstance(f, Or):
        out = Dnf.false()
        for g in f.items:
            out = or_dnf(out, to_dnf(g))
        return out
    raise FormulaError(f"not a formula: {f!r}")


def negate_dnf(d: Dnf) -> Dnf:
    """Complement via choice functions: pick one literal from every conjunct,
    negate the picks, and disjoin over all picks."""
    if not d.disjuncts:
        return Dnf.true()
    size = math.prod(len(c) for c in d.disjuncts)
    if size > DNF_SIZE_CAP:
        raise DnfSizeError(f"negation would materialize {size} choice functions (cap {DNF_SIZE_CAP})")
    out = []
    for picks in itertools.product(*d.disjuncts):
        out.append(tuple((name, sign.flip()) for name, sign in picks))
    return Dnf.make(out)


def _has_complementary_pair(conjunct: tuple[Literal, ...]) -> bool:
    seen = {}
    for name, sign in conjunct:
        if name in seen and seen[name] is not sign:
            return True
        seen[name] = sign
    return False


def simplify_dnf(d: Dnf) -> Dnf:
    """Drop contradictory conjuncts, then subsumed ones."""
    kept = [c for c in d.disjuncts if not _has_complementary_pair(c)]
    sets = [frozenset(c) for c in kept]
    surviving = []
    for i, c in enumerate(kept):
        subsumed = any(
            j != i and sets[j] <= sets[i] and (sets[j] < sets[i] or j < i)
            for j in range(len(kept))
        )
        if not subsumed:
            surviving.append(c)
    return Dnf.make(surviving)


def eval2_dnf(d: Dnf, assignment: Mapping[str, bool]) -> bool:
    def lit_true(name: str, sign: Sign) -> bool:
        value = assignment[name]
        return value if sign is Sign.POSITIVE else not value

    return any(all(lit_true(n, s) for n, s in c) for c in d.disjuncts)


def is_tautology_dnf(d: Dnf) -> bool:
    """Complement-emptiness test: the complement simplifies to falsity."""
    return simplify_dnf(negate_dnf(d)).is_false


def dnf_to_formula(d: Dnf, frontier_tags: frozenset[str] = frozenset()) -> Formula:
    """Rebuild a formula; literals over ``frontier_tags`` become frontier leaves."""
    if d.is_false:
        return ConstFalse()
    if d.disjuncts == ((),):
        return ConstTrue()

    def to_lit(name: str, sign: Sign) -> Formula:
        if name in frontier_tags:
            return FrontierXi(name, sign is Sign.NEGATIVE)
        return lit(name, sign)

    parts = []
    for c in d.disjuncts:
        if not c:
            return ConstTrue()
        parts.append(conj([to_lit(n, s) for n, s in c]))
    return disj(parts)


def literal_str(literal: Literal) -> str:
    name, sign = literal
    return name if sign is Sign.POSITIVE else f"!{name}"


def dnf_str(d: Dnf) -> str:
    if d.is_false:
        return "FALSE"
    if d.disjuncts == ((),):
        return "TRUE"
    return " | ".join(" & ".join(literal_str(l) for l in c) if c else "TRUE" for c in d.disjuncts)
