"""Elementary contradiction cells.

The basic triangle is x -!-> y -!-> z, x -!-> z with x = !y & !z and y = !z:
head x, knee y, foot z.  The taxonomy varies what is appended at the knee and
the foot: the foot value z may be T, F, or xi, and the knee formula combines
!z with T, F, or a xi-valued continuation through AND or OR.  That gives 18
variants, screened by three conditions:

  c221  the positive head is contradictory,
  c222  the negated head is not tautologous (y | z != T three-valued),
  c224  the head takes the third value xi.

Frontier leaves (tags ``y_xi``, ``z_xi``, ``yp_xi``) stand for appended
xi-valued constructions and stay symbolic in resolved forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .formula import (
    And,
    ConstFalse,
    ConstTrue,
    Dnf,
    Formula,
    FrontierXi,
    NegVar,
    Or,
    Sign,
    TruthValue3,
    Var,
    _has_complementary_pair,
    and3,
    dnf_to_formula,
    eval2,
    eval3,
    negate,
    not3,
    or3,
    to_dnf,
)
from .graph import Arrow, GraphError, RefGraph
from .semantics import escape_search, expression_kind, node_model_expression

Y_TAG = "y_xi"
YP_TAG = "yp_xi"
Z_TAG = "z_xi"
FRONTIER_TAGS = frozenset((Y_TAG, YP_TAG, Z_TAG))


@dataclass(frozen=True)
class CellVariant:
    """Foot case 1..3 (z = T, F, xi) and knee case 1..6
    (y = !z&T, !z&F, !z&y_xi, !z|T, !z|F, !z|y_xi)."""

    z_case: int
    y_case: int

    def __post_init__(self) -> None:
        if self.z_case not in (1, 2, 3) or self.y_case not in (1, 2, 3, 4, 5, 6):
            raise ValueError(f"no such variant: <{self.z_case}.{self.y_case}>")

    @property
    def label(self) -> str:
        return f"{self.z_case}.{self.y_case}"


ALL_VARIANTS = tuple(
    CellVariant(z, y) for z in (1, 2, 3) for y in (1, 2, 3, 4, 5, 6)
)


@dataclass(frozen=True)
class VariantReport:
    variant: CellVariant
    c221: bool
    c222: bool
    c224: bool
    x_value3: TruthValue3
    resolved_x: Formula | None

    @property
    def all_ok(self) -> bool:
        return self.c221 and self.c222 and self.c224


def _z_value(v: CellVariant) -> TruthValue3:
    return (TruthValue3.T, TruthValue3.F, TruthValue3.XI)[v.z_case - 1]


def _y_value(v: CellVariant) -> TruthValue3:
    not_z = not3(_z_value(v))
    second = (TruthValue3.T, TruthValue3.F, TruthValue3.XI)[(v.y_case - 1) % 3]
    return and3(not_z, second) if v.y_case <= 3 else or3(not_z, second)


def _z_formula(v: CellVariant) -> Formula:
    return (ConstTrue(), ConstFalse(), FrontierXi(Z_TAG))[v.z_case - 1]


def _y_formula(v: CellVariant, neutralize: bool) -> Formula:
    """Knee formula with z substituted by its case value.

    With ``neutralize`` the xi-continuation is replaced by the neutral
    element of its connective (T in conjunctions, F in disjunctions), which
    is how the local-contradiction screening ignores the appended parts.
    """
    not_z = negate(_z_formula(v))
    if v.y_case <= 3:
        second = (ConstTrue(), ConstFalse(), FrontierXi(Y_TAG))[v.y_case - 1]
        if neutralize and v.y_case == 3:
            second = ConstTrue()
        return And((not_z, second))
    second = (ConstTrue(), ConstFalse(), FrontierXi(Y_TAG))[v.y_case - 4]
    if neutralize and v.y_case == 6:
        second = ConstFalse()
    return Or((not_z, second))


def _head_contradictory(v: CellVariant) -> bool:
    """Is x = !y & !z unsatisfiable, with the knee's xi parts neutralized and
    the foot left free?"""
    not_z = NegVar("z")
    if v.y_case <= 3:
        second = (ConstTrue(), ConstFalse(), ConstTrue())[v.y_case - 1]
        y = And((not_z, second))
    else:
        second = (ConstTrue(), ConstFalse(), ConstFalse())[v.y_case - 4]
        y = Or((not_z, second))
    x = And((negate(y), NegVar("z")))
    return not any(eval2(x, {"z": b}) for b in (False, True))


def simplify_dnf_xi(d: Dnf, frontier_tags: frozenset[str]) -> Dnf:
    """Drop contradictory conjuncts, keeping purely-frontier contradictions
    when nothing else would remain (a frontier pair has value xi, not F)."""
    clean, frontier_contra = [], []
    for c in d.disjuncts:
        plain = [(n, s) for n, s in c if n not in frontier_tags]
        if _has_complementary_pair(tuple(plain)):
            continue
        if _has_complementary_pair(c):
            frontier_contra.append(c)
        else:
            clean.append(c)
    return Dnf.make(clean if clean else frontier_contra)


def _resolved_dnf(v: CellVariant) -> Dnf:
    x = And((negate(_y_formula(v, neutralize=False)), negate(_z_formula(v))))
    return simplify_dnf_xi(to_dnf(x), FRONTIER_TAGS)


def classify_variant(v: CellVariant) -> VariantReport:
    y3, z3 = _y_value(v), _z_value(v)
    x3 = and3(not3(y3), not3(z3))
    c224 = x3 is TruthValue3.XI
    c222 = or3(y3, z3) is not TruthValue3.T
    c221 = _head_contradictory(v)
    resolved = None
    if c221 and c222 and c224:
        resolved = dnf_to_formula(_resolved_dnf(v), FRONTIER_TAGS)
    return VariantReport(v, c221, c222, c224, x3, resolved)


def classify_all() -> tuple[VariantReport, ...]:
    return tuple(classify_variant(v) for v in ALL_VARIANTS)


def resolved_form(v: CellVariant) -> Formula:
    """Symbolic head formula over frontier leaves, for viable variants only."""
    report = classify_variant(v)
    if not report.all_ok:
        raise ValueError(f"variant <{v.label}> fails the screening conditions")
    assert report.resolved_x is not None
    return report.resolved_x


def diamond_resolved_form(simplified: bool) -> Formula:
    """Head formula of the diamond x = !y & !y' with y = y_xi & !z and
    y' = yp_xi & z over a xi-valued foot.

    The simplified diamond replaces y' by z | F = z, which collapses the
    whole figure to the viable triangle <3.3>.
    """
    if simplified:
        y = And((NegVar("z"), FrontierXi(Y_TAG)))
        x = _substitute_foot(And((negate(y), NegVar("z"))))
        return dnf_to_formula(simplify_dnf_xi(to_dnf(x), FRONTIER_TAGS), FRONTIER_TAGS)
    y = And((FrontierXi(Y_TAG), NegVar("z")))
    y_prime = And((FrontierXi(YP_TAG), Var("z")))
    x = And((negate(y), negate(y_prime)))
    return dnf_to_formula(simplify_dnf_xi(to_dnf(x), FRONTIER_TAGS), FRONTIER_TAGS)


def _substitute_foot(f: Formula) -> Formula:
    """Rename the foot variable to its frontier tag (the foot is xi-valued)."""
    if isinstance(f, Var):
        return FrontierXi(Z_TAG) if f.name == "z" else f
    if isinstance(f, NegVar):
        return FrontierXi(Z_TAG, True) if f.name == "z" else f
    if isinstance(f, And):
        return And(tuple(_substitute_foot(g) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(_substitute_foot(g) for g in f.items))
    return f


# --------------------------------------------------------------------------
# Triangle sign audit


class TriangleAudit(Enum):
    NO_X_PLUS_CONTRADICTION = "NoXPlusContradiction"
    ESCAPE_AT_X_MINUS = "EscapeAtXMinus"
    YABLO_VIABLE = "YabloViable"


def triangle_sign_audit(sides: tuple[Sign, Sign, Sign]) -> TriangleAudit:
    """Audit the sign triple (x-y, y-z, x-z) of a triangle.

    An even number of negative sides leaves the two head-to-foot paths with
    equal value, so the positive head cannot be contradicted.  With exactly
    one negative side the negated head keeps an escape route; only the
    all-negative triangle supports the full construction.
    """
    negatives = sum(1 for s in sides if s is Sign.NEGATIVE)
    if negatives % 2 == 0:
        return TriangleAudit.NO_X_PLUS_CONTRADICTION
    if negatives == 3:
        return TriangleAudit.YABLO_VIABLE
    return TriangleAudit.ESCAPE_AT_X_MINUS


# --------------------------------------------------------------------------
# Tautology insertion


def _fresh_name(g: RefGraph, base: str) -> str:
    name = base
    while g.has_node(name):
        name += "'"
    return name


def _replace_literal(f: Formula, old: str, new: Formula) -> Formula:
    if isinstance(f, (Var, NegVar)) and f.name == old:
        return new
    if isinstance(f, And):
        return And(tuple(_replace_literal(g, old, new) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(_replace_literal(g, old, new) for g in f.items))
    return f


def insert_tautology(g: RefGraph, src: str, dst: str, sign: Sign) -> RefGraph:
    """Replace the arrow src -> dst by src -> ab (with ``sign``) where the new
    node ab carries dst | !dst; src's formula references ab with ``sign``."""
    if not g.has_arrow(src, dst):
        raise GraphError(f"no arrow {src} -> {dst} to insert into")
    ab = _fresh_name(g, src + dst)
    nodes = list(g.nodes) + [ab]
    arrows = [a for a in g.arrows if (a.src, a.dst) != (src, dst)]
    arrows.append(Arrow(src, ab, sign))
    arrows.append(Arrow(ab, dst, Sign.POSITIVE))
    formulas = g.formulas
    new_lit = Var(ab) if sign is Sign.POSITIVE else NegVar(ab)
    formulas[src] = _replace_literal(formulas[src], dst, new_lit)
    formulas[ab] = Or((Var(dst), NegVar(dst)))
    return RefGraph(nodes, arrows, formulas)


class InsertionOutcome(Enum):
    NO_CONTRADICTION = "NoContradiction"
    TRIVIAL_CONTRADICTION_ESCAPE = "TrivialContradictionEscape"
    TAUTOLOGY = "Tautology"


@dataclass(frozen=True)
class InsertionEffect:
    outcome: InsertionOutcome
    expression: Dnf
    escape_assignment: dict[str, bool] | None


TRIANGLE_SIDES = {"xy": ("x", "y"), "xz": ("x", "z"), "yz": ("y", "z")}


def base_triangle() -> RefGraph:
    return RefGraph(
        ["x", "y", "z"],
        [
            Arrow("x", "y", Sign.NEGATIVE),
            Arrow("x", "z", Sign.NEGATIVE),
            Arrow("y", "z", Sign.NEGATIVE),
        ],
        {"x": And((NegVar("y"), NegVar("z"))), "y": NegVar("z")},
    )


def insertion_effect(which, signs) -> InsertionEffect:
    """Insert tautology nodes into triangle sides and classify the head.

    The head expression over the foot comes out as a proper set (no
    contradiction destroyed into identity/negation of the foot), as the empty
    set (a trivial contradiction, always with an escape), or as the full
    universe (tautology).
    """
    if isinstance(which, str):
        which = (which,)
    if isinstance(signs, Sign):
        signs = (signs,)
    if len(which) != len(signs):
        raise ValueError("one sign per inserted side")
    g = base_triangle()
    for side, sign in zip(which, signs):
        if side not in TRIANGLE_SIDES:
            raise ValueError(f"unknown triangle side: {side}")
        g = insert_tautology(g, *TRIANGLE_SIDES[side], sign)
    expr = node_model_expression(g, "x")
    kind = expression_kind(expr)
    if kind == "empty":
        witness = escape_search(g, "x")
        assert witness is not None
        return InsertionEffect(
            InsertionOutcome.TRIVIAL_CONTRADICTION_ESCAPE, expr, witness.assignment
        )
    if kind == "universe":
        return InsertionEffect(InsertionOutcome.TAUTOLOGY, expr, None)
    return InsertionEffect(InsertionOutcome.NO_CONTRADICTION, expr, None)
