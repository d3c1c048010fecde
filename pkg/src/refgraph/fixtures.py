"""Named example graphs used by the test suite and the demo scripts."""

from __future__ import annotations

from .embedding import BareDag
from .formula import And, NegVar, Or, Sign, Var
from .graph import Arrow, RefGraph


def yablo_triangle() -> RefGraph:
    """x = !y & !z, y = !z; the head is unsatisfiable, the foot is the sink."""
    return RefGraph(
        ["x", "y", "z"],
        [
            Arrow("x", "y", Sign.NEGATIVE),
            Arrow("x", "z", Sign.NEGATIVE),
            Arrow("y", "z", Sign.NEGATIVE),
        ],
        {"x": And((NegVar("y"), NegVar("z"))), "y": NegVar("z")},
    )


def triangle_with_branch() -> RefGraph:
    """The triangle with an extra branch y -> y' that reopens the head:
    x = !y & !z, y = !z & !y'."""
    return RefGraph(
        ["x", "y", "z", "y'"],
        [
            Arrow("x", "y", Sign.NEGATIVE),
            Arrow("x", "z", Sign.NEGATIVE),
            Arrow("y", "z", Sign.NEGATIVE),
            Arrow("y", "y'", Sign.NEGATIVE),
        ],
        {"x": And((NegVar("y"), NegVar("z"))), "y": And((NegVar("z"), NegVar("y'")))},
    )


def four_path_braid() -> RefGraph:
    """Five nodes carrying four x0 -> x4 paths whose pairwise contradictions
    close an odd cycle once the paths re-branch after meeting."""
    return RefGraph(
        ["x0", "x1", "x2", "x3", "x4"],
        [
            Arrow("x0", "x1", Sign.NEGATIVE),
            Arrow("x0", "x2", Sign.POSITIVE),
            Arrow("x1", "x2", Sign.POSITIVE),
            Arrow("x2", "x3", Sign.NEGATIVE),
            Arrow("x2", "x4", Sign.POSITIVE),
            Arrow("x3", "x4", Sign.POSITIVE),
        ],
        {
            "x0": And((NegVar("x1"), Var("x2"))),
            "x1": Var("x2"),
            "x2": And((NegVar("x3"), Var("x4"))),
            "x3": Var("x4"),
        },
    )


def chain(n: int) -> RefGraph:
    """x0 -!-> x1 -!-> ... -!-> xn: unique paths only, no cells anywhere."""
    nodes = [f"x{i}" for i in range(n + 1)]
    arrows = [Arrow(f"x{i}", f"x{i+1}", Sign.NEGATIVE) for i in range(n)]
    formulas = {f"x{i}": NegVar(f"x{i+1}") for i in range(n)}
    return RefGraph(nodes, arrows, formulas)


def bare_chain(n: int) -> BareDag:
    nodes = [f"x{i}" for i in range(n + 1)]
    return BareDag.make(nodes, [(f"x{i}", f"x{i+1}") for i in range(n)])


def simple_contradiction() -> RefGraph:
    """x = y & !y: the head cannot be true, but its negation escapes."""
    return RefGraph(
        ["x", "y"],
        [Arrow("x", "y", Sign.POSITIVE)],
        {"x": And((Var("y"), NegVar("y")))},
    )


def pipeline(k: int) -> RefGraph:
    """Sequential branching that tries to emulate infinite branching:
    x0 = !y0 and y_i = x_{i+1} | y_{i+1}.  The all-y route falsifies x0
    while avoiding every x_i."""
    if k < 1:
        raise ValueError("pipeline needs k >= 1")
    nodes = ["x0"] + [f"y{i}" for i in range(k)] + [f"x{i}" for i in range(1, k + 1)] + [f"y{k}"]
    arrows = [Arrow("x0", "y0", Sign.NEGATIVE)]
    formulas = {"x0": NegVar("y0")}
    for i in range(k):
        arrows.append(Arrow(f"y{i}", f"x{i+1}", Sign.POSITIVE))
        arrows.append(Arrow(f"y{i}", f"y{i+1}", Sign.POSITIVE))
        formulas[f"y{i}"] = Or((Var(f"x{i+1}"), Var(f"y{i+1}")))
    return RefGraph(nodes, arrows, formulas)


def postponed_contradictions() -> RefGraph:
    """Two contradiction cells hanging off x0 that behave differently when
    the root is false.

    On the left, the contradiction for the x1 branch is postponed down a
    negative chain and realized by cascaded triangles: the long path to
    x3.2.2 passes x2.2, whose own equation pins x3.2.2 false, so the cell is
    safe to graft onto.  On the right, x1 reaches x2''.1 through a positive
    arrow and a branching node, so nothing on the way pins the meeting
    point: both polarities stay available and grafting there escapes.
    """
    nodes = ["x0", "x1", "x2", "x2.2", "x2.3", "x3.2.2", "x''2", "x2''.1", "w"]
    arrows = [
        Arrow("x0", "x1", Sign.NEGATIVE),
        Arrow("x0", "x3.2.2", Sign.NEGATIVE),
        Arrow("x0", "x2''.1", Sign.NEGATIVE),
        Arrow("x1", "x2", Sign.NEGATIVE),
        Arrow("x1", "x''2", Sign.POSITIVE),
        Arrow("x2", "x2.2", Sign.NEGATIVE),
        Arrow("x2", "x2.3", Sign.NEGATIVE),
        Arrow("x2.2", "x2.3", Sign.NEGATIVE),
        Arrow("x2.2", "x3.2.2", Sign.NEGATIVE),
        Arrow("x2.3", "x3.2.2", Sign.NEGATIVE),
        Arrow("x''2", "x2''.1", Sign.NEGATIVE),
        Arrow("x''2", "w", Sign.POSITIVE),
    ]
    formulas = {
        "x0": And((NegVar("x1"), NegVar("x3.2.2"), NegVar("x2''.1"))),
        "x1": And((NegVar("x2"), Var("x''2"))),
        "x2": And((NegVar("x2.2"), NegVar("x2.3"))),
        "x2.2": And((NegVar("x2.3"), NegVar("x3.2.2"))),
        "x2.3": NegVar("x3.2.2"),
        "x''2": Or((NegVar("x2''.1"), Var("w"))),
    }
    return RefGraph(nodes, arrows, formulas)


def branch_before_knee() -> BareDag:
    """Branching on the head-knee side: x - x'' - y - z with x - z, plus a
    second branch x'' - y' - z' with x - z'."""
    nodes = ["x", "x''", "y", "y'", "z", "z'"]
    arrows = [
        ("x", "x''"),
        ("x''", "y"),
        ("y", "z"),
        ("x", "z"),
        ("x''", "y'"),
        ("y'", "z'"),
        ("x", "z'"),
    ]
    return BareDag.make(nodes, arrows)


def branch_after_knee() -> BareDag:
    """Branching on the knee-foot side: x - y - y'' - z with x - z, plus
    y'' - z' with x - z'."""
    nodes = ["x", "y", "y''", "z", "z'"]
    arrows = [
        ("x", "y"),
        ("y", "y''"),
        ("y''", "z"),
        ("x", "z"),
        ("y''", "z'"),
        ("x", "z'"),
    ]
    return BareDag.make(nodes, arrows)
