import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refgraph import (
    And,
    ConstFalse,
    ConstTrue,
    Dnf,
    DnfSizeError,
    FormulaError,
    FrontierXi,
    NegVar,
    Or,
    Sign,
    TruthValue3,
    Var,
    and3,
    dnf_str,
    eval2,
    eval2_dnf,
    eval3,
    is_tautology_dnf,
    negate,
    negate_dnf,
    not3,
    or3,
    simplify_dnf,
    to_dnf,
)
from refgraph.randgen import random_dnf

from helpers import dnf_table_equal, truth_table_equal

T, F, XI = TruthValue3.T, TruthValue3.F, TruthValue3.XI
VALUES = (F, XI, T)


# --------------------------------------------------------------------------
# Three-valued lattice


def test_cited_table_entries():
    assert and3(XI, T) is XI
    assert or3(XI, T) is T
    assert and3(XI, F) is F
    assert or3(XI, F) is XI
    assert and3(XI, XI) is XI
    assert or3(XI, XI) is XI
    assert and3(F, XI) is F
    assert or3(F, XI) is XI
    assert not3(XI) is XI
    assert not3(T) is F
    assert not3(F) is T


def test_connectives_are_lattice_operations():
    for a, b in itertools.product(VALUES, repeat=2):
        assert and3(a, b) is min(a, b)
        assert or3(a, b) is max(a, b)


def test_order_is_f_xi_t():
    assert F < XI < T


def test_lattice_laws_exhaustive():
    for a, b, c in itertools.product(VALUES, repeat=3):
        assert and3(a, b) is and3(b, a)
        assert or3(a, b) is or3(b, a)
        assert and3(a, and3(b, c)) is and3(and3(a, b), c)
        assert or3(a, or3(b, c)) is or3(or3(a, b), c)
        assert and3(a, a) is a
        assert or3(a, a) is a
        assert and3(a, or3(a, b)) is a
        assert or3(a, and3(a, b)) is a
        # De Morgan and involution
        assert not3(not3(a)) is a
        assert not3(and3(a, b)) is or3(not3(a), not3(b))
        assert not3(or3(a, b)) is and3(not3(a), not3(b))


# --------------------------------------------------------------------------
# Classical and three-valued evaluation


def test_eval2_basic():
    f = And((NegVar("x1"), NegVar("x2")))
    assert eval2(f, {"x1": False, "x2": False}) is True
    contradiction = And((Var("z"), NegVar("z")))
    for v in (False, True):
        assert eval2(contradiction, {"z": v}) is False
    assert eval2(Or((Var("x2"), Var("x3"))), {"x2": False, "x3": True}) is True


def test_eval2_errors():
    with pytest.raises(FormulaError):
        eval2(Var("a"), {})
    with pytest.raises(FormulaError):
        eval2(FrontierXi("a"), {"a": True})


def test_eval3_frontier_cases():
    f = And((NegVar("z"), FrontierXi("y")))
    assert eval3(f, {"z": F}, {"y": XI}) is XI
    g = Or((NegVar("z"), FrontierXi("y")))
    assert eval3(g, {"z": F}, {"y": XI}) is T
    assert eval3(f, {"z": XI}, {"y": XI}) is XI


def test_eval3_missing_binding():
    with pytest.raises(FormulaError):
        eval3(FrontierXi("y"), {}, {})
    with pytest.raises(FormulaError):
        eval3(Var("a"), {})


@given(st.booleans(), st.booleans())
def test_eval3_restricted_to_classical_matches_eval2(a, b):
    f = Or((And((Var("p"), NegVar("q"))), NegVar("p")))
    classical = eval2(f, {"p": a, "q": b})
    three = eval3(f, {"p": TruthValue3.from_bool(a), "q": TruthValue3.from_bool(b)})
    assert three is TruthValue3.from_bool(classical)


# --------------------------------------------------------------------------
# DNF conversion


def test_to_dnf_keeps_raw_product():
    f = And((Or((Var("x2"), Var("x3"))), NegVar("x2")))
    d = to_dnf(f)
    assert d == Dnf.make(
        [
            [("x2", Sign.POSITIVE), ("x2", Sign.NEGATIVE)],
            [("x3", Sign.POSITIVE), ("x2", Sign.NEGATIVE)],
        ]
    )
    assert dnf_str(simplify_dnf(d)) == "!x2 & x3"


def test_to_dnf_single_literal():
    assert to_dnf(NegVar("x1")) == Dnf.make([[("x1", Sign.NEGATIVE)]])


def test_to_dnf_frontier_leaves_are_opaque():
    f = And(
        (
            Or((FrontierXi("y_xi", True), Var("z"))),
            Or((FrontierXi("yp_xi", True), NegVar("z"))),
        )
    )
    assert len(to_dnf(f).disjuncts) == 4


formulas = st.deferred(
    lambda: st.one_of(
        st.sampled_from([Var(f"v{i}") for i in range(5)]),
        st.sampled_from([NegVar(f"v{i}") for i in range(5)]),
        st.builds(ConstTrue),
        st.builds(ConstFalse),
        st.builds(lambda xs: And(tuple(xs)), st.lists(formulas, min_size=1, max_size=3)),
        st.builds(lambda xs: Or(tuple(xs)), st.lists(formulas, min_size=1, max_size=3)),
    )
)


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_to_dnf_preserves_truth_tables(f):
    assert truth_table_equal(f, to_dnf(f))


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_simplify_preserves_truth_tables(f):
    d = to_dnf(f)
    assert dnf_table_equal(d, simplify_dnf(d))


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_negate_matches_ast_negation(f):
    assert truth_table_equal(negate(f), negate_dnf(to_dnf(f)))


# --------------------------------------------------------------------------
# DNF negation via choice functions


def test_negate_single_conjunct():
    d = Dnf.make([[("x1", Sign.NEGATIVE), ("x2", Sign.NEGATIVE)]])
    assert negate_dnf(d) == Dnf.make([[("x1", Sign.POSITIVE)], [("x2", Sign.POSITIVE)]])


def test_negate_two_conjuncts_gives_four_components():
    d = Dnf.make(
        [
            [("x1", Sign.NEGATIVE), ("x2", Sign.NEGATIVE)],
            [("x3", Sign.NEGATIVE), ("x4", Sign.NEGATIVE)],
        ]
    )
    expected = Dnf.make(
        [
            [("x1", Sign.POSITIVE), ("x3", Sign.POSITIVE)],
            [("x1", Sign.POSITIVE), ("x4", Sign.POSITIVE)],
            [("x2", Sign.POSITIVE), ("x3", Sign.POSITIVE)],
            [("x2", Sign.POSITIVE), ("x4", Sign.POSITIVE)],
        ]
    )
    assert negate_dnf(d) == expected


def test_negate_tautology_disjunct_gives_falsity():
    assert negate_dnf(Dnf.true()).is_false
    assert negate_dnf(Dnf.make([[], [("a", Sign.POSITIVE)]])).is_false


def test_negate_falsity_gives_tautology():
    assert negate_dnf(Dnf.false()) == Dnf.true()


def test_negation_size_cap():
    wide = Dnf.make(
        [[(f"v{i}_{j}", Sign.POSITIVE) for j in range(10)] for i in range(8)]
    )
    with pytest.raises(DnfSizeError):
        negate_dnf(wide)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_negate_dnf_is_complement(seed):
    d = random_dnf(random.Random(seed))
    nd = negate_dnf(d)
    names = sorted(d.vars() | nd.vars())
    for bits in itertools.product((False, True), repeat=len(names)):
        assignment = dict(zip(names, bits))
        assert eval2_dnf(nd, assignment) == (not eval2_dnf(d, assignment))


# --------------------------------------------------------------------------
# Simplification


def test_simplify_drops_contradictory_conjunct():
    d = Dnf.make(
        [
            [("z", Sign.POSITIVE), ("z", Sign.NEGATIVE)],
            [("y'", Sign.POSITIVE), ("z", Sign.NEGATIVE)],
        ]
    )
    assert dnf_str(simplify_dnf(d)) == "y' & !z"


def test_simplify_contradiction_to_empty():
    assert simplify_dnf(Dnf.make([[("x2", Sign.POSITIVE), ("x2", Sign.NEGATIVE)]])).is_false


def test_simplify_is_idempotent_and_dedupes():
    d = Dnf.make([[("a", Sign.POSITIVE)], [("a", Sign.POSITIVE)]])
    s = simplify_dnf(d)
    assert s == Dnf.make([[("a", Sign.POSITIVE)]])
    assert simplify_dnf(s) == s


def test_simplify_removes_subsumed():
    d = Dnf.make([[("a", Sign.POSITIVE)], [("a", Sign.POSITIVE), ("b", Sign.NEGATIVE)]])
    assert simplify_dnf(d) == Dnf.make([[("a", Sign.POSITIVE)]])


def test_tautology_detection_via_complement():
    assert is_tautology_dnf(Dnf.make([[("z", Sign.POSITIVE)], [("z", Sign.NEGATIVE)]]))
    assert not is_tautology_dnf(Dnf.make([[("z", Sign.POSITIVE)]]))


def test_empty_connective_rejected():
    with pytest.raises(FormulaError):
        And(())
    with pytest.raises(FormulaError):
        Or(())
