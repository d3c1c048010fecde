"""Graph documents: the JSON interchange format and the compact line DSL.

JSON is the authoritative tooling format; the DSL keeps fixtures readable.
DSL lines (separated by newlines or ';'):

    x0 = !x1 & !x2      node formula; arrows and signs derive from literals
    x0 -! x1            explicit negative arrow
    x0 -> x1            explicit positive arrow
    a - b               unsigned arrow (bare mode only)
    # ...               comment

A node given only by signed arrow lines gets the default literal conjunction
matching its arrow signs.  Unsigned arrows cannot be mixed with formulas or
signed arrows: they describe a bare graph awaiting an interpretation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .embedding import BareDag
from .formula import (
    And,
    ConstFalse,
    ConstTrue,
    Formula,
    FormulaError,
    NegVar,
    Or,
    Sign,
    Var,
    conj,
    negate,
    vars_of,
)
from .graph import Arrow, GraphError, RefGraph

DOCUMENT_VERSION = "refgraph/1"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}" if line is not None else ""
        where += f", column {column}" if column is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class GraphDocument:
    mode: str  # "ref" | "bare"
    nodes: tuple[tuple[str, Formula | None], ...]
    arrows: tuple[tuple[str, str, Sign | None], ...]


# --------------------------------------------------------------------------
# Formula expression syntax


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_.']*)|(?P<op>[!&|()])|(?P<bad>\S))")


def _tokenize(text: str):
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", column=m.start("bad") + 1)
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse `a & !b | (c | T)` style expressions into a formula."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expect=None):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of formula", column=len(text) + 1)
        if expect is not None and tok[1] != expect:
            raise ParseError(f"expected {expect!r}, found {tok[1]!r}", column=tok[2] + 1)
        pos += 1
        return tok

    def parse_or() -> Formula:
        parts = [parse_and()]
        while peek() and peek()[1] == "|":
            take("|")
            parts.append(parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and() -> Formula:
        parts = [parse_factor()]
        while peek() and peek()[1] == "&":
            take("&")
            parts.append(parse_factor())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_factor() -> Formula:
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of formula", column=len(text) + 1)
        if tok[1] == "!":
            take("!")
            return negate(parse_factor())
        if tok[1] == "(":
            take("(")
            inner = parse_or()
            take(")")
            return inner
        if tok[0] == "ident":
            take()
            if tok[1] == "T":
                return ConstTrue()
            if tok[1] == "F":
                return ConstFalse()
            return Var(tok[1])
        raise ParseError(f"unexpected token {tok[1]!r}", column=tok[2] + 1)

    out = parse_or()
    if peek() is not None:
        tok = peek()
        raise ParseError(f"trailing input {tok[1]!r}", column=tok[2] + 1)
    return out


def format_formula(f: Formula) -> str:
    def fmt(g: Formula, parent: str) -> str:
        if isinstance(g, Var):
            return g.name
        if isinstance(g, NegVar):
            return f"!{g.name}"
        if isinstance(g, ConstTrue):
            return "T"
        if isinstance(g, ConstFalse):
            return "F"
        if isinstance(g, And):
            body = " & ".join(fmt(h, "and") for h in g.items)
            return f"({body})" if parent == "neg" else body
        if isinstance(g, Or):
            body = " | ".join(fmt(h, "or") for h in g.items)
            return f"({body})" if parent in ("and", "neg") else body
        raise FormulaError(f"cannot format {g!r}")

    return fmt(f, "top")


# --------------------------------------------------------------------------
# Formula JSON sub-format


def formula_to_tree(f: Formula):
    if isinstance(f, Var):
        return {"op": "var", "id": f.name}
    if isinstance(f, NegVar):
        return {"op": "neg", "id": f.name}
    if isinstance(f, And):
        return {"op": "and", "items": [formula_to_tree(g) for g in f.items]}
    if isinstance(f, Or):
        return {"op": "or", "items": [formula_to_tree(g) for g in f.items]}
    if isinstance(f, ConstTrue):
        return {"op": "true"}
    if isinstance(f, ConstFalse):
        return {"op": "false"}
    raise FormulaError(f"cannot serialize {f!r}")


def tree_to_formula(tree) -> Formula:
    if not isinstance(tree, dict) or "op" not in tree:
        raise ParseError(f"bad formula tree: {tree!r}")
    op = tree["op"]
    if op == "var":
        return Var(tree["id"])
    if op == "neg":
        return NegVar(tree["id"])
    if op == "and":
        return And(tuple(tree_to_formula(t) for t in tree["items"]))
    if op == "or":
        return Or(tuple(tree_to_formula(t) for t in tree["items"]))
    if op == "true":
        return ConstTrue()
    if op == "false":
        return ConstFalse()
    raise ParseError(f"unknown formula op: {op!r}")


# --------------------------------------------------------------------------
# Document parsing


_ARROW_LINE = re.compile(
    r"^\s*(?P<src>[A-Za-z_][A-Za-z0-9_.']*)\s*(?P<kind>->|-!|-)\s*(?P<dst>[A-Za-z_][A-Za-z0-9_.']*)\s*$"
)
_NODE_LINE = re.compile(r"^\s*(?P<id>[A-Za-z_][A-Za-z0-9_.']*)\s*=\s*(?P<expr>.+)$")


def parse_dsl(text: str) -> GraphDocument:
    formulas: dict[str, Formula] = {}
    arrows: list[tuple[str, str, Sign | None]] = []
    nodes: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        for chunk in raw_line.split(";"):
            line = chunk.split("#", 1)[0].strip()
            if not line:
                continue
            m = _ARROW_LINE.match(line)
            if m:
                sign = {"->": Sign.POSITIVE, "-!": Sign.NEGATIVE, "-": None}[m.group("kind")]
                arrows.append((m.group("src"), m.group("dst"), sign))
                nodes.update((m.group("src"), m.group("dst")))
                continue
            m = _NODE_LINE.match(line)
            if m:
                name = m.group("id")
                if name in formulas:
                    raise ParseError(f"duplicate formula for {name}", line=lineno)
                try:
                    f = parse_formula(m.group("expr"))
                except ParseError as e:
                    raise ParseError(str(e), line=lineno) from None
                formulas[name] = f
                nodes.add(name)
                nodes.update(vars_of(f))
                continue
            raise ParseError(f"cannot parse line: {line!r}", line=lineno)

    unsigned = [a for a in arrows if a[2] is None]
    if unsigned and (formulas or len(unsigned) != len(arrows)):
        raise ParseError("unsigned arrows cannot be mixed with formulas or signed arrows")
    if unsigned:
        return GraphDocument("bare", tuple((n, None) for n in sorted(nodes)), tuple(sorted(arrows)))

    # derive arrows from formulas, then merge explicit signed arrows
    derived: dict[tuple[str, str], Sign] = {}
    for name, f in formulas.items():
        for succ in sorted(vars_of(f)):
            derived[(name, succ)] = _literal_sign(f, succ)
    for src, dst, sign in arrows:
        if (src, dst) in derived:
            if derived[(src, dst)] is not sign:
                raise ParseError(f"arrow {src} -> {dst} contradicts the formula sign")
        else:
            derived[(src, dst)] = sign  # type: ignore[assignment]
    node_rows = tuple((n, formulas.get(n)) for n in sorted(nodes))
    arrow_rows = tuple((s, d, derived[(s, d)]) for s, d in sorted(derived))
    return GraphDocument("ref", node_rows, arrow_rows)


def _literal_sign(f: Formula, name: str) -> Sign:
    """Arrow sign for one successor: the literal's polarity when it is
    unambiguous, positive by convention when both polarities occur."""
    polarities: set[Sign] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Var) and g.name == name:
            polarities.add(Sign.POSITIVE)
        elif isinstance(g, NegVar) and g.name == name:
            polarities.add(Sign.NEGATIVE)
        elif isinstance(g, (And, Or)):
            for h in g.items:
                walk(h)

    walk(f)
    return Sign.NEGATIVE if polarities == {Sign.NEGATIVE} else Sign.POSITIVE


def parse_json_document(text: str) -> GraphDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    if not isinstance(doc, dict) or doc.get("version") != DOCUMENT_VERSION:
        raise ParseError(f"expected a {DOCUMENT_VERSION!r} document")
    mode = doc.get("mode", "ref")
    if mode not in ("ref", "bare"):
        raise ParseError(f"unknown mode {mode!r}")
    nodes = []
    for row in doc.get("nodes", []):
        f = tree_to_formula(row["formula"]) if row.get("formula") is not None else None
        if f is not None and mode == "bare":
            raise ParseError("bare documents cannot carry formulas")
        nodes.append((row["id"], f))
    arrows = []
    for row in doc.get("arrows", []):
        sign = row.get("sign")
        if sign is None:
            if mode != "bare":
                raise ParseError("signless arrows are only permitted in bare mode")
            arrows.append((row["from"], row["to"], None))
        else:
            if mode == "bare":
                raise ParseError("bare documents cannot carry arrow signs")
            try:
                arrows.append((row["from"], row["to"], Sign(sign)))
            except ValueError:
                raise ParseError(f"unknown sign {sign!r}") from None
    return GraphDocument(mode, tuple(nodes), tuple(arrows))


def parse_document(text: str) -> GraphDocument:
    if text.lstrip().startswith("{"):
        return parse_json_document(text)
    return parse_dsl(text)


def document_to_graph(doc: GraphDocument):
    if doc.mode == "bare":
        return BareDag.make([n for n, _ in doc.nodes], [(s, d) for s, d, _ in doc.arrows])
    formulas = {n: f for n, f in doc.nodes if f is not None}
    arrows = [Arrow(s, d, sign) for s, d, sign in doc.arrows]
    # nodes carrying only arrows default to the literal conjunction their
    # arrow signs spell out
    by_src: dict[str, list[Arrow]] = {}
    for a in arrows:
        by_src.setdefault(a.src, []).append(a)
    for src, outgoing in by_src.items():
        if src not in formulas:
            literals = [
                Var(a.dst) if a.sign is Sign.POSITIVE else NegVar(a.dst)
                for a in sorted(outgoing, key=lambda a: a.dst)
            ]
            formulas[src] = conj(literals)
    return RefGraph([n for n, _ in doc.nodes], arrows, formulas)


def graph_to_document(g) -> GraphDocument:
    if isinstance(g, BareDag):
        return GraphDocument(
            "bare",
            tuple((n, None) for n in g.nodes),
            tuple((s, d, None) for s, d in g.arrows),
        )
    return GraphDocument(
        "ref",
        tuple((n, g.formula(n)) for n in g.nodes),
        tuple((a.src, a.dst, a.sign) for a in g.arrows),
    )


def document_to_json(doc: GraphDocument) -> str:
    payload = {
        "version": DOCUMENT_VERSION,
        "mode": doc.mode,
        "nodes": [
            {"id": n} if f is None else {"id": n, "formula": formula_to_tree(f)}
            for n, f in doc.nodes
        ],
        "arrows": [
            {"from": s, "to": d} if sign is None else {"from": s, "to": d, "sign": sign.value}
            for s, d, sign in doc.arrows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def document_to_dsl(doc: GraphDocument) -> str:
    lines = []
    if doc.mode == "bare":
        lines.extend(f"{s} - {d}" for s, d, _ in doc.arrows)
    else:
        with_formula = {n for n, f in doc.nodes if f is not None}
        for n, f in doc.nodes:
            if f is not None:
                lines.append(f"{n} = {format_formula(f)}")
        for s, d, sign in doc.arrows:
            if s not in with_formula:
                lines.append(f"{s} {'->' if sign is Sign.POSITIVE else '-!'} {d}")
    return "\n".join(lines) + "\n"


def load_graph(text: str):
    """Parse either syntax and build the validated graph."""
    return document_to_graph(parse_document(text))
