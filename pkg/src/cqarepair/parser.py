"""Line-oriented text DSL for schemas, constraints, queries, updates and repair
settings, plus CSV ingestion of instances.

Grammar summary (one statement per line, ``#`` starts a comment)::

    relation P(X: sym, Y: sym, Z: int)
    deny P(x, y, z), P(x, y2, z2) where y != y2
    fd P: X -> Y
    q(x, z) := exists y P(x, y, z), not S(x) where z > 3
    insert P(a, f, d)  |  delete P(a, b, c)  |  change P(a, b, c) Y = f
    weight P(a, b, c) = 5
    fixable P.Y; candidates P.Y = {b, c}; rule = unit

In constraints every lowercase identifier is a variable. In queries the
variables are exactly those listed in the head or after ``exists``; any other
identifier is a constant. In ground statements (facts, updates, weights) all
terms are constants. Constants may also be written as quoted strings or
integers.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import CqaError, QueryError, SchemaError
from .relational import (
    INT, KINDS, SYM, Atom, Comparison, Const, DatabaseInstance, DbTuple, DenialConstraint,
    Literal, Query, RelationDef, Schema, Var, format_value,
)
from .semantics import ASpec
from .updates import UpdateOp, UpdateSequence


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column plus UTF-8 byte offsets ``[start, end)`` in the input."""

    line: int
    column: int
    start: int
    end: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(CqaError, ValueError):
    def __init__(self, message: str, span: SourceSpan, source: str = "<input>"):
        self.span = span
        self.source = source
        self.bare_message = message
        super().__init__(f"{source}:{span}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str   # ident, int, str, punct
    text: str
    value: object
    span: SourceSpan


_PUNCT = (":=", "->", "!=", "<=", ">=", "..", "(", ")", ",", ":", "<", ">", "=", "{", "}", ";", ".")
_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>\#.*)
      | (?P<int>-?\d+(?![A-Za-z_]))
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<str>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
      | (?P<punct>""" + "|".join(re.escape(p) for p in _PUNCT) + r")",
    re.VERBOSE,
)
_LOWER_IDENT = re.compile(r"[a-z_][A-Za-z0-9_]*\Z")


class _Line:
    """Tokens of one logical line with cursor helpers."""

    def __init__(self, text: str, line_no: int, byte_start: int, source: str):
        self.text = text
        self.line_no = line_no
        self.byte_start = byte_start
        self.source = source
        self.tokens = self._lex()
        self.pos = 0

    def span_at(self, i: int, j: int) -> SourceSpan:
        b0 = self.byte_start + len(self.text[:i].encode("utf-8"))
        b1 = self.byte_start + len(self.text[:j].encode("utf-8"))
        return SourceSpan(self.line_no, i + 1, b0, b1)

    @property
    def whole(self) -> SourceSpan:
        return self.span_at(0, len(self.text.rstrip()))

    def error(self, msg: str, span: SourceSpan | None = None) -> ParseError:
        return ParseError(msg, span or self.whole, self.source)

    def _lex(self) -> list[Token]:
        out = []
        i = 0
        while i < len(self.text):
            m = _TOKEN_RE.match(self.text, i)
            if not m:
                raise self.error(f"unexpected character {self.text[i]!r}", self.span_at(i, i + 1))
            kind = m.lastgroup
            s = m.group()
            if kind == "int":
                out.append(Token("int", s, int(s), self.span_at(i, m.end())))
            elif kind == "ident":
                out.append(Token("ident", s, s, self.span_at(i, m.end())))
            elif kind == "str":
                body = re.sub(r"\\(.)", r"\1", s[1:-1])
                out.append(Token("str", s, body, self.span_at(i, m.end())))
            elif kind == "punct":
                out.append(Token("punct", s, s, self.span_at(i, m.end())))
            i = m.end()
        return out

    def peek(self, k: int = 0) -> Token | None:
        j = self.pos + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def end_span(self) -> SourceSpan:
        n = len(self.text.rstrip())
        return self.span_at(max(n - 1, 0), n) if n else self.span_at(0, 0)

    def next(self, what: str = "token") -> Token:
        t = self.peek()
        if t is None:
            raise self.error(f"expected {what}, found end of line", self.end_span())
        self.pos += 1
        return t

    def is_punct(self, p: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind == "punct" and t.text == p

    def is_ident(self, word: str | None = None, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind == "ident" and (word is None or t.text == word)

    def expect_punct(self, p: str) -> Token:
        t = self.next(repr(p))
        if t.kind != "punct" or t.text != p:
            raise self.error(f"expected {p!r}, found {t.text!r}", t.span)
        return t

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.next(what)
        if t.kind != "ident":
            raise self.error(f"expected {what}, found {t.text!r}", t.span)
        return t

    def expect_end(self):
        if not self.at_end():
            t = self.peek()
            raise self.error(f"unexpected {t.text!r}", t.span)


def _lines(text: str, source: str, split_semicolons: bool = False) -> Iterable[_Line]:
    """Yield non-blank statements; optionally split lines on top-level ``;``."""
    byte = 0
    for line_no, raw in enumerate(text.split("\n"), start=1):
        col = 0
        for part in (_split_statements(raw) if split_semicolons else [raw]):
            ln = _Line(part, line_no, byte + len(raw[:col].encode("utf-8")), source)
            if ln.tokens:
                yield _shift(ln, col)
            col += len(part) + 1
        byte += len(raw.encode("utf-8")) + 1


def _split_statements(raw: str) -> list[str]:
    out, cur, depth, quote = [], [], 0, None
    for ch in raw:
        if quote:
            quote = None if ch == quote else quote
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == ";" and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    out.append("".join(cur))
    return out


def _shift(ln: _Line, col: int) -> _Line:
    if col:
        ln.tokens = [Token(t.kind, t.text, t.value,
                           SourceSpan(t.span.line, t.span.column + col, t.span.start, t.span.end))
                     for t in ln.tokens]
    return ln


# ---------------------------------------------------------------- schemas


def parse_schema(text: str, source: str = "<schema>") -> Schema:
    rels: list[RelationDef] = []
    seen: dict[str, SourceSpan] = {}
    for ln in _lines(text, source):
        kw = ln.expect_ident("'relation'")
        if kw.text != "relation":
            raise ln.error(f"expected 'relation', found {kw.text!r}", kw.span)
        name = ln.expect_ident("relation name")
        if name.text in seen:
            raise ln.error(f"duplicate relation {name.text} (first declared at {seen[name.text]})", name.span)
        ln.expect_punct("(")
        attrs = []
        if ln.is_punct(")"):
            raise ln.error(f"relation {name.text} has zero arity", ln.peek().span)
        while True:
            a = ln.expect_ident("attribute name")
            ln.expect_punct(":")
            k = ln.expect_ident("kind (sym or int)")
            if k.text not in KINDS:
                raise ln.error(f"unknown kind {k.text!r}; expected sym or int", k.span)
            if any(a.text == x for x, _ in attrs):
                raise ln.error(f"duplicate attribute {a.text} in {name.text}", a.span)
            attrs.append((a.text, k.text))
            if ln.is_punct(","):
                ln.next()
                continue
            ln.expect_punct(")")
            break
        ln.expect_end()
        seen[name.text] = name.span
        rels.append(RelationDef(name.text, tuple(attrs)))
    return Schema(tuple(rels))


# ---------------------------------------------------------------- terms/atoms

_GROUND = "ground"
_DENIAL = "denial"


def _parse_term(ln: _Line, mode, variables=frozenset()):
    """Return ``(term, span)``. ``mode`` is _GROUND, _DENIAL or a set of query variables."""
    t = ln.next("term")
    if t.kind == "int":
        return Const(t.value), t.span
    if t.kind == "str":
        return Const(t.value), t.span
    if t.kind == "ident":
        if mode == _GROUND:
            return Const(t.text), t.span
        if mode == _DENIAL:
            if _LOWER_IDENT.match(t.text):
                return Var(t.text), t.span
            return Const(t.text), t.span
        if t.text in variables:
            return Var(t.text), t.span
        return Const(t.text), t.span
    raise ln.error(f"expected a term, found {t.text!r}", t.span)


def _parse_atom(ln: _Line, schema: Schema, mode, variables=frozenset()) -> tuple[Atom, SourceSpan]:
    name = ln.expect_ident("relation name")
    if name.text not in schema:
        raise ln.error(f"unknown relation {name.text!r}", name.span)
    rel = schema[name.text]
    ln.expect_punct("(")
    terms, spans = [], []
    if not ln.is_punct(")"):
        while True:
            tm, sp = _parse_term(ln, mode, variables)
            terms.append(tm)
            spans.append(sp)
            if ln.is_punct(","):
                ln.next()
                continue
            break
    close = ln.expect_punct(")")
    span = SourceSpan(name.span.line, name.span.column, name.span.start, close.span.end)
    if len(terms) != rel.arity:
        raise ln.error(f"{rel.name} expects {rel.arity} terms, got {len(terms)}", span)
    coerced = []
    for tm, sp, kind in zip(terms, spans, rel.kinds):
        if isinstance(tm, Const):
            if kind == SYM and isinstance(tm.value, int):
                tm = Const(str(tm.value))
            elif kind == INT and not isinstance(tm.value, int):
                raise ln.error(f"constant {format_value(tm.value)} at integer position of {rel.name}", sp)
        coerced.append(tm)
    return Atom(rel.name, tuple(coerced)), span


def _parse_ground_tuple(ln: _Line, schema: Schema) -> tuple[DbTuple, SourceSpan]:
    atom, span = _parse_atom(ln, schema, _GROUND)
    return atom.ground(), span


_OPS = ("=", "!=", "<", "<=", ">", ">=")


def _parse_comparisons(ln: _Line, mode, variables=frozenset()) -> list[tuple[Comparison, list]]:
    out = []
    while True:
        lhs, lsp = _parse_term(ln, mode, variables)
        op = ln.next("comparison operator")
        if op.kind != "punct" or op.text not in _OPS:
            raise ln.error(f"expected a comparison operator, found {op.text!r}", op.span)
        rhs, rsp = _parse_term(ln, mode, variables)
        out.append((Comparison(lhs, op.text, rhs), [(lhs, lsp), (rhs, rsp)]))
        if ln.is_punct(","):
            ln.next()
            continue
        return out


def _coerce_comparison(ln: _Line, c: Comparison, spans, kinds: Mapping[str, str]) -> Comparison:
    """Symbol-kind variables compared with an integer literal read the literal as a symbol."""
    terms = []
    other = {0: c.rhs, 1: c.lhs}
    for i, (tm, sp) in enumerate(spans):
        o = other[i]
        if isinstance(tm, Const) and isinstance(tm.value, int) and isinstance(o, Var) and kinds.get(o.name) == SYM:
            tm = Const(str(tm.value))
        terms.append(tm)
    return Comparison(terms[0], c.op, terms[1])


# ---------------------------------------------------------------- constraints


def _fd_variables(rel: RelationDef) -> tuple[list[str], list[str]]:
    first = [a.lower() for a in rel.attribute_names]
    second = [f"{v}_2" for v in first]
    names = first + second
    if not all(_LOWER_IDENT.match(v) for v in first) or len(set(names)) != len(names):
        first = [f"a{i}" for i in range(rel.arity)]
        second = [f"b{i}" for i in range(rel.arity)]
    return first, second


def fd_constraints(schema: Schema, relation: str, lhs: Iterable[str], rhs: Iterable[str]) -> list[DenialConstraint]:
    """Expand ``relation: lhs -> rhs`` into one two-atom denial per right-hand attribute."""
    rel = schema[relation]
    lhs_pos = [rel.position(a) for a in lhs]
    out = []
    first, second = _fd_variables(rel)
    for b in rhs:
        bp = rel.position(b)
        if bp in lhs_pos:
            continue
        v1 = [Var(x) for x in first]
        v2 = [Var(first[i]) if i in lhs_pos else Var(second[i]) for i in range(rel.arity)]
        out.append(DenialConstraint(
            (Atom(relation, tuple(v1)), Atom(relation, tuple(v2))),
            (Comparison(Var(first[bp]), "!=", Var(second[bp])),),
        ))
    return out


def parse_constraints(text: str, schema: Schema, source: str = "<constraints>") -> tuple[DenialConstraint, ...]:
    out: list[DenialConstraint] = []
    for ln in _lines(text, source):
        kw = ln.expect_ident("'deny' or 'fd'")
        if kw.text == "fd":
            rname = ln.expect_ident("relation name")
            if rname.text not in schema:
                raise ln.error(f"unknown relation {rname.text!r}", rname.span)
            rel = schema[rname.text]
            ln.expect_punct(":")
            sides: list[list[str]] = [[], []]
            for side in (0, 1):
                while True:
                    a = ln.expect_ident("attribute name")
                    if a.text not in rel.attribute_names:
                        raise ln.error(f"unknown attribute {a.text!r} of {rel.name}", a.span)
                    sides[side].append(a.text)
                    if ln.is_punct(","):
                        ln.next()
                        continue
                    break
                if side == 0:
                    ln.expect_punct("->")
            ln.expect_end()
            out.extend(fd_constraints(schema, rel.name, sides[0], sides[1]))
        elif kw.text == "deny":
            atoms, aspans = [], []
            while True:
                a, sp = _parse_atom(ln, schema, _DENIAL)
                atoms.append(a)
                aspans.append(sp)
                if ln.is_punct(","):
                    ln.next()
                    continue
                break
            comps = []
            if ln.is_ident("where"):
                ln.next()
                comps = _parse_comparisons(ln, _DENIAL)
            ln.expect_end()
            bound = {v for a in atoms for v in a.variables}
            for _, spans in comps:
                for tm, sp in spans:
                    if isinstance(tm, Var) and tm.name not in bound:
                        raise ln.error(f"unsafe variable {tm.name} in where-clause", sp)
            for i, a in enumerate(atoms):
                if a in atoms[:i]:
                    raise ln.error(f"atom {a} repeated", aspans[i])
            try:
                kinds = DenialConstraint(tuple(atoms)).check(schema)
                cs = tuple(_coerce_comparison(ln, c, spans, kinds) for c, spans in comps)
                dc = DenialConstraint(tuple(atoms), cs)
                dc.check(schema)
            except (SchemaError, QueryError) as e:
                raise ln.error(str(e)) from None
            out.append(dc)
        else:
            raise ln.error(f"expected 'deny' or 'fd', found {kw.text!r}", kw.span)
    return tuple(out)


# ---------------------------------------------------------------- queries


def parse_query(text: str, schema: Schema, source: str = "<query>") -> Query:
    lines = list(_lines(text, source))
    if len(lines) != 1:
        span = lines[1].whole if lines else SourceSpan(1, 1, 0, 0)
        raise ParseError("expected exactly one query", span, source)
    ln = lines[0]
    name = ln.expect_ident("query name")
    ln.expect_punct("(")
    head: list[str] = []
    if not ln.is_punct(")"):
        while True:
            v = ln.expect_ident("head variable")
            if not _LOWER_IDENT.match(v.text):
                raise ln.error(f"head variable {v.text!r} must be a lowercase identifier", v.span)
            if v.text in head:
                raise ln.error(f"repeated head variable {v.text}", v.span)
            head.append(v.text)
            if ln.is_punct(","):
                ln.next()
                continue
            break
    ln.expect_punct(")")
    ln.expect_punct(":=")
    declared = set(head)
    if ln.is_ident("exists") and not ln.is_punct("(", 1):
        ln.next()
        while True:
            v = ln.expect_ident("existential variable")
            if not _LOWER_IDENT.match(v.text):
                raise ln.error(f"variable {v.text!r} must be a lowercase identifier", v.span)
            declared.add(v.text)
            if ln.is_punct(",") and ln.is_ident(k=1) and not ln.is_punct("(", 2):
                ln.next()
                continue
            break
        if ln.is_punct(":") or ln.is_punct(".") or ln.is_punct(","):
            ln.next()
    literals = []
    while True:
        positive = True
        if ln.is_ident("not") and not ln.is_punct("(", 1):
            ln.next()
            positive = False
        a, _ = _parse_atom(ln, schema, "query", frozenset(declared))
        literals.append(Literal(a, positive))
        if ln.is_punct(","):
            ln.next()
            continue
        break
    comps = []
    if ln.is_ident("where"):
        ln.next()
        comps = _parse_comparisons(ln, "query", frozenset(declared))
    ln.expect_end()
    try:
        q0 = Query(tuple(head), tuple(literals), (), name.text)
        kinds = q0.check(schema)
        q = Query(tuple(head), tuple(literals),
                  tuple(_coerce_comparison(ln, c, spans, kinds) for c, spans in comps), name.text)
        q.check(schema)
    except (SchemaError, QueryError) as e:
        raise ln.error(str(e)) from None
    return q


# ---------------------------------------------------------------- ground data


def parse_updates(text: str, schema: Schema, source: str = "<updates>") -> UpdateSequence:
    ops = []
    for ln in _lines(text, source):
        kw = ln.expect_ident("'insert', 'delete' or 'change'")
        if kw.text not in ("insert", "delete", "change"):
            raise ln.error(f"unknown update {kw.text!r}", kw.span)
        t, _ = _parse_ground_tuple(ln, schema)
        if kw.text == "change":
            a = ln.expect_ident("attribute name")
            rel = schema[t.relation]
            if a.text not in rel.attribute_names:
                raise ln.error(f"unknown attribute {a.text!r} of {rel.name}", a.span)
            ln.expect_punct("=")
            vt = ln.next("value")
            kind = rel.kinds[rel.position(a.text)]
            val = _ground_value(ln, vt, kind)
            ops.append(UpdateOp("change", t, a.text, val))
        else:
            ops.append(UpdateOp(kw.text, t))
        ln.expect_end()
    return UpdateSequence(tuple(ops))


def _ground_value(ln: _Line, tok: Token, kind: str):
    if tok.kind == "int":
        return tok.value if kind == INT else str(tok.value)
    if tok.kind in ("ident", "str"):
        if kind == INT:
            raise ln.error(f"expected an integer, found {tok.text!r}", tok.span)
        return tok.value
    raise ln.error(f"expected a value, found {tok.text!r}", tok.span)


def parse_facts(text: str, schema: Schema, source: str = "<facts>") -> DatabaseInstance:
    tuples = set()
    for ln in _lines(text, source):
        t, _ = _parse_ground_tuple(ln, schema)
        ln.expect_end()
        tuples.add(t)
    return DatabaseInstance(schema, frozenset(tuples))


def parse_weights(text: str, schema: Schema, source: str = "<weights>") -> dict[DbTuple, int]:
    out: dict[DbTuple, int] = {}
    for ln in _lines(text, source):
        kw = ln.expect_ident("'weight'")
        if kw.text != "weight":
            raise ln.error(f"expected 'weight', found {kw.text!r}", kw.span)
        t, _ = _parse_ground_tuple(ln, schema)
        ln.expect_punct("=")
        w = ln.next("weight")
        if w.kind != "int" or w.value <= 0:
            raise ln.error("weights must be positive integers", w.span)
        ln.expect_end()
        out[t] = w.value
    return out


def parse_aspec(text: str, schema: Schema, source: str = "<aspec>") -> ASpec:
    fixable: list[tuple[str, str]] = []
    cands: dict[tuple[str, str], list] = {}
    rule = "unit"
    last = SourceSpan(1, 1, 0, 0)

    def qualified(ln: _Line):
        r = ln.expect_ident("relation name")
        if r.text not in schema:
            raise ln.error(f"unknown relation {r.text!r}", r.span)
        ln.expect_punct(".")
        a = ln.expect_ident("attribute name")
        rel = schema[r.text]
        if a.text not in rel.attribute_names:
            raise ln.error(f"unknown attribute {a.text!r} of {rel.name}", a.span)
        return (rel.name, a.text), rel.kinds[rel.position(a.text)]

    for ln in _lines(text, source, split_semicolons=True):
        last = ln.whole
        kw = ln.expect_ident("'fixable', 'candidates' or 'rule'")
        if kw.text == "fixable":
            while True:
                key, _ = qualified(ln)
                if key not in fixable:
                    fixable.append(key)
                if ln.is_punct(","):
                    ln.next()
                    continue
                break
        elif kw.text == "candidates":
            key, kind = qualified(ln)
            ln.expect_punct("=")
            ln.expect_punct("{")
            vals = []
            while not ln.is_punct("}"):
                tok = ln.next("value")
                if tok.kind == "int" and ln.is_punct(".."):
                    ln.next()
                    hi = ln.next("range end")
                    if hi.kind != "int" or kind != INT:
                        raise ln.error("ranges need integer bounds on an integer attribute", hi.span)
                    vals.extend(range(tok.value, hi.value + 1))
                else:
                    vals.append(_ground_value(ln, tok, kind))
                if not ln.is_punct("}"):
                    ln.expect_punct(",")
            ln.expect_punct("}")
            cands.setdefault(key, []).extend(vals)
        elif kw.text == "rule":
            ln.expect_punct("=")
            r = ln.expect_ident("'unit' or 'squared'")
            if r.text not in ("unit", "squared"):
                raise ln.error(f"unknown rule {r.text!r}", r.span)
            rule = r.text
        else:
            raise ln.error(f"unknown statement {kw.text!r}", kw.span)
        ln.expect_end()
    try:
        spec = ASpec(tuple(fixable), {k: tuple(v) for k, v in cands.items()}, rule)
        spec.check(schema)
    except SchemaError as e:
        raise ParseError(str(e), last, source) from None
    return spec


# ---------------------------------------------------------------- CSV instances


def parse_csv(text: str, rel: RelationDef, source: str = "<csv>") -> set[DbTuple]:
    """Rows of one relation; no header, columns in schema order."""
    line_starts = [0]
    for line in text.split("\n"):
        line_starts.append(line_starts[-1] + len(line.encode("utf-8")) + 1)
    out = set()
    reader = csv.reader(io.StringIO(text, newline=""))
    prev_line = 0
    for row in reader:
        row_line = prev_line + 1
        prev_line = reader.line_num
        if not row or row == [""]:
            continue
        span = SourceSpan(row_line, 1, line_starts[row_line - 1], line_starts[row_line] - 1)
        if len(row) != rel.arity:
            raise ParseError(f"row {row_line}: expected {rel.arity} columns for {rel.name}, got {len(row)}",
                             span, source)
        vals = []
        for cell, kind in zip(row, rel.kinds):
            if kind == INT:
                try:
                    vals.append(int(cell.strip()))
                except ValueError:
                    raise ParseError(f"row {row_line}: {cell!r} is not an integer", span, source) from None
            else:
                vals.append(cell)
        out.add(DbTuple(rel.name, tuple(vals)))
    return out


def parse_instance(path: str | Path, schema: Schema) -> DatabaseInstance:
    """Load an instance from a directory of ``<Relation>.csv`` files or a facts file."""
    p = Path(path)
    if p.is_dir():
        tuples = set()
        for rel in schema:
            f = p / f"{rel.name}.csv"
            if f.exists():
                tuples |= parse_csv(f.read_text(encoding="utf-8"), rel, str(f))
        return DatabaseInstance(schema, frozenset(tuples))
    return parse_facts(p.read_text(encoding="utf-8"), schema, str(p))


# ---------------------------------------------------------------- printers


def format_schema(schema: Schema) -> str:
    return "".join(f"{r}\n" for r in schema)


def format_constraints(ic: Iterable[DenialConstraint]) -> str:
    return "".join(f"{c}\n" for c in ic)


def format_query(q: Query) -> str:
    return f"{q}\n"


def format_updates(u: UpdateSequence) -> str:
    return "".join(f"{op}\n" for op in u)


def format_facts(instance: DatabaseInstance) -> str:
    return "".join(f"{t}\n" for t in instance)


def format_weights(weights: Mapping[DbTuple, int]) -> str:
    return "".join(f"weight {t} = {w}\n" for t, w in sorted(weights.items(), key=lambda kv: kv[0].key()))


def format_aspec(spec: ASpec) -> str:
    lines = ["fixable " + ", ".join(f"{r}.{a}" for r, a in spec.fixable)] if spec.fixable else []
    for (r, a), vs in spec.candidates:
        lines.append(f"candidates {r}.{a} = {{{', '.join(format_value(v) for v in vs)}}}")
    lines.append(f"rule = {spec.rule}")
    return "".join(f"{l}\n" for l in lines)


def format_csv(instance: DatabaseInstance, relation: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for t in instance.relation(relation):
        w.writerow(t.values)
    return buf.getvalue()


def write_csv_dir(instance: DatabaseInstance, directory: str | Path) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for rel in instance.schema:
        (d / f"{rel.name}.csv").write_text(format_csv(instance, rel.name), encoding="utf-8")
