"""Reading germ documents.

Line format (``#`` starts a comment)::

    vars: t1, t2
    order: 12            # optional truncation order
    base: 0, 0           # optional base point, translated to the origin
    label: swallowtail   # any other "key: value" line is kept as metadata
    f: t1
    f: t2^3 + t1*t2
    f: 3/4*t2^4 + 1/2*t1*t2^2

The same content as JSON: ``{"vars": [...], "components": [...], "order": 12,
"base": [...], "metadata": {...}}``.  A JSON report produced by the CLI is
also accepted; its echoed ``input`` is used.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from .errors import FrontalRecError
from .germs import JetMap
from .jets import DEFAULT_ORDER, Jet


class ParseError(FrontalRecError, ValueError):
    """Syntax or scope error, with 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class GermDocument:
    vars: list
    components: list
    order: Optional[int] = None
    base: Optional[list] = None
    metadata: dict = field(default_factory=dict)
    lines: list = field(default_factory=list, repr=False)  # source line of each component

    def to_json(self) -> dict:
        out = {"vars": list(self.vars), "components": list(self.components)}
        if self.order is not None:
            out["order"] = self.order
        if self.base is not None:
            out["base"] = [str(mpq(b)) for b in self.base]
        if self.metadata:
            out["metadata"] = dict(self.metadata)
        return out

    def to_jetmap(self, order: int | None = None) -> JetMap:
        return document_to_jetmap(self, order)


# -- expressions --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text, line=None):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", line, pos + stripped + 1)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    """Recursive descent over +, -, *, /, ^ producing dict polynomials."""

    def __init__(self, text, names, line=None, offset=0):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}
        self.nvars = len(names)
        self.line = line
        self.offset = offset

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, self.offset + tok[2] + 1)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = _padd(p, q if op == "+" else _pscale(q, -1))
        return p

    def term(self):
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = _pmul(p, q)
            else:
                c = _constant(q)
                if c is None:
                    self.error("division by a non-constant expression", tok)
                if c == 0:
                    self.error("division by zero", tok)
                p = _pscale(p, 1 / mpq(c))
        return p

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return _pscale(self.unary(), -1)
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer", tok)
            if self.peek()[:2] == ("op", "^"):
                self.error("chained exponents are not allowed")
            out = {(0,) * self.nvars: mpq(1)}
            for _ in range(tok[1]):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return {(0,) * self.nvars: mpq(val)} if val else {}
        if kind == "name":
            if val not in self.names:
                self.error(f"unknown variable {val!r}", tok)
            e = [0] * self.nvars
            e[self.names[val]] = 1
            return {tuple(e): mpq(1)}
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return p
        self.error("expected a number, a variable or '('", tok)


def _padd(p, q):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pscale(p, c):
    return {e: v * c for e, v in p.items()} if c else {}


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _constant(p):
    if not p:
        return mpq(0)
    if len(p) == 1:
        (e, c), = p.items()
        if not any(e):
            return c
    return None


def parse_polynomial(text, names, line=None, offset=0) -> dict:
    """Exact polynomial ``exponent tuple -> mpq`` over the given variable names."""
    return _Parser(text, names, line, offset).parse()


# -- documents ----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def parse_document(text: str) -> GermDocument:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return document_from_json(data)
    vars_ = None
    comps, lines = [], []
    order = base = None
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, value = line.split(":", 1)
        offset = len(key) + 1
        key = key.strip().lower()
        if key == "vars":
            vars_ = _parse_vars(value, lineno)
        elif key in ("f", "comp", "component"):
            comps.append(value.strip())
            lines.append((lineno, offset + len(value) - len(value.lstrip())))
        elif key == "order":
            order = _parse_int(value, lineno)
        elif key == "base":
            base = [_parse_rational(v, lineno) for v in value.split(",")]
        else:
            meta[key] = value.strip()
    if vars_ is None:
        raise ParseError("missing 'vars:' line")
    if not comps:
        raise ParseError("no components ('f:' lines)")
    doc = GermDocument(vars_, comps, order, base, meta, lines)
    _check(doc)
    return doc


def document_from_json(data) -> GermDocument:
    if isinstance(data, dict) and "input" in data and "components" not in data:
        data = data["input"]
    if not isinstance(data, dict):
        raise ParseError("JSON document must be an object")
    try:
        vars_ = [str(v) for v in data["vars"]]
        comps = [str(c) for c in data["components"]]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from None
    for v in vars_:
        if not _NAME.match(v):
            raise ParseError(f"bad variable name {v!r}")
    order = data.get("order")
    if order is not None and (not isinstance(order, int) or order < 1):
        raise ParseError("order must be a positive integer")
    base = data.get("base")
    if base is not None:
        base = [_parse_rational(str(b), None) for b in base]
    doc = GermDocument(vars_, comps, order, base, dict(data.get("metadata") or {}))
    _check(doc)
    return doc


def _check(doc):
    if len(set(doc.vars)) != len(doc.vars) or not doc.vars:
        raise ParseError("variable names must be distinct and non-empty")
    if doc.base is not None and len(doc.base) != len(doc.vars):
        raise ParseError(f"base point has {len(doc.base)} coordinates, expected {len(doc.vars)}")
    if len(doc.components) < len(doc.vars):
        raise ParseError("need at least as many components as variables")
    for k, c in enumerate(doc.components):
        line, offset = doc.lines[k] if doc.lines else (None, 0)
        parse_polynomial(c, doc.vars, line, offset)


def _parse_vars(value, lineno):
    names = [v.strip() for v in value.split(",")]
    for v in names:
        if not _NAME.match(v):
            raise ParseError(f"bad variable name {v!r}", lineno)
    return names


def _parse_int(value, lineno):
    try:
        k = int(value.strip())
    except ValueError:
        raise ParseError(f"expected an integer, got {value.strip()!r}", lineno) from None
    if k < 1:
        raise ParseError("order must be positive", lineno)
    return k


def _parse_rational(value, lineno):
    try:
        return mpq(value.strip())
    except ValueError:
        raise ParseError(f"expected a rational number, got {value.strip()!r}", lineno) from None


def _translate(p, base):
    """p(base + t) as a polynomial in t."""
    n = len(base)
    out = {}
    for e, c in p.items():
        term = {(0,) * n: c}
        for i, k in enumerate(e):
            lin = {tuple(1 if j == i else 0 for j in range(n)): mpq(1)}
            if base[i]:
                lin[(0,) * n] = mpq(base[i])
            for _ in range(k):
                term = _pmul(term, lin)
        out = _padd(out, term)
    return out


def document_to_jetmap(doc: GermDocument, order: int | None = None) -> JetMap:
    """Jets of the components at the origin (after translating the base point)."""
    N = order or doc.order or DEFAULT_ORDER
    n = len(doc.vars)
    comps = []
    for k, text in enumerate(doc.components):
        line, offset = doc.lines[k] if doc.lines else (None, 0)
        p = parse_polynomial(text, doc.vars, line, offset)
        if doc.base is not None:
            p = _translate(p, doc.base)
            p.pop((0,) * n, None)
        elif p.get((0,) * n):
            raise ParseError(f"component {k + 1} has a nonzero constant term and no base point is given",
                             line)
        comps.append(Jet(n, N, p))
    return JetMap(comps)


def parse_germ(text: str, order: int | None = None) -> JetMap:
    return parse_document(text).to_jetmap(order)


def format_jetmap(f: JetMap, names=None) -> list:
    """Components as strings in the document syntax."""
    names = names or [f"t{i + 1}" for i in range(f.n)]
    return [c.to_str(names) for c in f]
