"""Model DSL: tokenizer, parser and canonical printer.

Grammar (whitespace-insensitive, ``#`` comments)::

    manifold NAME dim N coords ID+
    KIND NAME on CHART { [i,j,...] = expr ; ... }

    KIND  := function | vector | bivector | multivector(k) | oneform
           | symtensor(k) | linconn | nonlinconn | metric | volume
    CHART := NAME | T NAME

Indices are 1-based.  Skew kinds take each unordered index set once (either
order, the sign follows the permutation); symmetric kinds take sorted keys only.
"""

import re
from dataclasses import dataclass, field
from itertools import count

from ..geometry import (
    Chart,
    LinearConnection,
    Metric,
    Multivector,
    NonlinearConnection,
    OneForm,
    SymCovariant,
    VolumeForm,
    sort_sign,
)
from ..ring import RatFunc


class ParseError(Exception):
    """DSL diagnostic; ``code`` distinguishes syntax, unknown-name, range and duplicate errors."""

    def __init__(self, code, message, line=None, col=None):
        self.code = code
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(f"{where}{code}: {message}")


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[\[\]{}(),;=+\-*/^:])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("syntax", f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


KINDS = ("function", "vector", "bivector", "multivector", "oneform", "symtensor",
         "linconn", "nonlinconn", "metric", "volume")


@dataclass
class Entry:
    name: str
    kind: str
    chart_name: str
    obj: object
    degree: int = None


@dataclass
class Model:
    """Charts and named objects in definition order."""

    charts: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)

    def add_manifold(self, chart):
        if chart.name in self.charts:
            raise ParseError("duplicate", f"manifold {chart.name!r} already defined")
        self.charts[chart.name] = chart

    def chart(self, name, tangent=False):
        c = self.charts.get(name)
        if c is None:
            raise ParseError("unknown-name", f"unknown manifold {name!r}")
        return c.tangent if tangent else c

    def add(self, name, kind, obj, degree=None):
        if name in self.objects or name in self.charts:
            raise ParseError("duplicate", f"name {name!r} already defined")
        chart = obj.chart
        cname = f"T {chart.base.name}" if chart.is_tangent else chart.name
        self.objects[name] = Entry(name, kind, cname, obj, degree)
        return self.objects[name]

    def get(self, name):
        e = self.objects.get(name)
        if e is None:
            raise ParseError("unknown-name", f"unknown object {name!r}")
        return e

    def last(self, kinds):
        for e in reversed(list(self.objects.values())):
            if e.kind in kinds:
                return e
        raise ParseError("unknown-name", f"no object of kind {'/'.join(kinds)} in the model")

    def fresh(self, base):
        if base not in self.objects and base not in self.charts:
            return base
        for i in count(2):
            cand = f"{base}{i}"
            if cand not in self.objects and cand not in self.charts:
                return cand


# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def err(self, code, msg, tok=None):
        t = tok or self.tok
        return ParseError(code, msg, t.line, t.col)

    def next(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind, text=None):
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "eof" else "end of input"
            raise self.err("syntax", f"expected {want}, got {got}")
        return self.next()

    def accept(self, text):
        if self.tok.kind == "sym" and self.tok.text == text:
            return self.next()
        return None

    # -- expressions --------------------------------------------------------
    def expr(self, chart):
        v = self.term(chart)
        while self.tok.kind == "sym" and self.tok.text in "+-":
            op = self.next().text
            r = self.term(chart)
            v = v + r if op == "+" else v - r
        return v

    def term(self, chart):
        v = self.unary(chart)
        while self.tok.kind == "sym" and self.tok.text in "*/":
            t = self.next()
            r = self.unary(chart)
            if t.text == "*":
                v = v * r
            else:
                if r.is_zero():
                    raise self.err("syntax", "division by zero", t)
                v = v / r
        return v

    def unary(self, chart):
        if self.accept("-"):
            return -self.unary(chart)
        if self.accept("+"):
            return self.unary(chart)
        return self.power(chart)

    def power(self, chart):
        base = self.atom(chart)
        if self.accept("^"):
            neg = bool(self.accept("-"))
            t = self.expect("num")
            e = int(t.text)
            if neg:
                if base.is_zero():
                    raise self.err("syntax", "division by zero", t)
                e = -e
            return base ** e
        return base

    def atom(self, chart):
        t = self.tok
        if t.kind == "num":
            self.next()
            return RatFunc.const(chart.coords, int(t.text))
        if t.kind == "id":
            self.next()
            if t.text not in chart.coords:
                raise self.err("unknown-name",
                               f"unknown identifier {t.text!r} on chart {chart.name}", t)
            return RatFunc.var(chart.coords, chart.coords.index(t.text))
        if self.accept("("):
            v = self.expr(chart)
            self.expect("sym", ")")
            return v
        got = repr(t.text) if t.kind != "eof" else "end of input"
        raise self.err("syntax", f"expected an expression, got {got}")

    # -- statements ---------------------------------------------------------
    def model(self):
        m = Model()
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "id":
                raise self.err("syntax", f"expected a declaration, got {t.text!r}")
            if t.text == "manifold":
                self.manifold(m)
            elif t.text in KINDS:
                self.object(m)
            else:
                raise self.err("syntax", f"unknown declaration {t.text!r}")
        return m

    def manifold(self, m):
        self.expect("id", "manifold")
        name_t = self.expect("id")
        self.expect("id", "dim")
        dim_t = self.expect("num")
        dim = int(dim_t.text)
        if dim < 1:
            raise self.err("range", "dimension must be positive", dim_t)
        self.expect("id", "coords")
        coords = []
        while self.tok.kind == "id" and self.tok.text not in KINDS and self.tok.text != "manifold":
            coords.append(self.next())
            if len(coords) == dim:
                break
        if len(coords) != dim:
            raise self.err("syntax", f"manifold {name_t.text} needs {dim} coordinate names")
        names = [c.text for c in coords]
        for c in coords:
            if names.count(c.text) > 1:
                raise self.err("duplicate", f"coordinate {c.text!r} repeated", c)
        if name_t.text in m.charts or name_t.text in m.objects:
            raise self.err("duplicate", f"name {name_t.text!r} already defined", name_t)
        m.add_manifold(Chart(name_t.text, tuple(names)))

    def object(self, m):
        kind_t = self.next()
        kind = kind_t.text
        degree = None
        if kind in ("multivector", "symtensor"):
            self.expect("sym", "(")
            degree = int(self.expect("num").text)
            self.expect("sym", ")")
        name_t = self.expect("id")
        if name_t.text in m.objects or name_t.text in m.charts:
            raise self.err("duplicate", f"name {name_t.text!r} already defined", name_t)
        self.expect("id", "on")
        ct = self.expect("id")
        tangent = False
        if ct.text == "T" and self.tok.kind == "id" and self.tok.text != "{":
            tangent = True
            ct = self.expect("id")
        if ct.text not in m.charts:
            raise self.err("unknown-name", f"unknown manifold {ct.text!r}", ct)
        chart = m.chart(ct.text, tangent)
        entries = self.block(chart)
        obj, degree = _build(kind, degree, chart, entries, self, kind_t)
        m.add(name_t.text, kind, obj, degree)

    def block(self, chart):
        self.expect("sym", "{")
        entries = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.err("syntax", "unterminated block")
            if self.accept(";"):
                continue
            open_t = self.expect("sym", "[")
            idx = []
            if not self.accept("]"):
                while True:
                    t = self.expect("num")
                    idx.append((int(t.text), t))
                    if self.accept("]"):
                        break
                    self.expect("sym", ",")
            self.expect("sym", "=")
            val = self.expr(chart)
            entries.append((idx, val, open_t))
            if not self.accept(";"):
                if not (self.tok.kind == "sym" and self.tok.text == "}"):
                    raise self.err("syntax", "expected ';' or '}'")
        return entries


def _build(kind, degree, chart, entries, p, kind_t):
    m = chart.arity
    n = chart.n

    def zero_based(idx, bound):
        out = []
        for v, t in idx:
            if not 1 <= v <= bound:
                raise p.err("range", f"index {v} out of range 1..{bound}", t)
            out.append(v - 1)
        return tuple(out)

    def want_len(idx, k, t):
        if len(idx) != k:
            raise p.err("syntax", f"{kind} entries take {k} indices", t)

    seen = set()

    def once(key, t):
        if key in seen:
            raise p.err("duplicate", f"entry {[i + 1 for i in key]} given twice", t)
        seen.add(key)

    if kind in ("function", "volume"):
        total = chart.zero()
        for idx, val, t in entries:
            want_len(idx, 0, t)
            once((), t)
            total = val
        if kind == "function":
            return Multivector.function(chart, total), 0
        if total.is_zero():
            raise p.err("range", "volume density must be nonzero", kind_t)
        return VolumeForm(chart, total), None

    if kind in ("vector", "bivector", "multivector"):
        k = {"vector": 1, "bivector": 2}.get(kind, degree)
        if k is None or k < 0 or k > m:
            raise p.err("range", f"degree {k} not in 0..{m}", kind_t)
        comps = {}
        for idx, val, t in entries:
            want_len(idx, k, t)
            key = zero_based(idx, m)
            sign, skey = sort_sign(key)
            if not sign:
                raise p.err("range", f"repeated index in skew entry {[i + 1 for i in key]}", t)
            once(skey, t)
            comps[skey] = val if sign > 0 else -val
        return Multivector(chart, k, comps), k

    if kind == "oneform":
        comps = [chart.zero()] * m
        for idx, val, t in entries:
            want_len(idx, 1, t)
            key = zero_based(idx, m)
            once(key, t)
            comps[key[0]] = val
        return OneForm(chart, comps), 1

    if kind in ("symtensor", "metric"):
        k = 2 if kind == "metric" else degree
        comps = {}
        for idx, val, t in entries:
            want_len(idx, k, t)
            key = zero_based(idx, m)
            if list(key) != sorted(key):
                raise p.err("range", f"symmetric entries use sorted indices, got {[i + 1 for i in key]}", t)
            once(key, t)
            comps[key] = val
        if kind == "metric":
            if chart.is_tangent:
                raise p.err("range", "metrics live on base manifolds", kind_t)
            try:
                return Metric(chart, comps), 2
            except ValueError:
                raise p.err("range", "degenerate metric", kind_t) from None
        return SymCovariant(chart, k, comps), k

    if kind == "linconn":
        if chart.is_tangent:
            raise p.err("range", "linear connections live on base manifolds", kind_t)
        gamma = {}
        for idx, val, t in entries:
            want_len(idx, 3, t)
            key = zero_based(idx, m)
            once(key, t)
            gamma[key] = val
        return LinearConnection(chart, gamma), None

    if kind == "nonlinconn":
        if not chart.is_tangent:
            raise p.err("range", "nonlinear connections live on T M", kind_t)
        gamma = {}
        for idx, val, t in entries:
            want_len(idx, 2, t)
            key = zero_based(idx, n)
            once(key, t)
            gamma[key] = val
        return NonlinearConnection(chart, gamma), None

    raise p.err("syntax", f"unknown kind {kind}", kind_t)


def parse_model(text):
    """Parse DSL text into a Model (raises ParseError with line/column)."""
    return _Parser(text).model()


def parse_expr(chart, text):
    p = _Parser(text)
    v = p.expr(chart)
    if p.tok.kind != "eof":
        raise p.err("syntax", f"trailing input {p.tok.text!r}")
    return v


# ---------------------------------------------------------------------------
# printing

def _idx(key):
    return "[" + ",".join(str(i + 1) for i in key) + "]"


def object_entries(entry):
    """(index tuple, RatFunc) pairs of an object in canonical order (0-based keys)."""
    obj = entry.obj
    k = entry.kind
    if k == "function":
        return [((), obj.scalar)] if not obj.is_zero() else []
    if k == "volume":
        return [((), obj.density)]
    if k in ("vector", "bivector", "multivector", "symtensor"):
        return obj.items()
    if k == "oneform":
        return [((i,), v) for i, v in enumerate(obj.comps) if not v.is_zero()]
    if k == "metric":
        return sorted(obj.comps.items())
    if k in ("linconn", "nonlinconn"):
        return sorted(obj.gamma.items())
    raise ValueError(k)


def format_entry(entry):
    head = entry.kind
    if entry.kind in ("multivector", "symtensor"):
        head = f"{entry.kind}({entry.degree})"
    lines = [f"{head} {entry.name} on {entry.chart_name} {{"]
    for key, v in object_entries(entry):
        lines.append(f"  {_idx(key)} = {v};")
    lines.append("}")
    return "\n".join(lines)


def format_model(model):
    out = []
    for c in model.charts.values():
        out.append(f"manifold {c.name} dim {c.arity} coords {' '.join(c.coords)}")
    for e in model.objects.values():
        out.append(format_entry(e))
    return "\n".join(out) + "\n"


def model_to_json(model):
    return {
        "manifolds": [{"name": c.name, "coords": list(c.coords)} for c in model.charts.values()],
        "objects": [
            {"name": e.name, "kind": e.kind, "degree": e.degree, "chart": e.chart_name,
             "components": {",".join(str(i + 1) for i in key): str(v)
                            for key, v in object_entries(e)}}
            for e in model.objects.values()
        ],
    }


def kind_of(obj):
    """DSL kind and degree for a computed object."""
    if isinstance(obj, Multivector):
        return {0: "function", 1: "vector", 2: "bivector"}.get(obj.degree, "multivector"), obj.degree
    if isinstance(obj, SymCovariant):
        if obj.degree == 1:
            return "oneform", 1
        return "symtensor", obj.degree
    if isinstance(obj, OneForm):
        return "oneform", 1
    if isinstance(obj, VolumeForm):
        return "volume", None
    if isinstance(obj, LinearConnection):
        return "linconn", None
    if isinstance(obj, NonlinearConnection):
        return "nonlinconn", None
    if isinstance(obj, Metric):
        return "metric", 2
    raise TypeError(type(obj).__name__)


__all__ = ["Model", "ParseError", "parse_model", "parse_expr", "format_model", "kind_of",
           "model_to_json"]
