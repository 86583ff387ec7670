"""Reader and writer for ``.endo`` network files.

One statement per line, ``#`` starts a comment::

    node <id> [intuition <b> <c>] [threshold <T>] [label "<text>"]
    support <src> -> <dst> <s>
    meta <endorser> -> (<src> -> <dst>) <t>
    xor <dst> { <id>, <id> ... } [inhibition <l>] [metric belief|combined]

Ids may be referenced before their ``node`` line.  Parsing never stops at
the first problem; every diagnostic carries a line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from .errors import DuplicateEdge, NetworkError, UnknownEdge
from .model import (
    DEFAULT_INHIBITION,
    DEFAULT_THRESHOLD,
    NODE_ID_RE,
    Network,
    WinnerMetric,
    validate,
)

NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
WORD_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.+-")
PUNCT = {"(": "LPAREN", ")": "RPAREN", "{": "LBRACE", "}": "RBRACE", ",": "COMMA"}
ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
# any other code point is written \u{hex}
CODEPOINT_RE = re.compile(r"u\{([0-9a-fA-F]{1,6})\}")


@dataclass(frozen=True, order=True)
class SourceSpan:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    span: SourceSpan
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.span}: {self.kind}: {self.message}"


class ParseError(NetworkError):
    def __init__(self, diagnostics: list[Diagnostic], source: str = "<text>"):
        self.diagnostics = diagnostics
        self.source = source
        super().__init__(f"{len(diagnostics)} problem(s) in {source}")

    def render(self) -> str:
        return "\n".join(f"{self.source}:{d}" for d in self.diagnostics)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


class _Syntax(Exception):
    def __init__(self, span: SourceSpan, message: str):
        self.span = span
        self.message = message


def tokenize_line(raw: str, line_no: int) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(raw)
    while i < n:
        ch = raw[i]
        span = SourceSpan(line_no, i + 1)
        if ch.isspace():
            i += 1
        elif ch == "#":
            break
        elif ch == "-" and raw.startswith("->", i):
            out.append(Token("ARROW", "->", span))
            i += 2
        elif ch in PUNCT:
            out.append(Token(PUNCT[ch], ch, span))
            i += 1
        elif ch == '"':
            i += 1
            buf = []
            while True:
                if i >= n:
                    raise _Syntax(span, "unterminated string")
                c = raw[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\":
                    point = CODEPOINT_RE.match(raw, i + 1)
                    if point and int(point.group(1), 16) <= 0x10FFFF:
                        buf.append(chr(int(point.group(1), 16)))
                        i = point.end()
                        continue
                    if i + 1 >= n or raw[i + 1] not in ESCAPES:
                        raise _Syntax(SourceSpan(line_no, i + 1), "bad escape in string")
                    buf.append(ESCAPES[raw[i + 1]])
                    i += 2
                else:
                    buf.append(c)
                    i += 1
            out.append(Token("STRING", "".join(buf), span))
        elif ch in WORD_CHARS:
            j = i
            while j < n and raw[j] in WORD_CHARS and not raw.startswith("->", j):
                j += 1
            out.append(Token("WORD", raw[i:j], span))
            i = j
        else:
            raise _Syntax(span, f"unexpected character {ch!r}")
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], line_no: int, line_len: int):
        self.tokens = tokens
        self.pos = 0
        self.eol = SourceSpan(line_no, line_len + 1)

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise _Syntax(self.eol, f"expected {what}, found end of line")
        if tok.kind != kind:
            raise _Syntax(tok.span, f"expected {what}, found {tok.text!r}")
        self.pos += 1
        return tok

    def ident(self) -> Token:
        tok = self.next("WORD", "identifier")
        if not NODE_ID_RE.match(tok.text):
            raise _Syntax(tok.span, f"invalid identifier {tok.text!r}")
        return tok

    def number(self) -> tuple[float, Token]:
        tok = self.next("WORD", "number")
        if not NUMBER_RE.match(tok.text):
            raise _Syntax(tok.span, f"expected number, found {tok.text!r}")
        return float(tok.text), tok

    def done(self) -> bool:
        return self.pos >= len(self.tokens)


@dataclass
class _NodeDecl:
    id: Token
    intuition: Optional[tuple[float, float]] = None
    threshold: float = DEFAULT_THRESHOLD
    label: Optional[str] = None


@dataclass
class _Support:
    src: Token
    dst: Token
    strength: float
    num: Token


@dataclass
class _Meta:
    endorser: Token
    src: Token
    dst: Token
    strength: float
    num: Token


@dataclass
class _Xor:
    target: Token
    members: list[Token]
    inhibition: float = DEFAULT_INHIBITION
    metric: str = "belief"
    inhibition_tok: Optional[Token] = None


@dataclass
class _Statements:
    nodes: list[_NodeDecl] = field(default_factory=list)
    supports: list[_Support] = field(default_factory=list)
    metas: list[_Meta] = field(default_factory=list)
    xors: list[_Xor] = field(default_factory=list)


def _range(value: float, tok: Token, lo: float, hi: float, what: str, diags: list[Diagnostic]) -> bool:
    if lo <= value <= hi:
        return True
    diags.append(Diagnostic(tok.span, "range", f"{what} {tok.text} outside [{lo:g}, {hi:g}]"))
    return False


def _statement(cur: _Cursor, keyword: Token, stmts: _Statements, diags: list[Diagnostic]) -> None:
    kw = keyword.text
    if kw == "node":
        decl = _NodeDecl(cur.ident())
        seen: set[str] = set()
        while not cur.done():
            opt = cur.next("WORD", "node option")
            if opt.text in seen:
                raise _Syntax(opt.span, f"repeated option {opt.text!r}")
            seen.add(opt.text)
            if opt.text == "intuition":
                b, btok = cur.number()
                c, ctok = cur.number()
                ok = _range(b, btok, -1, 1, "intuition belief", diags)
                ok &= _range(c, ctok, 0, 1, "intuition certainty", diags)
                decl.intuition = (b, c) if ok else (0.0, 0.0)
            elif opt.text == "threshold":
                t, ttok = cur.number()
                if _range(t, ttok, 0, 2, "threshold", diags):
                    decl.threshold = t
            elif opt.text == "label":
                decl.label = cur.next("STRING", "quoted label").text
            else:
                raise _Syntax(opt.span, f"unknown node option {opt.text!r}")
        stmts.nodes.append(decl)
    elif kw == "support":
        src = cur.ident()
        cur.next("ARROW", "'->'")
        dst = cur.ident()
        s, stok = cur.number()
        if s == 0:
            diags.append(Diagnostic(stok.span, "range", "support strength must be nonzero"))
        elif _range(s, stok, -1, 1, "support strength", diags):
            stmts.supports.append(_Support(src, dst, s, stok))
    elif kw == "meta":
        endorser = cur.ident()
        cur.next("ARROW", "'->'")
        cur.next("LPAREN", "'('")
        src = cur.ident()
        cur.next("ARROW", "'->'")
        dst = cur.ident()
        cur.next("RPAREN", "')'")
        t, ttok = cur.number()
        if t == 0:
            diags.append(Diagnostic(ttok.span, "range", "meta strength must be nonzero"))
        elif _range(t, ttok, -1, 1, "meta strength", diags):
            stmts.metas.append(_Meta(endorser, src, dst, t, ttok))
    elif kw == "xor":
        target = cur.ident()
        cur.next("LBRACE", "'{'")
        members = [cur.ident()]
        while True:
            tok = cur.peek()
            if tok is not None and tok.kind == "COMMA":
                cur.pos += 1
                members.append(cur.ident())
            else:
                cur.next("RBRACE", "',' or '}'")
                break
        x = _Xor(target, members)
        seen = set()
        while not cur.done():
            opt = cur.next("WORD", "xor option")
            if opt.text in seen:
                raise _Syntax(opt.span, f"repeated option {opt.text!r}")
            seen.add(opt.text)
            if opt.text == "inhibition":
                lam, ltok = cur.number()
                x.inhibition_tok = ltok
                if _range(lam, ltok, 0, 1, "inhibition", diags):
                    x.inhibition = lam
            elif opt.text == "metric":
                m = cur.next("WORD", "'belief' or 'combined'")
                if m.text not in ("belief", "combined"):
                    raise _Syntax(m.span, f"unknown metric {m.text!r}")
                x.metric = m.text
            else:
                raise _Syntax(opt.span, f"unknown xor option {opt.text!r}")
        stmts.xors.append(x)
    else:
        raise _Syntax(keyword.span, f"unknown statement {kw!r}")
    if not cur.done():
        tok = cur.peek()
        raise _Syntax(tok.span, f"unexpected {tok.text!r}")


def _collect(text: str, diags: list[Diagnostic]) -> _Statements:
    stmts = _Statements()
    # only \n ends a line; str.splitlines would also split inside labels on \x0b, \x1c and friends
    for line_no, raw in enumerate(text.split("\n"), start=1):
        raw = raw.removesuffix("\r")
        try:
            tokens = tokenize_line(raw, line_no)
            if not tokens:
                continue
            cur = _Cursor(tokens, line_no, len(raw))
            keyword = cur.next("WORD", "statement keyword")
            _statement(cur, keyword, stmts, diags)
        except _Syntax as exc:
            diags.append(Diagnostic(exc.span, "syntax", exc.message))
    return stmts


def _resolve(stmts: _Statements, diags: list[Diagnostic]) -> Network:
    net = Network()
    decl_span: dict[str, SourceSpan] = {}
    for d in stmts.nodes:
        if d.id.text in net.nodes:
            diags.append(
                Diagnostic(d.id.span, "duplicate-node", f"node {d.id.text} already declared at {decl_span[d.id.text]}")
            )
            continue
        net.add_node(d.id.text, d.intuition, d.threshold, d.label)
        decl_span[d.id.text] = d.id.span

    def known(*toks: Token) -> bool:
        ok = True
        for t in toks:
            if t.text not in net.nodes:
                diags.append(Diagnostic(t.span, "unknown-id", f"unknown node {t.text}"))
                ok = False
        return ok

    for s in stmts.supports:
        if not known(s.src, s.dst):
            continue
        try:
            net.add_edge(s.src.text, s.dst.text, s.strength)
        except DuplicateEdge as exc:
            diags.append(Diagnostic(s.src.span, "duplicate-edge", str(exc)))
        except NetworkError as exc:
            diags.append(Diagnostic(s.src.span, "invalid", str(exc)))
    for m in stmts.metas:
        if not known(m.endorser, m.src, m.dst):
            continue
        try:
            net.add_meta(m.endorser.text, m.src.text, m.dst.text, m.strength)
        except UnknownEdge as exc:
            diags.append(Diagnostic(m.src.span, "unknown-id", str(exc)))
        except DuplicateEdge as exc:
            diags.append(Diagnostic(m.endorser.span, "duplicate-edge", str(exc)))
        except NetworkError as exc:
            diags.append(Diagnostic(m.endorser.span, "invalid", str(exc)))
    for x in stmts.xors:
        if not known(x.target, *x.members):
            continue
        try:
            net.add_cluster(x.target.text, [t.text for t in x.members], x.inhibition, x.metric)
        except NetworkError as exc:
            diags.append(Diagnostic(x.target.span, "invalid", str(exc)))

    for v in validate(net):
        subject = v.subject[0] if v.subject else None
        span = decl_span.get(subject, SourceSpan(1, 1))
        diags.append(Diagnostic(span, "invalid", v.message))
    return net


def parse(text: str, source: str = "<text>") -> Network:
    """Parse ``.endo`` text; raises ParseError listing every problem found."""
    text = text.lstrip("\ufeff")
    diags: list[Diagnostic] = []
    stmts = _collect(text, diags)
    net = _resolve(stmts, diags)
    if diags:
        raise ParseError(sorted(diags, key=lambda d: d.span), source)
    return net


def load(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), str(path))


def format_number(x: float) -> str:
    """Shortest round-tripping decimal, never in exponent notation."""
    return format(Decimal(repr(float(x))), "f")


_QUOTED = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t"}


def _quote(text: str) -> str:
    out = []
    for ch in text:
        if ch in _QUOTED:
            out.append(_QUOTED[ch])
        elif ch.isprintable():
            out.append(ch)
        else:
            out.append(f"\\u{{{ord(ch):x}}}")
    return '"' + "".join(out) + '"'


def serialize(network: Network) -> str:
    sections: list[list[str]] = []
    nodes = []
    for key in sorted(network.nodes):
        n = network.nodes[key]
        parts = ["node", n.id]
        if n.intuition is not None:
            parts += ["intuition", format_number(n.intuition.belief), format_number(n.intuition.certainty)]
        if n.threshold != DEFAULT_THRESHOLD:
            parts += ["threshold", format_number(n.threshold)]
        if n.label is not None:
            parts += ["label", _quote(n.label)]
        nodes.append(" ".join(parts))
    sections.append(nodes)

    edges = sorted(network.edges, key=lambda e: e.key)
    sections.append([f"support {e.src} -> {e.dst} {format_number(e.base_strength)}" for e in edges])
    sections.append(
        [
            f"meta {m.endorser} -> ({e.src} -> {e.dst}) {format_number(m.strength)}"
            for e in edges
            for m in sorted(e.meta, key=lambda m: m.endorser)
        ]
    )
    xors = []
    for c in sorted(network.clusters, key=lambda c: (c.target, sorted(c.members))):
        line = f"xor {c.target} {{ {', '.join(sorted(c.members))} }}"
        if c.inhibition != DEFAULT_INHIBITION:
            line += f" inhibition {format_number(c.inhibition)}"
        if c.winner_metric is not WinnerMetric.BELIEF:
            line += f" metric {c.winner_metric.value}"
        xors.append(line)
    sections.append(xors)
    return "\n\n".join("\n".join(s) for s in sections if s) + ("\n" if any(sections) else "")
