"""RDF terms, triples, named graphs, and a Turtle subset parser/serializer.

The supported Turtle subset covers what real building-model documents use:
``@prefix`` directives, ``a`` for rdf:type, ``;`` predicate lists, ``,``
object lists, string literals with optional ``@lang`` or ``^^datatype``,
``#`` comments, and ``_:label`` blank nodes.  Collections, anonymous node
property lists, and numeric literal shorthands are out of scope.

Graphs are immutable after construction; deriving a changed graph goes
through :meth:`Graph.with_triples`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import BrickVrfError

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
SKOS_NS = "http://www.w3.org/2004/02/skos/core#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
BRICK_NS = "https://brickschema.org/schema/Brick#"
TAG_NS = "https://brickschema.org/schema/BrickTag#"

DEFAULT_NAMESPACES: dict[str, str] = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "skos": SKOS_NS,
    "brick": BRICK_NS,
    "tag": TAG_NS,
}


class TurtleSyntaxError(BrickVrfError):
    """Token-level violation in a Turtle document."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownPrefix(BrickVrfError):
    """A prefixed name used a prefix that is not declared."""

    def __init__(self, prefix: str, line: int | None = None, column: int | None = None):
        self.prefix = prefix
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"unknown prefix {prefix!r}{where}")


class MalformedName(BrickVrfError):
    """A prefixed name expanded to something that cannot be an IRI."""


@dataclass(frozen=True)
class IRI:
    value: str

    kind = "iri"

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class BlankNode:
    label: str

    kind = "blank"

    def __repr__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str | None = None
    lang: str | None = None

    kind = "literal"

    def __post_init__(self) -> None:
        if self.datatype is not None and self.lang is not None:
            raise ValueError("a literal carries at most one of datatype and language")

    def __repr__(self) -> str:
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


Term = Union[IRI, BlankNode, Literal]

RDF_TYPE = IRI(RDF_NS + "type")
RDFS_LABEL = IRI(RDFS_NS + "label")
RDFS_SUBCLASSOF = IRI(RDFS_NS + "subClassOf")
OWL_CLASS = IRI(OWL_NS + "Class")
SKOS_DEFINITION = IRI(SKOS_NS + "definition")


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, IRI):
            raise ValueError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if isinstance(self.subject, Literal):
            raise ValueError(f"triple subject must not be a literal, got {self.subject!r}")


class Graph:
    """An immutable set of triples with a prefix table and optional name."""

    __slots__ = ("name", "_triples", "_namespaces", "_by_subject", "_by_pred", "_by_obj", "_by_po")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        namespaces: Mapping[str, str] | None = None,
        name: str | None = None,
    ):
        self.name = name
        self._triples = frozenset(triples)
        self._namespaces = dict(namespaces or {})
        by_subject: dict[Term, list[Triple]] = {}
        by_pred: dict[Term, list[Triple]] = {}
        by_obj: dict[Term, list[Triple]] = {}
        by_po: dict[tuple[Term, Term], list[Triple]] = {}
        for t in self._triples:
            by_subject.setdefault(t.subject, []).append(t)
            by_pred.setdefault(t.predicate, []).append(t)
            by_obj.setdefault(t.object, []).append(t)
            by_po.setdefault((t.predicate, t.object), []).append(t)
        self._by_subject = by_subject
        self._by_pred = by_pred
        self._by_obj = by_obj
        self._by_po = by_po

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def namespaces(self) -> dict[str, str]:
        return dict(self._namespaces)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        # Graphs are equal when they hold the same triples; the name and
        # prefix table are presentation metadata, not content.
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> list[Triple]:
        """All triples agreeing with the given positions; None is a wildcard."""
        if subject is not None:
            candidates = self._by_subject.get(subject, [])
        elif predicate is not None and object is not None:
            candidates = self._by_po.get((predicate, object), [])
        elif predicate is not None:
            candidates = self._by_pred.get(predicate, [])
        elif object is not None:
            candidates = self._by_obj.get(object, [])
        else:
            return list(self._triples)
        return [
            t
            for t in candidates
            if (predicate is None or t.predicate == predicate)
            and (object is None or t.object == object)
        ]

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return [t.object for t in self.match(subject, predicate, None)]

    def subjects(self, predicate: Term, object: Term) -> list[Term]:
        return [t.subject for t in self.match(None, predicate, object)]

    def with_triples(
        self,
        extra: Iterable[Triple],
        namespaces: Mapping[str, str] | None = None,
    ) -> "Graph":
        merged = dict(self._namespaces)
        if namespaces:
            merged.update(namespaces)
        return Graph(self._triples.union(extra), merged, self.name)

    def __repr__(self) -> str:
        label = self.name or "default"
        return f"Graph({label!r}, {len(self._triples)} triples)"


# Prefix IRIs of the shape "label:" are self- or cross-prefix references,
# seen as a typo in real model exports; the declaration is skipped.
_CIRCULAR_PREFIX_IRI_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*:$")
# Local names safe to render in prefixed form without re-escaping.
_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z0-9_]([A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?$")


def expand_term(prefixed: str, namespaces: Mapping[str, str]) -> IRI:
    """Resolve ``prefix:local`` or ``<iri>`` to an IRI term.

    The angle-bracket form is returned verbatim (brackets stripped); the
    prefixed form replaces the prefix with its declared namespace.
    """
    if prefixed.startswith("<") and prefixed.endswith(">"):
        return IRI(prefixed[1:-1])
    if ":" not in prefixed:
        raise MalformedName(f"{prefixed!r} is neither a prefixed name nor <iri>")
    prefix, local = prefixed.split(":", 1)
    if prefix not in namespaces:
        raise UnknownPrefix(prefix)
    expanded = namespaces[prefix] + local
    if not expanded or ":" not in expanded:
        raise MalformedName(f"{prefixed!r} expands to non-absolute IRI {expanded!r}")
    return IRI(expanded)


@dataclass(frozen=True)
class _Token:
    type: str
    value: object
    line: int
    col: int


_LANGTAG_RE = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*")
_NAME_START = re.compile(r"[A-Za-z_]")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(self.line, self.col, message)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        text = self.text
        while True:
            while self.pos < len(text) and text[self.pos] in " \t\r\n":
                self._advance()
            if self.pos < len(text) and text[self.pos] == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            if self.pos >= len(text):
                out.append(_Token("eof", None, self.line, self.col))
                return out
            out.append(self._next_token())

    def _next_token(self) -> _Token:
        text = self.text
        ch = text[self.pos]
        line, col = self.line, self.col
        if ch == "<":
            end = text.find(">", self.pos + 1)
            if end < 0:
                raise self.error("unterminated IRI reference")
            value = text[self.pos + 1 : end]
            if any(c in value for c in " \t\n"):
                raise self.error("whitespace inside IRI reference")
            self._advance(end + 1 - self.pos)
            return _Token("iriref", value, line, col)
        if ch == '"':
            return self._string(line, col)
        if ch == ".":
            self._advance()
            return _Token("dot", ".", line, col)
        if ch == ";":
            self._advance()
            return _Token("semi", ";", line, col)
        if ch == ",":
            self._advance()
            return _Token("comma", ",", line, col)
        if ch == "@":
            self._advance()
            m = _LANGTAG_RE.match(text, self.pos)
            if not m:
                raise self.error("expected a name after '@'")
            word = m.group(0)
            self._advance(len(word))
            if word == "prefix":
                return _Token("prefix_kw", "@prefix", line, col)
            return _Token("langtag", word, line, col)
        if ch == "^":
            if text.startswith("^^", self.pos):
                self._advance(2)
                return _Token("dtmarker", "^^", line, col)
            raise self.error("expected '^^'")
        if text.startswith("_:", self.pos):
            self._advance(2)
            label = self._name_chars()
            if not label:
                raise self.error("blank node label expected after '_:'")
            return _Token("blank", label, line, col)
        if _NAME_START.match(ch) or ch == ":":
            return self._pname_or_keyword(line, col)
        raise self.error(f"unexpected character {ch!r}")

    def _string(self, line: int, col: int) -> _Token:
        text = self.text
        self._advance()  # opening quote
        chars: list[str] = []
        while True:
            if self.pos >= len(text):
                raise TurtleSyntaxError(line, col, "unterminated string literal")
            ch = text[self.pos]
            if ch == '"':
                self._advance()
                return _Token("string", "".join(chars), line, col)
            if ch == "\n":
                raise self.error("newline inside string literal")
            if ch == "\\":
                if self.pos + 1 >= len(text):
                    raise self.error("dangling escape")
                esc = text[self.pos + 1]
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                    self._advance(2)
                elif esc == "u" and self.pos + 6 <= len(text):
                    chars.append(chr(int(text[self.pos + 2 : self.pos + 6], 16)))
                    self._advance(6)
                else:
                    raise self.error(f"unsupported escape '\\{esc}'")
            else:
                chars.append(ch)
                self._advance()

    def _name_chars(self) -> str:
        # Greedy over name characters; trailing dots are given back so a
        # statement terminator touching a name still lexes.
        text = self.text
        start = self.pos
        while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] in "_-."):
            self._advance()
        name = text[start : self.pos]
        while name.endswith("."):
            name = name[:-1]
            self.pos -= 1
            self.col -= 1
        return name

    def _pname_or_keyword(self, line: int, col: int) -> _Token:
        text = self.text
        prefix = ""
        if text[self.pos] != ":":
            prefix = self._name_chars()
            if self.pos >= len(text) or text[self.pos] != ":":
                if prefix == "a":
                    return _Token("a", "a", line, col)
                raise TurtleSyntaxError(line, col, f"expected ':' after name {prefix!r}")
        self._advance()  # colon
        local = self._name_chars()
        return _Token("pname", (prefix, local), line, col)


class _TurtleParser:
    def __init__(self, tokens: list[_Token], namespaces: Mapping[str, str]):
        self.tokens = tokens
        self.pos = 0
        self.namespaces = dict(namespaces)
        self.triples: list[Triple] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, type_: str, what: str) -> _Token:
        tok = self.take()
        if tok.type != type_:
            raise TurtleSyntaxError(tok.line, tok.col, f"expected {what}, got {tok.value!r}")
        return tok

    def parse(self) -> tuple[list[Triple], dict[str, str]]:
        while True:
            tok = self.peek()
            if tok.type == "eof":
                return self.triples, self.namespaces
            if tok.type == "prefix_kw":
                self._prefix_directive()
            else:
                self._statement()

    def _prefix_directive(self) -> None:
        self.take()
        name_tok = self.expect("pname", "a prefix name ending in ':'")
        prefix, local = name_tok.value  # type: ignore[misc]
        if local:
            raise TurtleSyntaxError(name_tok.line, name_tok.col, "prefix name must end with ':'")
        iri_tok = self.expect("iriref", "an IRI reference")
        self.expect("dot", "'.'")
        iri = str(iri_tok.value)
        if _CIRCULAR_PREFIX_IRI_RE.match(iri):
            return  # circular declaration, e.g. "@prefix b6: <b6:>": skipped
        self.namespaces[prefix] = iri

    def _resolve(self, tok: _Token) -> IRI:
        if tok.type == "iriref":
            return IRI(str(tok.value))
        prefix, local = tok.value  # type: ignore[misc]
        try:
            return expand_term(f"{prefix}:{local}", self.namespaces)
        except UnknownPrefix:
            raise UnknownPrefix(prefix, tok.line, tok.col) from None
        except MalformedName as exc:
            raise TurtleSyntaxError(tok.line, tok.col, str(exc)) from None

    def _statement(self) -> None:
        tok = self.take()
        if tok.type == "blank":
            subject: Term = BlankNode(str(tok.value))
        elif tok.type in ("iriref", "pname"):
            subject = self._resolve(tok)
        else:
            raise TurtleSyntaxError(tok.line, tok.col, f"expected a subject, got {tok.value!r}")
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            sep = self.take()
            if sep.type == "dot":
                return
            if sep.type == "semi":
                if self.peek().type == "dot":  # tolerate trailing ';' before '.'
                    self.take()
                    return
                continue
            raise TurtleSyntaxError(sep.line, sep.col, f"expected ';' or '.', got {sep.value!r}")

    def _verb(self) -> IRI:
        tok = self.take()
        if tok.type == "a":
            return RDF_TYPE
        if tok.type in ("iriref", "pname"):
            return self._resolve(tok)
        raise TurtleSyntaxError(tok.line, tok.col, f"expected a predicate, got {tok.value!r}")

    def _object_list(self, subject: Term, predicate: IRI) -> None:
        while True:
            self.triples.append(Triple(subject, predicate, self._object()))
            if self.peek().type == "comma":
                self.take()
                continue
            return

    def _object(self) -> Term:
        tok = self.take()
        if tok.type == "blank":
            return BlankNode(str(tok.value))
        if tok.type in ("iriref", "pname"):
            return self._resolve(tok)
        if tok.type == "string":
            lexical = str(tok.value)
            nxt = self.peek()
            if nxt.type == "langtag":
                self.take()
                return Literal(lexical, lang=str(nxt.value))
            if nxt.type == "dtmarker":
                self.take()
                dt_tok = self.take()
                if dt_tok.type not in ("iriref", "pname"):
                    raise TurtleSyntaxError(dt_tok.line, dt_tok.col, "expected a datatype IRI after '^^'")
                return Literal(lexical, datatype=self._resolve(dt_tok).value)
            return Literal(lexical)
        raise TurtleSyntaxError(tok.line, tok.col, f"expected an object, got {tok.value!r}")


def parse_turtle(
    text: str,
    base_namespaces: Mapping[str, str] | None = None,
    name: str | None = None,
) -> Graph:
    """Parse a Turtle document into a :class:`Graph`.

    ``base_namespaces`` seeds the prefix table; ``@prefix`` directives in the
    document extend or override it.  Raises :class:`TurtleSyntaxError` with a
    1-based line/column on any token violation.
    """
    base = DEFAULT_NAMESPACES if base_namespaces is None else base_namespaces
    tokens = _Lexer(text).tokens()
    triples, namespaces = _TurtleParser(tokens, base).parse()
    return Graph(triples, namespaces, name)


def _render_literal(lit: Literal) -> str:
    value = lit.lexical.replace("\\", "\\\\").replace('"', '\\"')
    value = value.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    if lit.lang:
        return f'"{value}"@{lit.lang}'
    if lit.datatype:
        return f'"{value}"^^<{lit.datatype}>'
    return f'"{value}"'


def _render_iri(iri: IRI, namespaces: Mapping[str, str]) -> str:
    best: tuple[int, str] | None = None
    for prefix, ns in namespaces.items():
        if ns and iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if local == "" or _SAFE_LOCAL_RE.match(local):
                if best is None or len(ns) > best[0]:
                    best = (len(ns), f"{prefix}:{local}")
    if best is not None:
        return best[1]
    return f"<{iri.value}>"


def _render_term(term: Term, namespaces: Mapping[str, str]) -> str:
    if isinstance(term, IRI):
        return _render_iri(term, namespaces)
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    return _render_literal(term)


def serialize_turtle(graph: Graph) -> str:
    """Render a graph as Turtle text with a byte-stable layout.

    Subjects are sorted lexicographically; predicates group under ``;`` with
    rdf:type first (rendered ``a``), objects under ``,``.  IRIs not covered by
    the graph's prefix table render in angle brackets.
    """
    namespaces = graph.namespaces
    lines = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in sorted(namespaces.items())]
    by_subject: dict[Term, dict[IRI, list[Term]]] = {}
    for t in graph:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    def predicate_order(pred: IRI) -> tuple[int, str]:
        return (0 if pred == RDF_TYPE else 1, _render_term(pred, namespaces))

    blocks: list[tuple[str, str]] = []
    for subject, preds in by_subject.items():
        subject_text = _render_term(subject, namespaces)
        parts: list[str] = []
        for pred in sorted(preds, key=predicate_order):
            verb = "a" if pred == RDF_TYPE else _render_term(pred, namespaces)
            objects = sorted(_render_term(o, namespaces) for o in preds[pred])
            parts.append(verb + " " + ",\n    ".join(objects))
        body = " ;\n  ".join(parts)
        blocks.append((subject_text, f"{subject_text} {body} ."))
    for _, block in sorted(blocks):
        lines.append("")
        lines.append(block)
    return "\n".join(lines) + "\n"
