"""SPARQL-subset parser and evaluator over named graphs.

The subset is what building-model validation needs: PREFIX declarations,
SELECT [DISTINCT] with an explicit projection, an optional ``from <iri>``
dataset clause (lowercase accepted), and a WHERE block of ``.``-separated
triple patterns with ``;``/``,`` abbreviations, the ``a`` keyword, and an
optional ``values ?v {...}`` seed clause.  Anything beyond that — OPTIONAL,
FILTER, UNION, aggregation — reports UnsupportedFeature by keyword.

Evaluation is a nested-loop join over the pattern list, seeded by VALUES
bindings; results are projected, optionally deduplicated, and sorted
lexicographically by term strings so output is deterministic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

from .errors import BrickVrfError
from .rdf import (
    BlankNode,
    Graph,
    IRI,
    Literal,
    RDF_TYPE,
    Term,
    UnknownPrefix,
    expand_term,
)


class QuerySyntaxError(BrickVrfError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnboundProjection(BrickVrfError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"projected variable ?{var} is bound by no pattern or VALUES clause")


class UnsupportedFeature(BrickVrfError):
    def __init__(self, keyword: str):
        self.keyword = keyword
        super().__init__(f"unsupported query feature: {keyword}")


class UnknownGraph(BrickVrfError):
    def __init__(self, iri: str | None):
        self.iri = iri
        label = iri if iri is not None else "<default>"
        super().__init__(f"no graph named {label}")


@dataclass(frozen=True)
class Variable:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


PatternSlot = Union[Term, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternSlot
    predicate: PatternSlot
    object: PatternSlot

    def __post_init__(self) -> None:
        if isinstance(self.predicate, Literal):
            raise ValueError("pattern predicate cannot be a literal")

    def variables(self) -> set[str]:
        return {s.name for s in (self.subject, self.predicate, self.object) if isinstance(s, Variable)}


@dataclass(frozen=True)
class QueryAst:
    prefixes: dict[str, str]
    distinct: bool
    projection: tuple[str, ...]  # variable names, '?' stripped
    dataset: str | None
    values: tuple[str, list[IRI]] | None
    patterns: tuple[TriplePattern, ...]


@dataclass
class ResultTable:
    header: list[str]
    rows: list[tuple[Term, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


_KEYWORDS = {"SELECT", "PREFIX", "DISTINCT", "WHERE", "FROM", "VALUES"}
_UNSUPPORTED = {
    "OPTIONAL", "FILTER", "UNION", "GRAPH", "ORDER", "LIMIT", "OFFSET",
    "GROUP", "HAVING", "MINUS", "SERVICE", "BIND", "ASK", "CONSTRUCT",
    "DESCRIBE", "INSERT", "DELETE", "EXISTS", "BASE",
}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_LOCAL_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-.]*")
_LANG_RE = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*")


@dataclass(frozen=True)
class _Tok:
    type: str  # keyword | var | iriref | pname | string | langtag | dtmarker | punct | a | eof
    value: object
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    line, col, pos = 1, 1, 0

    def advance(n: int) -> None:
        nonlocal line, col, pos
        for _ in range(n):
            if pos < len(text) and text[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while True:
        while pos < len(text) and text[pos] in " \t\r\n":
            advance(1)
        if pos < len(text) and text[pos] == "#":
            while pos < len(text) and text[pos] != "\n":
                advance(1)
            continue
        if pos >= len(text):
            tokens.append(_Tok("eof", None, line, col))
            return tokens
        ch = text[pos]
        start_line, start_col = line, col
        if ch in "{}.;,":
            tokens.append(_Tok("punct", ch, start_line, start_col))
            advance(1)
        elif ch == "?" or ch == "$":
            advance(1)
            m = _NAME_RE.match(text, pos)
            if not m:
                raise QuerySyntaxError(start_line, start_col, "expected a variable name after '?'")
            tokens.append(_Tok("var", m.group(0), start_line, start_col))
            advance(len(m.group(0)))
        elif ch == "<":
            end = text.find(">", pos + 1)
            if end < 0:
                raise QuerySyntaxError(start_line, start_col, "unterminated IRI reference")
            tokens.append(_Tok("iriref", text[pos + 1 : end], start_line, start_col))
            advance(end + 1 - pos)
        elif ch == '"':
            advance(1)
            chars: list[str] = []
            while True:
                if pos >= len(text) or text[pos] == "\n":
                    raise QuerySyntaxError(start_line, start_col, "unterminated string literal")
                if text[pos] == '"':
                    advance(1)
                    break
                if text[pos] == "\\" and pos + 1 < len(text):
                    esc = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}.get(text[pos + 1])
                    if esc is None:
                        raise QuerySyntaxError(line, col, "unsupported escape in string")
                    chars.append(esc)
                    advance(2)
                else:
                    chars.append(text[pos])
                    advance(1)
            tokens.append(_Tok("string", "".join(chars), start_line, start_col))
        elif ch == "@":
            advance(1)
            m = _LANG_RE.match(text, pos)
            if not m:
                raise QuerySyntaxError(start_line, start_col, "expected a language tag after '@'")
            tokens.append(_Tok("langtag", m.group(0), start_line, start_col))
            advance(len(m.group(0)))
        elif text.startswith("^^", pos):
            tokens.append(_Tok("dtmarker", "^^", start_line, start_col))
            advance(2)
        elif ch == "*":
            raise QuerySyntaxError(start_line, start_col, "explicit projection required; '*' is not supported")
        elif _NAME_RE.match(ch) or ch == ":":
            prefix = ""
            if ch != ":":
                m = _NAME_RE.match(text, pos)
                prefix = m.group(0)
                advance(len(prefix))
            if pos < len(text) and text[pos] == ":":
                advance(1)
                local = ""
                m = _LOCAL_RE.match(text, pos)
                if m:
                    local = m.group(0)
                    while local.endswith("."):
                        local = local[:-1]
                    advance(len(local))
                tokens.append(_Tok("pname", (prefix, local), start_line, start_col))
            elif prefix == "a":
                tokens.append(_Tok("a", "a", start_line, start_col))
            elif prefix.upper() in _KEYWORDS:
                tokens.append(_Tok("keyword", prefix.upper(), start_line, start_col))
            elif prefix.upper() in _UNSUPPORTED:
                raise UnsupportedFeature(prefix.upper())
            else:
                raise QuerySyntaxError(start_line, start_col, f"unexpected name {prefix!r}")
        else:
            raise QuerySyntaxError(start_line, start_col, f"unexpected character {ch!r}")


class _QueryParser:
    def __init__(self, tokens: list[_Tok]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self) -> _Tok:
        return self.tokens[self.pos]

    def take(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: _Tok, message: str) -> QuerySyntaxError:
        return QuerySyntaxError(tok.line, tok.col, message)

    def keyword(self, word: str) -> _Tok:
        tok = self.take()
        if tok.type != "keyword" or tok.value != word:
            raise self.fail(tok, f"expected {word}, got {tok.value!r}")
        return tok

    def punct(self, ch: str) -> _Tok:
        tok = self.take()
        if tok.type != "punct" or tok.value != ch:
            raise self.fail(tok, f"expected {ch!r}, got {tok.value!r}")
        return tok

    def _iri(self, tok: _Tok) -> IRI:
        if tok.type == "iriref":
            return IRI(str(tok.value))
        if tok.type == "pname":
            prefix, local = tok.value  # type: ignore[misc]
            try:
                return expand_term(f"{prefix}:{local}", self.prefixes)
            except UnknownPrefix:
                raise UnknownPrefix(prefix, tok.line, tok.col) from None
        raise self.fail(tok, f"expected an IRI, got {tok.value!r}")

    def parse(self) -> QueryAst:
        while self.peek().type == "keyword" and self.peek().value == "PREFIX":
            self.take()
            name_tok = self.take()
            if name_tok.type != "pname" or name_tok.value[1]:  # type: ignore[index]
                raise self.fail(name_tok, "expected a prefix name ending in ':'")
            iri_tok = self.take()
            if iri_tok.type != "iriref":
                raise self.fail(iri_tok, "expected an IRI reference")
            self.prefixes[name_tok.value[0]] = str(iri_tok.value)  # type: ignore[index]

        self.keyword("SELECT")
        distinct = False
        if self.peek().type == "keyword" and self.peek().value == "DISTINCT":
            self.take()
            distinct = True
        projection: list[str] = []
        while self.peek().type == "var":
            projection.append(str(self.take().value))
        if not projection:
            raise self.fail(self.peek(), "expected at least one projected variable")

        dataset: str | None = None
        if self.peek().type == "keyword" and self.peek().value == "FROM":
            self.take()
            dataset = self._iri(self.take()).value

        self.keyword("WHERE")
        self.punct("{")
        values: tuple[str, list[IRI]] | None = None
        patterns: list[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok.type == "punct" and tok.value == "}":
                self.take()
                break
            if tok.type == "keyword" and tok.value == "VALUES":
                if values is not None:
                    raise self.fail(tok, "at most one VALUES clause is supported")
                values = self._values_clause()
                continue
            patterns.extend(self._triples_same_subject())

        trailing = self.take()
        if trailing.type != "eof":
            raise self.fail(trailing, f"unexpected trailing content {trailing.value!r}")

        bound = set()
        for p in patterns:
            bound |= p.variables()
        if values is not None:
            bound.add(values[0])
        for var in projection:
            if var not in bound:
                raise UnboundProjection(var)
        return QueryAst(dict(self.prefixes), distinct, tuple(projection), dataset, values, tuple(patterns))

    def _values_clause(self) -> tuple[str, list[IRI]]:
        self.take()  # VALUES
        var_tok = self.take()
        if var_tok.type != "var":
            raise self.fail(var_tok, "expected a variable after VALUES")
        self.punct("{")
        terms: list[IRI] = []
        while not (self.peek().type == "punct" and self.peek().value == "}"):
            terms.append(self._iri(self.take()))
        self.punct("}")
        if self.peek().type == "punct" and self.peek().value == ".":
            self.take()
        return (str(var_tok.value), terms)

    def _slot(self, tok: _Tok, allow_literal: bool) -> PatternSlot:
        if tok.type == "var":
            return Variable(str(tok.value))
        if tok.type in ("iriref", "pname"):
            return self._iri(tok)
        if tok.type == "string" and allow_literal:
            lexical = str(tok.value)
            nxt = self.peek()
            if nxt.type == "langtag":
                self.take()
                return Literal(lexical, lang=str(nxt.value))
            if nxt.type == "dtmarker":
                self.take()
                return Literal(lexical, datatype=self._iri(self.take()).value)
            return Literal(lexical)
        raise self.fail(tok, f"expected a term or variable, got {tok.value!r}")

    def _triples_same_subject(self) -> list[TriplePattern]:
        subject = self._slot(self.take(), allow_literal=False)
        out: list[TriplePattern] = []
        while True:
            verb_tok = self.take()
            if verb_tok.type == "a":
                predicate: PatternSlot = RDF_TYPE
            else:
                predicate = self._slot(verb_tok, allow_literal=False)
            while True:
                out.append(TriplePattern(subject, predicate, self._slot(self.take(), allow_literal=True)))
                if self.peek().type == "punct" and self.peek().value == ",":
                    self.take()
                    continue
                break
            nxt = self.peek()
            if nxt.type == "punct" and nxt.value == ";":
                self.take()
                if self.peek().type == "punct" and self.peek().value in ".}":
                    if self.peek().value == ".":
                        self.take()
                    return out
                continue
            if nxt.type == "punct" and nxt.value == ".":
                self.take()
                return out
            if nxt.type == "punct" and nxt.value == "}":
                return out
            raise self.fail(nxt, f"expected '.', ';' or ',' after a pattern, got {nxt.value!r}")


def parse_query(text: str) -> QueryAst:
    """Parse query text into a :class:`QueryAst`.

    Raises QuerySyntaxError with line/column, UnknownPrefix,
    UnboundProjection for projected variables bound nowhere, and
    UnsupportedFeature naming any out-of-subset keyword.
    """
    return _QueryParser(_lex(text)).parse()


GraphResolver = Union[Mapping[Union[str, None], Graph], Callable[[Union[str, None]], Union[Graph, None]]]


def _resolve_graph(store: GraphResolver, name: str | None) -> Graph:
    if callable(store):
        graph = store(name)
    else:
        graph = store.get(name)
    if graph is None:
        raise UnknownGraph(name)
    return graph


def term_sort_string(term: Term) -> str:
    """Canonical per-term string used for deterministic row ordering."""
    if isinstance(term, IRI):
        return term.value
    if isinstance(term, BlankNode):
        return "_:" + term.label
    suffix = f"@{term.lang}" if term.lang else (f"^^{term.datatype}" if term.datatype else "")
    return f'"{term.lexical}"{suffix}'


def evaluate(ast: QueryAst, store: GraphResolver) -> ResultTable:
    """Run the query against its dataset graph (or the default graph).

    Nested-loop join with substitution, seeded from the VALUES bindings;
    rows are sorted lexicographically by projected term strings.
    """
    graph = _resolve_graph(store, ast.dataset)

    if ast.values is not None:
        var, terms = ast.values
        bindings: list[dict[str, Term]] = [{var: t} for t in terms]
    else:
        bindings = [{}]

    for pattern in ast.patterns:
        next_bindings: list[dict[str, Term]] = []
        for binding in bindings:

            def ground(slot: PatternSlot) -> Term | None:
                if isinstance(slot, Variable):
                    return binding.get(slot.name)
                return slot

            s, p, o = ground(pattern.subject), ground(pattern.predicate), ground(pattern.object)
            for triple in graph.match(s, p, o):
                extended = dict(binding)
                ok = True
                for slot, value in (
                    (pattern.subject, triple.subject),
                    (pattern.predicate, triple.predicate),
                    (pattern.object, triple.object),
                ):
                    if isinstance(slot, Variable):
                        known = extended.get(slot.name)
                        if known is None:
                            extended[slot.name] = value
                        elif known != value:
                            ok = False
                            break
                if ok:
                    next_bindings.append(extended)
        bindings = next_bindings

    rows = [tuple(b[v] for v in ast.projection) for b in bindings]
    if ast.distinct:
        rows = list(set(rows))
    rows.sort(key=lambda row: tuple(term_sort_string(t) for t in row))
    return ResultTable(list(ast.projection), rows)


def _binding_json(term: Term) -> dict[str, str]:
    if isinstance(term, IRI):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.lang:
        out["xml:lang"] = term.lang
    elif term.datatype:
        out["datatype"] = term.datatype
    return out


def results_to_json(table: ResultTable) -> str:
    """Render a result table in the SPARQL-JSON results shape."""
    doc = {
        "head": {"vars": list(table.header)},
        "results": {
            "bindings": [
                {var: _binding_json(term) for var, term in zip(table.header, row)}
                for row in table.rows
            ]
        },
    }
    return json.dumps(doc, indent=2)
