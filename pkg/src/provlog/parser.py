"""Text format for programs and annotated databases.

Grammar (UTF-8, `%` comments):

    fact     ::=  atom ('@' annotation)? '.'
    rule     ::=  atom ':-' atom (',' atom)* '.'
    atom     ::=  symbol ('(' term (',' term)* ')')?    -- nullary: no parens
    term     ::=  constant | variable
    constant ::=  lowercase-initial symbol | quoted string
    variable ::=  uppercase-initial symbol | '?' symbol

Annotations are parsed by the target semiring's value codec and run to the
closing '.' of the fact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Atom, Database, Program, Rule, Term, as_fact, check_arity_consistency, const, var
from .engine import AnnotatedDatabase
from .errors import DatalogSyntaxError, DuplicateFactError, ZeroAnnotationError

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<arrow>:-)
      | (?P<punct>[(),.@])
      | (?P<quoted>'[^']*'|"[^"]*")
      | (?P<qvar>\?[A-Za-z0-9_]+)
      | (?P<symbol>[A-Za-z0-9_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> DatalogSyntaxError:
        return DatalogSyntaxError(message, self.line, self.col)

    def _advance(self, chunk: str) -> None:
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = len(chunk) - chunk.rfind("\n")
        else:
            self.col += len(chunk)
        self.pos += len(chunk)

    def next(self) -> _Token | None:
        while self.pos < len(self.text):
            m = _TOKEN.match(self.text, self.pos)
            if m is None:
                raise self.error(f"unexpected character {self.text[self.pos]!r}")
            kind = m.lastgroup or ""
            chunk = m.group(0)
            token = _Token(kind, chunk, self.line, self.col)
            self._advance(chunk)
            if kind in ("ws", "comment"):
                continue
            return token
        return None

    def rest_of_statement(self) -> str:
        """Raw text up to the terminating '.' (for annotation literals).

        A '.' immediately followed by a digit is part of the literal, so
        decimal annotations like `3.5` survive.
        """
        start = i = self.pos
        text = self.text
        while i < len(text):
            if text[i] == "." and not (i + 1 < len(text) and text[i + 1].isdigit()):
                literal = text[start:i]
                self._advance(text[start:i + 1])
                return literal.strip()
            i += 1
        raise self.error("annotation not terminated by '.'")


class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.lookahead: _Token | None = None

    def _next(self) -> _Token | None:
        if self.lookahead is not None:
            token, self.lookahead = self.lookahead, None
            return token
        return self.lexer.next()

    def _peek(self) -> _Token | None:
        if self.lookahead is None:
            self.lookahead = self.lexer.next()
        return self.lookahead

    def _expect(self, text: str) -> _Token:
        token = self._next()
        if token is None or token.text != text:
            got = token.text if token else "end of input"
            raise DatalogSyntaxError(
                f"expected {text!r}, got {got!r}",
                token.line if token else self.lexer.line,
                token.column if token else self.lexer.col,
            )
        return token

    def _term(self, token: _Token) -> Term:
        if token.kind == "quoted":
            return const(token.text[1:-1])
        if token.kind == "qvar":
            return var(token.text[1:])
        if token.kind == "symbol":
            if token.text[0].isupper():
                return var(token.text)
            return const(token.text)
        raise DatalogSyntaxError(f"expected a term, got {token.text!r}",
                                 token.line, token.column)

    def atom(self) -> Atom:
        token = self._next()
        if token is None or token.kind != "symbol":
            got = token.text if token else "end of input"
            raise DatalogSyntaxError(f"expected a predicate, got {got!r}",
                                     token.line if token else self.lexer.line,
                                     token.column if token else self.lexer.col)
        predicate = token.text
        nxt = self._peek()
        if nxt is None or nxt.text != "(":
            return Atom(predicate, ())
        self._expect("(")
        args = [self._term(self._require("a term"))]
        while True:
            token = self._require("',' or ')'")
            if token.text == ")":
                break
            if token.text != ",":
                raise DatalogSyntaxError(f"expected ',' or ')', got {token.text!r}",
                                         token.line, token.column)
            args.append(self._term(self._require("a term")))
        return Atom(predicate, tuple(args))

    def _require(self, what: str) -> _Token:
        token = self._next()
        if token is None:
            raise DatalogSyntaxError(f"expected {what}, got end of input",
                                     self.lexer.line, self.lexer.col)
        return token


def parse_program(text: str) -> Program:
    """Parse rule text; facts (atom followed by '.') are rejected here.

    Duplicate body atoms are dropped at load: a conjunction is the set of
    its atoms.
    """
    parser = _Parser(text)
    rules: list[Rule] = []
    while parser._peek() is not None:
        head = parser.atom()
        parser._expect(":-")
        body = [parser.atom()]
        while True:
            token = parser._require("',' or '.'")
            if token.text == ".":
                break
            if token.text != ",":
                raise DatalogSyntaxError(f"expected ',' or '.', got {token.text!r}",
                                         token.line, token.column)
            atom = parser.atom()
            if atom not in body:
                body.append(atom)
        rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules))


def parse_database(text: str, semiring) -> AnnotatedDatabase:
    """Parse annotated facts; missing annotations default to the one element."""
    parser = _Parser(text)
    facts = []
    lam = {}
    while parser._peek() is not None:
        atom = parser.atom()
        token = parser._require("'.' or '@'")
        if token.text == "@":
            literal = parser.lexer.rest_of_statement()
            value = semiring.parse(literal)
        elif token.text == ".":
            value = semiring.one
        else:
            raise DatalogSyntaxError(f"expected '.' or '@', got {token.text!r}",
                                     token.line, token.column)
        fact = as_fact(atom)
        if fact in lam:
            raise DuplicateFactError(f"fact {fact} listed twice")
        if semiring.eq(value, semiring.zero):
            raise ZeroAnnotationError(f"fact {fact} annotated with zero")
        facts.append(fact)
        lam[fact] = value
    return AnnotatedDatabase(Database(frozenset(facts)), semiring, lam)


def print_program(program: Program) -> str:
    return "\n".join(str(r) for r in program.rules) + ("\n" if program.rules else "")


def print_database(adb: AnnotatedDatabase) -> str:
    lines = []
    for fact in sorted(adb.database.facts):
        lines.append(f"{fact} @ {adb.semiring.fmt(adb.lam[fact])}.")
    return "\n".join(lines) + ("\n" if lines else "")


def load_program(path: str) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def load_database(path: str, semiring) -> AnnotatedDatabase:
    with open(path, encoding="utf-8") as fh:
        adb = parse_database(fh.read(), semiring)
    return adb


def check_consistency(program: Program, adb: AnnotatedDatabase) -> None:
    check_arity_consistency(program, adb.database)
