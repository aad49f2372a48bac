"""Terms and formulas of the first-order language {0, s, <, =, tau, pi}.

The language has a constant 0, a unary successor s, a binary order <,
equality, a ternary relation tau (bounded halting of coded programs), and a
binary function pi (the quadratic pairing polynomial).  Numerals are kept as
literal ``Num`` nodes: the canonical form never wraps a numeral in ``Succ``,
so ``s(#2)`` parses straight to ``#3``.

Concrete syntax (ASCII), fixed here and documented in docs/fol_grammar.md:

    term     :=  0  |  #<decimal>  |  s(term)  |  pi(term,term)  |  ident
    ident    :=  [a-z][a-z0-9_]*        ("s", "pi", "tau" are reserved)
    atom     :=  term < term  |  term = term  |  term <= term  |  term > term
              |  tau(term, term, term)
    formula  :=  atom  |  ~f  |  f & f  |  f | f  |  f -> f  |  f <-> f
              |  A x. f  |  E x. f  |  A x < term. f  |  E x < term. f  |  (f)

Precedence ~ > & > | > -> > <->; every binary connective is right
associative; quantifier scope extends as far as possible.  ``t <= u`` and
``t > u`` are sugar for ``t < u | t = u`` and ``u < t``; the bounded
quantifiers expand to ``A x. (x < t -> f)`` and ``E x. (x < t & f)``.  All
sugar disappears at parse time and the printer never reintroduces it.

Equality, hashing, printing, parsing and variable scans are iterative on
the deep spines (long right-nested disjunction chains occur in generated
axioms), so they stay safe at depths far beyond the interpreter stack.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .codec import decimal_to_nat, nat_to_decimal

__all__ = [
    "Term", "Num", "Var", "Succ", "Pi",
    "Formula", "Less", "Eq", "Tau", "Not", "And", "Or", "Imp", "Iff",
    "Forall", "Exists",
    "FolError", "FolSyntaxError", "FreeVariableError",
    "succ", "free_vars", "is_sentence", "substitute", "fresh_name",
    "parse_term", "parse_formula", "parse_sentence", "read_fol_text",
    "format_term", "format_formula", "node_count", "uses_pi", "uses_tau",
    "conjoin_left", "disjoin_right", "rosser_sentence",
]


class FolError(ValueError):
    """Base class for syntax-level errors."""


class FolSyntaxError(FolError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class FreeVariableError(FolError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"sentence required, free variables: {', '.join(self.names)}")


_FIELDS: dict[type, tuple[str, ...]] = {}


class Node:
    """Shared structural behaviour for terms and formulas."""

    __slots__ = ()

    def _field_names(self) -> tuple[str, ...]:
        cls = type(self)
        names = _FIELDS.get(cls)
        if names is None:
            names = tuple(f.name for f in dataclasses.fields(cls))
            _FIELDS[cls] = names
        return names

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b):
                return False
            for name in a._field_names():
                va = getattr(a, name)
                vb = getattr(b, name)
                if isinstance(va, Node):
                    stack.append((va, vb))
                elif va != vb:
                    return False
        return True

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        memo: dict[int, int] = {}
        stack: list[tuple[Node, bool]] = [(self, False)]
        while stack:
            node, ready = stack.pop()
            key = id(node)
            if ready:
                parts: list = [type(node).__name__]
                for name in node._field_names():
                    v = getattr(node, name)
                    parts.append(memo[id(v)] if isinstance(v, Node) else v)
                memo[key] = hash(tuple(parts))
            elif key not in memo:
                stack.append((node, True))
                for name in node._field_names():
                    v = getattr(node, name)
                    if isinstance(v, Node):
                        stack.append((v, False))
        return memo[id(self)]

    def __repr__(self):
        if isinstance(self, Term):
            return f"<term {format_term(self)}>"
        return f"<formula {format_formula(self)}>"


class Term(Node):
    __slots__ = ()


class Formula(Node):
    __slots__ = ()


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Num(Term):
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool) or self.value < 0:
            raise ValueError(f"numeral value must be a natural, got {self.value!r}")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Succ(Term):
    inner: Term

    def __post_init__(self):
        if isinstance(self.inner, Num):
            raise ValueError("canonical form forbids Succ around a numeral; use succ()")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Pi(Term):
    left: Term
    right: Term


def succ(term: Term, times: int = 1) -> Term:
    """Apply successor ``times`` times, folding numerals into numerals."""
    if times < 0:
        raise ValueError("times must be a natural")
    if isinstance(term, Num):
        return Num(term.value + times)
    for _ in range(times):
        term = Succ(term)
    return term


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Less(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Tau(Formula):
    prog: Term
    arg: Term
    steps: Term


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Not(Formula):
    inner: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Exists(Formula):
    var: str
    body: Formula


_BINARY = (And, Or, Imp, Iff)
_QUANT = (Forall, Exists)


def free_vars(node: Node) -> frozenset[str]:
    """Free variables of a term or formula."""
    free: set[str] = set()
    stack: list[tuple[Node, frozenset[str]]] = [(node, frozenset())]
    while stack:
        n, bound = stack.pop()
        if isinstance(n, Var):
            if n.name not in bound:
                free.add(n.name)
        elif isinstance(n, _QUANT):
            stack.append((n.body, bound | {n.var}))
        else:
            for name in n._field_names():
                v = getattr(n, name)
                if isinstance(v, Node):
                    stack.append((v, bound))
    return frozenset(free)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def node_count(node: Node) -> int:
    count = 0
    stack = [node]
    while stack:
        n = stack.pop()
        count += 1
        for name in n._field_names():
            v = getattr(n, name)
            if isinstance(v, Node):
                stack.append(v)
    return count


def _uses(node: Node, cls: type) -> bool:
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, cls):
            return True
        for name in n._field_names():
            v = getattr(n, name)
            if isinstance(v, Node):
                stack.append(v)
    return False


def uses_pi(node: Node) -> bool:
    return _uses(node, Pi)


def uses_tau(node: Node) -> bool:
    return _uses(node, Tau)


def fresh_name(base: str, avoid) -> str:
    """Smallest numeric suffix making ``base`` fresh (y -> y0, y1, ...)."""
    k = 0
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def _substitute_term(t: Term, var: str, replacement: Term) -> Term:
    if isinstance(t, Var):
        return replacement if t.name == var else t
    if isinstance(t, Num):
        return t
    if isinstance(t, Succ):
        return succ(_substitute_term(t.inner, var, replacement))
    if isinstance(t, Pi):
        return Pi(_substitute_term(t.left, var, replacement),
                  _substitute_term(t.right, var, replacement))
    raise TypeError(f"not a term: {t!r}")


def substitute(f: Formula, var: str, replacement: Term) -> Formula:
    """Capture-avoiding substitution of ``replacement`` for free ``var``.

    Bound variables that would capture are renamed with the smallest unused
    numeric suffix.
    """
    repl_vars = free_vars(replacement)

    def go(f: Formula) -> Formula:
        if isinstance(f, (Less, Eq)):
            return type(f)(_substitute_term(f.left, var, replacement),
                           _substitute_term(f.right, var, replacement))
        if isinstance(f, Tau):
            return Tau(_substitute_term(f.prog, var, replacement),
                       _substitute_term(f.arg, var, replacement),
                       _substitute_term(f.steps, var, replacement))
        if isinstance(f, Not):
            return Not(go(f.inner))
        if isinstance(f, _BINARY):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, _QUANT):
            if f.var == var or var not in free_vars(f.body):
                return f
            if f.var in repl_vars:
                renamed = fresh_name(f.var, repl_vars | free_vars(f.body) | {var})
                body = substitute(f.body, f.var, Var(renamed))
                return type(f)(renamed, substitute(body, var, replacement))
            return type(f)(f.var, go(f.body))
        raise TypeError(f"not a formula: {f!r}")

    return go(f)


# --------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_OPSYM = {And: "&", Or: "|", Imp: "->", Iff: "<->"}


def format_term(t: Term) -> str:
    if isinstance(t, Num):
        return "0" if t.value == 0 else "#" + nat_to_decimal(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Succ):
        return f"s({format_term(t.inner)})"
    if isinstance(t, Pi):
        return f"pi({format_term(t.left)},{format_term(t.right)})"
    raise TypeError(f"not a term: {t!r}")


def _prec_of(f: Formula) -> int:
    cls = type(f)
    if cls in _PREC:
        return _PREC[cls]
    if cls is Not:
        return 5
    if cls in (Forall, Exists):
        return 0
    return 9


def _fmt(f: Formula) -> tuple[str, bool]:
    """Render ``f``; the flag says the text ends in an open quantifier body
    (which would swallow anything printed after it in the same group)."""
    if isinstance(f, (Less, Eq)):
        sym = "<" if isinstance(f, Less) else "="
        return f"{format_term(f.left)} {sym} {format_term(f.right)}", False
    if isinstance(f, Tau):
        return (f"tau({format_term(f.prog)}, {format_term(f.arg)}, "
                f"{format_term(f.steps)})"), False
    if isinstance(f, Not):
        if isinstance(f.inner, (Tau, Not)):
            text, open_tail = _fmt(f.inner)
            return "~" + text, open_tail
        text, _ = _fmt(f.inner)
        return "~(" + text + ")", False
    if isinstance(f, _QUANT):
        prefix: list[str] = []
        cur: Formula = f
        while isinstance(cur, _QUANT):
            letter = "A" if isinstance(cur, Forall) else "E"
            prefix.append(f"{letter} {cur.var}. ")
            cur = cur.body
        body, _ = _fmt(cur)
        if isinstance(cur, _BINARY):
            body = "(" + body + ")"
        return "".join(prefix) + body, True
    if isinstance(f, _BINARY):
        cls = type(f)
        prec = _PREC[cls]
        parts: list[Formula] = [f.left]
        cur = f.right
        while type(cur) is cls:
            parts.append(cur.left)
            cur = cur.right
        parts.append(cur)
        rendered: list[str] = []
        open_tail = False
        last = len(parts) - 1
        for i, part in enumerate(parts):
            text, part_open = _fmt(part)
            if i < last:
                wrap = part_open or _prec_of(part) <= prec
            else:
                wrap = _prec_of(part) < prec and not isinstance(part, _QUANT)
            if wrap:
                text = "(" + text + ")"
                part_open = False
            rendered.append(text)
            if i == last:
                open_tail = part_open
        return f" {_OPSYM[cls]} ".join(rendered), open_tail
    raise TypeError(f"not a formula: {f!r}")


def format_formula(f: Formula) -> str:
    """Canonical text of ``f``; ``parse_formula`` inverts it exactly."""
    return _fmt(f)[0]


# --------------------------------------------------------------------------
# parsing

_RESERVED_TERM_IDENTS = {"s", "pi", "tau"}

_SIMPLE_TOKENS = {
    "(": "LPAREN", ")": "RPAREN", ",": "COMMA", ".": "DOT",
    "~": "TILDE", "&": "AMP", "|": "BAR", "=": "EQ", ">": "GT",
}


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        col = i - line_start + 1
        if ch in _SIMPLE_TOKENS:
            tokens.append(_Token(_SIMPLE_TOKENS[ch], ch, line, col))
            i += 1
            continue
        if ch == "<":
            if text.startswith("<->", i):
                tokens.append(_Token("IFF", "<->", line, col))
                i += 3
            elif text.startswith("<=", i):
                tokens.append(_Token("LE", "<=", line, col))
                i += 2
            else:
                tokens.append(_Token("LT", "<", line, col))
                i += 1
            continue
        if ch == "-":
            if text.startswith("->", i):
                tokens.append(_Token("IMP", "->", line, col))
                i += 2
                continue
            raise FolSyntaxError("stray '-' (did you mean '->')", line, col)
        if ch == "#":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise FolSyntaxError("'#' must be followed by digits", line, col)
            tokens.append(_Token("NUM", decimal_to_nat(text[i + 1:j]), line, col))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if text[i:j] != "0":
                raise FolSyntaxError(
                    f"bare number {text[i:j]!r}; numerals other than 0 are written #<digits>",
                    line, col)
            tokens.append(_Token("NUM", 0, line, col))
            i = j
            continue
        if ch in ("A", "E"):
            nxt = text[i + 1] if i + 1 < n else ""
            if not (nxt.islower() or nxt.isdigit() or nxt == "_"):
                tokens.append(_Token("QUANT", ch, line, col))
                i += 1
                continue
            raise FolSyntaxError(f"unexpected character {ch!r}", line, col)
        if ch.islower():
            j = i
            while j < n and (text[j].islower() or text[j].isdigit() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line, col))
            i = j
            continue
        raise FolSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", None, line, n - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FolSyntaxError(f"expected {what}, found {tok.value!r}", tok.line, tok.column)
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise FolSyntaxError(message, tok.line, tok.column)

    # formulas, lowest precedence first; chains are collected iteratively
    # and folded to the right, so "a | b | c" is Or(a, Or(b, c)).

    _LEVELS = (("IFF", Iff), ("IMP", Imp), ("BAR", Or), ("AMP", And))

    def formula(self, depth: int = 0) -> Formula:
        if depth == len(self._LEVELS):
            return self.negation()
        kind, cls = self._LEVELS[depth]
        parts = [self.formula(depth + 1)]
        while self.peek().kind == kind:
            self.next()
            parts.append(self.formula(depth + 1))
        acc = parts[-1]
        for part in parts[-2::-1]:
            acc = cls(part, acc)
        return acc

    def negation(self) -> Formula:
        tok = self.peek()
        if tok.kind == "TILDE":
            self.next()
            return Not(self.negation())
        if tok.kind == "QUANT":
            return self.quantified()
        if tok.kind == "LPAREN":
            self.next()
            f = self.formula()
            self.expect("RPAREN", "')'")
            return f
        return self.atom()

    def quantified(self) -> Formula:
        binders: list[tuple[type, str, Term | None]] = []
        while self.peek().kind == "QUANT":
            tok = self.next()
            cls = Forall if tok.value == "A" else Exists
            name_tok = self.expect("IDENT", "variable name")
            name = name_tok.value
            if name in _RESERVED_TERM_IDENTS:
                raise FolSyntaxError(f"{name!r} is reserved and cannot be a variable",
                                     name_tok.line, name_tok.column)
            bound = None
            if self.peek().kind == "LT":
                self.next()
                bound = self.term()
            self.expect("DOT", "'.'")
            binders.append((cls, name, bound))
        body = self.formula()
        for cls, name, bound in reversed(binders):
            if bound is None:
                body = cls(name, body)
            elif cls is Forall:
                body = Forall(name, Imp(Less(Var(name), bound), body))
            else:
                body = Exists(name, And(Less(Var(name), bound), body))
        return body

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "IDENT" and tok.value == "tau" and self.tokens[self.pos + 1].kind == "LPAREN":
            self.next()
            self.next()
            prog = self.term()
            self.expect("COMMA", "','")
            arg = self.term()
            self.expect("COMMA", "','")
            steps = self.term()
            self.expect("RPAREN", "')'")
            return Tau(prog, arg, steps)
        left = self.term()
        rel = self.peek()
        if rel.kind == "LT":
            self.next()
            return Less(left, self.term())
        if rel.kind == "EQ":
            self.next()
            return Eq(left, self.term())
        if rel.kind == "LE":
            self.next()
            right = self.term()
            return Or(Less(left, right), Eq(left, right))
        if rel.kind == "GT":
            self.next()
            return Less(self.term(), left)
        self.fail("expected a relation (<, =, <=, >) after a term")

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "NUM":
            self.next()
            return Num(tok.value)
        if tok.kind == "IDENT":
            name = tok.value
            if name == "s" and self.tokens[self.pos + 1].kind == "LPAREN":
                self.next()
                self.next()
                inner = self.term()
                self.expect("RPAREN", "')'")
                return succ(inner)
            if name == "pi" and self.tokens[self.pos + 1].kind == "LPAREN":
                self.next()
                self.next()
                left = self.term()
                self.expect("COMMA", "','")
                right = self.term()
                self.expect("RPAREN", "')'")
                return Pi(left, right)
            if name in _RESERVED_TERM_IDENTS:
                raise FolSyntaxError(f"{name!r} is reserved and cannot be a variable",
                                     tok.line, tok.column)
            self.next()
            return Var(name)
        self.fail("expected a term")


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    t = parser.term()
    parser.expect("EOF", "end of input")
    return t


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    f = parser.formula()
    parser.expect("EOF", "end of input")
    return f


def parse_sentence(text: str) -> Formula:
    f = parse_formula(text)
    names = free_vars(f)
    if names:
        raise FreeVariableError(names)
    return f


def read_fol_text(text: str) -> list[Formula]:
    """Sentences of a .fol document: one per line, '#' lines are comments."""
    sentences = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sentences.append(parse_sentence(line))
    return sentences


# --------------------------------------------------------------------------
# builders

def conjoin_left(parts) -> Formula:
    """Left-associated conjunction p1 & p2 & ... (at least one part)."""
    parts = list(parts)
    if not parts:
        raise ValueError("conjoin_left needs at least one formula")
    acc = parts[0]
    for part in parts[1:]:
        acc = And(acc, part)
    return acc


def disjoin_right(parts) -> Formula:
    """Right-associated disjunction p1 | (p2 | ...) (at least one part)."""
    parts = list(parts)
    if not parts:
        raise ValueError("disjoin_right needs at least one formula")
    acc = parts[-1]
    for part in parts[-2::-1]:
        acc = Or(part, acc)
    return acc


def rosser_sentence(first_program: int, second_program: int) -> Formula:
    """The balanced self-comparison sentence for two program codes.

    Read as: some stage witnesses program ``first_program`` on the paired
    input before any stage witnesses program ``second_program`` on it:

        E x. (tau(#a, pi(#a,#b), x) & A y. (y < x -> ~tau(#b, pi(#a,#b), y)))

    with a = first_program and b = second_program.
    """
    pair_term = Pi(Num(first_program), Num(second_program))
    return Exists("x", And(
        Tau(Num(first_program), pair_term, Var("x")),
        Forall("y", Imp(
            Less(Var("y"), Var("x")),
            Not(Tau(Num(second_program), pair_term, Var("y"))),
        )),
    ))
