"""TPL: the fixed toy programming language behind the bounded-halting relation.

TPL is a deterministic, dynamically typed imperative language.  Values are
arbitrary-precision naturals and byte strings (latin-1 characters).  A
program reads its single input from the variable ``in`` and, by convention,
leaves its result in ``out`` (0 if never assigned).

Grammar (``#`` starts a comment running to end of line)::

    program  :=  stmt*
    stmt     :=  name '=' expr ';'
              |  'if' '(' expr ')' block ('else' block)?
              |  'while' '(' expr ')' block
              |  'halt' ';'
    block    :=  '{' stmt* '}'
    expr     :=  sum (('<' | '<=' | '==') sum)?
    sum      :=  prod (('+' | '-') prod)*
    prod     :=  unit (('*' | '/' | '%') unit)*
    unit     :=  number | string | name | builtin '(' expr, ... ')' | '(' expr ')'

Arithmetic is on naturals: ``-`` is monus (truncated at 0), ``x / 0 = 0``,
``x % 0 = x``.  ``<`` and ``<=`` require naturals; ``==`` compares any two
values (different types are simply unequal).  Truthiness: 0 and the empty
string are false.  The builtins are::

    len(s)  concat(a,b)  substr(s,i,n)  charat(s,i)          strings
    tonat(s)  tostr(n)  pairN(a,b)  unpairL(p)  unpairR(p)  inrange(p)
    taub(e,x,t)  runout(e,x,t)  checkproof(e,p,c)

A run is budgeted.  Every executed statement costs one step (``if``/``while``
headers cost one step per evaluation); ``taub``, ``runout`` and
``checkproof`` additionally charge the steps their inner simulations and
enumerator runs consume, capped by the caller's remaining budget, so nested
simulation can never exceed the outer bound.  Faults (type errors, undefined
variables, out-of-range decodings, an inner run that provably fails to halt
in time) make the machine stick forever: a faulted program never halts, on
any budget.  Running out of budget is different — the verdict is simply
"not halted yet", and it is monotone: giving more budget can only move a
run from "not yet" to "halted", never the reverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .codec import (decimal_to_nat, decode_program_code, nat_to_decimal,
                    pair, program_code, unpair)

__all__ = [
    "TplSyntaxError", "TemplateError", "TplProgram", "Machine", "TauVerdict",
    "parse_program", "program_from_code", "run_program", "tau", "tau_verdict", "run_output",
    "output_code", "instantiate_template", "template_source",
]


class TplSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class TemplateError(ValueError):
    pass


# --------------------------------------------------------------------------
# syntax trees

@dataclass(frozen=True, slots=True)
class Lit:
    value: object


@dataclass(frozen=True, slots=True)
class Name:
    name: str


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True, slots=True)
class Assign:
    name: str
    expr: object


@dataclass(frozen=True, slots=True)
class If:
    cond: object
    then: tuple
    other: tuple


@dataclass(frozen=True, slots=True)
class While:
    cond: object
    body: tuple


@dataclass(frozen=True, slots=True)
class Halt:
    pass


@dataclass(frozen=True)
class TplProgram:
    source: str
    body: tuple


_KEYWORDS = {"if", "else", "while", "halt"}
_BUILTINS = {
    "len": 1, "concat": 2, "substr": 3, "charat": 2,
    "tonat": 1, "tostr": 1,
    "pairN": 2, "unpairL": 1, "unpairR": 1, "inrange": 1,
    "taub": 3, "runout": 3, "checkproof": 3,
}


# --------------------------------------------------------------------------
# lexer / parser

_PUNCT2 = ("==", "<=")
_PUNCT1 = "=<+-*/%(){},;"

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


class _Tok:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _lex(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    i, n = 0, len(text)
    line, line_start = 1, 0
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
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text[i:i + 2] in _PUNCT2:
            tokens.append(_Tok(text[i:i + 2], text[i:i + 2], line, col))
            i += 2
            continue
        if ch in _PUNCT1:
            tokens.append(_Tok(ch, ch, line, col))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Tok("NUMBER", decimal_to_nat(text[i:j]), line, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Tok("IDENT", text[i:j], line, col))
            i = j
            continue
        if ch == '"':
            j = i + 1
            chars: list[str] = []
            while True:
                if j >= n or text[j] == "\n":
                    raise TplSyntaxError("unterminated string literal", line, col)
                c = text[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    esc = text[j + 1] if j + 1 < n else ""
                    if esc not in _ESCAPES:
                        raise TplSyntaxError(f"bad escape \\{esc}", line, col)
                    chars.append(_ESCAPES[esc])
                    j += 2
                    continue
                chars.append(c)
                j += 1
            tokens.append(_Tok("STRING", "".join(chars), line, col))
            i = j
            continue
        raise TplSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Tok("EOF", None, line, n - line_start + 1))
    return tokens


class _TplParser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.tokens[self.pos]

    def next(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise TplSyntaxError(f"expected {kind!r}, found {tok.value!r}",
                                 tok.line, tok.column)
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise TplSyntaxError(message, tok.line, tok.column)

    def program(self) -> tuple:
        stmts = []
        while self.peek().kind != "EOF":
            stmts.append(self.statement())
        return tuple(stmts)

    def block(self) -> tuple:
        self.expect("{")
        stmts = []
        while self.peek().kind != "}":
            if self.peek().kind == "EOF":
                self.fail("unterminated block")
            stmts.append(self.statement())
        self.next()
        return tuple(stmts)

    def statement(self):
        tok = self.peek()
        if tok.kind != "IDENT":
            self.fail("expected a statement")
        word = tok.value
        if word == "halt":
            self.next()
            self.expect(";")
            return Halt()
        if word == "if":
            self.next()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.block()
            other: tuple = ()
            if self.peek().kind == "IDENT" and self.peek().value == "else":
                self.next()
                other = self.block()
            return If(cond, then, other)
        if word == "while":
            self.next()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return While(cond, self.block())
        if word in _KEYWORDS or word in _BUILTINS:
            self.fail(f"{word!r} cannot be assigned")
        self.next()
        self.expect("=")
        value = self.expr()
        self.expect(";")
        return Assign(word, value)

    def expr(self):
        left = self.sum()
        if self.peek().kind in ("<", "<=", "=="):
            op = self.next().kind
            return BinOp(op, left, self.sum())
        return left

    def sum(self):
        node = self.prod()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            node = BinOp(op, node, self.prod())
        return node

    def prod(self):
        node = self.unit()
        while self.peek().kind in ("*", "/", "%"):
            op = self.next().kind
            node = BinOp(op, node, self.unit())
        return node

    def unit(self):
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.next()
            return Lit(tok.value)
        if tok.kind == "STRING":
            self.next()
            return Lit(tok.value)
        if tok.kind == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "IDENT":
            name = tok.value
            if name in _KEYWORDS:
                self.fail(f"{name!r} is a keyword, not a value")
            self.next()
            if name in _BUILTINS:
                self.expect("(")
                args = [self.expr()]
                while self.peek().kind == ",":
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != _BUILTINS[name]:
                    raise TplSyntaxError(
                        f"{name} takes {_BUILTINS[name]} arguments, got {len(args)}",
                        tok.line, tok.column)
                return Call(name, tuple(args))
            return Name(name)
        self.fail("expected an expression")


def parse_program(text: str) -> TplProgram:
    return TplProgram(source=text, body=_TplParser(text).program())


# --------------------------------------------------------------------------
# machine

class _OutOfBudget(Exception):
    pass


class _Fault(Exception):
    def __init__(self, message: str):
        self.message = message


class _Halted(Exception):
    pass


@dataclass(frozen=True, slots=True)
class TauVerdict:
    halted_within: bool
    steps_used: int | None


class Machine:
    """One budgeted run of a TPL program on one input."""

    __slots__ = ("env", "steps", "budget", "halted", "fault", "_frames")

    def __init__(self, program: TplProgram, input_value: int, budget: int):
        if input_value < 0 or budget < 0:
            raise ValueError("input and budget must be naturals")
        self.env: dict[str, object] = {"in": input_value}
        self.steps = 0
        self.budget = budget
        self.halted = False
        self.fault: str | None = None
        self._frames: list[list] = [[program.body, 0]]

    # -- driving

    def run(self) -> "Machine":
        if self.halted or self.fault is not None:
            return self
        try:
            self._loop()
            self.halted = True
        except _Halted:
            self.halted = True
        except _OutOfBudget:
            self.steps = self.budget
        except _Fault as f:
            self.fault = f.message
        return self

    def _loop(self):
        frames = self._frames
        while frames:
            top = frames[-1]
            stmts, idx = top
            if idx >= len(stmts):
                frames.pop()
                continue
            stmt = stmts[idx]
            cls = type(stmt)
            if cls is Assign:
                self._charge(1)
                value = self._eval(stmt.expr)
                self.env[stmt.name] = value
                top[1] = idx + 1
            elif cls is If:
                self._charge(1)
                branch = stmt.then if _truthy(self._eval(stmt.cond)) else stmt.other
                top[1] = idx + 1
                if branch:
                    frames.append([branch, 0])
            elif cls is While:
                self._charge(1)
                if _truthy(self._eval(stmt.cond)):
                    if stmt.body:
                        frames.append([stmt.body, 0])
                else:
                    top[1] = idx + 1
            else:  # Halt
                self._charge(1)
                raise _Halted

    def _charge(self, k: int):
        if self.steps + k > self.budget:
            raise _OutOfBudget
        self.steps += k

    # -- expressions

    def _eval(self, e):
        cls = type(e)
        if cls is Lit:
            return e.value
        if cls is Name:
            try:
                return self.env[e.name]
            except KeyError:
                raise _Fault(f"undefined variable {e.name!r}") from None
        if cls is BinOp:
            return self._binop(e.op, self._eval(e.left), self._eval(e.right))
        return self._call(e.name, [self._eval(a) for a in e.args])

    def _binop(self, op, a, b):
        if op == "==":
            return 1 if (type(a) is type(b) and a == b) else 0
        an = self._nat(op, a)
        bn = self._nat(op, b)
        if op == "+":
            return an + bn
        if op == "-":
            return an - bn if an > bn else 0
        if op == "*":
            return an * bn
        if op == "/":
            return 0 if bn == 0 else an // bn
        if op == "%":
            return an if bn == 0 else an % bn
        if op == "<":
            return 1 if an < bn else 0
        return 1 if an <= bn else 0  # <=

    def _nat(self, where, v):
        if type(v) is int:
            return v
        raise _Fault(f"{where} needs a natural, got a string")

    def _str(self, where, v):
        if type(v) is str:
            return v
        raise _Fault(f"{where} needs a string, got a natural")

    # -- builtins

    def _call(self, name, args):
        if name == "len":
            return len(self._str("len", args[0]))
        if name == "concat":
            return self._str("concat", args[0]) + self._str("concat", args[1])
        if name == "substr":
            s = self._str("substr", args[0])
            i = self._nat("substr", args[1])
            k = self._nat("substr", args[2])
            return s[min(i, len(s)):min(i + k, len(s))]
        if name == "charat":
            s = self._str("charat", args[0])
            i = self._nat("charat", args[1])
            return s[i] if i < len(s) else ""
        if name == "tonat":
            return program_code(self._str("tonat", args[0]))
        if name == "tostr":
            text = decode_program_code(self._nat("tostr", args[0]))
            if text is None:
                raise _Fault("tostr: code is not a packed string")
            return text
        if name == "pairN":
            return pair(self._nat("pairN", args[0]), self._nat("pairN", args[1]))
        if name in ("unpairL", "unpairR"):
            parts = unpair(self._nat(name, args[0]))
            if parts is None:
                raise _Fault(f"{name}: number is not a pair")
            return parts[0] if name == "unpairL" else parts[1]
        if name == "inrange":
            return 1 if unpair(self._nat("inrange", args[0])) is not None else 0
        if name == "taub":
            return self._taub(*(self._nat("taub", a) for a in args))
        if name == "runout":
            return self._runout(*(self._nat("runout", a) for a in args))
        if name == "checkproof":
            return self._checkproof(*(self._nat("checkproof", a) for a in args))
        raise _Fault(f"unknown builtin {name!r}")  # unreachable after parsing

    def _simulate(self, e: int, x: int, t: int) -> "Machine | None":
        """Run coded program e on x, capped by both t and our remaining
        budget; charge whatever the inner run consumed."""
        program = program_from_code(e)
        if program is None:
            return None
        cap = min(t, self.budget - self.steps)
        inner = Machine(program, x, cap)
        inner.run()
        self._charge(inner.steps)
        if not inner.halted and inner.fault is None and cap < t:
            # the cap that stopped the run was ours, not the caller's t:
            # the outcome at t is unknown within this budget
            raise _OutOfBudget
        return inner

    def _taub(self, e, x, t):
        inner = self._simulate(e, x, t)
        if inner is None:
            return 0  # undecodable programs never halt
        return 1 if inner.halted else 0

    def _runout(self, e, x, t):
        inner = self._simulate(e, x, t)
        if inner is None:
            raise _Fault("runout: program never halts")
        if inner.halted:
            return output_code(inner)
        raise _Fault("runout: program did not halt within the bound")

    def _checkproof(self, enum_code, proof_code, sentence_code):
        from .proofs import check_coded_proof
        result = check_coded_proof(enum_code, proof_code, sentence_code,
                                   step_budget=self.budget - self.steps)
        self._charge(result.consumed)
        if result.kind == "budget":
            raise _OutOfBudget
        return 1 if result.ok else 0


def _truthy(v) -> bool:
    return v != 0 if type(v) is int else v != ""


def output_code(machine: Machine) -> int:
    """The ``out`` value of a halted run, as a natural (strings are packed)."""
    out = machine.env.get("out", 0)
    return out if type(out) is int else program_code(out)


# --------------------------------------------------------------------------
# the bounded-halting relation and friends

@lru_cache(maxsize=512)
def program_from_code(e: int):
    text = decode_program_code(e)
    if text is None:
        return None
    try:
        return parse_program(text)
    except TplSyntaxError:
        return None


def run_program(program, input_value: int, budget: int) -> Machine:
    if isinstance(program, str):
        program = parse_program(program)
    return Machine(program, input_value, budget).run()


def tau_verdict(e: int, x: int, t: int) -> TauVerdict:
    program = program_from_code(e)
    if program is None:
        return TauVerdict(False, None)
    machine = Machine(program, x, t).run()
    if machine.halted:
        return TauVerdict(True, machine.steps)
    return TauVerdict(False, None)


def tau(e: int, x: int, t: int) -> bool:
    """True iff coded program e, run on input x, halts within t steps.

    Total: every natural is a legal code; numbers that fail to decode or
    parse denote programs that never halt.
    """
    return tau_verdict(e, x, t).halted_within


def run_output(e: int, x: int, t: int) -> int | None:
    """Final ``out`` (as a natural) if e halts on x within t, else None."""
    program = program_from_code(e)
    if program is None:
        return None
    machine = Machine(program, x, t).run()
    return output_code(machine) if machine.halted else None


# --------------------------------------------------------------------------
# templates

_PLACEHOLDER = re.compile(r"\{\{([A-Z][A-Z0-9_]*)\}\}")


def template_source(name: str) -> str:
    ref = resources.files("taulab").joinpath("templates", f"{name}.tpl")
    try:
        return ref.read_text(encoding="ascii")
    except FileNotFoundError:
        raise TemplateError(f"no template named {name!r}") from None


def instantiate_template(name: str, bindings: dict) -> TplProgram:
    """Splice ``bindings`` into the {{PLACEHOLDER}} slots of a template."""
    text = template_source(name)

    def fill(match):
        key = match.group(1)
        if key not in bindings:
            raise TemplateError(f"unbound placeholder {{{{{key}}}}} in template {name!r}")
        value = bindings[key]
        if isinstance(value, int) and not isinstance(value, bool):
            return nat_to_decimal(value)
        return str(value)

    return parse_program(_PLACEHOLDER.sub(fill, text))
