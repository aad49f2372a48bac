"""Effectively presented theories of the standard model, and two deciders.

Two theories share the six order axioms over <N, 0, s, <>:

- the record theory ("T") adds every true bounded-halting record
  tau(e, x, t);
- the signed record theory ("S") adds, for every coded triple, the record
  *signed* (the atom when true, its negation when false), plus the segment
  axioms pinning each initial segment of the order ("x < k iff x is one of
  0 .. k-1").

Each theory carries a decidable membership predicate and a total TPL
enumerator whose stream interleaves the axioms with inert padding ("0 = 0")
so every index yields a sentence; ``enumerate_axioms`` is the host-side
mirror of those enumerator programs, slot for slot.

``decide_order_theory`` decides truth in <N, 0, s, <> outright: tau atoms
are first totalized to tautologies, then quantifiers are eliminated one at
a time.  Formulas are flattened to disjunctions of difference constraints
(val(u) < val(v) + c and friends, offsets in Z); an innermost existential
then holds exactly when the interval cut out by the lower and upper bounds
contains a point missing all the punctures, which reduces to finitely many
candidate substitutions "greatest lower bound plus d".

``eval_std`` evaluates sentences in the standard model directly.  Order-only
quantifiers are scanned up to a threshold that provably suffices (values
beyond every numeral, parameter, and successor offset are interchangeable
for the remaining quantifier depth), so that fragment is exact and doubles
as an independent oracle for the eliminator.  Quantifiers over subformulas
mentioning tau or pi are scanned up to a caller budget and report unknown
when the scan is inconclusive, because only a concrete witness can settle
them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from typing import Callable, Iterable, Optional

from .codec import program_code, unpair
from .codec import pair as nat_pair
from .fol import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    FreeVariableError,
    Iff,
    Imp,
    Less,
    Not,
    Num,
    Or,
    Pi,
    Succ,
    Tau,
    Term,
    Var,
    conjoin_left,
    free_vars,
    parse_sentence,
)
from .tpl import tau, template_source

__all__ = [
    "ORDER_AXIOMS", "PADDING", "FALSUM",
    "tau_atom", "closed_tau_args", "segment_axiom", "segment_axiom_index",
    "axiom_member_T", "axiom_member_S", "enumerate_axioms",
    "TheoryHandle", "theory_T", "theory_S", "theory_by_name",
    "Verdict", "PROVABLE", "REFUTABLE", "TRUE_IN_STD", "FALSE_IN_STD",
    "independent_up_to", "unknown",
    "UnsupportedTermError", "decide_order_theory", "order_truth",
    "order_extension_derives", "eval_std",
]


class UnsupportedTermError(ValueError):
    """Raised when the order decider meets a pairing term."""


# --------------------------------------------------------------------------
# the fixed axioms

_ORDER_AXIOM_TEXTS = (
    "A x. A y. (x < y -> ~(y < x))",
    "A x. A y. A z. (x < y & y < z -> x < z)",
    "A x. A y. (x < y | x = y | y < x)",
    "A x. A y. (x < y <-> s(x) < y | s(x) = y)",
    "A x. ~(x < 0)",
    "A x. (0 < x -> E v. x = s(v))",
)

ORDER_AXIOMS: tuple[Formula, ...] = tuple(parse_sentence(t) for t in _ORDER_AXIOM_TEXTS)

PADDING: Formula = Eq(Num(0), Num(0))
FALSUM: Formula = Not(Eq(Num(0), Num(0)))


def tau_atom(e: int, x: int, t: int) -> Formula:
    """The closed bounded-halting atom tau(e, x, t) with numeral arguments."""
    return Tau(Num(e), Num(x), Num(t))


def closed_tau_args(f: Formula) -> tuple[int, int, int] | None:
    """The (e, x, t) of a closed tau atom, or None for any other formula."""
    if (isinstance(f, Tau) and isinstance(f.prog, Num)
            and isinstance(f.arg, Num) and isinstance(f.steps, Num)):
        return f.prog.value, f.arg.value, f.steps.value
    return None


def segment_axiom(k: int) -> Formula:
    """The sentence pinning the k-th initial segment of the order.

    "A x. (x < #k <-> x = 0 | ... | x = #(k-1))"; the empty disjunction at
    k = 0 is the canonical falsum "~(0 = 0)".
    """
    if k < 0:
        raise ValueError("segment index must be a natural number")
    x = Var("x")
    if k == 0:
        body = FALSUM
    else:
        body = Eq(x, Num(k - 1))
        for i in range(k - 2, -1, -1):
            body = Or(Eq(x, Num(i)), body)
    return Forall("x", Iff(Less(x, Num(k)), body))


def segment_axiom_index(f: Formula) -> int | None:
    """The k with f == segment_axiom(k), or None (exact, bit for bit)."""
    if not (isinstance(f, Forall) and f.var == "x" and isinstance(f.body, Iff)):
        return None
    guard = f.body.left
    if not (isinstance(guard, Less) and isinstance(guard.left, Var)
            and guard.left.name == "x" and isinstance(guard.right, Num)):
        return None
    k = guard.right.value
    return k if f == segment_axiom(k) else None


# --------------------------------------------------------------------------
# axiom membership and enumeration

def axiom_member_T(s: Formula) -> bool:
    """Whether s is an order axiom, a true bounded-halting record, or the
    inert padding sentence (a logical triviality, admitted so the
    enumerator's range is exactly the membership extension)."""
    if s == PADDING or any(s == axiom for axiom in ORDER_AXIOMS):
        return True
    args = closed_tau_args(s)
    return args is not None and tau(*args)


def axiom_member_S(s: Formula) -> bool:
    """axiom_member_T, plus negated false records and segment axioms."""
    if axiom_member_T(s):
        return True
    if isinstance(s, Not):
        args = closed_tau_args(s.inner)
        if args is not None:
            return not tau(*args)
    return segment_axiom_index(s) is not None


def _triple(j: int) -> tuple[int, int, int] | None:
    outer = unpair(j)
    if outer is None:
        return None
    left, t = outer
    inner = unpair(left)
    if inner is None:
        return None
    e, x = inner
    return e, x, t


def enumerate_axioms(theory: "TheoryHandle | str", index: int) -> Formula:
    """The index-th sentence of a theory's canonical axiom stream.

    Mirrors the shipped TPL enumerators slot for slot: the six order axioms
    first, then one slot per coded triple (e, x, t) — for "S" interleaved
    with the segment axioms on the odd offsets — with padding "0 = 0" at
    offsets that decode to no triple (and, for "T", at false records).
    """
    name = theory.name if isinstance(theory, TheoryHandle) else str(theory)
    if name not in ("T", "S"):
        raise ValueError(f"unknown theory {name!r} (expected 'T' or 'S')")
    if index < 0:
        raise ValueError("enumeration index must be a natural number")
    if index < 6:
        return ORDER_AXIOMS[index]
    j = index - 6
    if name == "T":
        triple = _triple(j)
        if triple is None:
            return PADDING
        return tau_atom(*triple) if tau(*triple) else PADDING
    if j % 2 == 1:
        return segment_axiom((j - 1) // 2)
    triple = _triple(j // 2)
    if triple is None:
        return PADDING
    atom = tau_atom(*triple)
    return atom if tau(*triple) else Not(atom)


@dataclass(frozen=True)
class TheoryHandle:
    """A theory given by a membership test and/or a total axiom enumerator.

    When both are present the enumerator's range equals the membership
    extension.
    """

    name: str
    axiom_membership: Optional[Callable[[Formula], bool]]
    enumerator_code: Optional[int]
    language: frozenset[str]

    def enumerate(self, index: int) -> Formula:
        return enumerate_axioms(self, index)


@cache
def theory_T() -> TheoryHandle:
    """Order axioms plus all true bounded-halting records."""
    return TheoryHandle(
        name="T",
        axiom_membership=axiom_member_T,
        enumerator_code=program_code(template_source("enum_t")),
        language=frozenset({"0", "s", "<", "tau"}),
    )


@cache
def theory_S() -> TheoryHandle:
    """Order axioms, signed bounded-halting records, and segment axioms."""
    return TheoryHandle(
        name="S",
        axiom_membership=axiom_member_S,
        enumerator_code=program_code(template_source("enum_s")),
        language=frozenset({"0", "s", "<", "tau"}),
    )


def theory_by_name(name: str) -> TheoryHandle:
    if name == "T":
        return theory_T()
    if name == "S":
        return theory_S()
    raise ValueError(f"unknown theory {name!r} (expected 'T' or 'S')")


# --------------------------------------------------------------------------
# verdicts

_BUDGETED_KINDS = ("independent-as-far-as-tested", "unknown")
_KINDS = ("provable", "refutable", "true-in-std", "false-in-std") + _BUDGETED_KINDS


@dataclass(frozen=True, slots=True)
class Verdict:
    """Outcome of a decision attempt; budgeted kinds carry their budget."""

    kind: str
    budget: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown verdict kind {self.kind!r}")
        if (self.budget is not None) != (self.kind in _BUDGETED_KINDS):
            raise ValueError(f"verdict {self.kind!r} and budget {self.budget!r} do not fit")

    def __str__(self) -> str:
        if self.budget is None:
            return self.kind
        return f"{self.kind}({self.budget})"


PROVABLE = Verdict("provable")
REFUTABLE = Verdict("refutable")
TRUE_IN_STD = Verdict("true-in-std")
FALSE_IN_STD = Verdict("false-in-std")


def independent_up_to(budget: int) -> Verdict:
    return Verdict("independent-as-far-as-tested", int(budget))


def unknown(budget: int) -> Verdict:
    return Verdict("unknown", int(budget))


# --------------------------------------------------------------------------
# quantifier elimination for the order fragment
#
# Constraint atoms are triples over bases (a variable's internal name, or 0
# for the fixed zero point) with an integer offset:
#
#     ("lt", u, v, c)   val(u) <  val(v) + c
#     ("eq", u, v, c)   val(u) == val(v) + c
#     ("ne", u, v, c)   val(u) != val(v) + c
#
# Same-base atoms fold to booleans at construction, so ground formulas
# collapse as elimination proceeds.

_ZERO = 0

_DNF_TERM_CAP = 500_000


def _mk_lt(u, v, c):
    if u == v:
        return c > 0
    return ("lt", u, v, c)


def _mk_eq(u, v, c):
    if u == v:
        return c == 0
    return ("eq", u, v, c)


def _mk_ne(u, v, c):
    if u == v:
        return c != 0
    return ("ne", u, v, c)


def _base_offset(t: Term, names: dict[str, object]):
    k = 0
    while isinstance(t, Succ):
        k += 1
        t = t.inner
    if isinstance(t, Num):
        return _ZERO, t.value + k
    if isinstance(t, Var):
        return names[t.name], k
    raise UnsupportedTermError("pairing terms have no place in the order fragment")


def _to_internal(f: Formula, positive: bool, names: dict[str, object], fresh) -> object:
    """NNF over constraint atoms; binders renamed apart; tau totalized."""
    if isinstance(f, Tau):
        return positive
    if isinstance(f, Less):
        a, i = _base_offset(f.left, names)
        b, j = _base_offset(f.right, names)
        return _mk_lt(a, b, j - i) if positive else _mk_lt(b, a, i - j + 1)
    if isinstance(f, Eq):
        a, i = _base_offset(f.left, names)
        b, j = _base_offset(f.right, names)
        return _mk_eq(a, b, j - i) if positive else _mk_ne(a, b, j - i)
    if isinstance(f, Not):
        return _to_internal(f.inner, not positive, names, fresh)
    if isinstance(f, And) or isinstance(f, Or):
        both_and = isinstance(f, And) == positive
        parts = (_to_internal(f.left, positive, names, fresh),
                 _to_internal(f.right, positive, names, fresh))
        return _mk_and(parts) if both_and else _mk_or(parts)
    if isinstance(f, Imp):
        parts = (_to_internal(f.left, not positive, names, fresh),
                 _to_internal(f.right, positive, names, fresh))
        return _mk_or(parts) if positive else _mk_and(parts)
    if isinstance(f, Iff):
        pl = _to_internal(f.left, True, names, fresh)
        nl = _to_internal(f.left, False, names, fresh)
        pr = _to_internal(f.right, True, names, fresh)
        nr = _to_internal(f.right, False, names, fresh)
        if positive:
            return _mk_and((_mk_or((nl, pr)), _mk_or((nr, pl))))
        return _mk_or((_mk_and((pl, nr)), _mk_and((pr, nl))))
    if isinstance(f, (Forall, Exists)):
        inner_name = next(fresh)
        scoped = dict(names)
        scoped[f.var] = inner_name
        body = _to_internal(f.body, positive, scoped, fresh)
        existential = isinstance(f, Exists) == positive
        return ("ex" if existential else "all", inner_name, body)
    raise TypeError(f"not a formula: {f!r}")


def _mk_and(parts):
    flat = []
    for p in parts:
        if p is False:
            return False
        if p is True:
            continue
        if isinstance(p, tuple) and p[0] == "and":
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return True
    if len(flat) == 1:
        return flat[0]
    return ("and", tuple(flat))


def _mk_or(parts):
    flat = []
    for p in parts:
        if p is True:
            return True
        if p is False:
            continue
        if isinstance(p, tuple) and p[0] == "or":
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return False
    if len(flat) == 1:
        return flat[0]
    return ("or", tuple(flat))


def _neg_qf(node):
    if node is True:
        return False
    if node is False:
        return True
    tag = node[0]
    if tag == "lt":
        return _mk_lt(node[2], node[1], 1 - node[3])
    if tag == "eq":
        return _mk_ne(node[1], node[2], node[3])
    if tag == "ne":
        return _mk_eq(node[1], node[2], node[3])
    if tag == "and":
        return _mk_or(tuple(_neg_qf(p) for p in node[1]))
    return _mk_and(tuple(_neg_qf(p) for p in node[1]))


def _bkey(base):
    return ("", "") if base == _ZERO else ("v", base)


def _normalize_term(atoms) -> tuple | None:
    """Dedup a constraint conjunction and kill it when provably empty.

    Equality/disequality atoms are oriented canonically, exact duplicates
    are dropped, a shortest-path closure over the difference bounds detects
    contradictions, and punctures already entailed by strict bounds are
    removed (they would otherwise inflate the candidate case split).
    """
    bases: list = []
    dist: dict = {}

    def note(u, v, c):
        key = (u, v)
        old = dist.get(key)
        if old is None or c < old:
            dist[key] = c

    kept: list = []
    punct: list = []
    seen: set = set()
    for a in atoms:
        tag, u, v, c = a
        if _bkey(v) < _bkey(u) and tag != "lt":
            u, v, c = v, u, -c
            a = (tag, u, v, c)
        if a in seen:
            continue
        seen.add(a)
        for b in (u, v):
            if b not in bases:
                bases.append(b)
        if tag == "lt":
            note(u, v, c - 1)          # val(u) <= val(v) + c - 1
            kept.append(a)
        elif tag == "eq":
            note(u, v, c)
            note(v, u, -c)
            kept.append(a)
        else:
            punct.append(a)
    for mid in bases:
        for a_ in bases:
            am = dist.get((a_, mid))
            if am is None:
                continue
            for b_ in bases:
                mb = dist.get((mid, b_))
                if mb is not None:
                    note(a_, b_, am + mb)
    for b_ in bases:
        loop = dist.get((b_, b_))
        if loop is not None and loop < 0:
            return None
    for a in punct:
        _, u, v, c = a
        le = dist.get((u, v))
        ge = dist.get((v, u))
        if le is not None and ge is not None and le == c and ge == -c:
            return None                # the difference is pinned to c
        if (le is not None and le < c) or (ge is not None and ge < -c):
            continue                   # already strictly off c
        kept.append(a)
    return tuple(kept)


def _dnf(node) -> list[tuple]:
    if node is True:
        return [()]
    if node is False:
        return []
    tag = node[0]
    if tag in ("lt", "eq", "ne"):
        return [(node,)]
    if tag == "or":
        out = []
        seen = set()
        for p in node[1]:
            for term in _dnf(p):
                key = frozenset(term)
                if key not in seen:
                    seen.add(key)
                    out.append(term)
        return out
    terms = [()]
    for p in node[1]:
        part_terms = _dnf(p)
        new: list[tuple] = []
        seen = set()
        for a in terms:
            for b in part_terms:
                merged = _normalize_term(a + b)
                if merged is None:
                    continue
                key = frozenset(merged)
                if key in seen:
                    continue
                seen.add(key)
                new.append(merged)
                if len(new) > _DNF_TERM_CAP:
                    raise RuntimeError("formula too large to flatten for elimination")
        terms = new
        if not terms:
            return []
    return terms


def _eliminate_term(x, atoms) -> list[tuple]:
    """Residual constraint conjunctions equivalent to: exists x, all atoms."""
    others: list[tuple] = []
    lowers: list[tuple] = [(_ZERO, 0)]          # x >= base + offset
    uppers: list[tuple] = []                    # x <= base + offset
    punct: list[tuple] = []                     # x != base + offset
    eqs: list[tuple] = []                       # x == base + offset
    for a in atoms:
        tag, u, v, c = a
        if u != x and v != x:
            others.append(a)
        elif tag == "lt":
            if u == x:
                uppers.append((v, c - 1))
            else:
                lowers.append((u, 1 - c))
        elif tag == "eq":
            eqs.append((v, c) if u == x else (u, -c))
        else:
            punct.append((v, c) if u == x else (u, -c))

    if eqs:
        v0, c0 = eqs[0]
        cons: list[object] = []
        for v, c in eqs[1:]:
            cons.append(_mk_eq(v0, v, c - c0))
        for w, j in lowers:                      # w + j <= v0 + c0
            cons.append(_mk_lt(w, v0, c0 - j + 1))
        for u, e in uppers:                      # v0 + c0 <= u + e
            cons.append(_mk_lt(v0, u, e - c0 + 1))
        for w, p in punct:                       # v0 + c0 != w + p
            cons.append(_mk_ne(v0, w, p - c0))
        if any(c is False for c in cons):
            return []
        return [tuple(others) + tuple(c for c in cons if c is not True)]

    # No equality pins x: case-split on which lower bound is greatest, then
    # try the candidates "greatest lower bound + d".  With P punctures, a
    # nonempty solution interval always contains one of the P + 1 smallest
    # admissible values.
    results = []
    for idx, (v, k) in enumerate(lowers):
        maxness = []
        dead = False
        for jdx, (w, j) in enumerate(lowers):
            if jdx == idx:
                continue
            m = _mk_lt(w, v, k - j + 1)          # w + j <= v + k
            if m is False:
                dead = True
                break
            if m is not True:
                maxness.append(m)
        if dead:
            continue
        for d in range(len(punct) + 1):
            offset = k + d
            cons = list(maxness)
            alive = True
            for u, e in uppers:                  # v + offset <= u + e
                c = _mk_lt(v, u, e - offset + 1)
                if c is False:
                    alive = False
                    break
                if c is not True:
                    cons.append(c)
            if alive:
                for w, p in punct:               # v + offset != w + p
                    c = _mk_ne(v, w, p - offset)
                    if c is False:
                        alive = False
                        break
                    if c is not True:
                        cons.append(c)
            if alive:
                results.append(tuple(others) + tuple(cons))
    return results


def _eliminate(x, qf):
    parts = []
    seen = set()
    for term in _dnf(qf):
        for residual in _eliminate_term(x, term):
            merged = _normalize_term(residual)
            if merged is None:
                continue
            key = frozenset(merged)
            if key not in seen:
                seen.add(key)
                parts.append(_mk_and(merged))
    return _mk_or(parts)


def _qe(node):
    if node is True or node is False:
        return node
    tag = node[0]
    if tag in ("lt", "eq", "ne"):
        return node
    if tag == "and":
        return _mk_and(tuple(_qe(p) for p in node[1]))
    if tag == "or":
        return _mk_or(tuple(_qe(p) for p in node[1]))
    if tag == "ex":
        return _eliminate(node[1], _qe(node[2]))
    return _neg_qf(_eliminate(node[1], _neg_qf(_qe(node[2]))))


def order_truth(sentence: Formula) -> bool:
    """Truth of a pi-free sentence in <N, 0, s, <>, tau atoms totalized."""
    names = free_vars(sentence)
    if names:
        raise FreeVariableError(names)
    fresh = (f"v{i}" for i in itertools.count())
    result = _qe(_to_internal(sentence, True, {}, fresh))
    if result is not True and result is not False:
        raise AssertionError("elimination left a non-ground residue")
    return result


def decide_order_theory(sentence: Formula) -> Verdict:
    """TRUE_IN_STD or FALSE_IN_STD for the totalized order fragment."""
    return TRUE_IN_STD if order_truth(sentence) else FALSE_IN_STD


def order_extension_derives(assumptions: Iterable[Formula], goal: Formula) -> bool:
    """Whether the order theory plus finitely many sentences derives goal.

    For a complete base theory, derivability from finitely many extra
    sentences is truth of the single implication "conjunction -> goal".
    """
    gamma = list(assumptions)
    if not gamma:
        return order_truth(goal)
    return order_truth(Imp(conjoin_left(gamma), goal))


# --------------------------------------------------------------------------
# standard-model evaluation

@dataclass(frozen=True, slots=True)
class _Profile:
    max_num: int
    max_chain: int
    qdepth: int
    impure: bool          # mentions tau or pi


def _term_stats(t: Term) -> tuple[int, int, bool]:
    max_num = 0
    max_chain = 0
    has_pi = False
    stack = [t]
    while stack:
        node = stack.pop()
        chain = 0
        while isinstance(node, Succ):
            chain += 1
            node = node.inner
        if chain > max_chain:
            max_chain = chain
        if isinstance(node, Num):
            if node.value > max_num:
                max_num = node.value
        elif isinstance(node, Pi):
            has_pi = True
            stack.append(node.left)
            stack.append(node.right)
    return max_num, max_chain, has_pi


def _profile(f: Formula, memo: dict) -> _Profile:
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Tau):
        result = _Profile(0, 0, 0, True)
    elif isinstance(f, (Less, Eq)):
        ln, lc, lp = _term_stats(f.left)
        rn, rc, rp = _term_stats(f.right)
        result = _Profile(max(ln, rn), max(lc, rc), 0, lp or rp)
    elif isinstance(f, Not):
        result = _profile(f.inner, memo)
    elif isinstance(f, (And, Or, Imp, Iff)):
        left = _profile(f.left, memo)
        right = _profile(f.right, memo)
        result = _Profile(max(left.max_num, right.max_num),
                          max(left.max_chain, right.max_chain),
                          max(left.qdepth, right.qdepth),
                          left.impure or right.impure)
    elif isinstance(f, (Forall, Exists)):
        inner = _profile(f.body, memo)
        result = _Profile(inner.max_num, inner.max_chain, inner.qdepth + 1, inner.impure)
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[key] = result
    return result


def _free_in(f: Formula, memo: dict) -> frozenset[str]:
    key = ("fv", id(f))
    hit = memo.get(key)
    if hit is None:
        hit = free_vars(f)
        memo[key] = hit
    return hit


def _term_value(t: Term, env: dict[str, int]) -> int:
    k = 0
    while isinstance(t, Succ):
        k += 1
        t = t.inner
    if isinstance(t, Num):
        return t.value + k
    if isinstance(t, Var):
        return env[t.name] + k
    return nat_pair(_term_value(t.left, env), _term_value(t.right, env)) + k


def _ev(f: Formula, env: dict[str, int], budget: int, memo: dict):
    """Three-valued evaluation: True, False, or None for 'not settled'."""
    if isinstance(f, Less):
        return _term_value(f.left, env) < _term_value(f.right, env)
    if isinstance(f, Eq):
        return _term_value(f.left, env) == _term_value(f.right, env)
    if isinstance(f, Tau):
        return tau(_term_value(f.prog, env), _term_value(f.arg, env),
                   _term_value(f.steps, env))
    if isinstance(f, Not):
        r = _ev(f.inner, env, budget, memo)
        return None if r is None else not r
    if isinstance(f, (And, Or)):
        kind = type(f)
        decisive = kind is Or                   # one True settles Or, one False settles And
        parts = []
        stack = [f]
        while stack:
            g = stack.pop()
            if type(g) is kind:
                stack.append(g.right)
                stack.append(g.left)
            else:
                parts.append(g)
        saw_unknown = False
        for g in parts:
            r = _ev(g, env, budget, memo)
            if r is decisive:
                return decisive
            if r is None:
                saw_unknown = True
        return None if saw_unknown else (not decisive)
    if isinstance(f, Imp):
        a = _ev(f.left, env, budget, memo)
        if a is False:
            return True
        b = _ev(f.right, env, budget, memo)
        if b is True:
            return True
        if a is True and b is False:
            return False
        return None
    if isinstance(f, Iff):
        a = _ev(f.left, env, budget, memo)
        b = _ev(f.right, env, budget, memo)
        if a is None or b is None:
            return None
        return a is b
    if isinstance(f, (Forall, Exists)):
        exist = isinstance(f, Exists)
        prof = _profile(f.body, memo)
        if prof.impure:
            bound = budget
        else:
            # Exhaustive, not heuristic: two values whose distance to every
            # numeral and parameter exceeds (chain + 1) * 2^depth cannot be
            # told apart by the remaining quantifiers (each round can at
            # most halve the gap a formula distinguishes, successor offsets
            # widen it by a factor of chain + 1).
            params = [env[name] for name in _free_in(f, memo)]
            ceiling = max([prof.max_num, *params]) if params else prof.max_num
            bound = ceiling + (prof.max_chain + 1) * (1 << (prof.qdepth + 1)) + 1
        scoped = dict(env)
        saw_unknown = False
        for value in range(bound + 1):
            scoped[f.var] = value
            r = _ev(f.body, scoped, budget, memo)
            if exist and r is True:
                return True
            if not exist and r is False:
                return False
            if r is None:
                saw_unknown = True
        if prof.impure or saw_unknown:
            return None
        return not exist
    raise TypeError(f"not a formula: {f!r}")


def eval_std(sentence: Formula, budget: int = 10**6) -> Verdict:
    """Evaluate a sentence in the standard model, honestly budgeted.

    Closed atoms are computed outright (tau by running the coded program
    for at most its own step bound).  Pure order quantifiers are exact;
    quantifiers over tau/pi subformulas scan 0..budget and yield
    ``unknown(budget)`` when neither a witness nor a counterexample turns
    up within it.
    """
    names = free_vars(sentence)
    if names:
        raise FreeVariableError(names)
    if budget < 0:
        raise ValueError("budget must be a natural number")
    result = _ev(sentence, {}, budget, {})
    if result is True:
        return TRUE_IN_STD
    if result is False:
        return FALSE_IN_STD
    return unknown(budget)
