"""Abstract syntax for terms and formulas.

Terms are variables, constants, and set comprehensions ``{x | phi}``.
Formulas are the atoms (membership, equality, subset), the propositional
connectives, the quantifiers, and the transitive-closure binder
``TC[x,y](phi)(t, s)``.  Everything here is immutable; the operations
(free variables, capture-avoiding substitution, alpha equivalence) are
pure functions, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union


@dataclass(frozen=True)
class Span:
    """1-based source range; ``file`` identifies the input buffer."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class Node:
    span: Optional[Span] = field(
        default=None, kw_only=True, compare=False, repr=False
    )


class Term(Node):
    pass


class Formula(Node):
    pass


Expr = Union[Term, Formula]


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    """A signature constant.  The only one shipped is ``HF``; it denotes
    an infinite set, so it type-checks but never evaluates."""

    name: str


@dataclass(frozen=True)
class Comp(Term):
    """Set comprehension ``{var | body}``; ``var`` is bound in ``body``."""

    var: str
    body: Formula


@dataclass(frozen=True)
class MacroCall(Node):
    """Unexpanded call of a user definition.  Only appears in surface
    syntax; ``parser.expand_abbreviations`` eliminates it."""

    name: str
    args: tuple


@dataclass(frozen=True)
class Mem(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Subset(Formula):
    """``lhs sub rhs``; legal only when the subset-atom pack is enabled."""

    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class TC(Formula):
    """Transitive-closure formula ``TC[x,y](body)(start, end)``.

    ``var_x`` and ``var_y`` are bound in ``body`` only.  The formula
    holds when some chain ``start = u0, u1, ..., un = end`` with n >= 1
    satisfies ``body[x := u_i, y := u_{i+1}]`` at every step.
    """

    var_x: str
    var_y: str
    body: Formula
    start: Term
    end: Term

    def __post_init__(self):
        if self.var_x == self.var_y:
            raise ValueError("TC binders must be distinct variables")


FRESH_PREFIX = "$"


def is_fresh_name(name: str) -> bool:
    return name.startswith(FRESH_PREFIX)


def fresh_var(avoid: Iterable[str]) -> str:
    """Smallest reserved-namespace name not in ``avoid``.

    Reserved names start with ``$`` and cannot be written in source, so
    macro expansion can never capture a user variable.
    """
    avoid = set(avoid)
    k = 0
    while f"{FRESH_PREFIX}{k}" in avoid:
        k += 1
    return f"{FRESH_PREFIX}{k}"


def free_vars(e: Expr) -> frozenset:
    match e:
        case Var(name):
            return frozenset((name,))
        case Const(_):
            return frozenset()
        case Comp(var, body):
            return free_vars(body) - {var}
        case MacroCall(_, args):
            out = frozenset()
            for a in args:
                out |= free_vars(a)
            return out
        case Mem(lhs, rhs) | Eq(lhs, rhs) | Subset(lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case Not(sub):
            return free_vars(sub)
        case And(lhs, rhs) | Or(lhs, rhs) | Implies(lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case Exists(var, body) | Forall(var, body):
            return free_vars(body) - {var}
        case TC(var_x, var_y, body, start, end):
            return (free_vars(body) - {var_x, var_y}) | free_vars(start) | free_vars(end)
    raise TypeError(f"not a term or formula: {e!r}")


def substitute(e: Expr, var: str, replacement: Term) -> Expr:
    """Replace free occurrences of ``var`` by ``replacement``,
    renaming bound variables as needed to avoid capture."""
    return substitute_many(e, {var: replacement})


def substitute_many(e: Expr, mapping: Mapping[str, Term]) -> Expr:
    live = {k: v for k, v in mapping.items() if k in free_vars(e)}
    if not live:
        return e
    return _subst(e, live)


def _rename_binder(var: str, body: Formula, mapping: dict):
    """Refresh ``var`` when some replacement would be captured by it."""
    mapping = {k: v for k, v in mapping.items() if k != var and k in free_vars(body)}
    if not mapping:
        return var, body, mapping
    clashing = any(var in free_vars(t) for t in mapping.values())
    if not clashing:
        return var, body, mapping
    avoid = set(free_vars(body))
    for t in mapping.values():
        avoid |= free_vars(t)
    avoid |= set(mapping)
    new = fresh_var(avoid)
    body = _subst(body, {var: Var(new)}) if var in free_vars(body) else body
    return new, body, mapping


def _subst(e: Expr, mapping: dict) -> Expr:
    match e:
        case Var(name):
            return mapping.get(name, e)
        case Const(_):
            return e
        case Comp(var, body):
            var2, body2, m2 = _rename_binder(var, body, mapping)
            return Comp(var2, _subst(body2, m2) if m2 else body2, span=e.span)
        case MacroCall(name, args):
            return MacroCall(name, tuple(_subst(a, mapping) for a in args), span=e.span)
        case Mem(lhs, rhs):
            return Mem(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Eq(lhs, rhs):
            return Eq(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Subset(lhs, rhs):
            return Subset(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Not(sub):
            return Not(_subst(sub, mapping), span=e.span)
        case And(lhs, rhs):
            return And(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Or(lhs, rhs):
            return Or(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Implies(lhs, rhs):
            return Implies(_subst(lhs, mapping), _subst(rhs, mapping), span=e.span)
        case Exists(var, body):
            var2, body2, m2 = _rename_binder(var, body, mapping)
            return Exists(var2, _subst(body2, m2) if m2 else body2, span=e.span)
        case Forall(var, body):
            var2, body2, m2 = _rename_binder(var, body, mapping)
            return Forall(var2, _subst(body2, m2) if m2 else body2, span=e.span)
        case TC(var_x, var_y, body, start, end):
            start2 = _subst(start, mapping)
            end2 = _subst(end, mapping)
            inner = {k: v for k, v in mapping.items()
                     if k not in (var_x, var_y) and k in free_vars(body)}
            vx, vy, body2 = var_x, var_y, body
            if inner:
                clash = set()
                for t in inner.values():
                    clash |= free_vars(t)
                avoid = set(free_vars(body)) | clash | set(inner) | {var_x, var_y}
                if var_x in clash:
                    vx = fresh_var(avoid)
                    avoid.add(vx)
                    body2 = _subst(body2, {var_x: Var(vx)})
                if var_y in clash:
                    vy = fresh_var(avoid)
                    body2 = _subst(body2, {var_y: Var(vy)})
                body2 = _subst(body2, inner)
            return TC(vx, vy, body2, start2, end2, span=e.span)
    raise TypeError(f"not a term or formula: {e!r}")


def alpha_eq(a: Expr, b: Expr) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, ra, rb, depth) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case Var(x), Var(y):
            bx, by = ra.get(x), rb.get(y)
            if (bx is None) != (by is None):
                return False
            return x == y if bx is None else bx == by
        case Const(x), Const(y):
            return x == y
        case Comp(x, p), Comp(y, q):
            return _alpha(p, q, ra | {x: depth}, rb | {y: depth}, depth + 1)
        case MacroCall(x, ps), MacroCall(y, qs):
            return x == y and len(ps) == len(qs) and all(
                _alpha(p, q, ra, rb, depth) for p, q in zip(ps, qs)
            )
        case (Mem(l1, r1), Mem(l2, r2)) | (Eq(l1, r1), Eq(l2, r2)) | (Subset(l1, r1), Subset(l2, r2)):
            return _alpha(l1, l2, ra, rb, depth) and _alpha(r1, r2, ra, rb, depth)
        case Not(p), Not(q):
            return _alpha(p, q, ra, rb, depth)
        case (And(l1, r1), And(l2, r2)) | (Or(l1, r1), Or(l2, r2)) | (Implies(l1, r1), Implies(l2, r2)):
            return _alpha(l1, l2, ra, rb, depth) and _alpha(r1, r2, ra, rb, depth)
        case (Exists(x, p), Exists(y, q)) | (Forall(x, p), Forall(y, q)):
            return _alpha(p, q, ra | {x: depth}, rb | {y: depth}, depth + 1)
        case TC(x1, y1, p, s1, e1), TC(x2, y2, q, s2, e2):
            return (
                _alpha(p, q, ra | {x1: depth, y1: depth + 1}, rb | {x2: depth, y2: depth + 1}, depth + 2)
                and _alpha(s1, s2, ra, rb, depth)
                and _alpha(e1, e2, ra, rb, depth)
            )
    return False


def subformulas(e: Expr):
    """All term/formula nodes of ``e``, root first."""
    stack = [e]
    while stack:
        n = stack.pop()
        yield n
        match n:
            case Comp(_, body):
                stack.append(body)
            case MacroCall(_, args):
                stack.extend(args)
            case Mem(l, r) | Eq(l, r) | Subset(l, r):
                stack.extend((l, r))
            case Not(s):
                stack.append(s)
            case And(l, r) | Or(l, r) | Implies(l, r):
                stack.extend((l, r))
            case Exists(_, body) | Forall(_, body):
                stack.append(body)
            case TC(_, _, body, start, end):
                stack.extend((body, start, end))


def node_count(e: Expr) -> int:
    return sum(1 for _ in subformulas(e))


def comp_count(e: Expr) -> int:
    return sum(1 for n in subformulas(e) if isinstance(n, Comp))
