"""Query plans compiled from safety derivations.

A plan over a variable set X produces, for an environment binding the
remaining free variables, exactly the X-tuples satisfying its source
formula.  A plan over the empty set is a boolean test (it produces
either one empty tuple or none).  Compilation is directed by the
derivation: each rule application maps to one node shape, so the
annotations on a plan mirror the safe sets of the derivation it came
from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotEvaluable
from .safety import CLAUSE_LABELS, Derivation, TheoryConfig, RST
from .syntax import Eq, Formula, Mem, Subset, TC, Term, Var


@dataclass(frozen=True)
class Plan:
    out_vars: tuple


@dataclass(frozen=True)
class Singleton(Plan):
    """One row: its variable bound to the value of ``term``."""

    var: str
    term: Term


@dataclass(frozen=True)
class Elements(Plan):
    """One row per member of the value of ``term``."""

    var: str
    term: Term


@dataclass(frozen=True)
class EmptyExt(Plan):
    """No rows; the extension of ``x in x`` over well-founded sets."""

    var: str


@dataclass(frozen=True)
class SubsetEnum(Plan):
    """One row per subset of the value of ``term`` (2**n candidates)."""

    var: str
    term: Term


@dataclass(frozen=True)
class AtomTest(Plan):
    """Boolean test of an atomic comparison: op is 'in', '=' or 'sub'."""

    op: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class NotTest(Plan):
    inner: Plan


@dataclass(frozen=True)
class Union(Plan):
    parts: tuple


@dataclass(frozen=True)
class DependentJoin(Plan):
    """Run ``outer``; for each row, run ``inner`` with the row's
    bindings added to the environment."""

    outer: Plan
    inner: Plan


@dataclass(frozen=True)
class Project(Plan):
    inner: Plan
    drop: str


@dataclass(frozen=True)
class ForallTest(Plan):
    """True when every row of ``domain`` passes ``test``."""

    var: str
    domain: Plan
    test: Plan


@dataclass(frozen=True)
class TCFixpoint(Plan):
    """Reachability through the step relation of a TC formula.

    ``direction`` is "forward" (anchor at the chain start, step plan
    solves the next element) or "backward" (anchor at the chain end,
    step plan solves the previous element).  ``mode`` is "reach" (emit
    every value reachable in one or more steps, bound to ``solve``) or
    "test" (boolean: is the value of ``probe`` reachable?).
    """

    var_x: str
    var_y: str
    step: Plan
    direction: str
    anchor: Term
    mode: str
    solve: Optional[str] = None
    probe: Optional[Term] = None


def compile_plan(phi: Formula, xs, d: Derivation, cfg: TheoryConfig = RST) -> Plan:
    """Compile a safety derivation into an executable plan.

    Raises NotEvaluable when the derivation uses a static-only rule.
    """
    xs = frozenset(xs)
    if d.formula != phi or d.vars != xs:
        raise ValueError("derivation does not match the formula and variable set")
    return _compile(d, cfg)


def _cols(xs) -> tuple:
    return tuple(sorted(xs))


def _compile(d: Derivation, cfg: TheoryConfig) -> Plan:
    phi = d.formula
    cols = _cols(d.vars)
    match d.clause:
        case "atom":
            op = {Mem: "in", Eq: "=", Subset: "sub"}[type(phi)]
            return AtomTest((), op, phi.lhs, phi.rhs)
        case "solve":
            (v,) = d.vars
            if isinstance(phi, Eq):
                other = phi.rhs if isinstance(phi.lhs, Var) and phi.lhs.name == v else phi.lhs
                return Singleton(cols, v, other)
            if isinstance(phi.rhs, Var) and phi.rhs.name == v:
                return EmptyExt(cols, v)
            return Elements(cols, v, phi.rhs)
        case "subseteq":
            (v,) = d.vars
            return SubsetEnum(cols, v, phi.rhs)
        case "neg":
            return NotTest((), _compile(d.children[0], cfg))
        case "imp":
            return Union((), (NotTest((), _compile(d.children[0], cfg)),
                              _compile(d.children[1], cfg)))
        case "or":
            return Union(cols, tuple(_compile(c, cfg) for c in d.children))
        case "and":
            return DependentJoin(cols, _compile(d.children[0], cfg),
                                 _compile(d.children[1], cfg))
        case "and-sym":
            # right side runs first; the left side's variables avoid it
            return DependentJoin(cols, _compile(d.children[1], cfg),
                                 _compile(d.children[0], cfg))
        case "exists":
            return Project(cols, _compile(d.children[0], cfg), phi.var)
        case "forall-imp":
            return ForallTest((), phi.var, _compile(d.children[0], cfg),
                              _compile(d.children[1], cfg))
        case "tc":
            step = _compile(d.children[0], cfg)
            match d.note:
                case "forward":
                    return TCFixpoint(cols, phi.var_x, phi.var_y, step, "forward",
                                      phi.start, "reach", solve=phi.end.name)
                case "backward":
                    return TCFixpoint(cols, phi.var_x, phi.var_y, step, "backward",
                                      phi.end, "reach", solve=phi.start.name)
                case "bool-forward":
                    return TCFixpoint(cols, phi.var_x, phi.var_y, step, "forward",
                                      phi.start, "test", probe=phi.end)
                case "bool-backward":
                    return TCFixpoint(cols, phi.var_x, phi.var_y, step, "backward",
                                      phi.end, "test", probe=phi.start)
            raise ValueError(f"malformed TC derivation note {d.note!r}")
    raise NotEvaluable(
        f"derivation uses a static-only rule: {CLAUSE_LABELS.get(d.clause, d.clause)}")
