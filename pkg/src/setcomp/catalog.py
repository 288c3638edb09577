"""The standard abbreviation catalog, the numeral-sequence term, and the
counterpart axioms for the HF constant.

The catalog has exactly 22 entries.  Entries backed by a definition
live in ``prelude.set`` (parsed at startup, which exercises the parser
on real input); the rest are parser-level sugar with binders, so they
cannot be ordinary first-order definitions.

A note on ``Dom``/``Rng``: their defining formulas quantify over the
components of pair encodings, and on graphs whose keys or values
include the empty set the described-value fallback (iota of nothing is
empty) can admit spurious members.  The tests therefore use functional
graphs avoiding the empty set; apply this catalog to such graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from .errors import UnsupportedConstruct
from .parser import Definition, parse_formula, parse_term, parse_theory_file
from .safety import PZF, RST, RST_OMEGA, HF_CONSTANT, TheoryConfig
from .syntax import (
    And, Comp, Const, Eq, Exists, Forall, Formula, Implies, MacroCall, Mem,
    Or, Term, Var, free_vars, fresh_var, substitute,
)


@lru_cache(maxsize=1)
def _prelude():
    src = resources.files("setcomp").joinpath("prelude.set").read_text("utf-8")
    parsed = parse_theory_file(src, RST, defs={}, file="prelude.set")
    return dict(parsed.definitions)


def prelude_definitions() -> dict:
    """The startup definition table (a fresh copy)."""
    return dict(_prelude())


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    surface: str
    kind: str  # "macro" (definition-backed) or "sugar" (parser-level)
    definition: Optional[Definition]
    example: str  # a representative instance, parseable surface syntax
    obligation: str  # informal side condition
    about: str


@lru_cache(maxsize=1)
def catalog() -> tuple:
    d = _prelude()
    e = CatalogEntry
    return (
        e("empty", "0", "macro", d["empty"], "0",
          "", "the empty set as the extension of a never-true membership"),
        e("enumeration", "{t1,...,tn}", "sugar", None, "{a, b, c}",
          "the enumeration binder is new", "finite enumeration"),
        e("pair", "<t,s>", "sugar", None, "<a, b>",
          "", "Kuratowski ordered pair"),
        e("tuple", "<t1,...,tn>", "sugar", None, "<a, b, c>",
          "<> is 0, <t> is t, longer tuples nest to the left", "n-tuples"),
        e("bounded-comprehension", "{x in t | p}", "sugar", None,
          "{x in t | ~(x = a)}",
          "x not free in t; p must be boolean-safe", "subset selection"),
        e("replacement-comprehension", "{t | x in s}", "sugar", None,
          "{<x, x> | x in s}",
          "x not free in s", "image of a set under a term"),
        e("cross", "s × t", "macro", d["cross"], "s × t",
          "", "cartesian product"),
        e("tuple-comprehension", "{<x1,...,xn> | p}", "sugar", None,
          "{<a, b> | a in s & b in t}",
          "p safe for the tuple variables; components distinct variables",
          "relation comprehension"),
        e("cap", "s ∩ t", "macro", d["cap"], "cap(s, t)",
          "", "binary intersection"),
        e("cup", "s ∪ t", "macro", d["cup"], "cup(s, t)",
          "", "binary union"),
        e("minus", "s - t", "macro", d["minus"], "s - t",
          "", "set difference"),
        e("S", "S(t)", "macro", d["S"], "S(a)",
          "", "successor: t together with {t}"),
        e("bigcup", "⋃t", "macro", d["bigcup"], "bigcup(t)",
          "", "union of a family"),
        e("bigcap", "⋂t", "macro", d["bigcap"], "bigcap(t)",
          "", "intersection of a family; empty family gives 0"),
        e("iota", "iota x. p", "sugar", None, "iota x. x in a",
          "p safe for {x}", "the described set: bigcap of {x | p}"),
        e("P1", "P1(z)", "macro", d["P1"], "P1(z)",
          "", "first projection of a pair"),
        e("P2", "P2(z)", "macro", d["P2"], "P2(z)",
          "", "second projection of a pair"),
        e("lam", "lam x in s. t", "sugar", None, "lam x in s. <x, x>",
          "x not free in s", "function graph over a domain"),
        e("app", "f(x)", "macro", d["app"], "f(a)",
          "intended for functional graphs", "function application"),
        e("Dom", "Dom(f)", "macro", d["Dom"], "Dom(f)",
          "intended for functional graphs", "domain of a function graph"),
        e("Rng", "Rng(f)", "macro", d["Rng"], "Rng(f)",
          "intended for functional graphs", "range of a function graph"),
        e("restrict", "f / s", "macro", d["restrict"], "f / s",
          "the restriction binder is new", "function graph restricted to a set"),
    )


def lookup(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(name)


OMEGA_SOURCE = "{ y | exists x. x = 0 & TC[x,y](y = { z | z = x | z in x })(x, y) }"


def omega_term(cfg: TheoryConfig = PZF) -> Term:
    """The term whose members are the successor iterates of the empty
    set: an infinite set, so it validates but never evaluates."""
    if not cfg.tc:
        raise UnsupportedConstruct("the numeral-sequence term needs the tc rule pack")
    return parse_term(OMEGA_SOURCE, cfg)


def peano_axioms(cfg: TheoryConfig = RST_OMEGA, phi: Formula = None, var: str = "x"):
    """Counterpart axioms for the HF constant.

    Returns the two closed axioms, plus the induction schema
    instantiated at ``phi``/``var`` when given.  Export only; nothing
    here feeds a prover.
    """
    if not cfg.hf_constant:
        raise UnsupportedConstruct("the Peano counterparts need the hf constant (rst-omega)")
    ax1 = parse_formula("0 in HF", cfg)
    ax2 = parse_formula(
        "forall x. forall y. x in HF & y in HF -> cup(x, {y}) in HF", cfg)
    out = [ax1, ax2]
    if phi is not None:
        out.append(induction_schema(phi, var, cfg))
    return out


def induction_schema(phi: Formula, var: str = "x", cfg: TheoryConfig = RST_OMEGA) -> Formula:
    """phi(0) and closure under adjoining one element imply phi on HF."""
    if not cfg.hf_constant:
        raise UnsupportedConstruct("the Peano counterparts need the hf constant (rst-omega)")
    from .parser import expand_abbreviations

    defs = _prelude()
    zero = expand_abbreviations(MacroCall("empty", ()), defs)
    used = free_vars(phi) | {var}
    vx = next(n for n in ("x", "a", "u", "x'") if n not in used)
    vy = next(n for n in ("y", "b", "w", "y'") if n not in used and n != vx)
    b = fresh_var(frozenset((vx, vy)))
    singleton_y = Comp(b, Eq(Var(b), Var(vy)))
    adjoin = expand_abbreviations(MacroCall("cup", (Var(vx), singleton_y)), defs)
    base = substitute(phi, var, zero)
    step = Forall(vx, Forall(vy, Implies(
        And(substitute(phi, var, Var(vx)), substitute(phi, var, Var(vy))),
        substitute(phi, var, adjoin))))
    concl = Forall(var, Implies(Mem(Var(var), Const(HF_CONSTANT)), phi))
    return Implies(And(base, step), concl)
