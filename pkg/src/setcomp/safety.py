"""Static safety checking for formulas and set terms.

A formula ``phi`` is *safe* for a finite set of variables ``X`` when the
collection of X-tuples satisfying ``phi`` is determined by (and
computable from) the values of the remaining free variables.  Safety is
decided purely syntactically, by structural rules over the formula.
The family of all safe sets of a formula is downward closed, so it is
represented by the antichain of its maximal members.

The core rules (numbered 1-6 below) can be extended by optional rule
packs: the transitive-closure rule, separation, replacement, powerset,
and the subset-atom rule.  Packs are switched on a ``TheoryConfig``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .errors import UnsupportedConstruct
from .syntax import (
    And, Comp, Const, Eq, Exists, Expr, Forall, Formula, Implies, MacroCall,
    Mem, Not, Or, Subset, TC, Term, Var, alpha_eq, free_vars,
)

HF_CONSTANT = "HF"


@dataclass(frozen=True)
class TheoryConfig:
    """Which safety rules are in force.

    The base rules are always on.  ``conjunction_symmetric`` admits the
    mirrored side condition for conjunctions (left side may avoid the
    right side's free variables); with it off only the literal one-sided
    rule 5 applies.
    """

    tc: bool = False
    conjunction_symmetric: bool = True
    separation: bool = False
    replacement: bool = False
    powerset: bool = False
    subseteq_atom: bool = False
    hf_constant: bool = False

    PRESETS = ("rst", "rst-omega", "pzf")

    @classmethod
    def preset(cls, name: str) -> "TheoryConfig":
        match name:
            case "rst":
                return cls()
            case "rst-omega":
                return cls(hf_constant=True)
            case "pzf":
                return cls(tc=True)
        raise ValueError(f"unknown theory preset {name!r} (choose from {cls.PRESETS})")

    def enable(self, *packs: str) -> "TheoryConfig":
        flags = {}
        for p in packs:
            key = {"separation": "separation", "replacement": "replacement",
                   "powerset": "powerset", "subseteq": "subseteq_atom",
                   "tc": "tc", "hf": "hf_constant"}.get(p)
            if key is None:
                raise ValueError(f"unknown rule pack {p!r}")
            flags[key] = True
        return dataclasses.replace(self, **flags)


RST = TheoryConfig.preset("rst")
PZF = TheoryConfig.preset("pzf")
RST_OMEGA = TheoryConfig.preset("rst-omega")


def _prune(sets) -> frozenset:
    """Maximal elements of a family of variable sets."""
    out = []
    for s in sorted(set(sets), key=len, reverse=True):
        if not any(s <= t for t in out):
            out.append(s)
    return frozenset(out)


@dataclass(frozen=True)
class SafetyFamily:
    """Downward-closed family of safe variable sets, stored as the
    antichain of its maximal members."""

    antichain: frozenset

    def covers(self, xs) -> bool:
        xs = frozenset(xs)
        return any(xs <= m for m in self.antichain)

    @property
    def empty(self) -> bool:
        return not self.antichain

    def sets(self):
        """Maximal safe sets in a deterministic order."""
        return sorted((tuple(sorted(m)) for m in self.antichain), key=lambda t: (len(t), t))

    def __iter__(self):
        return iter(frozenset(t) for t in self.sets())

    def __str__(self):
        body = ", ".join("{" + ",".join(m) + "}" for m in self.sets())
        return "{" + body + "}"


# Clause identifiers carried on derivation nodes.
CLAUSE_LABELS = {
    "atom": "rule 1: atomic formulas are boolean-safe",
    "solve": "rule 2: atom solvable for its variable",
    "neg": "rule 3: negation of a boolean-safe formula",
    "or": "rule 4: disjunction, both sides safe for the same set",
    "and": "rule 5: conjunction, right side avoids left's free variables",
    "and-sym": "rule 5 (mirrored): left side avoids right's free variables",
    "exists": "rule 6: existential projects out its binder",
    "imp": "implication as a boolean combination, boolean-safe only",
    "forall-imp": "bounded universal: antecedent ranges, consequent tests",
    "tc": "transitive closure of a safe step relation",
    "subseteq": "subset atom solvable for its left variable",
    "separation": "separation: every definable collection is accepted (static only)",
    "replacement": "replacement: image of a uniquely described value",
    "powerset": "powerset: collections of all sets bounded by a property",
    "subset": "downward closure to a subset of a safe set",
}

STATIC_CLAUSES = frozenset({"separation", "replacement", "powerset"})


@dataclass(frozen=True)
class Derivation:
    clause: str
    formula: Formula
    vars: frozenset
    children: tuple = ()
    note: str = ""

    def clauses(self):
        yield self.clause
        for c in self.children:
            yield from c.clauses()


def evaluable_fragment(d: Derivation) -> bool:
    """True when every rule used has a terminating execution strategy.

    Separation, replacement and the general powerset rule certify
    validity only; derivations using them cannot be compiled to plans.
    """
    return all(c not in STATIC_CLAUSES and c != "subset" for c in d.clauses())


def _tc_guard(e: Formula, cfg: TheoryConfig):
    if isinstance(e, TC) and not cfg.tc:
        raise UnsupportedConstruct(
            "transitive-closure formulas need the tc rule pack (theory pzf)")
    if isinstance(e, Subset) and not cfg.subseteq_atom:
        raise UnsupportedConstruct("subset atoms need the subseteq rule pack")
    if isinstance(e, Const) and e.name == HF_CONSTANT and not cfg.hf_constant:
        raise UnsupportedConstruct("the HF constant needs the hf rule pack (theory rst-omega)")
    if isinstance(e, Const) and e.name != HF_CONSTANT:
        raise UnsupportedConstruct(f"unknown constant {e.name!r}")
    if isinstance(e, MacroCall):
        raise UnsupportedConstruct(
            f"unexpanded definition {e.name!r}; expand abbreviations first")


def _replacement_shape(phi: And):
    """Match ``exists y. p  &  forall y. p -> psi`` with alpha-equal p's.

    Returns (binder, p_copy, psi) from the universal side, or None.
    """
    l, r = phi.lhs, phi.rhs
    if not (isinstance(l, Exists) and isinstance(r, Forall) and isinstance(r.body, Implies)):
        return None
    p2, psi = r.body.lhs, r.body.rhs
    if not alpha_eq(Exists(l.var, l.body), Exists(r.var, p2)):
        return None
    return r.var, p2, psi


def _powerset_shape(phi: Forall):
    """Match ``forall y. y in w -> body`` with w a variable distinct
    from y.  Returns (y, w, body) or None."""
    if not isinstance(phi.body, Implies):
        return None
    ante = phi.body.lhs
    if not (isinstance(ante, Mem) and isinstance(ante.lhs, Var) and isinstance(ante.rhs, Var)):
        return None
    if ante.lhs.name != phi.var or ante.rhs.name == phi.var:
        return None
    return phi.var, ante.rhs.name, phi.body.rhs


class _Pass:
    """One bottom-up traversal computing free variables and safety
    antichains, optionally collecting comprehension checks."""

    def __init__(self, cfg: TheoryConfig, report: Optional["ValidationReport"],
                 with_derivations: bool):
        self.cfg = cfg
        self.report = report
        self.with_derivations = with_derivations

    def term(self, t: Term) -> frozenset:
        _tc_guard(t, self.cfg)
        match t:
            case Var(name):
                return frozenset((name,))
            case Const(_):
                return frozenset()
            case Comp(var, body):
                fam, bfv = self.formula(body)
                if self.report is not None:
                    self._check_comp(t, var, fam)
                return bfv - {var}
        raise TypeError(f"not a term: {t!r}")

    def _check_comp(self, comp: Comp, var: str, fam: frozenset):
        family = SafetyFamily(fam)
        if family.covers({var}):
            d = derive(comp.body, frozenset((var,)), self.cfg) if self.with_derivations else None
            self.report.checked.append((comp, d))
        else:
            self.report.ok = False
            self.report.violations.append(Violation(
                comp=comp,
                reason=f"body is not safe for {{{var}}}; maximal safe sets: {family}",
                span=comp.span,
            ))

    def formula(self, phi: Formula):
        """Returns (antichain, free variables)."""
        _tc_guard(phi, self.cfg)
        cfg = self.cfg
        match phi:
            case Mem(lhs, rhs):
                lfv, rfv = self.term(lhs), self.term(rhs)
                sets = {frozenset()}
                if isinstance(lhs, Var) and (
                    (isinstance(rhs, Var) and rhs.name == lhs.name) or lhs.name not in rfv
                ):
                    sets.add(frozenset((lhs.name,)))
                return self._done(sets, lfv | rfv)
            case Eq(lhs, rhs):
                lfv, rfv = self.term(lhs), self.term(rhs)
                sets = {frozenset()}
                if isinstance(lhs, Var) and lhs.name not in rfv:
                    sets.add(frozenset((lhs.name,)))
                if isinstance(rhs, Var) and rhs.name not in lfv:
                    sets.add(frozenset((rhs.name,)))
                return self._done(sets, lfv | rfv)
            case Subset(lhs, rhs):
                lfv, rfv = self.term(lhs), self.term(rhs)
                sets = {frozenset()}
                if isinstance(lhs, Var) and lhs.name not in rfv:
                    sets.add(frozenset((lhs.name,)))
                return self._done(sets, lfv | rfv)
            case Not(sub):
                sfam, sfv = self.formula(sub)
                sets = {frozenset()} if sfam else set()
                return self._done(sets, sfv)
            case And(lhs, rhs):
                lfam, lfv = self.formula(lhs)
                rfam, rfv = self.formula(rhs)
                sets = set()
                for mx in lfam:
                    for my in rfam:
                        sets.add(mx | (my - lfv))
                        if cfg.conjunction_symmetric:
                            sets.add((mx - rfv) | my)
                if cfg.replacement:
                    shape = _replacement_shape(phi)
                    if shape is not None:
                        y2, p2, psi = shape
                        # clean sub-pass: psi was already traversed above
                        pfam, _ = _Pass(self.cfg, None, False).formula(psi)
                        # free parameters of the repeated formula, plus its binder
                        blocked = (free_vars(p2) - {y2}) | {y2}
                        for m in pfam:
                            sets.add(m - blocked)
                return self._done(sets, lfv | rfv)
            case Or(lhs, rhs):
                lfam, lfv = self.formula(lhs)
                rfam, rfv = self.formula(rhs)
                sets = {mx & my for mx in lfam for my in rfam}
                return self._done(sets, lfv | rfv)
            case Implies(lhs, rhs):
                lfam, lfv = self.formula(lhs)
                rfam, rfv = self.formula(rhs)
                sets = {frozenset()} if (lfam and rfam) else set()
                return self._done(sets, lfv | rfv)
            case Exists(var, body):
                bfam, bfv = self.formula(body)
                sets = {m - {var} for m in bfam if var in m}
                return self._done(sets, bfv - {var})
            case Forall(var, body):
                sets = set()
                if isinstance(body, Implies):
                    # traverse the two halves once each (not via the
                    # Implies node) so comprehension checks are not
                    # collected twice
                    afam, afv = self.formula(body.lhs)
                    cfam, cfv = self.formula(body.rhs)
                    bfv = afv | cfv
                    if SafetyFamily(afam).covers({var}) and cfam:
                        sets.add(frozenset())
                    if cfg.powerset:
                        shape = _powerset_shape(phi)
                        if shape is not None:
                            y, w, _sub = shape
                            if w not in cfv:
                                for m in cfam:
                                    if y in m:
                                        sets.add((m - {y}) | {w})
                else:
                    _, bfv = self.formula(body)
                return self._done(sets, bfv - {var})
            case TC(var_x, var_y, body, start, end):
                bfam, bfv = self.formula(body)
                sfv, efv = self.term(start), self.term(end)
                params = bfv - {var_x, var_y}
                sets = set()
                if any(m & {var_x, var_y} for m in bfam):
                    sets.add(frozenset())
                covers = SafetyFamily(bfam).covers
                if covers({var_y}) and isinstance(end, Var):
                    v = end.name
                    if v not in sfv and v not in params:
                        sets.add(frozenset((v,)))
                if covers({var_x}) and isinstance(start, Var):
                    v = start.name
                    if v not in efv and v not in params:
                        sets.add(frozenset((v,)))
                return self._done(sets, params | sfv | efv)
        raise TypeError(f"not a formula: {phi!r}")

    def _done(self, sets, fv):
        if self.cfg.separation:
            # Separation certifies sethood of any definable collection,
            # so every subset of the free variables becomes safe.  The
            # resulting derivations are static only, never evaluable.
            sets = set(sets)
            sets.add(fv)
        return _prune(sets), fv


def safe_sets(phi: Formula, cfg: TheoryConfig = RST) -> SafetyFamily:
    """All maximal safe variable sets of ``phi`` under ``cfg``."""
    fam, _ = _Pass(cfg, None, False).formula(phi)
    return SafetyFamily(fam)


def derive(phi: Formula, xs, cfg: TheoryConfig = RST) -> Optional[Derivation]:
    """A derivation of safety for exactly the set ``xs``, or None.

    Tries constructive rules before the static packs, so an evaluable
    derivation is returned whenever one exists.
    """
    xs = frozenset(xs)
    if not xs <= free_vars(phi):
        return None
    return _derive(phi, xs, cfg)


def _derive(phi: Formula, xs: frozenset, cfg: TheoryConfig) -> Optional[Derivation]:
    _tc_guard(phi, cfg)

    def sep():
        if cfg.separation and xs <= free_vars(phi):
            return Derivation("separation", phi, xs)
        return None

    match phi:
        case Mem(lhs, rhs):
            if not xs:
                return Derivation("atom", phi, xs)
            if isinstance(lhs, Var) and xs == frozenset((lhs.name,)):
                if (isinstance(rhs, Var) and rhs.name == lhs.name) or lhs.name not in free_vars(rhs):
                    return Derivation("solve", phi, xs)
            return sep()
        case Eq(lhs, rhs):
            if not xs:
                return Derivation("atom", phi, xs)
            if isinstance(lhs, Var) and xs == frozenset((lhs.name,)) and lhs.name not in free_vars(rhs):
                return Derivation("solve", phi, xs)
            if isinstance(rhs, Var) and xs == frozenset((rhs.name,)) and rhs.name not in free_vars(lhs):
                return Derivation("solve", phi, xs)
            return sep()
        case Subset(lhs, rhs):
            if not xs:
                return Derivation("atom", phi, xs)
            if isinstance(lhs, Var) and xs == frozenset((lhs.name,)) and lhs.name not in free_vars(rhs):
                return Derivation("subseteq", phi, xs)
            return sep()
        case Not(sub):
            if not xs:
                d = _derive(sub, frozenset(), cfg)
                if d is not None:
                    return Derivation("neg", phi, xs, (d,))
            return sep()
        case And(lhs, rhs):
            lfv, rfv = free_vars(lhs), free_vars(rhs)
            d1 = _derive(lhs, xs & lfv, cfg)
            d2 = _derive(rhs, xs - lfv, cfg) if d1 is not None else None
            if d1 is not None and d2 is not None:
                note = f"left supplies {_fmt(xs & lfv)}, right supplies {_fmt(xs - lfv)}"
                return Derivation("and", phi, xs, (d1, d2), note)
            if cfg.conjunction_symmetric:
                d2 = _derive(rhs, xs & rfv, cfg)
                d1 = _derive(lhs, xs - rfv, cfg) if d2 is not None else None
                if d1 is not None and d2 is not None:
                    note = f"left supplies {_fmt(xs - rfv)}, right supplies {_fmt(xs & rfv)}"
                    return Derivation("and-sym", phi, xs, (d1, d2), note)
            if cfg.replacement:
                shape = _replacement_shape(phi)
                if shape is not None:
                    y2, p2, psi = shape
                    blocked = (free_vars(p2) - {y2}) | {y2}
                    if not xs & blocked:
                        d = _derive(psi, xs, cfg)
                        if d is not None:
                            return Derivation("replacement", phi, xs, (d,),
                                              "the two occurrences of the described formula match")
            return sep()
        case Or(lhs, rhs):
            d1 = _derive(lhs, xs, cfg)
            d2 = _derive(rhs, xs, cfg) if d1 is not None else None
            if d1 is not None and d2 is not None:
                return Derivation("or", phi, xs, (d1, d2))
            return sep()
        case Implies(lhs, rhs):
            if not xs:
                d1 = _derive(lhs, frozenset(), cfg)
                d2 = _derive(rhs, frozenset(), cfg) if d1 is not None else None
                if d1 is not None and d2 is not None:
                    return Derivation("imp", phi, xs, (d1, d2))
            return sep()
        case Exists(var, body):
            if var not in xs:
                d = _derive(body, xs | {var}, cfg)
                if d is not None:
                    return Derivation("exists", phi, xs, (d,))
            return sep()
        case Forall(var, body):
            if not xs and isinstance(body, Implies):
                d1 = _derive(body.lhs, frozenset((var,)), cfg)
                d2 = _derive(body.rhs, frozenset(), cfg) if d1 is not None else None
                if d1 is not None and d2 is not None:
                    return Derivation("forall-imp", phi, xs, (d1, d2))
            if cfg.powerset:
                shape = _powerset_shape(phi)
                if shape is not None:
                    y, w, sub = shape
                    if w in xs and w not in free_vars(sub):
                        d = _derive(sub, (xs - {w}) | {y}, cfg)
                        if d is not None:
                            return Derivation("powerset", phi, xs, (d,))
            return sep()
        case TC(var_x, var_y, body, start, end):
            params = free_vars(body) - {var_x, var_y}
            if not xs:
                for solved, direction in ((var_y, "bool-forward"), (var_x, "bool-backward")):
                    d = _derive(body, frozenset((solved,)), cfg)
                    if d is not None:
                        return Derivation("tc", phi, xs, (d,), direction)
                return sep()
            if len(xs) == 1:
                (v,) = xs
                if (isinstance(end, Var) and end.name == v
                        and v not in free_vars(start) and v not in params):
                    d = _derive(body, frozenset((var_y,)), cfg)
                    if d is not None:
                        return Derivation("tc", phi, xs, (d,), "forward")
                if (isinstance(start, Var) and start.name == v
                        and v not in free_vars(end) and v not in params):
                    d = _derive(body, frozenset((var_x,)), cfg)
                    if d is not None:
                        return Derivation("tc", phi, xs, (d,), "backward")
            return sep()
    raise TypeError(f"not a formula: {phi!r}")


def check_safe(phi: Formula, xs, cfg: TheoryConfig = RST) -> Optional[Derivation]:
    """Derivation witnessing ``phi`` safe for ``xs``, or None.

    Falls back to downward closure from a covering maximal set when no
    rule derives ``xs`` exactly (only the static packs need this).
    """
    xs = frozenset(xs)
    d = derive(phi, xs, cfg)
    if d is not None:
        return d
    family = safe_sets(phi, cfg)
    for m in family:
        if xs <= m:
            dm = derive(phi, m, cfg)
            if dm is not None:
                return Derivation("subset", phi, xs, (dm,))
    return None


@dataclass
class Violation:
    comp: Comp
    reason: str
    span: object = None


@dataclass
class ValidationReport:
    ok: bool = True
    checked: list = field(default_factory=list)
    violations: list = field(default_factory=list)


def validate_term(t: Expr, cfg: TheoryConfig = RST, *, with_derivations: bool = True) -> ValidationReport:
    """Check every comprehension inside ``t`` (a term or formula).

    Raises UnsupportedConstruct when a construct outside the configured
    theory appears; safety failures are reported, not raised.
    """
    report = ValidationReport()
    p = _Pass(cfg, report, with_derivations)
    if isinstance(t, Term):
        p.term(t)
    else:
        p.formula(t)
    return report


def _fmt(xs) -> str:
    return "{" + ",".join(sorted(xs)) + "}"


def explain_derivation(d: Derivation) -> str:
    """Indented rule-by-rule rendering of a derivation; each line shows
    the rule applied, the safe set at that node, and the formula."""
    from .parser import print_expr

    lines = []

    def walk(node: Derivation, depth: int):
        head = f"{'  ' * depth}{_fmt(node.vars)} by {CLAUSE_LABELS[node.clause]}"
        if node.note:
            head += f" [{node.note}]"
        lines.append(head)
        src = print_expr(node.formula)
        if len(src) > 100:
            src = src[:97] + "..."
        lines.append(f"{'  ' * depth}  on: {src}")
        for c in node.children:
            walk(c, depth + 1)

    walk(d, 0)
    return "\n".join(lines)


def replay(d: Derivation, cfg: TheoryConfig = RST) -> bool:
    """Re-validate every rule application in a derivation tree."""
    phi, xs = d.formula, d.vars
    kids = d.children
    if not xs <= free_vars(phi) and d.clause != "subset":
        return False
    ok = all(replay(c, cfg) for c in kids)
    if not ok:
        return False
    match d.clause:
        case "atom":
            return isinstance(phi, (Mem, Eq, Subset)) and not xs
        case "imp":
            return (isinstance(phi, Implies) and not xs and len(kids) == 2
                    and kids[0].formula == phi.lhs and kids[1].formula == phi.rhs
                    and not kids[0].vars and not kids[1].vars)
        case "solve":
            if len(xs) != 1 or not isinstance(phi, (Mem, Eq)):
                return False
            (v,) = xs
            if isinstance(phi, Mem):
                return (isinstance(phi.lhs, Var) and phi.lhs.name == v
                        and ((isinstance(phi.rhs, Var) and phi.rhs.name == v)
                             or v not in free_vars(phi.rhs)))
            return ((isinstance(phi.lhs, Var) and phi.lhs.name == v and v not in free_vars(phi.rhs))
                    or (isinstance(phi.rhs, Var) and phi.rhs.name == v and v not in free_vars(phi.lhs)))
        case "subseteq":
            return (cfg.subseteq_atom and isinstance(phi, Subset) and len(xs) == 1
                    and isinstance(phi.lhs, Var) and xs == {phi.lhs.name}
                    and phi.lhs.name not in free_vars(phi.rhs))
        case "neg":
            return (isinstance(phi, Not) and not xs and len(kids) == 1
                    and kids[0].formula == phi.sub and not kids[0].vars)
        case "or":
            return (isinstance(phi, Or) and len(kids) == 2
                    and kids[0].formula == phi.lhs and kids[1].formula == phi.rhs
                    and kids[0].vars == xs and kids[1].vars == xs)
        case "and":
            return (isinstance(phi, And) and len(kids) == 2
                    and kids[0].formula == phi.lhs and kids[1].formula == phi.rhs
                    and kids[0].vars | kids[1].vars == xs
                    and not kids[1].vars & free_vars(phi.lhs))
        case "and-sym":
            return (cfg.conjunction_symmetric and isinstance(phi, And) and len(kids) == 2
                    and kids[0].formula == phi.lhs and kids[1].formula == phi.rhs
                    and kids[0].vars | kids[1].vars == xs
                    and not kids[0].vars & free_vars(phi.rhs))
        case "exists":
            return (isinstance(phi, Exists) and len(kids) == 1
                    and kids[0].formula == phi.body
                    and phi.var in kids[0].vars and kids[0].vars - {phi.var} == xs)
        case "forall-imp":
            return (isinstance(phi, Forall) and isinstance(phi.body, Implies)
                    and not xs and len(kids) == 2
                    and kids[0].formula == phi.body.lhs and kids[0].vars == {phi.var}
                    and kids[1].formula == phi.body.rhs and not kids[1].vars)
        case "tc":
            if not (cfg.tc and isinstance(phi, TC) and len(kids) == 1):
                return False
            body_vars = kids[0].vars
            params = free_vars(phi.body) - {phi.var_x, phi.var_y}
            if kids[0].formula != phi.body or not body_vars & {phi.var_x, phi.var_y}:
                return False
            match d.note:
                case "bool-forward" | "bool-backward":
                    return not xs
                case "forward":
                    return (isinstance(phi.end, Var) and xs == {phi.end.name}
                            and phi.var_y in body_vars
                            and phi.end.name not in free_vars(phi.start) | params)
                case "backward":
                    return (isinstance(phi.start, Var) and xs == {phi.start.name}
                            and phi.var_x in body_vars
                            and phi.start.name not in free_vars(phi.end) | params)
            return False
        case "separation":
            return cfg.separation and xs <= free_vars(phi)
        case "replacement":
            if not (cfg.replacement and isinstance(phi, And) and len(kids) == 1):
                return False
            shape = _replacement_shape(phi)
            if shape is None:
                return False
            y2, p2, psi = shape
            return (kids[0].formula == psi and kids[0].vars == xs
                    and not xs & ((free_vars(p2) - {y2}) | {y2}))
        case "powerset":
            if not (cfg.powerset and isinstance(phi, Forall) and len(kids) == 1):
                return False
            shape = _powerset_shape(phi)
            if shape is None:
                return False
            y, w, sub = shape
            return (w in xs and w not in free_vars(sub)
                    and kids[0].formula == sub and kids[0].vars == (xs - {w}) | {y}
                    and y in kids[0].vars)
        case "subset":
            return len(kids) == 1 and kids[0].formula == phi and xs <= kids[0].vars
    return False
