"""Evaluation of safety-checked expressions over hereditarily finite sets.

``eval_term`` maps a closed, valid, evaluable term to its canonical
HFValue; ``eval_bool`` decides a boolean-safe sentence.  Both work by
deriving safety for the needed variable set, compiling the derivation
to a plan, and executing it.  Execution is budgeted: every plan-node
firing and every enumerated element costs one step, so terms denoting
infinite sets (like the numeral sequence) fail with BudgetExceeded
instead of diverging.
"""

from __future__ import annotations

from .errors import BudgetExceeded, NotEvaluable, UnboundVariable
from .hf import EMPTY, HFValue, is_subset, mk_set, subsets
from .plans import (
    AtomTest, DependentJoin, Elements, EmptyExt, ForallTest, NotTest, Plan,
    Project, Singleton, SubsetEnum, TCFixpoint, Union, compile_plan,
)
from .safety import RST, TheoryConfig, derive, evaluable_fragment, safe_sets
from .syntax import (
    And, Comp, Const, Eq, Exists, Expr, Forall, Formula, Implies, Mem, Not,
    Or, Subset, TC, Term, Var, comp_count, free_vars, node_count, substitute,
)

DEFAULT_BUDGET = 10**6


class Budget:
    """Step counter; a step is one plan-node firing or one element
    enumerated.  ``consumed`` stays meaningful after an overrun."""

    def __init__(self, max_steps: int = DEFAULT_BUDGET):
        self.max_steps = max_steps
        self.consumed = 0

    def tick(self, n: int = 1):
        self.consumed += n
        if self.consumed > self.max_steps:
            raise BudgetExceeded(self.consumed, self.max_steps)


def execute_plan(plan: Plan, env=None, budget: Budget = None, cfg: TheoryConfig = RST):
    """Run a plan; returns the satisfying tuples, sorted, with columns
    ordered by the sorted variable names in ``plan.out_vars``."""
    env = dict(env or {})
    budget = budget or Budget()
    rows = _exec(plan, env, budget, cfg)
    cols = plan.out_vars
    tuples = {tuple(r[c] for c in cols) for r in rows}
    return sorted(tuples)


def _exec(plan: Plan, env, budget: Budget, cfg: TheoryConfig):
    budget.tick()
    match plan:
        case Singleton(_, var, term):
            budget.tick()
            return [{var: eval_term(term, env, budget, cfg)}]
        case Elements(_, var, term):
            out = []
            for v in eval_term(term, env, budget, cfg):
                budget.tick()
                out.append({var: v})
            return out
        case EmptyExt(_, _):
            return []
        case SubsetEnum(_, var, term):
            out = []
            for v in subsets(eval_term(term, env, budget, cfg)):
                budget.tick()
                out.append({var: v})
            return out
        case AtomTest(_, op, lhs, rhs):
            a = eval_term(lhs, env, budget, cfg)
            b = eval_term(rhs, env, budget, cfg)
            match op:
                case "in":
                    ok = a in b
                case "=":
                    ok = a == b
                case "sub":
                    ok = is_subset(a, b)
                case _:
                    raise ValueError(f"unknown atom op {op!r}")
            return [{}] if ok else []
        case NotTest(_, inner):
            return [] if _exec(inner, env, budget, cfg) else [{}]
        case Union(_, parts):
            seen = set()
            out = []
            for p in parts:
                for r in _exec(p, env, budget, cfg):
                    key = tuple(sorted(r.items()))
                    if key not in seen:
                        seen.add(key)
                        out.append(r)
            return out
        case DependentJoin(_, outer, inner):
            out = []
            for r in _exec(outer, env, budget, cfg):
                env2 = env | r
                for s in _exec(inner, env2, budget, cfg):
                    out.append(r | s)
            return out
        case Project(_, inner, drop):
            seen = set()
            out = []
            for r in _exec(inner, env, budget, cfg):
                r2 = {k: v for k, v in r.items() if k != drop}
                key = tuple(sorted(r2.items()))
                if key not in seen:
                    seen.add(key)
                    out.append(r2)
            return out
        case ForallTest(_, var, domain, test):
            for r in _exec(domain, env, budget, cfg):
                if not _exec(test, env | r, budget, cfg):
                    return []
            return [{}]
        case TCFixpoint(_, var_x, var_y, step, direction, anchor, mode, solve, probe):
            bind, get = (var_x, var_y) if direction == "forward" else (var_y, var_x)
            anchor_val = eval_term(anchor, env, budget, cfg)
            probe_val = eval_term(probe, env, budget, cfg) if mode == "test" else None
            reached = set()
            frontier = [anchor_val]
            while frontier:
                fresh = []
                for u in frontier:
                    for r in _exec(step, env | {bind: u}, budget, cfg):
                        v = r[get]
                        if v not in reached:
                            budget.tick()
                            reached.add(v)
                            fresh.append(v)
                            if mode == "test" and v == probe_val:
                                return [{}]
                frontier = fresh
            if mode == "test":
                return []
            return [{solve: v} for v in reached]
    raise TypeError(f"not a plan node: {plan!r}")


def _plan_for(phi: Formula, xs, cfg: TheoryConfig) -> Plan:
    d = derive(phi, xs, cfg)
    if d is None:
        fam = safe_sets(phi, cfg)
        target = "{" + ",".join(sorted(xs)) + "}"
        raise NotEvaluable(f"formula is not safe for {target}; maximal safe sets: {fam}")
    if not evaluable_fragment(d):
        static = sorted(set(d.clauses()) & {"separation", "replacement", "powerset", "subset"})
        raise NotEvaluable(
            f"safety relies on static-only rules ({', '.join(static)}); no query plan exists")
    return compile_plan(phi, frozenset(xs), d, cfg)


def eval_term(t: Term, env=None, budget: Budget = None, cfg: TheoryConfig = RST) -> HFValue:
    """Value of a closed (under ``env``) valid term."""
    env = env if env is not None else {}
    budget = budget or Budget()
    match t:
        case Var(name):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(name) from None
        case Const(name):
            raise NotEvaluable(f"the constant {name} denotes an infinite set")
        case Comp(var, body):
            plan = _plan_for(body, frozenset((var,)), cfg)
            rows = _exec(plan, dict(env), budget, cfg)
            return mk_set(r[var] for r in rows)
    raise TypeError(f"not a term: {t!r}")


def eval_bool(phi: Formula, env=None, budget: Budget = None, cfg: TheoryConfig = RST) -> bool:
    """Classical truth value of a boolean-safe formula."""
    env = env if env is not None else {}
    budget = budget or Budget()
    plan = _plan_for(phi, frozenset(), cfg)
    return bool(_exec(plan, dict(env), budget, cfg))


def _measure(e: Expr):
    return (comp_count(e), node_count(e))


def beta_eta_simplify(e: Expr) -> Expr:
    """Normal form under the two comprehension laws.

    eta:  {x | x in t}  ==>  t            when x is not free in t
    beta: t in {x | p}  ==>  p[x := t]    when the result is smaller

    The beta step is applied only when it shrinks the measure
    (comprehension count, then node count); otherwise rewriting could
    loop, e.g. on ``e in e`` for e = {x | x in x}.  Substitution is
    capture avoiding, so the side condition of the beta law always
    holds after renaming.
    """
    while True:
        e2 = _simplify(e)
        if e2 == e:
            return e
        e = e2


def _simplify(e: Expr) -> Expr:
    match e:
        case Var(_) | Const(_):
            return e
        case Comp(var, body):
            body = _simplify(body)
            match body:
                case Mem(Var(name), t) if name == var and var not in free_vars(t):
                    return t
            return Comp(var, body, span=e.span)
        case Mem(lhs, rhs):
            lhs, rhs = _simplify(lhs), _simplify(rhs)
            match rhs:
                case Comp(var, body):
                    new = substitute(body, var, lhs)
                    if _measure(new) < _measure(Mem(lhs, rhs)):
                        return new
            return Mem(lhs, rhs, span=e.span)
        case Eq(lhs, rhs):
            return Eq(_simplify(lhs), _simplify(rhs), span=e.span)
        case Subset(lhs, rhs):
            return Subset(_simplify(lhs), _simplify(rhs), span=e.span)
        case Not(sub):
            return Not(_simplify(sub), span=e.span)
        case And(lhs, rhs):
            return And(_simplify(lhs), _simplify(rhs), span=e.span)
        case Or(lhs, rhs):
            return Or(_simplify(lhs), _simplify(rhs), span=e.span)
        case Implies(lhs, rhs):
            return Implies(_simplify(lhs), _simplify(rhs), span=e.span)
        case Exists(var, body):
            return Exists(var, _simplify(body), span=e.span)
        case Forall(var, body):
            return Forall(var, _simplify(body), span=e.span)
        case TC(var_x, var_y, body, start, end):
            return TC(var_x, var_y, _simplify(body), _simplify(start), _simplify(end), span=e.span)
    raise TypeError(f"not a term or formula: {e!r}")


def term_from_hf(v: HFValue) -> Term:
    """A closed core term denoting ``v``: the empty comprehension for
    the empty set, an enumeration comprehension otherwise."""
    b = "$0"
    if not v.children:
        return Comp(b, Mem(Var(b), Var(b)))
    disj = None
    for c in v.children:
        atom = Eq(Var(b), term_from_hf(c))
        disj = atom if disj is None else Or(disj, atom)
    return Comp(b, disj)
