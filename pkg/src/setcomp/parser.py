"""Concrete syntax: tokenizer, parser, user definitions, pretty-printing.

The surface grammar (ASCII, with unicode aliases):

    formula  :=  imp ('<->' imp)*                     iff is sugar
    imp      :=  or ('->' imp)?
    or       :=  and ('|' and)*
    and      :=  neg ('&' neg)*
    neg      :=  '~' neg | quantified | atom
    quantified := ('exists'|'forall') VAR '.' formula
               |  'TC' '[' VAR ',' VAR ']' '(' formula ')' '(' term ',' term ')'
    atom     :=  term ('in'|'sub'|'=') term  |  '(' formula ')'

    term     :=  t1 ('w' t1)*          set-algebra infixes, tightest to
    ...                                loosest:  application and '/',
                                       'x'(cross), 'n'(cap), '-', 'u'(cup)
    primary  :=  VAR | 'HF' | '0' | '(' ... ')' | '{' ... '}' | '<' ... '>'
              |  'iota' VAR '.' formula | 'lam' VAR 'in' term '.' term
              |  NAME '(' args ')'      definition call or application

    set body :=  VAR '|' formula                  comprehension
              |  VAR 'in' term '|' formula        bounded comprehension
              |  '<' VARS '>' '|' formula         tuple comprehension
              |  term '|' VAR 'in' term           replacement image
              |  term (',' term)*                 enumeration

Quantifiers extend maximally to the right.  Sugar and definition calls
expand eagerly and hygienically (fresh binders come from a reserved
namespace users cannot write), so every entry point returns core syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union as TUnion

from .errors import ArityMismatch, DuplicateDefinition, ParseError, UnknownName
from .safety import HF_CONSTANT, RST, TheoryConfig
from .syntax import (
    And, Comp, Const, Eq, Exists, Expr, Forall, Formula, Implies, MacroCall,
    Mem, Not, Or, Span, Subset, TC, Term, Var, free_vars, fresh_var,
    is_fresh_name,
)

KEYWORDS = frozenset({
    "in", "sub", "exists", "forall", "TC", "iota", "lam",
    "def", "theory", "enable",
})

_UNI_IDENT = {"∈": "in", "⊆": "sub", "∃": "exists", "∀": "forall",
              "ι": "iota", "λ": "lam"}
_UNI_SYM = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->",
            "∅": "0", "−": "-", "⟨": "<", "⟩": ">",
            "×": "**CROSS**", "∪": "**CUP**", "∩": "**CAP**",
            "⋃": "**BIGCUP**", "⋂": "**BIGCAP**"}

CROSS, CUP, CAP = "**CROSS**", "**CUP**", "**CAP**"
BIGCUP, BIGCAP = "**BIGCUP**", "**BIGCAP**"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym", "eof"
    text: str
    span: Span


def tokenize(src: str, file: str = "<input>"):
    toks = []
    line, col = 1, 1
    i, n = 0, len(src)

    def here(width=1):
        return Span(file, line, col, line, col + width - 1)

    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c in _UNI_IDENT:
            toks.append(Token("ident", _UNI_IDENT[c], here()))
            i += 1
            col += 1
            continue
        if c in _UNI_SYM:
            toks.append(Token("sym", _UNI_SYM[c], here()))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            text = src[i:j]
            toks.append(Token("ident", text, here(j - i)))
            col += j - i
            i = j
            continue
        if c.isdigit():
            if c == "0" and not (i + 1 < n and src[i + 1].isdigit()):
                toks.append(Token("sym", "0", here()))
                i += 1
                col += 1
                continue
            raise ParseError("only the numeral 0 is built in; use S(...) for larger naturals",
                             here())
        two = src[i:i + 3]
        if two == "<->":
            toks.append(Token("sym", "<->", here(3)))
            i += 3
            col += 3
            continue
        two = src[i:i + 2]
        if two in ("->", ":="):
            toks.append(Token("sym", two, here(2)))
            i += 2
            col += 2
            continue
        if c in "{}()[]<>,|.&~=/-":
            toks.append(Token("sym", c, here()))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", here())
    toks.append(Token("eof", "", Span(file, line, col, line, col)))
    return toks


@dataclass(frozen=True)
class Definition:
    """A user abbreviation: a named template over term parameters."""

    name: str
    params: tuple
    body: Expr
    kind: str  # "term" or "formula"

    def __post_init__(self):
        extra = free_vars(self.body) - set(self.params)
        if extra:
            raise ParseError(
                f"definition {self.name!r} uses free variables that are not "
                f"parameters: {', '.join(sorted(extra))}")
        if self.name in KEYWORDS:
            raise ParseError(f"definition name {self.name!r} shadows a keyword")


def expand_abbreviations(e: Expr, defs) -> Expr:
    """Replace every definition call by its instantiated template.

    Expansion is bottom-up and hygienic: argument substitution is
    capture avoiding, so template binders can never capture argument
    variables.  Definitions are non-recursive, so this terminates.
    """
    from .syntax import substitute_many

    match e:
        case MacroCall(name, args):
            try:
                dfn = defs[name]
            except KeyError:
                raise UnknownName(name) from None
            args = tuple(expand_abbreviations(a, defs) for a in args)
            if len(args) != len(dfn.params):
                raise ArityMismatch(
                    f"{name} takes {len(dfn.params)} argument(s), got {len(args)}")
            for a in args:
                if not isinstance(a, Term):
                    raise ParseError(f"argument of {name} must be a term")
            return substitute_many(dfn.body, dict(zip(dfn.params, args)))
        case Var(_) | Const(_):
            return e
        case Comp(var, body):
            return Comp(var, expand_abbreviations(body, defs), span=e.span)
        case Mem(l, r):
            return Mem(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Eq(l, r):
            return Eq(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Subset(l, r):
            return Subset(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Not(s):
            return Not(expand_abbreviations(s, defs), span=e.span)
        case And(l, r):
            return And(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Or(l, r):
            return Or(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Implies(l, r):
            return Implies(expand_abbreviations(l, defs), expand_abbreviations(r, defs), span=e.span)
        case Exists(v, b):
            return Exists(v, expand_abbreviations(b, defs), span=e.span)
        case Forall(v, b):
            return Forall(v, expand_abbreviations(b, defs), span=e.span)
        case TC(x, y, b, s, t):
            return TC(x, y, expand_abbreviations(b, defs),
                      expand_abbreviations(s, defs), expand_abbreviations(t, defs), span=e.span)
    raise TypeError(f"not a term or formula: {e!r}")


class _Parser:
    def __init__(self, src, *, file="<input>", cfg: TheoryConfig = RST, defs=None):
        self.toks = tokenize(src, file)
        self.pos = 0
        self.cfg = cfg
        self.defs = defs if defs is not None else {}
        self.bound = []

    # --- token plumbing ---

    def peek(self, ahead=0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_sym(self, *texts) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text in texts

    def at_kw(self, *words) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text in words

    def eat_sym(self, text) -> Token:
        t = self.peek()
        if t.kind == "sym" and t.text == text:
            return self.next()
        raise ParseError(f"got {t.text!r}", t.span, expected={text})

    def eat_kw(self, word) -> Token:
        t = self.peek()
        if t.kind == "ident" and t.text == word:
            return self.next()
        raise ParseError(f"got {t.text!r}", t.span, expected={word})

    def eat_name(self) -> Token:
        t = self.peek()
        if t.kind == "ident" and t.text not in KEYWORDS:
            return self.next()
        raise ParseError(f"expected a name, got {t.text!r}", t.span)

    def expect_eof(self):
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"trailing input starting at {t.text!r}", t.span)

    # --- formulas ---

    def formula(self, seed=None) -> Formula:
        f = self.f_imp(seed)
        while self.at_sym("<->"):
            self.next()
            g = self.f_imp()
            f = And(Implies(f, g), Implies(g, f))
        return f

    def f_imp(self, seed=None) -> Formula:
        f = self.f_or(seed)
        if self.at_sym("->"):
            self.next()
            return Implies(f, self.f_imp())
        return f

    def f_or(self, seed=None) -> Formula:
        f = self.f_and(seed)
        while self.at_sym("|"):
            self.next()
            f = Or(f, self.f_and())
        return f

    def f_and(self, seed=None) -> Formula:
        f = self.f_neg(seed)
        while self.at_sym("&"):
            self.next()
            f = And(f, self.f_neg())
        return f

    def f_neg(self, seed=None) -> Formula:
        if seed is not None:
            return seed
        if self.at_sym("~"):
            self.next()
            return Not(self.f_neg())
        if self.at_kw("exists", "forall"):
            word = self.next().text
            var = self.eat_name().text
            self.eat_sym(".")
            self.bound.append(var)
            try:
                body = self.formula()
            finally:
                self.bound.pop()
            return Exists(var, body) if word == "exists" else Forall(var, body)
        if self.at_kw("TC"):
            return self.tc_formula()
        return self.f_atom()

    def tc_formula(self) -> Formula:
        start_tok = self.eat_kw("TC")
        self.eat_sym("[")
        x = self.eat_name().text
        self.eat_sym(",")
        y = self.eat_name().text
        self.eat_sym("]")
        if x == y:
            raise ParseError("TC binders must be distinct", start_tok.span)
        self.eat_sym("(")
        self.bound.extend((x, y))
        try:
            body = self.formula()
        finally:
            del self.bound[-2:]
        self.eat_sym(")")
        self.eat_sym("(")
        t1 = self.term()
        self.eat_sym(",")
        t2 = self.term()
        self.eat_sym(")")
        return TC(x, y, body, self.as_term(t1), self.as_term(t2), span=start_tok.span)

    def f_atom(self) -> Formula:
        t = self.term()
        if isinstance(t, Formula):
            return t
        return self.relation(t)

    def relation(self, lhs: Term) -> Formula:
        t = self.peek()
        if self.at_kw("in"):
            self.next()
            return Mem(lhs, self.as_term(self.term()), span=t.span)
        if self.at_kw("sub"):
            if not self.cfg.subseteq_atom:
                raise ParseError("the subset atom is not enabled "
                                 "(enable the subseteq rule pack)", t.span)
            self.next()
            return Subset(lhs, self.as_term(self.term()), span=t.span)
        if self.at_sym("="):
            self.next()
            return Eq(lhs, self.as_term(self.term()), span=t.span)
        raise ParseError(f"got {t.text!r}", t.span, expected={"in", "sub", "="})

    # --- terms ---

    def as_term(self, e: Expr) -> Term:
        if isinstance(e, Term):
            return e
        raise ParseError("expected a term, found a formula")

    def term(self) -> Expr:
        return self.t_cup()

    def _call(self, name, args, span) -> Expr:
        """Expand a definition call in place; parsed output is core."""
        if name not in self.defs:
            raise UnknownName(
                f"{name!r} is not defined (the prelude provides the standard catalog)")
        return expand_abbreviations(MacroCall(name, tuple(args), span=span), self.defs)

    def _infix(self, sub, ops):
        e = sub()
        while self.at_sym(*ops):
            op = self.next()
            rhs = sub()
            name = {CUP: "cup", "-": "minus", CAP: "cap", CROSS: "cross"}[op.text]
            e = self._call(name, (self.as_term(e), self.as_term(rhs)), op.span)
        return e

    def t_cup(self) -> Expr:
        return self._infix(self.t_minus, (CUP,))

    def t_minus(self) -> Expr:
        return self._infix(self.t_cap, ("-",))

    def t_cap(self) -> Expr:
        return self._infix(self.t_cross, (CAP,))

    def t_cross(self) -> Expr:
        return self._infix(self.t_postfix, (CROSS,))

    def t_postfix(self) -> Expr:
        e = self.t_primary()
        while True:
            if self.at_sym("(") and isinstance(e, Term):
                sp = self.next().span
                arg = self.as_term(self.term())
                self.eat_sym(")")
                e = self._call("app", (e, arg), sp)
            elif self.at_sym("/") and isinstance(e, Term):
                sp = self.next().span
                rhs = self.as_term(self.t_primary())
                e = self._call("restrict", (e, rhs), sp)
            else:
                return e

    def t_primary(self) -> Expr:
        t = self.peek()
        if t.kind == "sym":
            match t.text:
                case "0":
                    self.next()
                    return self.empty_term(t.span)
                case "(":
                    self.next()
                    e = self.general()
                    self.eat_sym(")")
                    return e
                case "{":
                    return self.set_body()
                case "<":
                    return self.tuple_term()
                case _:
                    pass
            if t.text == BIGCUP or t.text == BIGCAP:
                self.next()
                name = "bigcup" if t.text == BIGCUP else "bigcap"
                arg = self.as_term(self.t_postfix())
                return self._call(name, (arg,), t.span)
            raise ParseError(f"got {t.text!r}", t.span,
                             expected={"a term", "(", "{", "<", "0"})
        if t.kind == "eof":
            raise ParseError("unexpected end of input", t.span, expected={"a term"})
        # identifiers
        if t.text == "iota":
            self.next()
            var = self.eat_name().text
            self.eat_sym(".")
            self.bound.append(var)
            try:
                body = self.formula()
            finally:
                self.bound.pop()
            return self._call("bigcap", (Comp(var, body, span=t.span),), t.span)
        if t.text == "lam":
            self.next()
            var = self.eat_name().text
            self.eat_kw("in")
            dom = self.as_term(self.term())
            if var in free_vars(dom):
                raise ParseError(f"lambda binder {var!r} occurs in its own domain", t.span)
            self.eat_sym(".")
            self.bound.append(var)
            try:
                body = self.as_term(self.term())
            finally:
                self.bound.pop()
            return self.replacement_term(self.pair_term(Var(var), body), var, dom, t.span)
        if t.text in KEYWORDS:
            raise ParseError(f"keyword {t.text!r} cannot start a term", t.span)
        name = self.next().text
        if name in self.bound:
            return Var(name, span=t.span)
        if name == HF_CONSTANT:
            if not self.cfg.hf_constant:
                raise ParseError("the HF constant is not enabled (theory rst-omega)", t.span)
            return Const(name, span=t.span)
        if name in self.defs:
            dfn = self.defs[name]
            # zero-parameter definitions never consume parens, so
            # `three(0)` reads as applying the defined value
            if dfn.params and self.at_sym("("):
                self.next()
                args = []
                if not self.at_sym(")"):
                    args.append(self.as_term(self.term()))
                    while self.at_sym(","):
                        self.next()
                        args.append(self.as_term(self.term()))
                self.eat_sym(")")
            else:
                args = []
            if len(args) != len(dfn.params):
                raise ArityMismatch(
                    f"{name} takes {len(dfn.params)} argument(s), got {len(args)}")
            return self._call(name, tuple(args), t.span)
        return Var(name, span=t.span)

    # --- sugar builders (all produce surface nodes; hygiene comes from
    #     fresh binders and capture-avoiding substitution) ---

    def empty_term(self, span=None) -> Term:
        v = fresh_var(())
        return Comp(v, Mem(Var(v), Var(v)), span=span)

    def enum_term(self, elems, span=None) -> Term:
        if not elems:
            return self.empty_term(span)
        avoid = set()
        for e in elems:
            avoid |= free_vars(e)
        v = fresh_var(avoid)
        body = None
        for e in elems:
            atom = Eq(Var(v), e)
            body = atom if body is None else Or(body, atom)
        return Comp(v, body, span=span)

    def pair_term(self, a: Term, b: Term, span=None) -> Term:
        return self.enum_term([self.enum_term([a]), self.enum_term([a, b])], span)

    def nested_tuple(self, elems, span=None) -> Term:
        if not elems:
            return self.empty_term(span)
        if len(elems) == 1:
            return elems[0]
        acc = elems[0]
        for e in elems[1:]:
            acc = self.pair_term(acc, e, span)
        return acc

    def replacement_term(self, image: Term, var: str, dom: Term, span=None) -> Term:
        """``{image | var in dom}`` as ``{y | exists var. var in dom & y = image}``."""
        if var in free_vars(dom):
            raise ParseError(f"replacement binder {var!r} occurs in the member term", span)
        y = fresh_var(free_vars(image) | free_vars(dom) | {var})
        return Comp(y, Exists(var, And(Mem(Var(var), dom), Eq(Var(y), image))), span=span)

    def tuple_term(self) -> Term:
        sp = self.eat_sym("<").span
        elems = []
        if not self.at_sym(">"):
            elems.append(self.as_term(self.term()))
            while self.at_sym(","):
                self.next()
                elems.append(self.as_term(self.term()))
        self.eat_sym(">")
        return self.nested_tuple(elems, sp)

    def set_body(self) -> Term:
        sp = self.eat_sym("{").span
        if self.at_sym("}"):
            self.next()
            return self.empty_term(sp)

        # tuple comprehension needs raw variables, so look inside < >
        # before any desugaring
        if self.at_sym("<"):
            save = self.pos
            self.next()
            elems = [self.as_term(self.term())]
            while self.at_sym(","):
                self.next()
                elems.append(self.as_term(self.term()))
            self.eat_sym(">")
            names = [e.name for e in elems if isinstance(e, Var)]
            if (self.at_sym("|") and len(names) == len(elems) >= 2
                    and len(set(names)) == len(names)):
                self.next()
                self.bound.extend(names)
                try:
                    body = self.formula()
                finally:
                    del self.bound[-len(names):]
                self.eat_sym("}")
                z = fresh_var(free_vars(body) | set(names))
                inner = And(body, Eq(Var(z), self.nested_tuple([Var(n) for n in names])))
                for n in reversed(names):
                    inner = Exists(n, inner)
                return Comp(z, inner, span=sp)
            self.pos = save  # plain tuple term; reparse below
        # bounded comprehension and plain comprehension start with a
        # bare variable
        t0 = self.peek()
        if t0.kind == "ident" and t0.text not in KEYWORDS:
            nxt = self.peek(1)
            if nxt.kind == "sym" and nxt.text == "|":
                var = self.next().text
                self.next()
                self.bound.append(var)
                try:
                    body = self.formula()
                finally:
                    self.bound.pop()
                self.eat_sym("}")
                return Comp(var, body, span=sp)
            if nxt.kind == "ident" and nxt.text == "in":
                var = self.next().text
                self.next()
                dom = self.as_term(self.term())
                if var in free_vars(dom):
                    raise ParseError(
                        f"bounded comprehension binder {var!r} occurs in its bound", sp)
                self.eat_sym("|")
                self.bound.append(var)
                try:
                    body = self.formula()
                finally:
                    self.bound.pop()
                self.eat_sym("}")
                return Comp(var, And(Mem(Var(var), dom), body), span=sp)

        first = self.as_term(self.term())
        if self.at_sym("|"):
            self.next()
            var_tok = self.eat_name()
            var = var_tok.text
            if var in self.defs:
                raise ParseError(
                    f"replacement binder {var!r} shadows a definition; rename it",
                    var_tok.span)
            self.eat_kw("in")
            dom = self.as_term(self.term())
            self.eat_sym("}")
            return self.replacement_term(first, var, dom, sp)
        elems = [first]
        while self.at_sym(","):
            self.next()
            elems.append(self.as_term(self.term()))
        self.eat_sym("}")
        return self.enum_term(elems, sp)

    # --- mixed entry used inside parentheses and at top level ---

    def general(self) -> Expr:
        if self.at_sym("~") or self.at_kw("exists", "forall", "TC"):
            return self.formula()
        e = self.term()
        if isinstance(e, Formula):
            return self.formula(seed=e)
        if self.at_kw("in", "sub") or self.at_sym("="):
            return self.formula(seed=self.relation(e))
        return e


def _entry(src, file, cfg, defs):
    if defs is None:
        from .catalog import prelude_definitions
        defs = prelude_definitions()
    return _Parser(src, file=file, cfg=cfg, defs=defs)


def parse_term(src: str, cfg: TheoryConfig = RST, defs=None, *,
               file: str = "<input>") -> Term:
    """Parse a term; definition calls and sugar expand in place, so the
    result is core syntax whose printing reparses alpha-equal."""
    p = _entry(src, file, cfg, defs)
    e = p.as_term(p.term())
    p.expect_eof()
    return e


def parse_formula(src: str, cfg: TheoryConfig = RST, defs=None, *,
                  file: str = "<input>") -> Formula:
    p = _entry(src, file, cfg, defs)
    e = p.general()
    p.expect_eof()
    if not isinstance(e, Formula):
        raise ParseError("expected a formula, found a term")
    return e


def parse_expr(src: str, cfg: TheoryConfig = RST, defs=None, *,
               file: str = "<input>") -> Expr:
    """Term or formula, whichever the input is."""
    p = _entry(src, file, cfg, defs)
    e = p.general()
    p.expect_eof()
    return e


@dataclass
class TheoryFile:
    cfg: TheoryConfig
    definitions: dict = field(default_factory=dict)
    directives: list = field(default_factory=list)
    expressions: list = field(default_factory=list)  # (expr, source, lineno)


def parse_definition_line(src: str, cfg: TheoryConfig, defs, *,
                          file="<input>") -> Definition:
    """Parse ``def NAME(p1,...,pk) := BODY`` (parens optional when
    there are no parameters)."""
    p = _Parser(src, file=file, cfg=cfg, defs=defs)
    p.eat_kw("def")
    name_tok = p.eat_name()
    name = name_tok.text
    params = []
    if p.at_sym("("):
        p.next()
        if not p.at_sym(")"):
            params.append(p.eat_name().text)
            while p.at_sym(","):
                p.next()
                params.append(p.eat_name().text)
        p.eat_sym(")")
    if len(set(params)) != len(params):
        raise ParseError(f"duplicate parameter in definition {name!r}", name_tok.span)
    p.eat_sym(":=")
    p.bound.extend(params)
    body = p.general()
    p.expect_eof()
    kind = "term" if isinstance(body, Term) else "formula"
    return Definition(name, tuple(params), body, kind)


def parse_theory_file(src: str, cfg: TheoryConfig = RST, defs=None, *,
                      file: str = "<file>") -> TheoryFile:
    """Line-based theory file: '#' comments, ``theory``/``enable``
    directives, ``def`` statements, and bare expressions (checked by
    the check command).  Directives apply from their line onward."""
    if defs is None:
        from .catalog import prelude_definitions
        defs = prelude_definitions()
    defs = dict(defs)
    out = TheoryFile(cfg=cfg)
    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        span = Span(file, lineno, 1, lineno, max(1, len(raw)))
        head = line.split(None, 1)[0]
        if head == "theory":
            name = line[len("theory"):].strip()
            try:
                out.cfg = _merge_preset(out.cfg, name)
            except ValueError as exc:
                raise ParseError(str(exc), span) from None
            out.directives.append(("theory", name))
        elif head == "enable":
            packs = [p for chunk in line[len("enable"):].split(",")
                     for p in chunk.split()]
            try:
                out.cfg = out.cfg.enable(*packs)
            except ValueError as exc:
                raise ParseError(str(exc), span) from None
            out.directives.append(("enable", tuple(packs)))
        elif head == "def":
            try:
                dfn = parse_definition_line(line, out.cfg, defs, file=file)
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc.message}", span,
                                 exc.expected) from None
            if dfn.name in defs:
                raise DuplicateDefinition(f"line {lineno}: {dfn.name!r} is already defined")
            defs[dfn.name] = dfn
            out.definitions[dfn.name] = dfn
        else:
            try:
                expr = parse_expr(line, out.cfg, defs, file=file)
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc.message}", span,
                                 exc.expected) from None
            out.expressions.append((expr, line, lineno))
    return out


def _merge_preset(cfg: TheoryConfig, name: str) -> TheoryConfig:
    base = TheoryConfig.preset(name)
    # keep previously enabled packs and the conjunction mode
    import dataclasses
    merged = dataclasses.replace(
        base,
        conjunction_symmetric=cfg.conjunction_symmetric,
        separation=cfg.separation or base.separation,
        replacement=cfg.replacement or base.replacement,
        powerset=cfg.powerset or base.powerset,
        subseteq_atom=cfg.subseteq_atom or base.subseteq_atom,
    )
    return merged


# --- pretty printing ---

_LVL_IMP = 2
_LVL_OR = 3
_LVL_AND = 4
_LVL_NEG = 5
_LVL_ATOM = 6
_LVL_QUANT = _LVL_IMP  # quantifiers extend maximally right


def print_expr(e: Expr, sugar: bool = False) -> str:
    """Concrete syntax that reparses to an alpha-equal expression.

    Reserved fresh binders are renamed to printable names.  With
    ``sugar`` set, recognizable catalog shapes (the empty set,
    enumerations, pairs and tuples) print in their surface forms.
    """
    return _Printer(sugar).expr(e, {})


class _Printer:
    def __init__(self, sugar: bool):
        self.sugar = sugar

    def binder_name(self, var: str, body, ren: dict) -> str:
        if not is_fresh_name(var):
            return var
        avoid = {ren.get(v, v) for v in free_vars(body) if v != var}
        avoid |= set(ren.values())
        base = "v"
        if base not in avoid:
            return base
        k = 1
        while f"{base}{k}" in avoid:
            k += 1
        return f"{base}{k}"

    def expr(self, e: Expr, ren: dict) -> str:
        if isinstance(e, Term):
            return self.term(e, ren)
        return self.formula(e, ren, 1)

    def term(self, t: Term, ren: dict) -> str:
        if self.sugar:
            s = self.try_sugar(t, ren)
            if s is not None:
                return s
        match t:
            case Var(name):
                return ren.get(name, name)
            case Const(name):
                return name
            case Comp(var, body):
                v = self.binder_name(var, body, ren)
                return "{" + v + " | " + self.formula(body, ren | {var: v}, 1) + "}"
            case MacroCall(name, args):
                inner = ", ".join(self.expr(a, ren) for a in args)
                return f"{name}({inner})"
        raise TypeError(f"not a term: {t!r}")

    def formula(self, f: Formula, ren: dict, level: int) -> str:
        match f:
            case Mem(l, r):
                out, lvl = f"{self.term(l, ren)} in {self.term(r, ren)}", _LVL_ATOM
            case Eq(l, r):
                out, lvl = f"{self.term(l, ren)} = {self.term(r, ren)}", _LVL_ATOM
            case Subset(l, r):
                out, lvl = f"{self.term(l, ren)} sub {self.term(r, ren)}", _LVL_ATOM
            case Not(s):
                out, lvl = "~" + self.formula(s, ren, _LVL_NEG), _LVL_NEG
            case And(l, r):
                out = f"{self.formula(l, ren, _LVL_AND)} & {self.formula(r, ren, _LVL_AND + 1)}"
                lvl = _LVL_AND
            case Or(l, r):
                out = f"{self.formula(l, ren, _LVL_OR)} | {self.formula(r, ren, _LVL_OR + 1)}"
                lvl = _LVL_OR
            case Implies(l, r):
                out = f"{self.formula(l, ren, _LVL_IMP + 1)} -> {self.formula(r, ren, _LVL_IMP)}"
                lvl = _LVL_IMP
            case Exists(var, body) | Forall(var, body):
                word = "exists" if isinstance(f, Exists) else "forall"
                v = self.binder_name(var, body, ren)
                out = f"{word} {v}. {self.formula(body, ren | {var: v}, 1)}"
                lvl = _LVL_QUANT
            case TC(x, y, body, start, end):
                rx = self.binder_name(x, body, ren)
                reny = ren | {x: rx}
                ry = self.binder_name(y, body, reny)
                if ry == rx:
                    ry += "'"
                inner = self.formula(body, reny | {y: ry}, 1)
                out = (f"TC[{rx},{ry}]({inner})"
                       f"({self.term(start, ren)}, {self.term(end, ren)})")
                lvl = _LVL_ATOM
            case _:
                raise TypeError(f"not a formula: {f!r}")
        if lvl < level:
            return f"({out})"
        return out

    # sugar recognition on core shapes

    def try_sugar(self, t: Term, ren: dict) -> Optional[str]:
        enum = _match_enum(t)
        if enum is None:
            return None
        if not enum:
            return "0"
        pair = _match_tuple(t)
        if pair is not None:
            return "<" + ", ".join(self.term(x, ren) for x in pair) + ">"
        return "{" + ", ".join(self.term(x, ren) for x in enum) + "}"


def _match_enum(t: Term):
    """Elements of an enumeration comprehension {v | v=t1 | ... }, or
    None.  The empty set matches with zero elements."""
    if not isinstance(t, Comp):
        return None
    v = t.var
    match t.body:
        case Mem(Var(a), Var(b)) if a == v and b == v:
            return []
    elems = []
    body = t.body
    while True:
        match body:
            case Or(rest, Eq(Var(a), e)) if a == v and v not in free_vars(e):
                elems.append(e)
                body = rest
            case Eq(Var(a), e) if a == v and v not in free_vars(e):
                elems.append(e)
                return list(reversed(elems))
            case _:
                return None


def _match_pair(t: Term):
    enum = _match_enum(t)
    if enum is None or len(enum) not in (1, 2):
        return None
    first = _match_enum(enum[0])
    if first is None or len(first) != 1:
        return None
    a = first[0]
    if len(enum) == 1:
        return (a, a)
    second = _match_enum(enum[1])
    if second is None or len(second) not in (1, 2):
        return None
    if not any(alphaish(a, x) for x in second):
        return None
    others = [x for x in second if not alphaish(a, x)]
    if len(second) == 1:
        return (a, a) if not others else None
    if len(others) != 1:
        return None
    return (a, others[0])


def alphaish(a, b):
    from .syntax import alpha_eq
    return alpha_eq(a, b)


def _match_tuple(t: Term):
    """Flatten left-nested pairs into the longest printable tuple."""
    p = _match_pair(t)
    if p is None:
        return None
    a, b = p
    left = _match_tuple(a)
    if left is not None:
        return left + [b]
    return [a, b]
