"""Terms, judgements and derivation trees in s-expression form.

Binders::

    (lam x b)                      λ-abstraction
    (Pi (x A) B)  (Sigma (x A) B)  (forall (x A) P)  (exists (x A) P)
    (fam (x j) b)                  family: a term abstracted over variables

Everything else is ``(head arg ...)``; an atom beginning with ``?`` is a
schema metavariable and ``(?X t ...)`` applies one to arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import ParseError, ScopeError
from ..sexpr import Atom, SList, dumps, parse_all, where


@dataclass(frozen=True)
class Sym:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Lit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Meta:
    name: str

    def __str__(self):
        return "?" + self.name


@dataclass(frozen=True)
class Node:
    head: str
    args: tuple

    def __str__(self):
        return "(" + " ".join([self.head] + [str(a) for a in self.args]) + ")"


@dataclass(frozen=True)
class Bind:
    kind: str
    vars: tuple
    doms: tuple  # one entry per variable; None when untyped
    body: object

    def __str__(self):
        if self.kind == "lam":
            return f"(lam {self.vars[0]} {self.body})"
        if self.kind == "fam":
            return f"(fam ({' '.join(self.vars)}) {self.body})"
        return f"({self.kind} ({self.vars[0]} {self.doms[0]}) {self.body})"


@dataclass(frozen=True)
class MApp:
    meta: str
    args: tuple

    def __str__(self):
        return "(?" + self.meta + "".join(" " + str(a) for a in self.args) + ")"


Term = Sym | Lit | Meta | Node | Bind | MApp

TYPED_BINDERS = ("Pi", "Sigma", "forall", "exists")
BINDERS = TYPED_BINDERS + ("lam", "fam")


def _err(msg, form):
    line, col = where(form)
    return ParseError(msg, line, col)


def parse_term(form, allow_meta: bool = False) -> Term:
    if isinstance(form, int):
        return Lit(form)
    if isinstance(form, str):
        if form.startswith("?"):
            if not allow_meta:
                raise _err(f"metavariable {form} outside a schema", form)
            return Meta(form[1:])
        return Sym(str(form))
    if not form:
        raise _err("empty term", form)
    head = form[0]
    if isinstance(head, str) and head.startswith("?"):
        if not allow_meta:
            raise _err(f"metavariable {head} outside a schema", head)
        return MApp(head[1:], tuple(parse_term(a, allow_meta) for a in form[1:]))
    if not isinstance(head, str):
        raise _err("term head must be a symbol", form)
    if head == "lam":
        if len(form) != 3 or not isinstance(form[1], str):
            raise _err("expected (lam x body)", form)
        return Bind("lam", (str(form[1]),), (None,), parse_term(form[2], allow_meta))
    if head == "fam":
        if len(form) != 3 or not isinstance(form[1], list) or not all(isinstance(v, str) for v in form[1]):
            raise _err("expected (fam (x ...) body)", form)
        names = tuple(str(v) for v in form[1])
        return Bind("fam", names, (None,) * len(names), parse_term(form[2], allow_meta))
    if head in TYPED_BINDERS:
        if len(form) != 3 or not isinstance(form[1], list) or len(form[1]) != 2 or not isinstance(form[1][0], str):
            raise _err(f"expected ({head} (x A) body)", form)
        return Bind(str(head), (str(form[1][0]),), (parse_term(form[1][1], allow_meta),),
                    parse_term(form[2], allow_meta))
    return Node(str(head), tuple(parse_term(a, allow_meta) for a in form[1:]))


def term(text: str, allow_meta: bool = False) -> Term:
    forms = parse_all(text)
    if len(forms) != 1:
        raise ParseError("expected one term", 1, 1)
    return parse_term(forms[0], allow_meta)


# -- variables and substitution -------------------------------------------------

def free_vars(t: Term) -> frozenset:
    if isinstance(t, Sym):
        return frozenset([t.name])
    if isinstance(t, (Lit, Meta)):
        return frozenset()
    if isinstance(t, (Node, MApp)):
        return frozenset().union(*(free_vars(a) for a in t.args)) if t.args else frozenset()
    out = free_vars(t.body) - set(t.vars)
    for d in t.doms:
        if d is not None:
            out |= free_vars(d)
    return out


_fresh_counter = itertools.count()


def fresh_name(base: str, avoid) -> str:
    stem = base.split("'")[0]
    while True:
        cand = f"{stem}'{next(_fresh_counter)}"
        if cand not in avoid:
            return cand


def subst(t: Term, mapping: dict) -> Term:
    """Capture-avoiding simultaneous substitution of terms for symbols."""
    if not mapping:
        return t
    if isinstance(t, Sym):
        return mapping.get(t.name, t)
    if isinstance(t, (Lit, Meta)):
        return t
    if isinstance(t, Node):
        return Node(t.head, tuple(subst(a, mapping) for a in t.args))
    if isinstance(t, MApp):
        return MApp(t.meta, tuple(subst(a, mapping) for a in t.args))
    doms = tuple(None if d is None else subst(d, mapping) for d in t.doms)
    inner = {k: v for k, v in mapping.items() if k not in t.vars}
    incoming = frozenset().union(*(free_vars(v) for v in inner.values())) if inner else frozenset()
    new_vars = []
    for v in t.vars:
        if v in incoming:
            nv = fresh_name(v, incoming | free_vars(t.body))
            inner[v] = Sym(nv)
            new_vars.append(nv)
        else:
            new_vars.append(v)
    return Bind(t.kind, tuple(new_vars), doms, subst(t.body, inner))


def _nameless(t: Term, scope: tuple):
    if isinstance(t, Sym):
        for depth, name in enumerate(reversed(scope)):
            if name == t.name:
                return ("b", depth)
        return ("s", t.name)
    if isinstance(t, Lit):
        return ("n", t.value)
    if isinstance(t, Meta):
        return ("m", t.name)
    if isinstance(t, Node):
        return ("N", t.head) + tuple(_nameless(a, scope) for a in t.args)
    if isinstance(t, MApp):
        return ("M", t.meta) + tuple(_nameless(a, scope) for a in t.args)
    doms = tuple(None if d is None else _nameless(d, scope) for d in t.doms)
    return ("B", t.kind, len(t.vars), doms, _nameless(t.body, scope + t.vars))


def alpha_equal(a: Term, b: Term) -> bool:
    return _nameless(a, ()) == _nameless(b, ())


def apply_family(f: Term, args) -> Term:
    """Instantiate a family with arguments (``fam`` bodies are substituted)."""
    args = tuple(args)
    if isinstance(f, Bind) and f.kind == "fam" and len(f.vars) == len(args):
        return subst(f.body, dict(zip(f.vars, args)))
    if isinstance(f, Meta):
        return MApp(f.name, args)
    return Node("app", (f,) + args)


# -- ruleset normalization --------------------------------------------------------

def expand_split(A, V, I, C, P) -> Term:
    """``∀x∈A (P(x) → (x ε V & ∀z∈I(x) ∃y∈A (y ε C(x,z) & P(y))))``."""
    x, z, y = Sym("x%s"), Sym("z%s"), Sym("y%s")
    inner = Bind("exists", ("y%s",), (A,), Node("&", (
        Node("eps", (y, apply_family(C, (x, z)))), apply_family(P, (y,)))))
    return Bind("forall", ("x%s",), (A,), Node("->", (
        apply_family(P, (x,)),
        Node("&", (Node("eps", (x, V)), Bind("forall", ("z%s",), (apply_family(I, (x,)),), inner))))))


def normalize(t: Term, ruleset: str) -> Term:
    """Unfold notational abbreviations for the given ruleset."""
    if isinstance(t, (Sym, Lit, Meta)):
        return t
    if isinstance(t, MApp):
        return MApp(t.meta, tuple(normalize(a, ruleset) for a in t.args))
    if isinstance(t, Bind):
        return Bind(t.kind, t.vars, tuple(None if d is None else normalize(d, ruleset) for d in t.doms),
                    normalize(t.body, ruleset))
    args = tuple(normalize(a, ruleset) for a in t.args)
    h = t.head
    if h == "split" and len(args) == 5:
        return normalize(expand_split(*args), ruleset)
    if h == "eps" and len(args) == 2:
        if ruleset == "mTT":
            return Node("Ap", (args[1], args[0]))
        if ruleset in ("MLtt", "MLS"):
            return Node("T", (Node("Ap", (args[1], args[0])),))
    if ruleset in ("MLtt", "MLS") and h in ("pos", "cov") and len(args) == 5:
        return Node("T", (Node(h + "hat", args),))
    if h == "app" and args and isinstance(args[0], Bind) and args[0].kind == "fam":
        return normalize(apply_family(args[0], args[1:]), ruleset)
    return Node(h, args)


# -- judgements ---------------------------------------------------------------------

FORM_ARITY = {"type": 1, "set": 1, "col": 1, "prop": 1, "props": 1, "true": 1,
              "eqtype": 2, "in": 2, "eq": 3}


@dataclass(frozen=True)
class Judgement:
    form: str
    terms: tuple
    ctx: tuple = ()  # ((name, type), ...)

    def __str__(self):
        body = " ".join([self.form] + [str(t) for t in self.terms])
        if self.ctx:
            body += " (ctx " + " ".join(f"({x} {a})" for x, a in self.ctx) + ")"
        return f"({body})"

    def normalized(self, ruleset: str) -> "Judgement":
        return Judgement(self.form, tuple(normalize(t, ruleset) for t in self.terms),
                         tuple((x, normalize(a, ruleset)) for x, a in self.ctx))

    def map_terms(self, fn) -> "Judgement":
        return Judgement(self.form, tuple(fn(t) for t in self.terms), tuple((x, fn(a)) for x, a in self.ctx))


def check_telescope(j: Judgement, schema: bool = False) -> None:
    """Each context type may only mention earlier context variables."""
    names = [x for x, _ in j.ctx]
    if len(set(names)) != len(names):
        raise ScopeError(f"repeated context variable in {j}")
    if schema:
        return
    for k, (x, a) in enumerate(j.ctx):
        later = set(names[k:])
        leaked = free_vars(a) & later
        if leaked:
            raise ScopeError(f"context entry {x} mentions {sorted(leaked)} before it is bound")


def parse_judgement(form, allow_meta: bool = False) -> Judgement:
    if not isinstance(form, list) or not form or not isinstance(form[0], str):
        raise _err("expected a judgement (form term ...)", form)
    kind = str(form[0])
    if kind not in FORM_ARITY:
        raise _err(f"unknown judgement form {kind!r}", form)
    rest = list(form[1:])
    ctx: tuple = ()
    if rest and isinstance(rest[-1], list) and rest[-1] and rest[-1][0] == "ctx":
        entries = []
        for entry in rest.pop()[1:]:
            if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], str):
                raise _err("context entries are (x A)", entry)
            entries.append((str(entry[0]), parse_term(entry[1], allow_meta)))
        ctx = tuple(entries)
    if len(rest) != FORM_ARITY[kind]:
        raise _err(f"{kind} takes {FORM_ARITY[kind]} term(s), got {len(rest)}", form)
    j = Judgement(kind, tuple(parse_term(t, allow_meta) for t in rest), ctx)
    check_telescope(j, schema=allow_meta)
    return j


# -- derivations ------------------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    rule: str | None  # None for an assumption leaf
    conclusion: Judgement
    premises: tuple = ()
    line: int | None = None

    @property
    def is_assumption(self):
        return self.rule is None

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


def parse_derivation(form) -> Derivation:
    line, _ = where(form)
    if not isinstance(form, list) or not form:
        raise _err("expected (rule ...) or (assume ...)", form)
    if form[0] == "assume":
        if len(form) != 2:
            raise _err("expected (assume judgement)", form)
        return Derivation(None, parse_judgement(form[1]), (), line)
    if form[0] != "rule" or len(form) < 3 or not isinstance(form[1], (str, int)):
        raise _err("expected (rule NAME (concl J) (prem D ...))", form)
    name = str(form[1])
    concl, prems = None, ()
    for part in form[2:]:
        if isinstance(part, list) and part and part[0] == "concl" and len(part) == 2:
            concl = parse_judgement(part[1])
        elif isinstance(part, list) and part and part[0] == "prem":
            prems = tuple(parse_derivation(p) for p in part[1:])
        else:
            raise _err("rule parts are (concl J) and (prem D ...)", part)
    if concl is None:
        raise _err("rule node without a conclusion", form)
    return Derivation(name, concl, prems, line)


@dataclass
class Declarations:
    """Named finite data that constants in a derivation file refer to."""

    axioms: dict = field(default_factory=dict)   # name -> AxiomSet
    subsets: dict = field(default_factory=dict)  # name -> Subset

    def merged(self, other: "Declarations") -> "Declarations":
        return Declarations({**self.axioms, **other.axioms}, {**self.subsets, **other.subsets})


@dataclass
class DerivationFile:
    ruleset: str | None
    derivations: list
    decls: Declarations
    expect: str | None = None


def _parse_axioms_decl(form):
    from ..core import validate_axiom_set

    name = str(form[1])
    base, covers = None, {}
    for part in form[2:]:
        if isinstance(part, list) and part and part[0] == "base" and len(part) == 2:
            base = part[1]
        elif isinstance(part, list) and part and part[0] == "cover" and len(part) >= 3:
            x, j, members = part[1], part[2], part[3:]
            if not all(isinstance(m, int) for m in [x, j, *members]):
                raise _err("cover entries are numerals", part)
            covers[(x, j)] = members
        else:
            raise _err("axioms parts are (base n) and (cover x j m ...)", part)
    if not isinstance(base, int):
        raise _err("axioms declaration needs (base n)", form)
    counts = [0] * base
    for x, j in covers:
        if x >= base:
            raise _err(f"cover for element {x} outside base {base}", form)
        counts[x] = max(counts[x], j + 1)
    return name, validate_axiom_set(base, counts, covers)


def parse_derivation_file(text: str) -> DerivationFile:
    from ..core import Subset

    expect = None
    for raw in text.splitlines():
        s = raw.strip()
        if s.startswith(";") and "expect:" in s:
            expect = s.split("expect:", 1)[1].strip().split()[0]
    ruleset, derivs, decls = None, [], Declarations()
    for form in parse_all(text):
        if not isinstance(form, list) or not form:
            raise _err("unexpected top-level form", form)
        head = form[0]
        if head == "ruleset" and len(form) == 2:
            ruleset = str(form[1])
        elif head == "axioms" and len(form) >= 3:
            name, ax = _parse_axioms_decl(form)
            decls.axioms[name] = ax
        elif head == "subset" and len(form) == 4 and isinstance(form[2], int) and isinstance(form[3], list):
            try:
                decls.subsets[str(form[1])] = Subset.of(form[2], form[3])
            except Exception as exc:
                raise _err(str(exc), form) from None
        elif head in ("rule", "assume"):
            derivs.append(parse_derivation(form))
        else:
            raise _err(f"unknown top-level form {dumps(form)[:40]}", form)
    return DerivationFile(ruleset, derivs, decls, expect)


__all__ = [
    "Sym", "Lit", "Meta", "Node", "Bind", "MApp", "Term", "Judgement", "Derivation",
    "Declarations", "DerivationFile", "parse_term", "term", "parse_judgement", "parse_derivation",
    "parse_derivation_file", "free_vars", "subst", "alpha_equal", "apply_family", "normalize",
    "expand_split", "fresh_name", "check_telescope", "Atom", "SList",
]
