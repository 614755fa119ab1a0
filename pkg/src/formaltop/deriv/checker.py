"""Derivation checking by schema matching.

Matching is first order except for metavariables applied to distinct bound
variables, which are solved as families (higher-order patterns).  Any other
occurrence of an unsolved metavariable is postponed until it is solved
elsewhere.  Premises are assigned to schema premises by backtracking, so
their order in the derivation does not matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import FormalTopError, SchemaMismatch, ScopeError, UnknownRule
from .schemas import RULE_ALIASES, RULESETS, SPECIAL_RULES, Schema, schemas
from .syntax import (
    Bind, Derivation, Judgement, Lit, MApp, Meta, Node, Sym, alpha_equal, apply_family,
    check_telescope, free_vars, fresh_name, normalize, subst,
)


class _Fail(Exception):
    def __init__(self, reason: str, scope: bool = False, shallow: bool = False):
        super().__init__(reason)
        self.scope = scope
        self.shallow = shallow  # the premise had the wrong shape altogether


@dataclass
class _State:
    sol: dict = field(default_factory=dict)
    deferred: list = field(default_factory=list)

    def copy(self):
        return _State(dict(self.sol), list(self.deferred))


def _instantiate(p, st: _State, bmap: dict, ruleset: str):
    if isinstance(p, Sym):
        return Sym(bmap.get(p.name, p.name))
    if isinstance(p, Lit):
        return p
    if isinstance(p, Meta):
        return st.sol[p.name]
    if isinstance(p, MApp):
        args = [_instantiate(a, st, bmap, ruleset) for a in p.args]
        return normalize(apply_family(st.sol[p.meta], args), ruleset)
    if isinstance(p, Node):
        return Node(p.head, tuple(_instantiate(a, st, bmap, ruleset) for a in p.args))
    inner = dict(bmap)
    doms, names = [], []
    for v, d in zip(p.vars, p.doms):
        doms.append(None if d is None else _instantiate(d, st, inner, ruleset))
        nv = fresh_name(v, ())
        inner[v] = nv
        names.append(nv)
    return Bind(p.kind, tuple(names), tuple(doms), _instantiate(p.body, st, inner, ruleset))


def _metas_of(p) -> set:
    if isinstance(p, Meta):
        return {p.name}
    if isinstance(p, MApp):
        return {p.meta}.union(*(_metas_of(a) for a in p.args))
    if isinstance(p, Node):
        return set().union(*(_metas_of(a) for a in p.args)) if p.args else set()
    if isinstance(p, Bind):
        out = _metas_of(p.body)
        for d in p.doms:
            if d is not None:
                out |= _metas_of(d)
        return out
    return set()


class Matcher:
    def __init__(self, ruleset: str):
        self.ruleset = ruleset

    def _compare(self, p, t, st, bmap):
        got = _instantiate(p, st, bmap, self.ruleset)
        if not alpha_equal(got, t):
            raise _Fail(f"expected {got}, found {t}")

    def unify(self, p, t, st: _State, bmap: dict, local: frozenset):
        if isinstance(p, Meta):
            if p.name in st.sol:
                if not alpha_equal(st.sol[p.name], t):
                    raise _Fail(f"?{p.name} is {st.sol[p.name]} but here {t}")
                return
            leaked = free_vars(t) & local
            if leaked:
                raise _Fail(f"?{p.name} cannot depend on bound {sorted(leaked)}", scope=True)
            st.sol[p.name] = t
            return
        if isinstance(p, MApp):
            if p.meta in st.sol:
                if _metas_of(p) - st.sol.keys():
                    st.deferred.append((p, t, bmap, local))
                    return
                self._compare(p, t, st, bmap)
                return
            names = [bmap.get(a.name) if isinstance(a, Sym) else None for a in p.args]
            if all(names) and len(set(names)) == len(names):
                leaked = free_vars(t) & (local - set(names))
                if leaked:
                    raise _Fail(f"?{p.meta} cannot depend on bound {sorted(leaked)}", scope=True)
                st.sol[p.meta] = Bind("fam", tuple(names), (None,) * len(names), t)
                return
            st.deferred.append((p, t, bmap, local))
            return
        if isinstance(p, Sym):
            want = bmap.get(p.name, p.name)
            if not (isinstance(t, Sym) and t.name == want):
                raise _Fail(f"expected {want}, found {t}")
            return
        if isinstance(p, Lit):
            if t != p:
                raise _Fail(f"expected {p}, found {t}")
            return
        if isinstance(p, Node):
            if not (isinstance(t, Node) and t.head == p.head and len(t.args) == len(p.args)):
                raise _Fail(f"expected a ({p.head} ...) with {len(p.args)} argument(s), found {t}")
            for a, b in zip(p.args, t.args):
                self.unify(a, b, st, bmap, local)
            return
        if not (isinstance(t, Bind) and t.kind == p.kind and len(t.vars) == len(p.vars)):
            raise _Fail(f"expected a {p.kind} binder, found {t}")
        inner, loc = dict(bmap), set(local)
        for pv, tv, pd, td in zip(p.vars, t.vars, p.doms, t.doms):
            if (pd is None) != (td is None):
                raise _Fail(f"binder annotation mismatch in {t}")
            if pd is not None:
                self.unify(pd, td, st, inner, frozenset(loc))
            inner[pv] = tv
            loc.add(tv)
        self.unify(p.body, t.body, st, inner, frozenset(loc))

    def flush(self, st: _State, final: bool = False):
        progress = True
        while progress and st.deferred:
            progress = False
            pending, st.deferred = st.deferred, []
            for p, t, bmap, local in pending:
                if p.meta in st.sol and not (_metas_of(p) - st.sol.keys()):
                    self._compare(p, t, st, bmap)
                    progress = True
                elif isinstance(p, MApp) and p.meta not in st.sol:
                    before = len(st.deferred)
                    self.unify(p, t, st, bmap, local)
                    progress |= len(st.deferred) == before
                else:
                    st.deferred.append((p, t, bmap, local))
        if final and st.deferred:
            p, t, _, _ = st.deferred[0]
            raise _Fail(f"could not determine {p} against {t}")

    def judgement(self, pat: Judgement, conc: Judgement, gamma: tuple, st: _State):
        if pat.form != conc.form:
            raise _Fail(f"expected a '{pat.form}' judgement, found '{conc.form}'")
        n = len(gamma)
        if len(conc.ctx) != n + len(pat.ctx):
            raise _Fail(f"context of {conc} should extend the conclusion's by {len(pat.ctx)} variable(s)",
                        shallow=True)
        for (x, a), (y, b) in zip(conc.ctx[:n], gamma):
            if x != y or not alpha_equal(a, b):
                raise _Fail(f"context of {conc} does not extend the conclusion's context")
        bmap: dict = {}
        local: set = set()
        for (pv, pty), (cv, cty) in zip(pat.ctx, conc.ctx[n:]):
            self.unify(pty, cty, st, dict(bmap), frozenset(local))
            bmap[pv] = cv
            local.add(cv)
        for p, t in zip(pat.terms, conc.terms):
            self.unify(p, t, st, dict(bmap), frozenset(local))
        self.flush(st)


@dataclass
class NodeResult:
    ok: bool
    warning: str | None = None
    error: FormalTopError | None = None


def _match_schema(schema: Schema, node: Derivation, ruleset: str) -> str | None:
    """Returns ``None`` on success or the most informative failure reason."""
    m = Matcher(ruleset)
    concl = node.conclusion.normalized(ruleset)
    prems = [p.conclusion.normalized(ruleset) for p in node.premises]
    gamma = concl.ctx
    if len(prems) != len(schema.premises):
        raise _Fail(f"{schema.rule} takes {len(schema.premises)} premise(s), got {len(prems)}")
    st = _State()
    m.judgement(schema.conclusion, Judgement(concl.form, concl.terms, ()), (), st)
    # the conclusion is matched without its context, which is Γ for every premise
    failures: list[tuple[int, _Fail]] = []

    order = sorted(range(len(schema.premises)),
                   key=lambda k: len(_metas_of_j(schema.premises[k]) - st.sol.keys()))

    def search(k: int, used: frozenset, st: _State) -> bool:
        if k == len(order):
            try:
                m.flush(st, final=True)
            except _Fail as exc:
                failures.append((k, exc))
                return False
            return True
        pat = schema.premises[order[k]]
        for idx, conc in enumerate(prems):
            if idx in used or conc.form != pat.form:
                continue
            trial = st.copy()
            try:
                m.judgement(pat, conc, gamma, trial)
            except _Fail as exc:
                failures.append((k, exc))
                continue
            if search(k + 1, used | {idx}, trial):
                return True
        if not any(conc.form == pat.form for i, conc in enumerate(prems) if i not in used):
            failures.append((k, _Fail(f"no premise fits {pat}")))
        return False

    if search(0, frozenset(), st):
        return None
    scope = [f for _, f in failures if f.scope]
    if scope:
        raise scope[0]
    if not failures:
        raise _Fail("no match")
    # report the failure that got furthest, preferring near matches
    raise max(enumerate(failures), key=lambda e: (e[1][0], not e[1][1].shallow, -e[0]))[1][1]


def _metas_of_j(j: Judgement) -> set:
    out = set()
    for t in j.terms:
        out |= _metas_of(t)
    for _, a in j.ctx:
        out |= _metas_of(a)
    return out


def check_repl(node: Derivation, ruleset: str = "MLtt") -> bool:
    """Replacement: from ``c(x̄) ∈ C(x̄) [x̄ ∈ Ā]`` and ``aᵢ = bᵢ ∈ Aᵢ(a₁…)``,
    conclude ``c(ā) = c(b̄) ∈ C(ā)``.  The typing premise comes first and the
    equations follow in the order of the variables."""
    concl = node.conclusion.normalized(ruleset)
    if concl.form != "eq":
        raise SchemaMismatch("repl concludes an equality c(a) = c(b) ∈ C(a)")
    if not node.premises:
        raise SchemaMismatch("repl needs the typing premise c(x) ∈ C(x) [x ∈ A]")
    typing = node.premises[0].conclusion.normalized(ruleset)
    eqs = [p.conclusion.normalized(ruleset) for p in node.premises[1:]]
    gamma = concl.ctx
    if typing.form != "in":
        raise SchemaMismatch("the first repl premise must be c(x) ∈ C(x) [x ∈ A]")
    if len(typing.ctx) != len(gamma) + len(eqs) or any(
            x != y or not alpha_equal(a, b) for (x, a), (y, b) in zip(typing.ctx, gamma)):
        raise SchemaMismatch(f"the typing premise must bind one variable per equation ({len(eqs)})")
    xs = typing.ctx[len(gamma):]
    c, big_c = typing.terms
    left, right = {}, {}
    for (x, ax), e in zip(xs, eqs):
        if e.form != "eq" or len(e.ctx) != len(gamma):
            raise SchemaMismatch(f"expected an equation a = b ∈ A for {x}")
        a, b, ty = e.terms
        want_ty = subst(ax, left)
        if not alpha_equal(ty, want_ty):
            raise SchemaMismatch(f"equation for {x} is typed at {ty}, expected {want_ty}")
        left[x], right[x] = a, b
    want = (subst(c, left), subst(c, right), subst(big_c, left))
    for got, exp, what in zip(concl.terms, want, ("left side", "right side", "type")):
        if not alpha_equal(got, exp):
            raise SchemaMismatch(f"repl {what} should be {exp}, found {got}")
    return True


@dataclass
class CheckResult:
    ok: bool
    diagnostics: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def raise_if_failed(self):
        if self.errors:
            raise self.errors[0]
        return self


def check_node(node: Derivation, ruleset: str) -> NodeResult:
    if node.is_assumption:
        return NodeResult(True)
    name = RULE_ALIASES.get(node.rule, node.rule)
    try:
        check_telescope(node.conclusion)
        for p in node.premises:
            check_telescope(p.conclusion)
        if name in SPECIAL_RULES:
            if ruleset not in SPECIAL_RULES[name]:
                raise UnknownRule(f"{name} is not a rule of {ruleset}")
            check_repl(node, ruleset)
            return NodeResult(True)
        table = schemas(ruleset)
        if name not in table:
            raise UnknownRule(f"{name!r} is not a rule of {ruleset}")
        failure = None
        for schema in table[name]:
            try:
                _match_schema(schema, node, ruleset)
                return NodeResult(True, schema.warning)
            except _Fail as exc:
                if failure is None or (exc.scope and not failure.scope):
                    failure = exc
        if failure.scope:
            raise ScopeError(f"{name}: {failure}")
        raise SchemaMismatch(f"{name}: {failure}")
    except FormalTopError as exc:
        return NodeResult(False, None, exc)


def check_derivation(d: Derivation, ruleset: str, strict: bool = False) -> CheckResult:
    """Checks every node of ``d``; ``strict`` raises the first error."""
    if ruleset not in RULESETS:
        raise ValueError(f"unknown ruleset {ruleset!r}")
    res = CheckResult(True)
    for node in d.nodes():
        r = check_node(node, ruleset)
        where = f"line {node.line}: " if node.line else ""
        if r.warning:
            res.warnings.append(f"{where}{node.rule}: warning: {r.warning}")
        if not r.ok:
            res.ok = False
            res.errors.append(r.error)
            res.diagnostics.append(f"{where}{type(r.error).__name__}: {r.error}")
    if strict:
        res.raise_if_failed()
    return res
