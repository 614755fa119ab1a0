"""Realizability reading of terms, types and judgements.

Terms become open programs of the combinatory algebra (free variables stay
free), types become membership predicates over the naturals evaluated by a
:class:`StageMachine`, and a judgement is valid when its clause holds for
every assignment of realizers to its context.

Constants tied to declared finite data::

    (carrier X)      code of the base of axiom-set X
    (el X k)         code of element k
    (idx X x j)      code of the j-th index of element x
    (axi X x)        the index-set family applied to x
    (axc X x j)      the cover family applied to x and j
    (cert X V k)     canonical positivity certificate for k and subset V
    (proof X V k)    cover-proof code for k covered by V
    (pick X W x j)   a member of C(x, j) lying in W when possible
    W                a declared subset, as a propositional function
"""

from __future__ import annotations

from ..core import NO, YES, TriBool, tri, tri_all, tri_any, unknown
from ..covers import covers
from ..errors import UnsupportedConstruct
from ..deriv.syntax import Bind, Declarations, Judgement, Lit, MApp, Meta, Node, Sym
from ..deriv.translate import translate_judgement
from . import codes
from .encode import EncodedAxioms, decode_axioms, decode_subset
from .pairing import list_decode, pair, unpair
from .pca import (
    DIVERGENT, App, If, Lam, Num, Var, app, evaluate, fix, free_vars as pca_free_vars, fst_t,
    lam, lambda_encode, let, pair_t, prim, snd_t, subst as pca_subst, table, tuple_t,
)
from .stages import StageMachine


def _curried(names, body):
    out = body
    for n in reversed(names):
        out = Lam(n, out)
    return out


class Realizer:
    """Interpretation with a fixed set of declarations and budgets."""

    def __init__(self, decls: Declarations | None = None, fuel: int = 100_000,
                 sample_bound: int = 6, stage: int | None = None):
        self.decls = decls or Declarations()
        self.fuel = fuel
        self.sm = StageMachine(stage=stage, fuel=fuel, sample_bound=sample_bound)
        self.sample_bound = sample_bound
        self._encoded: dict = {}
        self._decoded: dict = {}

    # -- declared data ------------------------------------------------------------

    def encoded(self, name) -> EncodedAxioms:
        name = str(name)
        if name not in self.decls.axioms:
            raise UnsupportedConstruct(f"no axiom-set named {name}")
        if name not in self._encoded:
            self._encoded[name] = EncodedAxioms(self.decls.axioms[name])
        return self._encoded[name]

    def subset_named(self, name):
        name = str(name)
        if name not in self.decls.subsets:
            raise UnsupportedConstruct(f"no subset named {name}")
        return self.decls.subsets[name]

    @staticmethod
    def _nat(t) -> int:
        if not isinstance(t, Lit):
            raise UnsupportedConstruct(f"expected a numeral, found {t}")
        return t.value

    # -- terms ------------------------------------------------------------------------

    def term(self, t):
        """Program realizing ``t``; free variables remain free."""
        if isinstance(t, Lit):
            return Num(t.value)
        if isinstance(t, Sym):
            if t.name in self.decls.subsets:
                e = self._subset_code(t.name)
                return Num(e)
            return Var(t.name)
        if isinstance(t, (Meta, MApp)):
            raise UnsupportedConstruct("schema metavariables have no realizer")
        if isinstance(t, Bind):
            if t.kind in ("lam", "fam"):
                return _curried(t.vars, self.term(t.body))
            raise UnsupportedConstruct(f"{t.kind} is a type former, not a term")
        return self._node(t.head, t.args)

    def _subset_code(self, name) -> int:
        from .encode import subset_program
        v = self.subset_named(name)
        return subset_program(v.carrier_size, v.members)

    def _fam(self, f):
        return self.term(f)

    def _node(self, h, args):
        n = len(args)
        r = self.term
        simple = {"n0hat": codes.N0, "n1hat": codes.N1, "nhat": codes.NAT}
        if h in simple and n == 0:
            return Num(simple[h])
        if h in ("sigmahat", "pihat") and n == 2:
            tag = 1 if h == "sigmahat" else 2
            return pair_t(Num(tag), pair_t(r(args[0]), self._fam(args[1])))
        if h == "plushat" and n == 2:
            return pair_t(Num(3), pair_t(r(args[0]), r(args[1])))
        if h == "listhat" and n == 1:
            return pair_t(Num(4), r(args[0]))
        if h == "idhat" and n == 3:
            return pair_t(Num(5), tuple_t(*(r(a) for a in args)))
        if h in ("covhat", "poshat") and n == 5:
            tag = 6 if h == "covhat" else 9
            a, v, s, i, c = args
            return pair_t(Num(tag), tuple_t(r(a), r(v), r(s), self._fam(i), self._fam(c)))
        if h == "u" and n == 2:
            return pair_t(Num(10), pair_t(r(args[0]), self._fam(args[1])))
        if h == "rf" and n == 2:
            return pair_t(Num(7), pair_t(r(args[0]), r(args[1])))
        if h == "tr" and n == 3:
            return pair_t(Num(8), tuple_t(*(r(a) for a in args)))
        if h == "Ap" and n == 2:
            return App(r(args[0]), r(args[1]))
        if h == "app" and n >= 1:
            return app(r(args[0]), *(r(a) for a in args[1:]))
        if h == "pair" and n == 2:
            return pair_t(r(args[0]), r(args[1]))
        if h == "p0" and n == 1:
            return fst_t(r(args[0]))
        if h == "p1" and n == 1:
            return snd_t(r(args[0]))
        if h == "succ" and n == 1:
            return prim("succ", r(args[0]))
        if h == "ax1" and n == 2:
            return fst_t(r(args[1]))
        if h == "ax2" and n == 3:
            return App(snd_t(r(args[2])), r(args[1]))
        if h == "ax3" and n == 4:
            return app(self.coinduction_program(self._fam(args[2]), self._fam(args[3])), r(args[0]), r(args[1]))
        if h == "ind" and n == 3:
            return App(self.recursion_program(self._fam(args[1]), self._fam(args[2])), r(args[0]))
        return self._constant(h, args)

    @staticmethod
    def coinduction_program(q1, q2):
        """``Q(x, z) = p(q1(x,z), λj. p(y, p(e, Q(y, m))))`` where
        ``q2(x,j,z) = p(y, p(e, m))``: a positivity certificate built from the
        coinduction data by the recursion theorem."""
        w = Var("w%")
        body = lam("x%", "z%", pair_t(app(q1, Var("x%"), Var("z%")), lam(
            "j%", let("w%", app(q2, Var("x%"), Var("j%"), Var("z%")),
                      pair_t(fst_t(w), pair_t(fst_t(snd_t(w)),
                                              app(Var("Q%"), fst_t(w), snd_t(snd_t(w)))))))))
        return fix("Q%", body)

    @staticmethod
    def recursion_program(q1, q2):
        """Structural recursion on ``rf̃``/``tr̃`` proof codes."""
        m, p = Var("m%"), Var("p%")
        rf_case = app(q1, fst_t(snd_t(m)), snd_t(snd_t(m)))
        tr_case = let("p%", snd_t(m), app(
            q2, fst_t(fst_t(p)), snd_t(fst_t(p)), snd_t(p),
            lam("z%", "u%", App(Var("R%"), app(snd_t(p), Var("z%"), Var("u%"))))))
        body = lam("m%", If(prim("eq", fst_t(m), Num(7)), rf_case, tr_case))
        return fix("R%", body)

    def _constant(self, h, args):
        n = len(args)
        if h == "carrier" and n == 1:
            return Num(self.encoded(args[0]).s)
        if h == "el" and n == 2:
            return Num(self.encoded(args[0]).element(self._nat(args[1])))
        if h == "idx" and n == 3:
            return Num(self.encoded(args[0]).index(self._nat(args[1]), self._nat(args[2])))
        if h == "axi" and n == 2:
            return App(Num(self.encoded(args[0]).i), self.term(args[1]))
        if h == "axc" and n == 3:
            return app(Num(self.encoded(args[0]).c), self.term(args[1]), self.term(args[2]))
        if h == "cert" and n == 3:
            e = self.encoded(args[0])
            return Num(e.certificate(self._nat(args[2]), self.subset_named(args[1])))
        if h == "proof" and n == 3:
            e = self.encoded(args[0])
            return Num(e.cover_realizer(self._nat(args[2]), self.subset_named(args[1])))
        if h == "pick" and n == 4:
            e = self.encoded(args[0])
            choose = e.choice_term(self.subset_named(args[1]))
            return app(Num(lambda_encode(choose)), self.term(args[2]), self.term(args[3]))
        raise UnsupportedConstruct(f"no realizer for ({h} ...) with {n} argument(s)")

    def value(self, t, asg: dict):
        """Evaluate ``t`` under an assignment of numbers to its free variables."""
        prog = self.term(t)
        for name in pca_free_vars(prog):
            if name not in asg:
                raise UnsupportedConstruct(f"free variable {name} has no value")
            prog = pca_subst(prog, name, Num(asg[name]))
        out = evaluate(prog, self.fuel)
        return out

    # -- types --------------------------------------------------------------------------

    def _code(self, t, asg):
        v = self.value(t, asg)
        return None if v is DIVERGENT else v

    def member(self, ty, x: int, asg: dict) -> TriBool:
        """``x`` realizes ``ty``."""
        sm = self.sm
        if isinstance(ty, Sym):
            if ty.name in ("U0", "S"):
                return sm.is_set(x)
            if ty.name == "N0":
                return NO
            if ty.name == "N1":
                return tri(x == 0)
            if ty.name == "N":
                return YES
            raise UnsupportedConstruct(f"no realizability reading for the type {ty}")
        if isinstance(ty, Bind) and ty.kind in ("Pi", "Sigma"):
            var, dom, body = ty.vars[0], ty.doms[0], ty.body
            if ty.kind == "Sigma":
                first, second = unpair(x)
                return tri_all([self.member(dom, first, asg),
                                lambda: self.member(body, second, {**asg, var: first})])
            return self._forall(dom, asg, lambda y: self._apply_member(body, x, y, {**asg, var: y}))
        if isinstance(ty, Node):
            h, args = ty.head, ty.args
            if h == "T" and len(args) == 1:
                code = self._code(args[0], asg)
                return unknown(self.sm.spent) if code is None else sm.mem(x, code)
            if h == "times" and len(args) == 2:
                first, second = unpair(x)
                return tri_all([self.member(args[0], first, asg), lambda: self.member(args[1], second, asg)])
            if h == "->" and len(args) == 2:
                return self._forall(args[0], asg, lambda y: self._apply_member(args[1], x, y, asg))
            if h == "+" and len(args) == 2:
                side, inner = unpair(x)
                if side > 1:
                    return NO
                return self.member(args[side], inner, asg)
            if h == "List" and len(args) == 1:
                return tri_all(lambda y=y: self.member(args[0], y, asg) for y in list_decode(x))
            if h == "Id" and len(args) == 3:
                a, b = self._code(args[1], asg), self._code(args[2], asg)
                if a is None or b is None:
                    return unknown(self.sm.spent)
                if not (x == a == b):
                    return NO
                return self.member(args[0], a, asg)
        raise UnsupportedConstruct(f"no realizability reading for the type {ty}")

    def _apply_member(self, ty, f, y, asg):
        out = self.sm.apply(f, y)
        if out is DIVERGENT:
            return unknown(self.sm.spent)
        return self.member(ty, out, asg)

    def _forall(self, dom, asg, pred) -> TriBool:
        cands = self.candidates(dom, asg)
        if cands is not None:
            return tri_all(lambda y=y: self._guarded(dom, y, asg, pred) for y in cands)
        for y in range(self.sample_bound):
            if self.member(dom, y, asg).is_yes and pred(y).is_no:
                return NO
        return unknown(self.sm.spent)

    def _guarded(self, dom, y, asg, pred):
        inside = self.member(dom, y, asg)
        if inside.is_no:
            return YES
        got = pred(y)
        return got if (inside.is_yes or got.is_yes) else unknown(self.sm.spent)

    def candidates(self, ty, asg: dict):
        """A finite list containing every realizer of ``ty``, or ``None``."""
        if isinstance(ty, Sym):
            return {"N0": [], "N1": [0]}.get(ty.name)
        if isinstance(ty, Bind):
            if ty.kind == "Sigma":
                firsts = self.candidates(ty.doms[0], asg)
                if firsts is None:
                    return None
                out = []
                for y in firsts:
                    rest = self.candidates(ty.body, {**asg, ty.vars[0]: y})
                    if rest is None:
                        return None
                    out.extend(pair(y, z) for z in rest)
                return out
            return None
        if isinstance(ty, Node):
            h, args = ty.head, ty.args
            if h == "T":
                code = self._code(args[0], asg)
                return None if code is None else self.sm.members(code)
            if h == "times":
                a, b = self.candidates(args[0], asg), self.candidates(args[1], asg)
                if a is None or b is None:
                    return None
                return [pair(x, y) for x in a for y in b]
            if h == "+":
                a, b = self.candidates(args[0], asg), self.candidates(args[1], asg)
                if a is None or b is None:
                    return None
                return [pair(0, x) for x in a] + [pair(1, y) for y in b]
            if h == "Id":
                a, b = self._code(args[1], asg), self._code(args[2], asg)
                if a is None or b is None:
                    return None
                return [a] if a == b else []
        return None

    # -- witnesses for proof-irrelevant truth ---------------------------------------------

    def witnesses(self, ty, asg: dict):
        """Candidate realizers of ``ty``; complete up to the choice of
        certificates for positivity and cover codes."""
        if isinstance(ty, Node) and ty.head == "T":
            code = self._code(ty.args[0], asg)
            if code is None:
                return None
            special = self._certificate_for(code)
            if special is not None:
                return special
            return self.sm.members(code)
        if isinstance(ty, Bind) and ty.kind == "Sigma":
            firsts = self.candidates(ty.doms[0], asg)
            if firsts is None:
                return None
            out = []
            for y in firsts:
                rest = self.witnesses(ty.body, {**asg, ty.vars[0]: y})
                if rest is None:
                    return None
                out.extend(pair(y, z) for z in rest)
            return out
        if isinstance(ty, Node) and ty.head == "times":
            a, b = self.witnesses(ty.args[0], asg), self.witnesses(ty.args[1], asg)
            if a is None or b is None:
                return None
            return [pair(x, y) for x in a for y in b]
        if (isinstance(ty, Bind) and ty.kind == "Pi") or (isinstance(ty, Node) and ty.head == "->"):
            dom = ty.doms[0] if isinstance(ty, Bind) else ty.args[0]
            pts = self.candidates(dom, asg)
            if pts is None:
                return None
            entries = []
            for y in pts:
                inner = {**asg, ty.vars[0]: y} if isinstance(ty, Bind) else asg
                body = ty.body if isinstance(ty, Bind) else ty.args[1]
                ws = self.witnesses(body, inner)
                if ws is None:
                    return None
                good = [w for w in ws if self.member(body, w, inner).is_yes]
                if not good:
                    if self.member(dom, y, asg).is_no:
                        continue
                    return []
                entries.append((y, Num(good[0])))
            return [lambda_encode(lam("y%", table("y%", entries)))]
        return self.candidates(ty, asg)

    def _certificate_for(self, code: int):
        c = codes.classify_code(code)
        if c.tag not in (6, 9):
            return None
        f = c.fields
        key = (f["s"], f["i"], f["c"])
        if key not in self._decoded:
            self._decoded[key] = decode_axioms(self.sm, *key)
        coded = self._decoded[key]
        if coded is None:
            return None
        pos = coded.position(f["a"])
        dec = decode_subset(self.sm, coded, f["v"])
        if pos is None or dec is None:
            return []
        v, evidence = dec
        if c.tag == 9:
            return [coded.certificate(pos, v, evidence)]
        if not covers(coded.ax, pos, v):
            return []
        return [coded.cover_realizer(pos, v, evidence)]

    # -- judgements -----------------------------------------------------------------------

    def _assignments(self, ctx, asg, fixed):
        """Yields ``(assignment, membership)`` for every context instance;
        yields ``None`` once if some domain cannot be enumerated."""
        if not ctx:
            yield asg, YES
            return
        (x, ty), rest = ctx[0], ctx[1:]
        if x in fixed:
            cands = [fixed[x]]
        else:
            cands = self.candidates(ty, asg)
            if cands is None:
                yield None
                return
        for v in cands:
            inside = self.member(ty, v, asg)
            if inside.is_no:
                continue
            for sub in self._assignments(rest, {**asg, x: v}, fixed):
                if sub is None:
                    yield None
                    return
                yield sub[0], (inside if inside.is_unknown else sub[1])

    def judgement(self, j: Judgement, assignments: dict | None = None) -> TriBool:
        """Validity of an MLtt/MLS judgement."""
        fixed = assignments or {}
        bound = {x for x, _ in j.ctx}
        results = []
        for inst in self._assignments(j.ctx, {k: v for k, v in fixed.items() if k not in bound}, fixed):
            if inst is None:
                return unknown(self.sm.spent)
            asg, inside = inst
            got = self._clause(j, asg)
            if got.is_no and inside.is_yes:
                return NO
            results.append(got if inside.is_yes else (got if got.is_yes else unknown(self.sm.spent)))
        return tri_all(results)

    def _clause(self, j: Judgement, asg) -> TriBool:
        f, ts = j.form, j.terms
        if f in ("type", "eqtype"):
            return YES
        if f == "in":
            x = self._code(ts[0], asg)
            return unknown(self.sm.spent) if x is None else self.member(ts[1], x, asg)
        if f == "eq":
            x, y = self._code(ts[0], asg), self._code(ts[1], asg)
            if x is None or y is None:
                return unknown(self.sm.spent)
            if x != y:
                return NO
            return self.member(ts[2], x, asg)
        if f == "true":
            ws = self.witnesses(ts[0], asg)
            if ws is None:
                return unknown(self.sm.spent)
            return tri_any(lambda w=w: self.member(ts[0], w, asg) for w in ws)
        raise UnsupportedConstruct(f"no validity clause for '{f}' judgements")


def realize_term(t, decls: Declarations | None = None):
    return Realizer(decls).term(t)


def realize_type(ty, decls: Declarations | None = None, fuel: int = 100_000):
    """Membership predicate ``x ↦ TriBool`` for a closed type."""
    r = Realizer(decls, fuel)
    return lambda x, asg=None: r.member(ty, x, asg or {})


def to_target(j: Judgement, ruleset: str) -> Judgement:
    """The MLtt/MLS judgement whose validity stands for ``j``."""
    if ruleset in ("mTT", "emTT"):
        return translate_judgement(j, ruleset)
    return j.normalized(ruleset)


def check_judgement_realized(j: Judgement, ruleset: str = "MLtt", decls: Declarations | None = None,
                             fuel: int = 100_000, assignments: dict | None = None,
                             realizer: Realizer | None = None) -> TriBool:
    r = realizer or Realizer(decls, fuel)
    return r.judgement(to_target(j, ruleset), assignments)


def report_line(j: Judgement, result: TriBool) -> str:
    return f"JUDGEMENT {j} => {result}"
