"""Propositions-as-types translation into the Tarski-universe ruleset.

``term_t`` maps a pre-term to a pre-term, reading small propositions and
small sets as codes; ``type_T`` maps a pre-type to a pre-type, decoding codes
with ``T``.  Judgements pick one or the other by the role a proposition plays.
"""

from __future__ import annotations

from ..errors import UnsupportedConstruct
from .syntax import Bind, Judgement, Lit, MApp, Meta, Node, Sym, normalize

_BASE_CODES = {"N0": "n0hat", "N1": "n1hat", "N": "nhat"}
_QUANT_CODES = {"exists": "sigmahat", "Sigma": "sigmahat", "forall": "pihat", "Pi": "pihat"}
_PAIR_CODES = {"&": "sigmahat", "times": "sigmahat", "->": "pihat"}
_UNSUPPORTED = {"Pow", "split", "col", "cov", "covhat", "pos", "poshat", "ind", "rf", "tr"}


def _fam(var: str, body):
    return Bind("fam", (var,), (None,), body)


def _swap_pair(t):
    """``p(y, p(e1, e2)) ↦ p(y, p(e2, e1))`` for the ∃-witness of ``ax3``."""
    return Node("pair", (Node("p0", (t,)), Node("pair", (
        Node("p1", (Node("p1", (t,)),)), Node("p0", (Node("p1", (t,)),))))))


def term_t(t):
    if isinstance(t, (Lit, Meta)):
        return t
    if isinstance(t, Sym):
        if t.name in _BASE_CODES:
            return Node(_BASE_CODES[t.name], ())
        if t.name == "props":
            raise UnsupportedConstruct("prop_s is a type, not a term")
        return t
    if isinstance(t, MApp):
        return MApp(t.meta, tuple(term_t(a) for a in t.args))
    if isinstance(t, Bind):
        if t.kind in _QUANT_CODES:
            return Node(_QUANT_CODES[t.kind], (term_t(t.doms[0]), _fam(t.vars[0], term_t(t.body))))
        return Bind(t.kind, t.vars, tuple(None if d is None else term_t(d) for d in t.doms), term_t(t.body))
    h, args = t.head, t.args
    if h in _PAIR_CODES and len(args) == 2:
        return Node(_PAIR_CODES[h], (term_t(args[0]), _fam("_%", term_t(args[1]))))
    if h == "Pos" and len(args) == 5:
        a, v, big_a, i, c = (term_t(x) for x in args)
        return Node("poshat", (a, v, big_a, i, c))
    if h == "eps" and len(args) == 2:
        return Node("Ap", (term_t(args[1]), term_t(args[0])))
    if h == "+" and len(args) == 2:
        return Node("plushat", tuple(term_t(x) for x in args))
    if h == "List" and len(args) == 1:
        return Node("listhat", (term_t(args[0]),))
    if h == "Id" and len(args) == 3:
        return Node("idhat", tuple(term_t(x) for x in args))
    if h == "ax3" and len(args) == 4:
        a, m, q1, q2 = (term_t(x) for x in args)
        if isinstance(q2, Bind) and q2.kind == "fam":
            q2 = Bind("fam", q2.vars, q2.doms, _swap_pair(q2.body))
        else:
            raise UnsupportedConstruct("ax3 needs its last argument written as (fam (x j z) ...)")
        return Node("ax3", (a, m, q1, q2))
    if h in _UNSUPPORTED:
        raise UnsupportedConstruct(f"{h} has no counterpart in the translated fragment")
    return Node(h, tuple(term_t(a) for a in args))


def type_T(t):
    if isinstance(t, Sym):
        if t.name == "props":
            return Sym("U0")
        if t.name in _BASE_CODES:
            return t
        return Node("T", (t,))
    if isinstance(t, (Lit, MApp, Meta)):
        return Node("T", (term_t(t),))
    if isinstance(t, Bind):
        if t.kind in ("exists", "Sigma"):
            return Bind("Sigma", t.vars, (type_T(t.doms[0]),), type_T(t.body))
        if t.kind in ("forall", "Pi"):
            return Bind("Pi", t.vars, (type_T(t.doms[0]),), type_T(t.body))
        raise UnsupportedConstruct(f"a {t.kind} binder is not a type")
    h, args = t.head, t.args
    if h in ("&", "times") and len(args) == 2:
        return Node("times", (type_T(args[0]), type_T(args[1])))
    if h == "->" and len(args) == 2:
        return Node("->", (type_T(args[0]), type_T(args[1])))
    if h == "Pow" and len(args) == 1:
        return Node("->", (type_T(args[0]), Sym("U0")))
    if h == "+" and len(args) == 2:
        return Node("+", (type_T(args[0]), type_T(args[1])))
    if h == "List" and len(args) == 1:
        return Node("List", (type_T(args[0]),))
    if h == "Id" and len(args) == 3:
        return Node("Id", (type_T(args[0]), term_t(args[1]), term_t(args[2])))
    return Node("T", (term_t(t),))


def _is_props(t) -> bool:
    return isinstance(t, Sym) and t.name == "props"


def translate_judgement(j: Judgement, source: str = "mTT") -> Judgement:
    """Translate a judgement of ``source`` (``mTT`` or ``emTT``) into MLtt."""
    if source not in ("mTT", "emTT"):
        raise ValueError("translation starts from mTT or emTT")
    j = j.normalized(source)
    ctx = tuple((x, type_T(a)) for x, a in j.ctx)
    f, ts = j.form, j.terms
    if f in ("set", "props"):
        out = Judgement("in", (term_t(ts[0]), Sym("U0")), ctx)
    elif f in ("prop", "type", "col"):
        out = Judgement("type", (type_T(ts[0]),), ctx)
    elif f == "in" and _is_props(ts[1]):
        out = Judgement("in", (term_t(ts[0]), Sym("U0")), ctx)
    elif f == "in":
        out = Judgement("in", (term_t(ts[0]), type_T(ts[1])), ctx)
    elif f == "eq":
        out = Judgement("eq", (term_t(ts[0]), term_t(ts[1]), type_T(ts[2])), ctx)
    elif f == "eqtype":
        out = Judgement("eqtype", (type_T(ts[0]), type_T(ts[1])), ctx)
    elif f == "true" and source == "emTT":
        out = Judgement("true", (type_T(ts[0]),), ctx)
    else:
        raise UnsupportedConstruct(f"no translation for a '{f}' judgement from {source}")
    return out.normalized("MLtt")


def translate_mtt_to_mltt(j: Judgement) -> Judgement:
    return translate_judgement(j, "mTT")


def translate_term(t):
    return normalize(term_t(normalize(t, "mTT")), "MLtt")
