"""Rule schemas for the four rulesets.

A schema is a conclusion pattern plus premise patterns.  Premise contexts
list only the variables the premise adds to the conclusion's context; the
names there are placeholders bound positionally.  Metavariables applied to
such variables, as in ``(?I x)``, stand for families.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..sexpr import parse_all
from .syntax import Judgement, parse_judgement

RULESETS = ("emTT", "mTT", "MLtt", "MLS")


@dataclass(frozen=True)
class Schema:
    rule: str
    conclusion: Judgement
    premises: tuple
    warning: str | None = None


# Axiom-set premises, one block per style of universe.
_AX_EXT = """
(set ?A)
(set (?I x) (ctx (x ?A)))
(in (?C x j) (Pow ?A) (ctx (x ?A) (j (?I x))))
"""
_AX_INT = """
(set ?A)
(set (?I x) (ctx (x ?A)))
(in (?C x j) (-> ?A props) (ctx (x ?A) (j (?I x))))
"""
_AX_U0 = """
(in ?s U0)
(in (?I x) U0 (ctx (x (T ?s))))
(in (?C x j) (-> (T ?s) U0) (ctx (x (T ?s)) (j (T (?I x)))))
"""
_AX_S = """
(in ?s S)
(in (?I x) S (ctx (x (T ?s))))
(in (?C x j) (-> (T ?s) S) (ctx (x (T ?s)) (j (T (?I x)))))
"""

_POS_E = "(Pos ?a ?V ?A ?I ?C)"
_POS_U = "(pos ?a ?v ?s ?I ?C)"
_COV = "(cov ?a ?v ?s ?I ?C)"

_IND_HYPS = """
(in ?v (-> (T ?s) S))
(type (?P x u) (ctx (x (T ?s)) (u (cov x ?v ?s ?I ?C))))
(in (?Q1 x w) (?P x (rf x w)) (ctx (x (T ?s)) (w (eps x ?v))))
(in (?Q2 x h k f) (?P x (tr x h k))
    (ctx (x (T ?s)) (h (T (?I x)))
         (k (Pi (z (T ?s)) (-> (eps z (?C x h)) (cov z ?v ?s ?I ?C))))
         (f (Pi (z (T ?s)) (Pi (u (eps z (?C x h))) (?P z (Ap (Ap k z) u)))))))
"""

# (ruleset, rule, conclusion, premises, warning)
_TABLE = [
    # -- extensional level ------------------------------------------------------------
    ("emTT", "F-Pos", f"(props {_POS_E})", _AX_EXT + "(in ?V (Pow ?A)) (in ?a ?A)", None),
    ("emTT", "crf-Pos", "(true (eps ?a ?V))", _AX_EXT + f"(in ?V (Pow ?A)) (true {_POS_E})", None),
    ("emTT", "ax-mon-Pos",
     "(true (exists (y ?A) (& (eps y (?C ?a ?i)) (Pos y ?V ?A ?I ?C))))",
     _AX_EXT + f"(in ?a ?A) (in ?i (?I ?a)) (in ?V (Pow ?A)) (true {_POS_E})", None),
    ("emTT", "cind-Pos", f"(true {_POS_E})",
     _AX_EXT + "(in ?a ?A) (in ?V (Pow ?A)) (prop (?P x) (ctx (x ?A)))"
     " (true (split ?A ?V ?I ?C ?P)) (true (?P ?a))", None),
    # -- intensional level, Russell-style propositions --------------------------------------
    ("mTT", "F-Pos", f"(props {_POS_E})", _AX_INT + "(in ?V (-> ?A props)) (in ?a ?A)", None),
    ("mTT", "F-Pos", f"(in {_POS_E} props)", _AX_INT + "(in ?V (-> ?A props)) (in ?a ?A)", None),
    ("mTT", "crf-Pos", "(in (ax1 ?a ?q) (eps ?a ?V))",
     _AX_INT + f"(in ?V (-> ?A props)) (in ?a ?A) (in ?q {_POS_E})", None),
    ("mTT", "ax-mon-Pos",
     "(in (ax2 ?a ?i ?q) (exists (y ?A) (& (eps y (?C ?a ?i)) (Pos y ?V ?A ?I ?C))))",
     _AX_INT + f"(in ?V (-> ?A props)) (in ?a ?A) (in ?i (?I ?a)) (in ?q {_POS_E})", None),
    ("mTT", "cind-Pos", f"(in (ax3 ?a ?m ?Q1 ?Q2) {_POS_E})",
     _AX_INT + """(prop (?P x) (ctx (x ?A))) (in ?V (-> ?A props)) (in ?a ?A) (in ?m (?P ?a))
     (in (?Q1 x z) (eps x ?V) (ctx (x ?A) (z (?P x))))
     (in (?Q2 x j z) (exists (y ?A) (& (?P y) (eps y (?C x j)))) (ctx (x ?A) (j (?I x)) (z (?P x))))""",
     None),
    ("mTT", "cind-Pos", f"(in (ax3 ?a ?m ?Q1 ?Q2) {_POS_E})",
     _AX_INT + """(prop (?P x) (ctx (x ?A))) (in ?V (-> ?A props)) (in ?a ?A) (in ?m (?P ?a))
     (in (?Q1 x z) (eps x ?V) (ctx (x ?A) (z (?P x))))
     (in (?Q2 x j z) (exists (y ?A) (& (eps y (?C x j)) (?P y))) (ctx (x ?A) (j (?I x)) (z (?P x))))""",
     None),
    # -- Martin-Löf style with a Tarski universe ----------------------------------------------
    ("MLtt", "F-Pos", "(in (poshat ?a ?v ?s ?I ?C) U0)", _AX_U0 + "(in ?v (-> (T ?s) U0)) (in ?a (T ?s))", None),
    ("MLtt", "crf-Pos", "(in (ax1 ?a ?q) (eps ?a ?v))",
     _AX_U0 + f"(in ?v (-> (T ?s) U0)) (in ?a (T ?s)) (in ?q {_POS_U})", None),
    ("MLtt", "ax-mon-Pos",
     "(in (ax2 ?a ?j ?q) (Sigma (y (T ?s)) (times (eps y (?C ?a ?j)) (pos y ?v ?s ?I ?C))))",
     _AX_U0 + f"(in ?v (-> (T ?s) U0)) (in ?a (T ?s)) (in ?j (T (?I ?a))) (in ?q {_POS_U})", None),
    ("MLtt", "ax-mon-Pos",
     "(in (ax2 ?a ?I ?q) (Sigma (y (T ?s)) (times (eps y (?C ?a ?j)) (pos y ?v ?s ?I ?C))))",
     _AX_U0 + f"(in ?v (-> (T ?s) U0)) (in ?a (T ?s)) (in ?j (T (?I ?a))) (in ?q {_POS_U})",
     "ax2 applied to the index family instead of the index j"),
]

_CIND_U0 = _AX_U0 + """(type (?P x) (ctx (x (T ?s)))) (in ?v (-> (T ?s) U0)) (in ?a (T ?s)) (in ?m (?P ?a))
     (in (?Q1 x z) (T (Ap ?v x)) (ctx (x (T ?s)) (z (?P x))))
     (in (?Q2 x j z) (Sigma (y (T ?s)) (times (eps y (?C x j)) (?P y)))
         (ctx (x (T ?s)) (j (T (?I x))) (z (?P x))))"""
_TABLE += [
    ("MLtt", "cind-Pos", f"(in (ax3 ?a ?m ?Q1 ?Q2) {_POS_U})", _CIND_U0, None),
    ("MLtt", "cind-Pos", f"(in (ax3 ?m ?Q1 ?Q2) {_POS_U})", _CIND_U0,
     "ax3 written without the element argument"),
    # -- superuniverse with inductive covers ------------------------------------------------
    ("MLS", "F-cov", "(in (covhat ?a ?v ?s ?I ?C) S)", _AX_S + "(in ?a (T ?s)) (in ?v (-> (T ?s) S))", None),
    ("MLS", "rf-cov", f"(in (rf ?a ?r) {_COV})",
     _AX_S + "(in ?a (T ?s)) (in ?v (-> (T ?s) S)) (in ?r (eps ?a ?v))", None),
    ("MLS", "tr-cov", f"(in (tr ?a ?j ?r) {_COV})",
     _AX_S + """(in ?a (T ?s)) (in ?j (T (?I ?a))) (in ?v (-> (T ?s) S))
     (in ?r (Pi (z (T ?s)) (-> (eps z (?C ?a ?j)) (cov z ?v ?s ?I ?C))))""", None),
    ("MLS", "ind-cov", "(in (ind ?m ?Q1 ?Q2) (?P ?a ?m))",
     _AX_S + _IND_HYPS + f"(in ?a (T ?s)) (in ?m {_COV})", None),
    ("MLS", "C1-ind-cov", "(eq (ind (rf ?a ?r) ?Q1 ?Q2) (?Q1 ?a ?r) (?P ?a (rf ?a ?r)))",
     _AX_S + _IND_HYPS + "(in ?a (T ?s)) (in ?r (eps ?a ?v))", None),
    ("MLS", "C2-ind-cov",
     "(eq (ind (tr ?a ?j ?r) ?Q1 ?Q2) (?Q2 ?a ?j ?r (lam z (lam u (ind (Ap (Ap ?r z) u) ?Q1 ?Q2))))"
     " (?P ?a (tr ?a ?j ?r)))",
     _AX_S + _IND_HYPS + """(in ?a (T ?s)) (in ?j (T (?I ?a)))
     (in ?r (Pi (z (T ?s)) (-> (eps z (?C ?a ?j)) (cov z ?v ?s ?I ?C))))""", None),
]

# Small base-type rules shared by every ruleset.
_BASE = [
    ("N1-I", "(in 0 N1)", ""),
    ("Sigma-I", "(in (pair ?b ?c) (Sigma (x ?B) (?D x)))", "(in ?b ?B) (in ?c (?D ?b)) (type (?D x) (ctx (x ?B)))"),
]

# Rules with a dedicated checker rather than a schema.
SPECIAL_RULES = {"repl": ("mTT", "MLtt", "MLS")}

RULE_ALIASES = {"F-◁": "F-cov", "rf-◁": "rf-cov", "tr-◁": "tr-cov", "ind-◁": "ind-cov",
                "C1-ind-◁": "C1-ind-cov", "C2-ind-◁": "C2-ind-cov"}


def _judgements(text: str, ruleset: str) -> tuple:
    return tuple(parse_judgement(f, allow_meta=True).normalized(ruleset) for f in parse_all(text))


@lru_cache(maxsize=None)
def schemas(ruleset: str) -> dict:
    """Rule name -> list of schema variants for ``ruleset``."""
    if ruleset not in RULESETS:
        raise ValueError(f"unknown ruleset {ruleset!r}; choose from {', '.join(RULESETS)}")
    out: dict = {}
    rows = [r for r in _TABLE if r[0] == ruleset]
    rows += [(ruleset, name, concl, prems, None) for name, concl, prems in _BASE]
    for _, rule, concl, prems, warning in rows:
        (c,) = _judgements(concl, ruleset)
        out.setdefault(rule, []).append(Schema(rule, c, _judgements(prems, ruleset), warning))
    return out


def rule_names(ruleset: str) -> list[str]:
    names = list(schemas(ruleset))
    names += [r for r, sets in SPECIAL_RULES.items() if ruleset in sets]
    return names


def table_rules(ruleset: str) -> list[str]:
    """Rules taken from the positivity/cover tables (base rules excluded)."""
    base = {name for name, _, _ in _BASE}
    return [r for r in rule_names(ruleset) if r not in base]
