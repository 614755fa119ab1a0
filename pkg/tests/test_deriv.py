import pytest
from hypothesis import given, settings, strategies as st

from formaltop.deriv import corpus_files
from formaltop.deriv.checker import check_derivation, check_node, check_repl
from formaltop.deriv.schemas import RULESETS, table_rules, rule_names, schemas
from formaltop.deriv.syntax import (
    Bind, Derivation, Judgement, Node, Sym, alpha_equal, apply_family, free_vars, normalize,
    parse_derivation, parse_derivation_file, parse_judgement, subst, term,
)
from formaltop.deriv.translate import translate_judgement, translate_term
from formaltop.errors import ParseError, SchemaMismatch, ScopeError, UnknownRule, UnsupportedConstruct
from formaltop.sexpr import parse_one

CORPUS = corpus_files()


def J(text):
    return parse_judgement(parse_one(text))


def load(path):
    return parse_derivation_file(path.read_text())


# -- syntax --------------------------------------------------------------------------

def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_derivation_file("(ruleset MLtt)\n(rule N1-I (concl (in 0 N1))")
    assert info.value.line is not None


def test_unknown_top_level_form():
    with pytest.raises(ParseError):
        parse_derivation_file("(frobnicate 1)")


def test_binders_and_alpha_equality():
    a = term("(lam x (pair x y))")
    b = term("(lam z (pair z y))")
    assert alpha_equal(a, b)
    assert not alpha_equal(a, term("(lam y (pair y y))"))
    assert free_vars(a) == {"y"}


def test_substitution_avoids_capture():
    t = subst(term("(lam x (pair x y))"), {"y": Sym("x")})
    assert isinstance(t, Bind)
    assert free_vars(t) == {"x"}
    assert not alpha_equal(t, term("(lam x (pair x x))"))


def test_family_application():
    fam = term("(fam (x j) (axc EX x j))")
    assert apply_family(fam, (Sym("a"), Sym("b"))) == term("(axc EX a b)")
    assert normalize(term("(app (fam (x) (succ x)) 3)"), "MLtt") == term("(succ 3)")


def test_eps_normalizes_per_ruleset():
    t = term("(eps a V)")
    assert normalize(t, "emTT") == t
    assert normalize(t, "mTT") == term("(Ap V a)")
    assert normalize(t, "MLtt") == term("(T (Ap V a))")


def test_split_expands_everywhere():
    t = term("(split A V (fam (x) (I x)) (fam (x j) (C x j)) (fam (x) (P x)))")
    for rs in RULESETS:
        out = normalize(t, rs)
        assert isinstance(out, Bind) and out.kind == "forall"


_NAMES = st.sampled_from(["x", "y", "z", "w"])
_TERM = st.recursive(
    _NAMES.map(Sym),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda p: Node("pair", p)),
        st.tuples(_NAMES, inner).map(lambda p: Bind("lam", (p[0],), (None,), p[1])),
    ),
    max_leaves=6,
)


@settings(max_examples=100, deadline=None)
@given(_TERM, _TERM)
def test_substitution_is_stable_under_renaming(t, s):
    renamed = subst(t, {})
    assert alpha_equal(renamed, t)
    out = subst(t, {"x": s})
    assert "x" not in free_vars(out) or "x" in free_vars(s)
    assert free_vars(out) <= (free_vars(t) - {"x"}) | free_vars(s)


# -- schemas --------------------------------------------------------------------------

def test_rule_tables():
    assert set(table_rules("MLS")) >= {"F-cov", "rf-cov", "tr-cov", "ind-cov", "C1-ind-cov", "C2-ind-cov", "repl"}
    for rs in ("emTT", "mTT", "MLtt"):
        assert {"F-Pos", "crf-Pos", "ax-mon-Pos", "cind-Pos"} <= set(rule_names(rs))
    assert "repl" not in rule_names("emTT")
    assert "xi" not in rule_names("MLtt")
    with pytest.raises(ValueError):
        schemas("HoTT")


# -- the corpus ------------------------------------------------------------------------

@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_expectations(path):
    df = load(path)
    assert df.expect in ("accept", "reject")
    verdicts = [check_derivation(d, df.ruleset).ok for d in df.derivations]
    assert all(verdicts) == (df.expect == "accept")


def test_every_table_rule_has_good_and_bad_examples():
    seen = {}
    for path in CORPUS:
        df = load(path)
        for d in df.derivations:
            seen.setdefault((df.ruleset, d.rule), set()).add(df.expect)
    for rs in RULESETS:
        for rule in table_rules(rs):
            if rule == "repl" and rs != "MLtt":
                continue
            assert seen.get((rs, rule)) == {"accept", "reject"}, (rs, rule)


# replacement reads its premises positionally, so it is left out here
@pytest.mark.parametrize("path", [p for p in CORPUS if p.name.endswith("_good.drv") and "repl" not in p.name],
                         ids=lambda p: p.name)
def test_premise_order_does_not_matter(path):
    df = load(path)
    for d in df.derivations:
        flipped = Derivation(d.rule, d.conclusion, tuple(reversed(d.premises)), d.line)
        assert check_derivation(flipped, df.ruleset).ok


def test_xi_is_unknown():
    df = load(next(p for p in CORPUS if p.name == "bad_xi.drv"))
    res = check_derivation(df.derivations[0], "MLtt")
    assert not res.ok and isinstance(res.errors[0], UnknownRule)
    with pytest.raises(UnknownRule):
        check_derivation(df.derivations[0], "MLtt", strict=True)


def test_good_derivations_fail_in_other_rulesets():
    df = load(next(p for p in CORPUS if p.name == "mltt_f-pos_good.drv"))
    assert not check_derivation(df.derivations[0], "mTT").ok
    df = load(next(p for p in CORPUS if p.name == "mtt_f-pos_good.drv"))
    assert not check_derivation(df.derivations[0], "emTT").ok


def test_ill_scoped_context_is_a_scope_error():
    with pytest.raises(ScopeError):
        parse_derivation(parse_one(
            "(rule Sigma-I (concl (in (pair 0 0) (Sigma (x N1) N1)))"
            " (prem (assume (in 0 N1)) (assume (in 0 N1)) (assume (type N1 (ctx (x (F y)) (y N1))))))"))
    node = Derivation("N1-I", Judgement("in", (term("0"), Sym("N1")), (("x", Sym("N1")), ("x", Sym("N1")))))
    r = check_node(node, "MLtt")
    assert not r.ok and isinstance(r.error, ScopeError)


def test_base_rules():
    node = parse_derivation(parse_one(
        "(rule Sigma-I (concl (in (pair 0 0) (Sigma (x N1) N1)))"
        " (prem (assume (in 0 N1)) (assume (in 0 N1)) (assume (type N1 (ctx (y N1))))))"))
    assert check_node(node, "MLS").ok
    assert check_node(parse_derivation(parse_one("(rule N1-I (concl (in 0 N1)))")), "emTT").ok


def test_variant_with_warning():
    text = next(p for p in CORPUS if p.name == "mltt_ax-mon-pos_good.drv").read_text()
    bent = text.replace("(ax2 (el EX 0) (idx EX 0 0) (cert EX W2 0))",
                        "(ax2 (el EX 0) (fam (x) (axi EX x)) (cert EX W2 0))")
    assert bent != text
    df = parse_derivation_file(bent)
    res = check_derivation(df.derivations[0], "MLtt")
    assert res.ok and res.warnings


# -- replacement -------------------------------------------------------------------------

def _repl(concl, typing, *eqs):
    prem = " ".join(f"(assume {e})" for e in (typing, *eqs))
    return parse_derivation(parse_one(f"(rule repl (concl {concl}) (prem {prem}))"))


def test_repl_two_variables():
    node = _repl("(eq (pair 1 2) (pair 3 4) N)", "(in (pair x y) N (ctx (x N) (y N)))",
                 "(eq 1 3 N)", "(eq 2 4 N)")
    assert check_repl(node, "MLtt")


def test_repl_type_taken_at_left_instance():
    typing = "(in (refl x) (Id N x x) (ctx (x N)))"
    good = _repl("(eq (refl 1) (refl 2) (Id N 1 1))", typing, "(eq 1 2 N)")
    assert check_repl(good, "MLtt")
    bad = _repl("(eq (refl 1) (refl 2) (Id N 2 2))", typing, "(eq 1 2 N)")
    with pytest.raises(SchemaMismatch):
        check_repl(bad, "MLtt")


def test_repl_rejects_wrong_equation_type():
    node = _repl("(eq (succ 1) (succ 2) N)", "(in (succ x) N (ctx (x N)))", "(eq 1 2 N1)")
    with pytest.raises(SchemaMismatch):
        check_repl(node, "mTT")


# -- translation ---------------------------------------------------------------------------

POS = "(Pos (el EX 0) W (carrier EX) (fam (x) (axi EX x)) (fam (x j) (axc EX x j)))"


def test_translate_formation():
    out = translate_judgement(J(f"(props {POS})"), "mTT")
    assert out.form == "in" and out.terms[1] == Sym("U0")
    assert out.terms[0].head == "poshat"


def test_translate_propositions_and_sets():
    out = translate_judgement(J("(in x (exists (y N) (eps y V)) (ctx (x (-> N props))))"), "mTT")
    assert out.ctx[0][1] == term("(-> N U0)")
    assert isinstance(out.terms[1], Bind) and out.terms[1].kind == "Sigma"
    assert translate_term(term("(& N1 N0)")) == term("(sigmahat (n1hat) (fam (_%) (n0hat)))")


def test_translate_true_only_from_emtt():
    assert translate_judgement(J(f"(true {POS})"), "emTT").form == "true"
    with pytest.raises(UnsupportedConstruct):
        translate_judgement(J(f"(true {POS})"), "mTT")


def test_translate_swaps_coinduction_witness():
    j = J(f"(in (ax3 a m (fam (x z) 0) (fam (x j z) (pair y (pair e1 e2)))) {POS})")
    t = translate_judgement(j, "mTT").terms[0]
    q2 = t.args[3]
    assert "p1 (p1 (pair y (pair e1 e2)))" in str(q2.body)


def test_translate_rejects_cover_syntax():
    with pytest.raises(UnsupportedConstruct):
        translate_term(term("(cov a v s i c)"))
