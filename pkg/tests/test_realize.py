import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from formaltop.core import NO, YES, Subset, axiom_set, ex1
from formaltop.deriv.syntax import Declarations, Sym, parse_judgement, subst as term_subst, term
from formaltop.errors import (
    FamConditionFailed, NotTotalWithinFuel, StarConditionFailed, UnsupportedConstruct,
)
from formaltop.positivity import is_positive
from formaltop.realize import codes
from formaltop.realize.ct import ct_demo
from formaltop.realize.encode import (
    EncodedAxioms, constant_program, decode_axioms, decode_subset, fin_code, fin_elements,
)
from formaltop.realize.interp import Realizer, check_judgement_realized, realize_term, realize_type
from formaltop.realize.pairing import (
    list_decode, list_encode, pair, tuple_code, unpair, untuple,
)
from formaltop.realize.pca import (
    DIVERGENT, If, Num, Var, alpha_equal, app, decode_term, encode, evaluate, fix, kleene_apply,
    lam, lambda_encode, pair_t, prim, subst as pca_subst, table,
)
from formaltop.realize.stages import StageMachine, is_set_at_stage, mem_at_stage
from formaltop.sexpr import parse_one

from oracles import random_axiom_sets

EX1 = ex1()
N1_CONST = constant_program(codes.N1)
N0_CONST = constant_program(codes.N0)


# -- pairing ---------------------------------------------------------------------------

def test_pairing_small_grid():
    for n in range(60):
        for m in range(60):
            assert unpair(pair(n, m)) == (n, m)
    assert [pair(*unpair(k)) for k in range(3000)] == list(range(3000))


@given(st.integers(0, 2**64), st.integers(0, 2**64))
def test_pairing_large(n, m):
    assert unpair(pair(n, m)) == (n, m)


@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=6))
def test_tuples_and_lists(xs):
    assert untuple(tuple_code(*xs), len(xs)) == tuple(xs)
    assert list_decode(list_encode(xs)) == xs


# -- the applicative structure ------------------------------------------------------------

def test_pair_lambda():
    assert evaluate(app(lam("x", pair_t(Var("x"), Var("x"))), Num(4))) == pair(4, 4)


def test_codes_round_trip():
    t = lam("x", "y", If(prim("eq", Var("x"), Num(0)), Var("y"), prim("succ", Var("x"))))
    assert alpha_equal(decode_term(encode(t)), t)
    assert kleene_apply(encode(t), 0, 7) == 7
    assert kleene_apply(encode(t), 3, 7) == 4


def test_junk_and_loops_diverge():
    assert kleene_apply(0, 1, fuel=1000) is DIVERGENT
    loop = lambda_encode(fix("f", lam("x", app(Var("f"), Var("x")))))
    assert kleene_apply(loop, 0, fuel=2000) is DIVERGENT


def test_closures_read_back_to_codes():
    k = lambda_encode(lam("x", "y", Var("x")))
    partial = kleene_apply(k, 5)
    assert kleene_apply(partial, 9) == 5


# -- codes ------------------------------------------------------------------------------

@pytest.mark.parametrize("code,tag,name", [
    (codes.NAT, 0, "nat"), (codes.cover(1, 2, 3, 4, 5), 6, "cover"), (pair(99, 0), None, "junk"),
    (codes.universe(1, 2), 10, "universe"), (codes.rf(3, 0), 7, "rf"),
])
def test_classify(code, tag, name):
    c = codes.classify_code(code)
    assert (c.tag, c.name) == (tag, name)


def test_classify_fields():
    assert codes.classify_code(codes.tr(1, 2, 3)).fields == {"a": 1, "j": 2, "r": 3}
    assert "sigma" in codes.describe(codes.sigma(codes.N1, N1_CONST))


# -- stage clauses ------------------------------------------------------------------------

def test_base_codes():
    sm = StageMachine()
    assert is_set_at_stage(sm, codes.N1).is_yes
    assert mem_at_stage(sm, 0, codes.N1).is_yes
    assert mem_at_stage(sm, 1, codes.N1).is_no
    assert all(sm.mem(k, codes.NAT).is_yes for k in (0, 5, 10**9))
    assert sm.mem(0, codes.N0).is_no


def test_sigma_over_n1():
    sm = StageMachine()
    m = codes.sigma(codes.N1, N1_CONST)
    assert sm.is_set(m).is_yes
    for q in range(40):
        assert sm.mem(q, m) == (YES if q == 0 else NO)


def test_pi_membership_uses_application():
    sm = StageMachine()
    m = codes.pi(codes.N1, N1_CONST)
    assert sm.mem(lambda_encode(lam("x", Num(0))), m).is_yes
    assert sm.mem(lambda_encode(lam("x", Num(1))), m).is_no


def test_stage_zero_has_only_base_codes():
    m = codes.sigma(codes.N1, N1_CONST)
    assert StageMachine(stage=0).is_set(m).is_no
    assert StageMachine(stage=1).is_set(codes.N1).is_yes
    for s in (1, 2, 3):
        assert StageMachine(stage=s).is_set(m).is_yes


def test_nat_pi_is_not_decided_by_sampling():
    # a quantifier over all naturals can be refuted but never confirmed
    sm = StageMachine(sample_bound=4)
    ident_fam = lambda_encode(lam("x", Num(codes.NAT)))
    assert sm.is_set(codes.pi(codes.NAT, ident_fam)).is_yes
    const0 = lambda_encode(lam("x", Num(0)))
    assert sm.mem(const0, codes.pi(codes.NAT, lambda_encode(lam("x", Num(codes.N1))))).is_unknown


# -- least, greatest and universe sets -------------------------------------------------------------

def _one_point(v_prog, i_prog=N0_CONST):
    return {"a": 0, "v": v_prog, "s": codes.N1, "i": i_prog, "c": N0_CONST}


def test_compute_v_examples():
    check = StageMachine().compute_V(_one_point(N1_CONST))
    assert check(0, codes.rf(0, 0)).is_yes
    assert check(0, codes.tr(0, 0, N0_CONST)).is_no
    assert check(0, 12345).is_no


def test_compute_w_examples():
    sm = StageMachine()
    assert sm.compute_W(_one_point(N1_CONST))(0, pair(0, 77)).is_yes
    assert sm.compute_W(_one_point(N0_CONST))(0, pair(0, 77)).is_no


def test_compute_w_self_supporting_certificate():
    # one element with one axiom covering itself; q(j) = p(0, p(0, q))
    ax = axiom_set(1, {0: [[0]]})
    enc = EncodedAxioms(ax)
    q = enc.certificate(0, ax.full())
    f = enc.fields(0, ax.full())
    assert StageMachine().compute_W(f)(enc.element(0), q).is_yes


def test_star_failure_is_reported():
    bad = {"a": 5, "v": N1_CONST, "s": codes.N1, "i": N0_CONST, "c": N0_CONST}
    with pytest.raises(StarConditionFailed):
        StageMachine().compute_V(bad)


def test_compute_z():
    check = StageMachine().compute_Z(codes.universe(codes.N1, N0_CONST))
    assert check(codes.N1).is_yes
    assert check(codes.ident(codes.NAT, 3, 3)).is_yes
    assert check(codes.cover(0, N1_CONST, codes.N1, N0_CONST, N0_CONST)).is_no
    with pytest.raises(FamConditionFailed):
        StageMachine().compute_Z(codes.universe(codes.N1, constant_program(pair(99, 0))))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([6, 9]), st.lists(st.integers(0, 200), min_size=5, max_size=5))
def test_z_excludes_cover_and_positivity_codes(tag, fields):
    code = pair(tag, tuple_code(*fields))
    check = StageMachine().compute_Z(codes.universe(codes.N1, N0_CONST))
    assert check(code).is_no


def _bottom_up_proofs(enc, v: Subset, depth: int, rng):
    """Proof codes of depth <= ``depth`` paired with whether the clauses put them in V.

    Children of transitivity nodes are drawn from the previous layer,
    good and bad alike, so both members and non-members are produced.
    """
    ax = enc.ax
    layer = {x: [(codes.rf(enc.element(x), 0), x in v)] for x in range(ax.carrier_size)}
    out = [c for x in layer for c in layer[x]]
    for _ in range(depth):
        new = {x: list(layer[x]) for x in layer}
        for x in range(ax.carrier_size):
            for j in range(ax.index_counts[x]):
                cover = ax.cover(x, j).members
                choices = [layer[y] for y in cover]
                combos = list(itertools.product(*choices))
                rng.shuffle(combos)
                for combo in combos[:3]:
                    entries = [(enc.element(y), Num(code)) for y, (code, _) in zip(cover, combo)]
                    r = lambda_encode(lam("u", "t", table("u", entries)))
                    item = (codes.tr(enc.element(x), enc.index(x, j), r), all(ok for _, ok in combo))
                    new[x].append(item)
                    out.append(item)
        layer = new
    return out


def test_v_is_least_against_bottom_up_enumeration():
    rng = random.Random(7)
    instances = [EX1] + random_axiom_sets(6, seed=11, max_carrier=3)
    checked = 0
    for ax in instances:
        enc = EncodedAxioms(ax)
        for bits in range(1 << ax.carrier_size):
            v = Subset(ax.carrier_size, bits)
            for a in range(ax.carrier_size):
                check = StageMachine().compute_V(enc.cover_code(a, v))
                for code, ok in _bottom_up_proofs(enc, v, 3, rng):
                    if codes.classify_code(code).fields["a"] != enc.element(a):
                        continue
                    assert check(enc.element(a), code) == (YES if ok else NO)
                    checked += 1
    assert checked > 100


def test_w_agrees_with_engine_on_ex1():
    enc = EncodedAxioms(EX1)
    for bits in range(8):
        v = Subset(3, bits)
        for a in range(3):
            got = StageMachine().compute_W(enc.pos_code(a, v))(enc.element(a), enc.certificate(a, v))
            assert got == (YES if is_positive(EX1, a, v) else NO)


# -- encoding and decoding ------------------------------------------------------------------------

def test_fin_codes():
    sm = StageMachine()
    for n in range(6):
        members = sm.members(fin_code(n))
        assert sorted(members) == sorted(fin_elements(n))
        assert len(set(fin_elements(n))) == n


def test_decode_round_trip():
    enc = EncodedAxioms(EX1)
    sm = StageMachine()
    back = decode_axioms(sm, enc.s, enc.i, enc.c)
    assert back.ax == EX1
    v, _ = decode_subset(sm, back, enc.subset(Subset.of(3, [0, 2])))
    assert v == Subset.of(3, [0, 2])


def test_cover_realizer_is_in_v():
    enc = EncodedAxioms(EX1)
    v = Subset.of(3, [1])
    for a in range(3):
        q = enc.cover_realizer(a, v)
        assert StageMachine().compute_V(enc.cover_code(a, v))(enc.element(a), q).is_yes


# -- interpretation ----------------------------------------------------------------------------------

def J(text):
    return parse_judgement(parse_one(text))


def test_judgement_examples():
    assert check_judgement_realized(J("(in 0 N1)")).is_yes
    assert check_judgement_realized(J("(in 1 N1)")).is_no
    assert check_judgement_realized(J("(eq (p0 (pair 2 3)) 2 N)")).is_yes
    assert check_judgement_realized(J("(in x N1 (ctx (x N1)))")).is_yes
    assert check_judgement_realized(J("(in (succ x) N1 (ctx (x N1)))")).is_no


def test_open_context_over_naturals_is_unknown():
    res = check_judgement_realized(J("(in x N (ctx (x N)))"))
    assert res.is_unknown
    assert check_judgement_realized(J("(in x N (ctx (x N)))"), assignments={"x": 4}).is_yes


def test_realize_type_examples():
    n1 = realize_type(Sym("N1"))
    assert n1(0).is_yes and n1(1).is_no
    idt = realize_type(term("(Id N 2 2)"))
    assert idt(2).is_yes and idt(3).is_no
    pit = realize_type(term("(Pi (y N1) N1)"))
    assert pit(lambda_encode(lam("y", Num(0)))).is_yes
    assert pit(lambda_encode(lam("y", Num(3)))).is_no


def test_projection_terms():
    q = Num(pair(5, lambda_encode(lam("j", prim("succ", Var("j"))))))
    assert evaluate(pca_subst(realize_term(term("(ax1 a q)")), "q", q)) == 5
    applied = pca_subst(pca_subst(realize_term(term("(ax2 a j q)")), "q", q), "j", Num(4))
    assert evaluate(applied) == 5


_TERMS = st.recursive(
    st.sampled_from(["x", "y", "0", "3"]),
    lambda inner: st.one_of(
        st.tuples(st.just("succ"), inner).map(lambda t: f"({t[0]} {t[1]})"),
        st.tuples(inner, inner).map(lambda t: f"(pair {t[0]} {t[1]})"),
        st.tuples(inner, inner).map(lambda t: f"(Ap {t[0]} {t[1]})"),
        inner.map(lambda b: f"(lam y {b})"),
        inner.map(lambda b: f"(p0 {b})"),
    ),
    max_leaves=6,
)


@settings(max_examples=80, deadline=None)
@given(_TERMS, _TERMS)
def test_substitution_commutes_with_realization(a, b):
    ta, tb = term(a), term(b)
    lhs = realize_term(term_subst(ta, {"x": tb}))
    rhs = pca_subst(realize_term(ta), "x", realize_term(tb))
    assert alpha_equal(lhs, rhs)


def test_unsupported_constructs():
    with pytest.raises(UnsupportedConstruct):
        realize_term(term("(mystery 1 2)"))
    with pytest.raises(UnsupportedConstruct):
        realize_type(term("(Weird N)"))(0)


def test_positivity_judgement_with_constants():
    decls = Declarations({"EX": EX1}, {"W": Subset.of(3, [0, 1]), "B": Subset.of(3, [1])})
    pos = "(poshat (el EX {a}) {v} (carrier EX) (fam (x) (axi EX x)) (fam (x j) (axc EX x j)))"
    r = Realizer(decls)
    ok = J(f"(in (cert EX W 0) (T {pos.format(a=0, v='W')}))")
    assert r.judgement(ok).is_yes
    wrong = J(f"(in (cert EX B 0) (T {pos.format(a=0, v='B')}))")
    assert r.judgement(wrong).is_no
    proj = J("(in (ax1 (el EX 0) q) (T (Ap W (el EX 0))))")
    q = r.value(term("(cert EX W 0)"), {})
    assert r.judgement(proj, {"q": q}).is_yes


# -- Church's thesis ------------------------------------------------------------------------------

def test_ct_successor_and_zero():
    rep = ct_demo("succ", bound=10)
    assert rep.ok and [r.value for r in rep.rows] == list(range(1, 12))
    rep = ct_demo("zero", bound=10)
    assert rep.ok and {r.value for r in rep.rows} == {0}


def test_ct_divergence():
    f = lambda_encode(lam("x", If(prim("eq", Var("x"), Num(3)),
                                  app(fix("L", lam("y", app(Var("L"), Var("y")))), Num(0)),
                                  pair_t(Num(0), Num(0)))))
    with pytest.raises(NotTotalWithinFuel):
        ct_demo("zero", f, bound=10, fuel=3000)


def test_ct_wrong_realizer_fails_verification():
    f = lambda_encode(lam("x", pair_t(Var("x"), Var("x"))))
    assert not ct_demo("succ", f, bound=3).ok
