import random

import pytest

from formaltop.core import NO, YES, LazyAxiomSet, Subset, axiom_set, enumerate_subsets, ex1
from formaltop.covers import covers
from formaltop.errors import InvalidCertificate, ParseError, PreconditionViolated
from formaltop.positivity import (
    SplitCertificate, chain_construction, check_split, coinduct,
    compatibility_witness, duality_oracle, extract_splitting_set, interior,
    is_positive, parse_split_certificate, positive_bounded, tau,
)

from oracles import gfp_oracle, random_axiom_set, random_axiom_sets

EX1 = ex1()
FULL = Subset.full(3)
NO_AXIOMS = axiom_set(4)


def S(*m, n=3):
    return Subset.of(n, m)


def test_interior_examples():
    assert interior(EX1, FULL).interior == S(0, 1)
    assert interior(EX1, S(1)).interior == S(1)
    for v in enumerate_subsets(4):
        assert interior(NO_AXIOMS, v).interior == v


def test_is_positive_examples():
    assert not is_positive(EX1, 2, FULL)
    assert is_positive(EX1, 1, S(1))


def test_check_split_examples():
    for v in enumerate_subsets(3):
        assert check_split(EX1, v, Subset.empty(3))
    assert check_split(EX1, FULL, S(0, 1))
    assert not check_split(EX1, FULL, S(2))


def test_coinduct_examples():
    cert = SplitCertificate(S(0, 1), FULL)
    assert coinduct(EX1, 0, cert)
    assert not coinduct(EX1, 2, cert)
    assert not coinduct(EX1, 1, SplitCertificate(Subset.empty(3), FULL))
    with pytest.raises(InvalidCertificate):
        coinduct(EX1, 2, SplitCertificate(S(2), FULL))


def test_extract_splitting_set_examples():
    assert extract_splitting_set(EX1, FULL) == SplitCertificate(S(0, 1), FULL)
    assert extract_splitting_set(EX1, S()) == SplitCertificate(S(), S())
    v = Subset.of(4, [1, 3])
    assert extract_splitting_set(NO_AXIOMS, v) == SplitCertificate(v, v)


def test_duality_examples():
    assert duality_oracle(EX1, 2, FULL) is False
    assert duality_oracle(EX1, 1, S(1)) is True
    assert duality_oracle(EX1, 0, S(1)) is False


def test_compatibility_examples():
    assert compatibility_witness(EX1, 0, FULL, S(1)) == 1
    assert compatibility_witness(EX1, 1, S(1), S(1)) == 1
    assert compatibility_witness(EX1, 0, FULL, S(1, 2)) == 1
    with pytest.raises(PreconditionViolated):
        compatibility_witness(EX1, 2, FULL, S(2))


def test_chain_examples():
    assert chain_construction(EX1, S(0, 1), FULL, 0) == [S(0), S(0, 1), S(0, 1)]
    assert chain_construction(EX1, S(1), S(1), 1) == [S(1), S(1)]
    with pytest.raises(PreconditionViolated):
        chain_construction(EX1, S(), FULL, 0)


def test_positive_bounded_examples():
    lex1 = LazyAxiomSet.from_finite(EX1)
    assert positive_bounded(lex1, 2, lambda x: x < 3, 10) == NO
    succ = LazyAxiomSet(lambda x: [0], lambda x, j: [x + 1])
    assert positive_bounded(succ, 0, lambda x: True, 5).is_unknown
    empty = LazyAxiomSet(lambda x: [], lambda x, j: [])
    assert positive_bounded(empty, 3, lambda x: True, 1) == YES


def test_split_certificate_text():
    cert = SplitCertificate(S(0, 1), FULL)
    assert cert.to_sexpr() == "(split (members 0 1) (target 0 1 2))"
    assert parse_split_certificate(cert.to_sexpr(), 3) == cert
    with pytest.raises(ParseError):
        parse_split_certificate("(split (target 1))", 3)


@pytest.mark.parametrize("seed", range(40))
def test_interior_laws(seed):
    rng = random.Random(seed)
    ax = random_axiom_set(rng, max_carrier=6, max_indices=3)
    subsets = list(enumerate_subsets(ax.carrier_size))
    sample = rng.sample(subsets, min(12, len(subsets)))
    for v in sample:
        iv = interior(ax, v).interior
        assert iv.issubset(v)
        assert interior(ax, iv).interior == iv
        assert tau(ax, v, iv) == iv
        for w in sample:
            if v.issubset(w):
                assert iv.issubset(interior(ax, w).interior)


def _tau_within_x(ax, x_set):
    # the variant that only conjoins membership in X
    return Subset.of(ax.carrier_size, [x for x in x_set.members
                                       if all(ax.cover(x, j).bits & x_set.bits for j in ax.indices(x))])


def test_tau_variants_have_same_gfp():
    for ax in random_axiom_sets(200, seed=5):
        for v in enumerate_subsets(ax.carrier_size):
            cur = v
            while True:
                nxt = _tau_within_x(ax, cur)
                if nxt == cur:
                    break
                cur = nxt
            assert cur == interior(ax, v).interior


def test_finite_laws_on_random_family():
    for ax in random_axiom_sets(150, seed=3):
        full = ax.full()
        for v in enumerate_subsets(ax.carrier_size):
            pos = interior(ax, v).interior
            assert pos == gfp_oracle(ax, v)
            for a in range(ax.carrier_size):
                assert (a in pos) == duality_oracle(ax, a, v)
            # ax-mon: a positive element meets the interior in each of its covers
            for a in pos:
                for j in ax.indices(a):
                    assert ax.cover(a, j).bits & pos.bits
            for p in enumerate_subsets(ax.carrier_size):
                if check_split(ax, v, p):
                    assert p.issubset(pos)
            for a in pos:
                chain = chain_construction(ax, pos, v, a)
                assert chain[-1] == chain[-2]
                assert a in chain[-1] and check_split(ax, v, chain[-1])
                assert chain[-1].issubset(pos)
        for u in enumerate_subsets(ax.carrier_size):
            pos = interior(ax, full).interior
            for a in pos:
                if covers(ax, a, u):
                    x = compatibility_witness(ax, a, full, u)
                    assert x in u and x in pos


def test_bounded_positivity_soundness():
    for ax in random_axiom_sets(100, seed=13):
        lax = LazyAxiomSet.from_finite(ax)
        for v in enumerate_subsets(ax.carrier_size):
            for a in range(ax.carrier_size):
                truth = is_positive(ax, a, v)
                for fuel in (1, 3, 1000):
                    got = positive_bounded(lax, a, v.__contains__, fuel)
                    if got.is_yes:
                        assert truth
                    if got.is_no:
                        assert not truth
