import pytest

from formaltop.constructions import (
    PositiveTopology, coreflect, embed_locale, formal_closeds, formal_opens, pos_predicate,
)
from formaltop.core import AxiomSet, Subset, axiom_set, enumerate_subsets, ex1
from formaltop.covers import covers, saturate
from formaltop.errors import OracleBoundExceeded
from formaltop.positivity import compatibility_witness, interior

from oracles import random_axiom_sets

EX1 = ex1()


def S(*m, n=3):
    return Subset.of(n, m)


def test_pos_predicate_examples():
    assert pos_predicate(EX1, 0) and pos_predicate(EX1, 1)
    assert not pos_predicate(EX1, 2)
    assert all(pos_predicate(axiom_set(3), a) for a in range(3))


def test_coreflect_examples():
    plus = coreflect(EX1)
    assert plus.cover(2, 1) == S()
    assert plus.cover(0, 1) == S(0, 1, 2) and plus.cover(1, 0) == S(0, 1, 2)
    assert all(row[-1] == Subset.full(3) for row in coreflect(axiom_set(3)).covers)
    # Pos nowhere true: every element sits on an empty cover
    nowhere = axiom_set(2, {0: [[]], 1: [[]]})
    assert saturate(coreflect(nowhere), Subset.empty(2)).closure == Subset.full(2)


def test_embed_locale_examples():
    pt = embed_locale(EX1)
    assert isinstance(pt, PositiveTopology) and pt.ax == EX1
    assert embed_locale(AxiomSet(0, ())).compatibility_failures() == []
    assert compatibility_witness(EX1, 0, Subset.full(3), S(1)) == 1
    assert pt.covers(2, S()) and not pt.positive(2, Subset.full(3))


def test_formal_opens_and_closeds_ex1():
    opens = formal_opens(EX1)
    assert Subset.full(3) in opens and S(2) in opens
    assert all(saturate(EX1, v).closure == v for v in opens)
    closeds = formal_closeds(EX1)
    assert S() in closeds and S(0, 1) in closeds and S(2) not in closeds
    assert len(formal_opens(axiom_set(2))) == 4
    assert len(formal_closeds(axiom_set(3))) == 8


def test_lattice_bound():
    with pytest.raises(OracleBoundExceeded):
        formal_opens(axiom_set(5), bound=4)


def test_lattice_joins():
    for ax in random_axiom_sets(60, seed=21):
        opens = formal_opens(ax)
        closeds = formal_closeds(ax)
        for v in opens:
            for w in opens:
                assert saturate(ax, v | w).closure in opens
        for v in closeds:
            for w in closeds:
                assert interior(ax, v | w).interior in closeds


def test_coreflection_laws():
    for ax in random_axiom_sets(150, seed=9):
        plus = coreflect(ax)
        for v in enumerate_subsets(ax.carrier_size):
            cl = saturate(plus, v).closure
            for a in range(ax.carrier_size):
                if covers(ax, a, v):
                    assert a in cl
                # non-positive elements are covered by anything
                if not pos_predicate(ax, a):
                    assert a in cl
        # the coreflected system's own Pos agrees with the original one
        for a in range(ax.carrier_size):
            assert pos_predicate(plus, a) == pos_predicate(ax, a)


def test_embed_locale_compatibility_small():
    for ax in random_axiom_sets(40, seed=4, max_carrier=4):
        assert embed_locale(ax).compatibility_failures() == []
