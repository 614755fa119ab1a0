"""Positivity predicate, coreflection into open locales, and fixpoint lattices."""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_ORACLE_BOUND, AxiomSet, Subset, enumerate_subsets
from .covers import covers, saturate
from .positivity import compatibility_witness, interior, is_positive


@dataclass(frozen=True)
class PositiveTopology:
    ax: AxiomSet

    def covers(self, a: int, v: Subset) -> bool:
        return covers(self.ax, a, v)

    def positive(self, a: int, v: Subset) -> bool:
        return is_positive(self.ax, a, v)

    def compatibility_failures(self, bound: int = DEFAULT_ORACLE_BOUND) -> list[tuple]:
        """Triples ``(a, V, U)`` where ``a ⋉ V`` and ``a ◁ U`` but the witness fails."""
        bad = []
        subsets = list(enumerate_subsets(self.ax.carrier_size, bound))
        for v in subsets:
            pos = interior(self.ax, v).interior
            for u in subsets:
                closure = saturate(self.ax, u).closure
                for a in (pos & closure).members:
                    x = compatibility_witness(self.ax, a, v, u)
                    if not (x in u and x in pos):
                        bad.append((a, v, u))
        return bad


def pos_predicate(ax: AxiomSet, a: int) -> bool:
    return is_positive(ax, a, ax.full())


def coreflect(ax: AxiomSet) -> AxiomSet:
    """Add to each ``a`` one axiom covering ``A`` when ``Pos(a)`` and ``∅`` otherwise."""
    pos = interior(ax, ax.full()).interior
    rows = []
    for a in range(ax.carrier_size):
        extra = ax.full() if a in pos else ax.empty()
        rows.append(tuple(ax.covers[a]) + (extra,))
    return AxiomSet(ax.carrier_size, tuple(rows))


def embed_locale(ax: AxiomSet, check_bound: int = 4) -> PositiveTopology:
    pt = PositiveTopology(ax)
    if ax.carrier_size <= check_bound:
        failures = pt.compatibility_failures(check_bound)
        assert not failures, f"compatibility fails on {failures[0]}"
    return pt


def formal_opens(ax: AxiomSet, bound: int = DEFAULT_ORACLE_BOUND) -> list[Subset]:
    return [v for v in enumerate_subsets(ax.carrier_size, bound) if saturate(ax, v).closure == v]


def formal_closeds(ax: AxiomSet, bound: int = DEFAULT_ORACLE_BOUND) -> list[Subset]:
    return [v for v in enumerate_subsets(ax.carrier_size, bound) if interior(ax, v).interior == v]
