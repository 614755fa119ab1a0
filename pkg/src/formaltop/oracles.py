"""Powerset oracles: fixpoints computed by scanning every subset.

These are deliberately naive and share no code with the worklist engines,
so comparing the two is a meaningful check.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_ORACLE_BOUND, AxiomSet, Setoid, Subset, enumerate_subsets
from .covers import covers, saturate
from .positivity import duality_oracle, interior, is_positive
from .quotient import QuotientMap, es, transform_quotient


def _generation_closed(ax: AxiomSet, x: Subset) -> bool:
    return all(a in x for a in range(ax.carrier_size)
               if any(c.issubset(x) for c in ax.covers[a]))


def _post_fixed(ax: AxiomSet, v: Subset, x: Subset) -> bool:
    return x.issubset(v) and all(c.bits & x.bits for a in x.members for c in ax.covers[a])


def lfp_oracle(ax: AxiomSet, v: Subset, bound: int = DEFAULT_ORACLE_BOUND) -> Subset:
    """Intersection of every generation-closed superset of ``v``."""
    acc = ax.full()
    for x in enumerate_subsets(ax.carrier_size, bound):
        if v.issubset(x) and _generation_closed(ax, x):
            acc = acc & x
    return acc


def gfp_oracle(ax: AxiomSet, v: Subset, bound: int = DEFAULT_ORACLE_BOUND) -> Subset:
    """Union of every post-fixed subset of ``v``."""
    acc = ax.empty()
    for x in enumerate_subsets(ax.carrier_size, bound):
        if _post_fixed(ax, v, x):
            acc = acc | x
    return acc


@dataclass(frozen=True)
class OracleRow:
    label: str
    engine: object
    oracle: object

    @property
    def agrees(self) -> bool:
        return self.engine == self.oracle


def compare(ax: AxiomSet, mode: str, setoid: Setoid | None = None,
            bound: int = DEFAULT_ORACLE_BOUND) -> list[OracleRow]:
    """Engine against oracle on every subset, in a fixed order.

    For ``eqcov``/``ceqcov`` the axiom-set lives on the classes of ``setoid``
    and the comparison is between ``[b]`` in the quotient and ``b`` in the
    transformed axiom-set on the base.
    """
    rows = []
    if mode in ("lfp", "gfp"):
        for v in enumerate_subsets(ax.carrier_size, bound):
            if mode == "lfp":
                rows.append(OracleRow(f"V={v}", saturate(ax, v).closure, lfp_oracle(ax, v, bound)))
            else:
                rows.append(OracleRow(f"V={v}", interior(ax, v).interior, gfp_oracle(ax, v, bound)))
    elif mode == "duality":
        for v in enumerate_subsets(ax.carrier_size, bound):
            for a in range(ax.carrier_size):
                rows.append(OracleRow(f"a={a} V={v}", is_positive(ax, a, v), duality_oracle(ax, a, v)))
    elif mode in ("eqcov", "ceqcov"):
        if setoid is None:
            raise ValueError(f"mode {mode} needs a setoid")
        qm = QuotientMap.of(setoid)
        base_ax = transform_quotient(qm, ax)
        rel = covers if mode == "eqcov" else is_positive
        for w in enumerate_subsets(qm.class_count, bound):
            ew = es(qm, w)
            for b in range(qm.base_size):
                rows.append(OracleRow(f"b={b} W={w}", rel(base_ax, b, ew), rel(ax, qm.class_of(b), w)))
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    return rows
