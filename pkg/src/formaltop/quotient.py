"""Moving covers and positivity between a quotient ``B/R`` and its base ``B``."""

from __future__ import annotations

from dataclasses import dataclass

from .core import AxiomSet, Setoid, Subset
from .errors import CarrierMismatch


@dataclass(frozen=True)
class QuotientMap:
    setoid: Setoid
    class_reps: tuple[int, ...]
    classes: tuple[int, ...]  # element -> class index

    @classmethod
    def of(cls, setoid: Setoid) -> "QuotientMap":
        reps: list[int] = []
        owner = [-1] * setoid.carrier_size
        for b in range(setoid.carrier_size):
            if owner[b] >= 0:
                continue
            k = len(reps)
            reps.append(b)
            for c in setoid.related(b):
                owner[c] = k
        return cls(setoid, tuple(reps), tuple(owner))

    @property
    def base_size(self) -> int:
        return self.setoid.carrier_size

    @property
    def class_count(self) -> int:
        return len(self.class_reps)

    def class_of(self, b: int) -> int:
        return self.classes[b]

    def is_saturated(self, v: Subset) -> bool:
        return all(c in v for b in v.members for c in self.setoid.related(b))


def es(qm: QuotientMap, w: Subset) -> Subset:
    """Pull a subset of classes back to the union of its classes."""
    if w.carrier_size != qm.class_count:
        raise CarrierMismatch(f"expected a subset of {qm.class_count} classes")
    return Subset.of(qm.base_size, [b for b in range(qm.base_size) if qm.class_of(b) in w])


def es_inv(qm: QuotientMap, v: Subset) -> Subset:
    if v.carrier_size != qm.base_size:
        raise CarrierMismatch(f"expected a subset of a base of size {qm.base_size}")
    return Subset.of(qm.class_count, {qm.class_of(b) for b in v.members})


def _relation_axioms(eq: Setoid, b: int) -> list[Subset]:
    return [Subset.of(eq.carrier_size, [y]) for y in eq.related(b)]


def transform_quotient(qm: QuotientMap, ax_on_classes: AxiomSet) -> AxiomSet:
    """Axiom-set on ``B``: the class axioms of ``[b]`` pulled back by ``es``,
    followed by one singleton axiom ``{y}`` for each ``y`` related to ``b``."""
    if ax_on_classes.carrier_size != qm.class_count:
        raise CarrierMismatch("class axiom-set must live on the quotient")
    rows = []
    for b in range(qm.base_size):
        k = qm.class_of(b)
        inherited = [es(qm, ax_on_classes.cover(k, j)) for j in ax_on_classes.indices(k)]
        rows.append(tuple(inherited + _relation_axioms(qm.setoid, b)))
    return AxiomSet(qm.base_size, tuple(rows))


def transform_setoid(ax: AxiomSet, eq: Setoid) -> AxiomSet:
    """Extend ``ax`` by singleton axioms ``{y}`` for every ``y`` equal to ``x``."""
    if eq.carrier_size != ax.carrier_size:
        raise CarrierMismatch("setoid and axiom-set carriers differ")
    rows = []
    for x in range(ax.carrier_size):
        rows.append(tuple(list(ax.covers[x]) + _relation_axioms(eq, x)))
    return AxiomSet(ax.carrier_size, tuple(rows))


def index_labels(qm: QuotientMap, ax_on_classes: AxiomSet, b: int) -> list[tuple[str, int]]:
    """Which summand each index of ``transform_quotient(...)`` at ``b`` came from."""
    k = qm.class_of(b)
    return ([("inherited", j) for j in ax_on_classes.indices(k)]
            + [("related", y) for y in qm.setoid.related(b)])
