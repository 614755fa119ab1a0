"""Church's thesis read off a realizer.

A realizer ``f`` of ``∀x∃y R(x, y)`` sends ``x`` to a pair whose first
component is a witness.  The index ``e = Λx. p0({f}(x))`` then computes a
choice function for ``R`` and ``Λx. p1({f}(x))`` realizes ``∀x R(x, {e}(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import NotTotalWithinFuel
from .codes import show_numeral
from .pca import DIVERGENT, Num, Var, app, fst_t, kleene_apply, lam, lambda_encode, pair_t, prim, snd_t


@dataclass(frozen=True)
class Relation:
    """A decidable relation given by the term it equates ``y`` with.

    ``R(x, y)`` is ``Id(N, y, t(x))``; its realizers are exactly ``t(x)``.
    """

    name: str
    rhs: Callable[[int], int]
    rhs_term: Callable  # PCA term in x

    def holds(self, x: int, y: int) -> bool:
        return y == self.rhs(x)

    def realizes(self, x: int, y: int, evidence: int) -> bool:
        return self.holds(x, y) and evidence == y

    def canonical_realizer(self) -> int:
        """``Λx. p(t(x), t(x))``: the witness plus the reflexivity evidence."""
        t = self.rhs_term(Var("x"))
        return lambda_encode(lam("x", pair_t(t, t)))


RELATIONS = {
    "succ": Relation("y = x+1", lambda x: x + 1, lambda x: prim("succ", x)),
    "zero": Relation("y = 0", lambda x: 0, lambda x: Num(0)),
}


@dataclass(frozen=True)
class CTRow:
    x: int
    value: int
    evidence: int
    ok: bool


@dataclass(frozen=True)
class CTReport:
    relation: str
    f_code: int
    e_code: int
    proof_code: int
    rows: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def lines(self) -> list[str]:
        out = [f"relation {self.relation}", f"f = {show_numeral(self.f_code)}",
               f"e = {show_numeral(self.e_code)}", f"evidence program = {show_numeral(self.proof_code)}"]
        for r in self.rows:
            out.append(f"x={r.x} {{e}}(x)={r.value} evidence={r.evidence} {'ok' if r.ok else 'FAIL'}")
        return out


def choice_index(f_code: int) -> int:
    return lambda_encode(lam("x", fst_t(app(Num(f_code), Var("x")))))


def evidence_index(f_code: int) -> int:
    return lambda_encode(lam("x", snd_t(app(Num(f_code), Var("x")))))


def ct_demo(relation: str | Relation = "succ", f_code: int | None = None,
            bound: int = 10, fuel: int = 10_000) -> CTReport:
    """Build the choice index from ``f`` and verify it on ``0..bound``.

    Raises :class:`NotTotalWithinFuel` when ``{f}(x)`` does not converge for
    some ``x <= bound``.
    """
    rel = RELATIONS[relation] if isinstance(relation, str) else relation
    f = rel.canonical_realizer() if f_code is None else f_code
    e, ev = choice_index(f), evidence_index(f)
    rows = []
    for x in range(bound + 1):
        if kleene_apply(f, x, fuel=fuel) is DIVERGENT:
            raise NotTotalWithinFuel(f"{{f}}({x}) did not converge within {fuel} steps")
        y = kleene_apply(e, x, fuel=fuel)
        w = kleene_apply(ev, x, fuel=fuel)
        if y is DIVERGENT or w is DIVERGENT:
            raise NotTotalWithinFuel(f"extracted program diverged at {x}")
        rows.append(CTRow(x, y, w, rel.realizes(x, y, w)))
    return CTReport(rel.name, f, e, ev, tuple(rows))
