"""Finite axiom-sets as universe codes, with canonical realizers.

The carrier ``{0..n-1}`` becomes the code ``Fin(n)``: ``n0``, ``n1``, or a
binary sum of two smaller ``Fin`` codes.  Subsets and the index/cover
families become table programs over element codes.

Going the other way, :func:`decode_axioms` reads a finite axiom-set back
from any codes ``s, i, c`` whose members can be enumerated, so realizers can
be built for codes that were not produced here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import AxiomSet, Subset, validate_axiom_set
from ..covers import CoverProof, Rf, extract_proof
from ..positivity import interior
from . import codes
from .pairing import pair
from .pca import (
    DIVERGENT, Num, Var, app, evaluate, fix, lam, lambda_encode, let, pair_t, table,
)


def fin_code(n: int) -> int:
    if n == 0:
        return codes.N0
    if n == 1:
        return codes.N1
    hi = (n + 1) // 2
    return codes.plus(fin_code(hi), fin_code(n - hi))


def fin_element(n: int, k: int) -> int:
    """Code of the ``k``-th element of ``Fin(n)``."""
    if not 0 <= k < n:
        raise ValueError(f"{k} is not below {n}")
    if n == 1:
        return 0
    hi = (n + 1) // 2
    if k < hi:
        return pair(0, fin_element(hi, k))
    return pair(1, fin_element(n - hi, k - hi))


def fin_elements(n: int) -> list[int]:
    return [fin_element(n, k) for k in range(n)]


def subset_program(n: int, members) -> int:
    """``λz. n1`` on element codes of ``members``, ``n0`` elsewhere."""
    entries = [(fin_element(n, k), Num(codes.N1)) for k in sorted(members)]
    return lambda_encode(lam("z", table("z", entries, Num(codes.N0))))


def constant_program(value: int) -> int:
    return lambda_encode(lam("x", Num(value)))


@dataclass(frozen=True)
class CodedAxioms:
    """A finite axiom-set together with the codes that present it.

    ``cover_evidence[(x, j, y)]`` realizes ``y ε C(x, j)``; it is 0 for the
    table programs built by :class:`EncodedAxioms`.
    """

    ax: AxiomSet
    elements: tuple
    indices: tuple  # per element, the codes of its indices
    s: int
    i: int
    c: int
    cover_evidence: dict = field(default_factory=dict, compare=False, hash=False)

    def element(self, k: int) -> int:
        return self.elements[k]

    def index(self, x: int, j: int) -> int:
        return self.indices[x][j]

    def position(self, code: int) -> int | None:
        try:
            return self.elements.index(code)
        except ValueError:
            return None

    def fields(self, a: int, v_code: int) -> dict:
        return {"a": self.element(a), "v": v_code, "s": self.s, "i": self.i, "c": self.c}

    def _ev_c(self, x, j, y) -> int:
        return self.cover_evidence.get((x, j, y), 0)

    # -- realizers ------------------------------------------------------------

    def proof_code(self, p: CoverProof, evidence=None) -> int:
        """``rf̃``/``tr̃`` code of a cover proof.

        ``evidence`` maps an element to its realizer of ``a ε V`` (0 if absent).
        """
        evidence = evidence or {}
        if isinstance(p, Rf):
            return codes.rf(self.element(p.a), evidence.get(p.a, 0))
        entries = [(self.element(z), Num(self.proof_code(child, evidence))) for z, child in p.children]
        r = lambda_encode(lam("u", "t", table("u", entries)))
        return codes.tr(self.element(p.a), self.index(p.a, p.j), r)

    def choice_term(self, target: Subset):
        """``λx.λj. y`` with ``y`` the least member of ``C(x, j)`` in
        ``target``, else the least member of ``C(x, j)``, else element 0."""
        rows = []
        for x in range(self.ax.carrier_size):
            inner = []
            for j in range(self.ax.index_counts[x]):
                cov = self.ax.cover(x, j).members
                good = [y for y in cov if y in target]
                y = (good or cov or (0,))[0]
                inner.append((self.index(x, j), Num(self.element(y))))
            rows.append((self.element(x), table("j", inner, Num(self.elements[0]))))
        return lam("x", "j", table("x", rows, Num(0)))

    def certificate_program(self, v: Subset, evidence=None):
        """Recursive ``Q(x) = p(e_x, λj. p(y, p(e_xjy, Q(y))))``, choosing
        ``y`` inside the interior of ``v`` whenever possible."""
        evidence = evidence or {}
        inside = interior(self.ax, v).interior
        choose = self.choice_term(inside)
        ev_v = lam("x", table("x", [(self.element(k), Num(e)) for k, e in evidence.items()]))
        ev_c = lam("x", "j", "y", table("x", [
            (self.element(x), table("j", [
                (self.index(x, j), table("y", [(self.element(y), Num(self._ev_c(x, j, y)))
                                               for y in self.ax.cover(x, j).members]))
                for j in range(self.ax.index_counts[x])]))
            for x in range(self.ax.carrier_size)]))
        body = lam("x", pair_t(app(ev_v, Var("x")), lam(
            "j", let("y", app(choose, Var("x"), Var("j")),
                     pair_t(Var("y"), pair_t(app(ev_c, Var("x"), Var("j"), Var("y")),
                                             app(Var("Q"), Var("y"))))))))
        return fix("Q", body)

    def certificate(self, a: int, v: Subset, evidence=None) -> int:
        """Canonical positivity certificate for ``a``; defined whether or not
        ``a`` is positive, so refutations can be exercised too."""
        out = evaluate(app(self.certificate_program(v, evidence), Num(self.element(a))))
        if out is DIVERGENT:
            raise RuntimeError("certificate program diverged")
        return out

    def cover_realizer(self, a: int, v: Subset, evidence=None) -> int:
        return self.proof_code(extract_proof(self.ax, a, v), evidence)


class EncodedAxioms(CodedAxioms):
    """Codes built from a finite :class:`AxiomSet` with ``Fin`` carriers."""

    def __init__(self, ax: AxiomSet):
        n = ax.carrier_size
        elements = tuple(fin_elements(n))
        indices = tuple(tuple(fin_elements(ax.index_counts[x])) for x in range(n))
        i_prog = lambda_encode(lam("x", table("x", [
            (elements[x], Num(fin_code(ax.index_counts[x]))) for x in range(n)], Num(codes.N0))))
        rows = []
        for x in range(n):
            inner = [(indices[x][j], Num(subset_program(n, ax.cover(x, j).members)))
                     for j in range(ax.index_counts[x])]
            rows.append((elements[x], table("j", inner)))
        c_prog = lambda_encode(lam("x", "j", table("x", rows)))
        super().__init__(ax, elements, indices, fin_code(n), i_prog, c_prog)

    def subset(self, v: Subset) -> int:
        return subset_program(self.ax.carrier_size, v.members)

    def cover_code(self, a: int, v: Subset) -> int:
        return codes.cover(self.element(a), self.subset(v), self.s, self.i, self.c)

    def pos_code(self, a: int, v: Subset) -> int:
        return codes.pos(self.element(a), self.subset(v), self.s, self.i, self.c)

    def fields(self, a: int, v) -> dict:  # type: ignore[override]
        v_code = self.subset(v) if isinstance(v, Subset) else v
        return super().fields(a, v_code)


def encode_axioms(ax: AxiomSet) -> EncodedAxioms:
    return EncodedAxioms(ax)


# -- reading codes back ------------------------------------------------------------

def _first_member(sm, code):
    ms = sm.members(code)
    if ms is None:
        return None
    for m in ms:
        if sm.mem(m, code).is_yes:
            return m
    return None


def decode_axioms(sm, s: int, i: int, c: int) -> CodedAxioms | None:
    """The finite axiom-set presented by ``s, i, c``, or ``None`` when some
    part cannot be enumerated within the machine's budgets."""
    elems = sm.members(s)
    if elems is None:
        return None
    elems = [e for e in elems if sm.mem(e, s).is_yes]
    counts, covers, idx_codes, evidence = [], {}, [], {}
    for xk, x in enumerate(elems):
        ix = sm.apply(i, x)
        if ix is DIVERGENT:
            return None
        js = sm.members(ix)
        if js is None:
            return None
        js = [j for j in js if sm.mem(j, ix).is_yes]
        idx_codes.append(tuple(js))
        counts.append(len(js))
        for jk, j in enumerate(js):
            members = []
            for yk, y in enumerate(elems):
                fib = sm.apply(c, x, j, y)
                if fib is DIVERGENT:
                    return None
                ev = _first_member(sm, fib)
                if ev is not None:
                    members.append(yk)
                    evidence[(xk, jk, yk)] = ev
            covers[(xk, jk)] = members
    ax = validate_axiom_set(len(elems), counts, covers)
    return CodedAxioms(ax, tuple(elems), tuple(idx_codes), s, i, c, evidence)


def decode_subset(sm, coded: CodedAxioms, v: int):
    """``(Subset, evidence)`` for a propositional function code ``v``."""
    members, evidence = [], {}
    for k, x in enumerate(coded.elements):
        fib = sm.apply(v, x)
        if fib is DIVERGENT:
            return None
        ev = _first_member(sm, fib)
        if ev is not None:
            members.append(k)
            evidence[k] = ev
    return Subset.of(coded.ax.carrier_size, members), evidence
