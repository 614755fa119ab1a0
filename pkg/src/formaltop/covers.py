"""Inductively generated basic covers.

``a ◁ V`` is the least relation containing membership in ``V`` and closed
under: if some ``C(a, j)`` is entirely covered then ``a`` is covered.
Saturation runs a semi-naive worklist with one residual counter per axiom.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable

from .core import NO, YES, AxiomSet, LazyAxiomSet, Subset, TriBool, unknown
from .errors import CarrierMismatch, IllFormedProof, NotCovered, ParseError
from .sexpr import Atom, dumps, parse_one


@dataclass(frozen=True)
class SaturationResult:
    closure: Subset
    witness_depth: MappingProxyType
    # element -> index of the axiom that fired it (absent for members of V)
    fired_by: MappingProxyType


def _check_carrier(ax: AxiomSet, v: Subset):
    if v.carrier_size != ax.carrier_size:
        raise CarrierMismatch(
            f"subset carrier {v.carrier_size} differs from axiom-set carrier {ax.carrier_size}")


def saturate(ax: AxiomSet, v: Subset) -> SaturationResult:
    _check_carrier(ax, v)
    return _saturate(ax, v)


# inputs are frozen and results read-only, so repeated queries can share work
@lru_cache(maxsize=4096)
def _saturate(ax: AxiomSet, v: Subset) -> SaturationResult:
    n = ax.carrier_size
    residual = {}
    watchers: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for x in range(n):
        for j in ax.indices(x):
            c = ax.cover(x, j)
            residual[(x, j)] = len(c)
            for y in c:
                watchers[y].append((x, j))

    depth: dict[int, int] = {}
    fired: dict[int, int] = {}
    queue: deque[int] = deque()

    def add(x, d, j=None):
        if x in depth:
            return
        depth[x] = d
        if j is not None:
            fired[x] = j
        queue.append(x)

    for x in v.members:
        add(x, 0)
    for (x, j), count in residual.items():
        if count == 0:
            add(x, 1, j)

    while queue:
        y = queue.popleft()
        for (x, j) in watchers[y]:
            residual[(x, j)] -= 1
            if residual[(x, j)] == 0 and x not in depth:
                add(x, 1 + max(depth[z] for z in ax.cover(x, j)), j)

    return SaturationResult(Subset.of(n, depth), MappingProxyType(depth), MappingProxyType(fired))


def covers(ax: AxiomSet, a: int, v: Subset) -> bool:
    return a in saturate(ax, v).closure


def covers_bounded(lax: LazyAxiomSet, a: int, v: Callable[[int], bool], fuel: int) -> TriBool:
    """Fuelled cover query on a lazily generated axiom-set.

    Elements are explored breadth-first from ``a``; every generator call
    costs one unit of fuel.  YES means a finite derivation was found; NO is
    only reported when the explored part is closed under generation.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if v(a):
        return YES
    spent = 0
    axioms: dict[int, list[list[int]]] = {}
    seen = {a}
    frontier = deque([a])
    complete = True
    while frontier:
        x = frontier[0]
        if spent >= fuel:
            complete = False
            break
        idx = list(lax.index_gen(x))
        spent += 1
        rows = []
        for j in idx:
            if spent >= fuel:
                complete = False
                break
            rows.append(list(lax.cover_gen(x, j)))
            spent += 1
        if not complete:
            break
        frontier.popleft()
        axioms[x] = rows
        for row in rows:
            for y in row:
                if y not in seen:
                    seen.add(y)
                    if not v(y):
                        frontier.append(y)
        if _lazy_covered(a, axioms, v):
            return YES
    if _lazy_covered(a, axioms, v):
        return YES
    if complete:
        return NO
    return unknown(spent)


def _lazy_covered(a, axioms, v) -> bool:
    # least fixpoint over the explored part; unexplored elements count as uncovered
    covered = set()
    changed = True
    while changed:
        changed = False
        for x, rows in axioms.items():
            if x in covered:
                continue
            if any(all(v(y) or y in covered for y in row) for row in rows):
                covered.add(x)
                changed = True
    return a in covered


# ---------------------------------------------------------------------------
# Proof terms


@dataclass(frozen=True)
class Rf:
    a: int
    evidence: Any = 0

    @property
    def conclusion(self):
        return self.a


@dataclass(frozen=True)
class Tr:
    a: int
    j: int
    children: tuple  # ((z, CoverProof), ...) sorted by z

    @property
    def conclusion(self):
        return self.a

    def child(self, z):
        for key, p in self.children:
            if key == z:
                return p
        raise KeyError(z)


CoverProof = Rf | Tr


def proof_depth(p) -> int:
    if isinstance(p, Rf):
        return 0
    return 1 + max((proof_depth(c) for _, c in p.children), default=0)


def extract_proof(ax: AxiomSet, a: int, v: Subset) -> CoverProof:
    sat = saturate(ax, v)
    if a not in sat.closure:
        raise NotCovered(f"{a} is not covered by {v}")
    memo: dict[int, CoverProof] = {}

    def build(x):
        if x in memo:
            return memo[x]
        if x in v:
            p = Rf(x)
        else:
            j = sat.fired_by[x]
            p = Tr(x, j, tuple((z, build(z)) for z in ax.cover(x, j).members))
        memo[x] = p
        return p

    return build(a)


def proof_diagnostics(ax: AxiomSet, v: Subset, p) -> list[str]:
    problems: list[str] = []

    def visit(q, path):
        if isinstance(q, Rf):
            if not (0 <= q.a < ax.carrier_size):
                problems.append(f"{path}: element {q.a} outside carrier")
            elif q.a not in v:
                problems.append(f"{path}: rf({q.a}) but {q.a} is not in {v}")
        elif isinstance(q, Tr):
            if not (0 <= q.a < ax.carrier_size):
                problems.append(f"{path}: element {q.a} outside carrier")
                return
            if not (0 <= q.j < len(ax.covers[q.a])):
                problems.append(f"{path}: {q.j} is not an index of {q.a}")
                return
            want = set(ax.cover(q.a, q.j).members)
            keys = [z for z, _ in q.children]
            if len(keys) != len(set(keys)):
                problems.append(f"{path}: duplicate children")
            got = set(keys)
            for z in sorted(want - got):
                problems.append(f"{path}: missing child for {z} in C({q.a},{q.j})")
            for z in sorted(got - want):
                problems.append(f"{path}: {z} is not in C({q.a},{q.j})")
            for z, child in q.children:
                if getattr(child, "a", None) != z:
                    problems.append(f"{path}/{z}: child concludes {getattr(child, 'a', '?')}, expected {z}")
                visit(child, f"{path}/{z}")
        else:
            problems.append(f"{path}: not a proof node: {q!r}")

    visit(p, "root")
    return problems


def check_proof(ax: AxiomSet, v: Subset, p) -> bool:
    return not proof_diagnostics(ax, v, p)


def eval_ind(ax: AxiomSet, v: Subset, p, q1: Callable, q2: Callable):
    """Structural recursion on a cover proof.

    ``q1(a, evidence)`` handles reflexivity leaves; ``q2(a, j, values)``
    receives the already evaluated children as a dict keyed by element.
    """
    problems = proof_diagnostics(ax, v, p)
    if problems:
        raise IllFormedProof("; ".join(problems))

    memo: dict[int, Any] = {}

    def ev(q):
        key = id(q)
        if key in memo:
            return memo[key]
        if isinstance(q, Rf):
            out = q1(q.a, q.evidence)
        else:
            out = q2(q.a, q.j, {z: ev(c) for z, c in q.children})
        memo[key] = out
        return out

    return ev(p)


def proof_to_sexpr(p) -> str:
    def go(q):
        if isinstance(q, Rf):
            return ["rf", q.a]
        return ["tr", q.a, q.j] + [[z, go(c)] for z, c in q.children]
    return dumps(go(p))


def proof_from_sexpr(text: str):
    def go(form):
        if not isinstance(form, list) or not form or not isinstance(form[0], Atom):
            raise ParseError("expected (rf a) or (tr a j ...)", *_pos(form))
        head = form[0]
        if head == "rf" and len(form) == 2 and isinstance(form[1], int):
            return Rf(form[1])
        if head == "tr" and len(form) >= 3 and all(isinstance(x, int) for x in form[1:3]):
            kids = []
            for item in form[3:]:
                if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], int)):
                    raise ParseError("expected (z proof) child", *_pos(item))
                kids.append((item[0], go(item[1])))
            return Tr(form[1], form[2], tuple(sorted(kids, key=lambda kv: kv[0])))
        raise ParseError(f"malformed proof node {dumps(form)}", *_pos(form))
    return go(parse_one(text))


def _pos(form):
    return getattr(form, "line", None), getattr(form, "col", None)
