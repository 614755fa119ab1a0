"""Coinductively generated positivity relations.

``a ⋉ V`` holds when ``a`` lies in the greatest subset ``X`` of ``V`` such
that every ``x`` in ``X`` meets ``X`` inside each of its covers ``C(x, j)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .core import NO, YES, AxiomSet, LazyAxiomSet, Subset, TriBool, unknown
from .covers import Rf, _check_carrier, covers, extract_proof
from .errors import CarrierMismatch, InvalidCertificate, ParseError, PreconditionViolated
from .sexpr import dumps, parse_one


@dataclass(frozen=True)
class InteriorResult:
    interior: Subset
    iterations: int


@dataclass(frozen=True)
class SplitCertificate:
    witness: Subset
    target: Subset

    def to_sexpr(self) -> str:
        return dumps(["split", ["members", *self.witness.members], ["target", *self.target.members]])


def tau(ax: AxiomSet, v: Subset, x_set: Subset) -> Subset:
    """One step of the deflationary operator, restricted to ``V``."""
    keep = []
    for x in x_set.members:
        if x in v and all(ax.cover(x, j).bits & x_set.bits for j in ax.indices(x)):
            keep.append(x)
    return Subset.of(ax.carrier_size, keep)


def interior(ax: AxiomSet, v: Subset) -> InteriorResult:
    _check_carrier(ax, v)
    return _interior(ax, v)


@lru_cache(maxsize=4096)
def _interior(ax: AxiomSet, v: Subset) -> InteriorResult:
    current = v
    rounds = 0
    while True:
        rounds += 1
        nxt = tau(ax, v, current)
        if nxt == current:
            return InteriorResult(current, rounds)
        current = nxt


def is_positive(ax: AxiomSet, a: int, v: Subset) -> bool:
    return a in interior(ax, v).interior


def check_split(ax: AxiomSet, v: Subset, p: Subset) -> bool:
    _check_carrier(ax, v)
    if p.carrier_size != v.carrier_size:
        raise CarrierMismatch("witness and target live on different carriers")
    if not p.issubset(v):
        return False
    return all(ax.cover(x, j).bits & p.bits for x in p.members for j in ax.indices(x))


def coinduct(ax: AxiomSet, a: int, cert: SplitCertificate) -> bool:
    if not check_split(ax, cert.target, cert.witness):
        raise InvalidCertificate(f"{cert.witness} does not split {cert.target}")
    return a in cert.witness


def extract_splitting_set(ax: AxiomSet, v: Subset) -> SplitCertificate:
    return SplitCertificate(interior(ax, v).interior, v)


def duality_oracle(ax: AxiomSet, a: int, v: Subset) -> bool:
    """Classical reading of positivity: ``a ⋉ V`` iff not ``a ◁ ¬V``."""
    return not covers(ax, a, v.complement())


def compatibility_witness(ax: AxiomSet, a: int, v: Subset, u: Subset) -> int:
    pos = interior(ax, v).interior
    if a not in pos:
        raise PreconditionViolated(f"{a} is not positive in {v}")
    if not covers(ax, a, u):
        raise PreconditionViolated(f"{a} is not covered by {u}")
    node = extract_proof(ax, a, u)
    while not isinstance(node, Rf):
        # the node's element is positive, so some premise must be positive too
        for z, child in node.children:
            if z in pos:
                node = child
                break
        else:
            raise AssertionError("positivity is not deflationary; interior computation is wrong")
    return node.a


def chain_construction(ax: AxiomSet, y: Subset, v: Subset, a0: int, n_max: int = 1000) -> list[Subset]:
    """Grow ``{a0}`` by the least-element choice function until it stabilizes."""
    if not check_split(ax, v, y):
        raise PreconditionViolated(f"{y} does not split {v}")
    if a0 not in y:
        raise PreconditionViolated(f"{a0} is not in {y}")

    def choose(x, j):
        return min((ax.cover(x, j) & y).members)

    chain = [Subset.of(ax.carrier_size, [a0])]
    for _ in range(n_max):
        cur = chain[-1]
        grown = set(cur.members)
        for x in cur.members:
            for j in ax.indices(x):
                grown.add(choose(x, j))
        nxt = Subset.of(ax.carrier_size, grown)
        chain.append(nxt)
        if nxt == cur:
            break
    return chain


def positive_bounded(lax: LazyAxiomSet, a: int, v: Callable[[int], bool], fuel: int) -> TriBool:
    """Fuelled positivity on a lazily generated axiom-set.

    NO is reported when ``a`` drops out even if every unexplored element is
    assumed positive; YES only when ``a`` survives with every unexplored
    element assumed not positive, i.e. a finite certificate exists.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if not v(a):
        return NO
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
                if y not in seen and v(y):
                    seen.add(y)
                    frontier.append(y)
    if a not in axioms:
        return unknown(spent)
    optimistic = _lazy_gfp(axioms, v, frontier_positive=True)
    if a not in optimistic:
        return NO
    pessimistic = _lazy_gfp(axioms, v, frontier_positive=False)
    if a in pessimistic:
        return YES
    return unknown(spent)


def _lazy_gfp(axioms, v, frontier_positive):
    alive = {x for x in axioms if v(x)}

    def ok(y):
        if not v(y):
            return False
        if y in axioms:
            return y in alive
        return frontier_positive

    changed = True
    while changed:
        changed = False
        for x in list(alive):
            if not all(any(ok(y) for y in row) for row in axioms[x]):
                alive.discard(x)
                changed = True
    return alive


def parse_split_certificate(text: str, carrier_size: int) -> SplitCertificate:
    form = parse_one(text)
    try:
        head, members, target = form
        assert head == "split" and members[0] == "members" and target[0] == "target"
        return SplitCertificate(Subset.of(carrier_size, members[1:]), Subset.of(carrier_size, target[1:]))
    except (ValueError, TypeError, AssertionError, IndexError):
        raise ParseError("expected (split (members ...) (target ...))",
                         getattr(form, "line", None), getattr(form, "col", None))
