"""Carriers, subsets, axiom-sets, setoids and three-valued answers.

Carriers are initial segments ``{0, ..., n-1}`` of the naturals, so a subset
is stored as a bitmask and the powerset of a small carrier can be scanned
exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    CarrierMismatch,
    IndexOutOfRange,
    MissingCover,
    NotAnEquivalence,
    OracleBoundExceeded,
    ParseError,
)

DEFAULT_ORACLE_BOUND = 12


# ---------------------------------------------------------------------------
# Three-valued answers


@dataclass(frozen=True)
class TriBool:
    kind: str  # "yes" | "no" | "unknown"
    fuel_spent: int = 0

    def __bool__(self):
        raise TypeError("TriBool has no truth value; compare with YES/NO")

    @property
    def is_yes(self):
        return self.kind == "yes"

    @property
    def is_no(self):
        return self.kind == "no"

    @property
    def is_unknown(self):
        return self.kind == "unknown"

    def __str__(self):
        if self.kind == "unknown":
            return f"UNKNOWN(fuel={self.fuel_spent})"
        return self.kind.upper()


YES = TriBool("yes")
NO = TriBool("no")


def unknown(fuel_spent=0):
    return TriBool("unknown", fuel_spent)


def tri(b: bool) -> TriBool:
    return YES if b else NO


def tri_not(t: TriBool) -> TriBool:
    if t.is_unknown:
        return t
    return NO if t.is_yes else YES


def tri_all(items: Iterable[TriBool | Callable[[], TriBool]]) -> TriBool:
    """Kleene conjunction; stops at the first NO. Thunks are forced lazily."""
    pending = None
    for item in items:
        t = item() if callable(item) else item
        if t.is_no:
            return NO
        if t.is_unknown and pending is None:
            pending = t
    return pending if pending is not None else YES


def tri_any(items: Iterable[TriBool | Callable[[], TriBool]]) -> TriBool:
    pending = None
    for item in items:
        t = item() if callable(item) else item
        if t.is_yes:
            return YES
        if t.is_unknown and pending is None:
            pending = t
    return pending if pending is not None else NO


# ---------------------------------------------------------------------------
# Subsets


@dataclass(frozen=True)
class Subset:
    carrier_size: int
    bits: int = 0

    def __post_init__(self):
        if self.carrier_size < 0:
            raise ValueError("carrier size must be non-negative")
        if self.bits >> self.carrier_size:
            raise IndexOutOfRange(
                f"subset has members outside carrier of size {self.carrier_size}")

    @classmethod
    def of(cls, carrier_size: int, members: Iterable[int] = ()) -> "Subset":
        bits = 0
        for m in members:
            if m < 0 or m >= carrier_size:
                raise IndexOutOfRange(f"element {m} not in carrier of size {carrier_size}")
            bits |= 1 << m
        return cls(carrier_size, bits)

    @classmethod
    def full(cls, carrier_size: int) -> "Subset":
        return cls(carrier_size, (1 << carrier_size) - 1)

    @classmethod
    def empty(cls, carrier_size: int) -> "Subset":
        return cls(carrier_size, 0)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.carrier_size) if self.bits >> i & 1)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.carrier_size and bool(self.bits >> x & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def _check(self, other: "Subset"):
        if other.carrier_size != self.carrier_size:
            raise CarrierMismatch(
                f"carrier sizes differ: {self.carrier_size} vs {other.carrier_size}")

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.carrier_size, self.bits | other.bits)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.carrier_size, self.bits & other.bits)

    def complement(self) -> "Subset":
        return Subset(self.carrier_size, ((1 << self.carrier_size) - 1) & ~self.bits)

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def add(self, x: int) -> "Subset":
        return Subset.of(self.carrier_size, self.members + (x,))

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def subset_algebra(op: str, *args):
    """Dispatch the finite set-algebra operations by name.

    ``member`` takes ``(element, subset)``; every other operation takes
    subsets sharing one carrier.
    """
    if op == "member":
        x, v = args
        return x in v
    subsets = args
    for s in subsets[1:]:
        subsets[0]._check(s)
    if op == "union":
        return subsets[0] | subsets[1]
    if op == "intersect":
        return subsets[0] & subsets[1]
    if op == "complement":
        (v,) = subsets
        return v.complement()
    if op == "subseteq":
        return subsets[0].issubset(subsets[1])
    raise ValueError(f"unknown subset operation {op!r}")


def enumerate_subsets(carrier_size: int, bound: int = DEFAULT_ORACLE_BOUND) -> Iterator[Subset]:
    """All subsets of the carrier in bitmask order."""
    if carrier_size > bound:
        raise OracleBoundExceeded(f"carrier {carrier_size} exceeds oracle bound {bound}")
    for bits in range(1 << carrier_size):
        yield Subset(carrier_size, bits)


# ---------------------------------------------------------------------------
# Axiom-sets


@dataclass(frozen=True)
class AxiomSet:
    """Generation data: base ``{0..n-1}``, index sets ``I(x) = {0..k_x-1}``
    and covering subsets ``covers[x][j] = C(x, j)``."""

    carrier_size: int
    covers: tuple[tuple[Subset, ...], ...]

    def __post_init__(self):
        if len(self.covers) != self.carrier_size:
            raise MissingCover(
                f"expected index data for {self.carrier_size} elements, got {len(self.covers)}")
        for x, row in enumerate(self.covers):
            for j, c in enumerate(row):
                if not isinstance(c, Subset):
                    raise MissingCover(f"C({x},{j}) is not a subset")
                if c.carrier_size != self.carrier_size:
                    raise IndexOutOfRange(f"C({x},{j}) lives on a different carrier")

    # engines memoize on axiom-sets, so hash the nested tuples only once
    @cached_property
    def _hash(self) -> int:
        return hash((self.carrier_size, self.covers))

    def __hash__(self) -> int:
        return self._hash

    @property
    def index_counts(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.covers)

    def indices(self, x: int) -> range:
        return range(len(self.covers[x]))

    def cover(self, x: int, j: int) -> Subset:
        return self.covers[x][j]

    def full(self) -> Subset:
        return Subset.full(self.carrier_size)

    def empty(self) -> Subset:
        return Subset.empty(self.carrier_size)

    def subset(self, members: Iterable[int] = ()) -> Subset:
        return Subset.of(self.carrier_size, members)

    def to_text(self) -> str:
        lines = [f"base {self.carrier_size}"]
        for x, row in enumerate(self.covers):
            for j, c in enumerate(row):
                body = " ".join(map(str, c.members))
                lines.append(f"cover {x} {j} :" + (" " + body if body else ""))
        return "\n".join(lines) + "\n"


def validate_axiom_set(carrier_size: int, index_counts: Sequence[int],
                       covers: dict[tuple[int, int], Iterable[int]]) -> AxiomSet:
    """Build an :class:`AxiomSet` from raw data, checking every invariant."""
    if carrier_size < 0:
        raise IndexOutOfRange("negative carrier size")
    if len(index_counts) != carrier_size:
        raise MissingCover("index counts must list every element of the carrier")
    for (x, j) in covers:
        if not (0 <= x < carrier_size) or not (0 <= j < index_counts[x]):
            raise IndexOutOfRange(f"cover C({x},{j}) has no declared index")
    rows = []
    for x in range(carrier_size):
        row = []
        for j in range(index_counts[x]):
            if (x, j) not in covers:
                raise MissingCover(f"index {j} of element {x} has no cover")
            members = list(covers[(x, j)])
            for m in members:
                if not (0 <= m < carrier_size):
                    raise IndexOutOfRange(f"C({x},{j}) mentions {m}, outside carrier {carrier_size}")
            row.append(Subset.of(carrier_size, members))
        rows.append(tuple(row))
    return AxiomSet(carrier_size, tuple(rows))


def axiom_set(carrier_size: int, covers: dict[int, Sequence[Iterable[int]]] | None = None) -> AxiomSet:
    """Convenience builder: ``covers[x]`` lists ``C(x,0), C(x,1), ...``."""
    covers = covers or {}
    counts = [len(covers.get(x, ())) for x in range(carrier_size)]
    flat = {(x, j): c for x, cs in covers.items() for j, c in enumerate(cs)}
    return validate_axiom_set(carrier_size, counts, flat)


def ex1() -> AxiomSet:
    """The worked fixture: I(0)={0}, C(0,0)={1,2}; I(1)=∅; I(2)={0}, C(2,0)=∅."""
    return axiom_set(3, {0: [[1, 2]], 2: [[]]})


def _tokens_with_cols(line: str):
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield tok, col + 1
        col += len(tok)


def _nat(tok: str, lineno: int, col: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"expected a natural number, got {tok!r}", lineno, col)
    return int(tok)


def parse_axiom_set(text: str) -> AxiomSet:
    """Parse the line-oriented ``base``/``cover`` format."""
    base = None
    covers: dict[tuple[int, int], list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens_with_cols(line))
        if not toks:
            continue
        head, hcol = toks[0]
        if head == "base":
            if base is not None:
                raise ParseError("duplicate base line", lineno, hcol)
            if len(toks) != 2:
                raise ParseError("expected 'base <n>'", lineno, hcol)
            base = _nat(toks[1][0], lineno, toks[1][1])
        elif head == "cover":
            if base is None:
                raise ParseError("cover line before base line", lineno, hcol)
            if len(toks) < 4 or toks[3][0] != ":":
                raise ParseError("expected 'cover <x> <j> : <members>'", lineno, hcol)
            x = _nat(toks[1][0], lineno, toks[1][1])
            j = _nat(toks[2][0], lineno, toks[2][1])
            if (x, j) in covers:
                raise ParseError(f"duplicate cover for ({x},{j})", lineno, hcol)
            covers[(x, j)] = [_nat(t, lineno, c) for t, c in toks[4:]]
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)
    if base is None:
        raise ParseError("missing 'base <n>' line", 1, 1)
    counts = [0] * base
    for (x, j) in covers:
        if x >= base:
            raise IndexOutOfRange(f"cover for element {x} outside carrier {base}")
        counts[x] = max(counts[x], j + 1)
    return validate_axiom_set(base, counts, covers)


# ---------------------------------------------------------------------------
# Lazily generated axiom-sets


@dataclass(frozen=True)
class LazyAxiomSet:
    """Axiom-set over the naturals given by generator functions.

    ``index_gen(x)`` returns the finite list of indices of ``x`` and
    ``cover_gen(x, j)`` the finite list of naturals in ``C(x, j)``.  Both
    must be deterministic.
    """

    index_gen: Callable[[int], Sequence]
    cover_gen: Callable[[int, object], Iterable[int]]
    fuel: int = 10_000

    @classmethod
    def from_finite(cls, ax: AxiomSet, fuel: int = 10_000) -> "LazyAxiomSet":
        return cls(lambda x: list(ax.indices(x)) if x < ax.carrier_size else [],
                   lambda x, j: ax.cover(x, j).members, fuel)


# ---------------------------------------------------------------------------
# Setoids


@dataclass(frozen=True)
class Setoid:
    carrier_size: int
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = self.carrier_size
        for a, b in self.pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise IndexOutOfRange(f"related pair ({a},{b}) outside carrier {n}")
        for a in range(n):
            if (a, a) not in self.pairs:
                raise NotAnEquivalence(f"relation is not reflexive at {a}")
        for a, b in self.pairs:
            if (b, a) not in self.pairs:
                raise NotAnEquivalence(f"relation is not symmetric at ({a},{b})")
        for a, b in self.pairs:
            for c in range(n):
                if (b, c) in self.pairs and (a, c) not in self.pairs:
                    raise NotAnEquivalence(f"relation is not transitive at ({a},{b},{c})")

    def rel(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs

    def related(self, a: int) -> list[int]:
        return [b for b in range(self.carrier_size) if (a, b) in self.pairs]

    @classmethod
    def discrete(cls, n: int) -> "Setoid":
        return cls(n, frozenset((a, a) for a in range(n)))

    @classmethod
    def total(cls, n: int) -> "Setoid":
        return cls(n, frozenset((a, b) for a in range(n) for b in range(n)))

    @classmethod
    def from_partition(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Setoid":
        pairs = set()
        for block in blocks:
            block = list(block)
            pairs.update((a, b) for a in block for b in block)
        return cls(n, frozenset(pairs))


def parse_setoid(text: str) -> Setoid:
    base = None
    pairs = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = list(_tokens_with_cols(raw.split("#", 1)[0]))
        if not toks:
            continue
        head, hcol = toks[0]
        if head == "base":
            if len(toks) != 2:
                raise ParseError("expected 'base <n>'", lineno, hcol)
            base = _nat(toks[1][0], lineno, toks[1][1])
        elif head == "rel":
            if base is None:
                raise ParseError("rel line before base line", lineno, hcol)
            if len(toks) != 3:
                raise ParseError("expected 'rel <a> <b>'", lineno, hcol)
            pairs.add((_nat(toks[1][0], lineno, toks[1][1]), _nat(toks[2][0], lineno, toks[2][1])))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)
    if base is None:
        raise ParseError("missing 'base <n>' line", 1, 1)
    return Setoid(base, frozenset(pairs))
