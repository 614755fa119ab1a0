"""Universe codes: naturals tagged by the first pairing component.

======  ==========================================  ==========================
tag     code                                        fields
======  ==========================================  ==========================
0       ``p(0, j)`` for ``j`` in 0, 1, 2             ``n0``, ``n1``, naturals
1       ``p(1, p(k, e))``                           dependent sum over ``k``
2       ``p(2, p(k, e))``                           dependent product
3       ``p(3, p(n, m))``                           binary sum
4       ``p(4, n)``                                 lists over ``n``
5       ``p(5, p(n, m, k))``                        identity ``m = k`` in ``n``
6       ``p(6, p(a, v, s, i, c))``                  cover ``a ◁ v``
7       ``p(7, p(a, r))``                           reflexivity proof
8       ``p(8, p(a, j, r))``                        transitivity proof
9       ``p(9, p(a, v, s, i, c))``                  positivity ``a ⋉ v``
10      ``p(10, p(a, b))``                          universe over family ``b``
======  ==========================================  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pairing import pair, tuple_code, unpair, untuple

N0 = pair(0, 0)
N1 = pair(0, 1)
NAT = pair(0, 2)


def sigma(k: int, e: int) -> int:
    return pair(1, pair(k, e))


def pi(k: int, e: int) -> int:
    return pair(2, pair(k, e))


def plus(n: int, m: int) -> int:
    return pair(3, pair(n, m))


def lst(n: int) -> int:
    return pair(4, n)


def ident(n: int, m: int, k: int) -> int:
    return pair(5, tuple_code(n, m, k))


def cover(a: int, v: int, s: int, i: int, c: int) -> int:
    return pair(6, tuple_code(a, v, s, i, c))


def rf(a: int, r: int) -> int:
    return pair(7, pair(a, r))


def tr(a: int, j: int, r: int) -> int:
    return pair(8, tuple_code(a, j, r))


def pos(a: int, v: int, s: int, i: int, c: int) -> int:
    return pair(9, tuple_code(a, v, s, i, c))


def universe(a: int, b: int) -> int:
    return pair(10, pair(a, b))


TAG_NAMES = {0: "base", 1: "sigma", 2: "pi", 3: "plus", 4: "list", 5: "id", 6: "cover",
             7: "rf", 8: "tr", 9: "pos", 10: "universe"}
_FIELDS = {1: ("k", "e"), 2: ("k", "e"), 3: ("n", "m"), 5: ("n", "m", "k"),
           6: ("a", "v", "s", "i", "c"), 7: ("a", "r"), 8: ("a", "j", "r"),
           9: ("a", "v", "s", "i", "c"), 10: ("a", "b")}


@dataclass(frozen=True)
class Classified:
    tag: int | None  # None for junk
    name: str
    fields: dict = field(default_factory=dict)

    @property
    def is_junk(self):
        return self.tag is None


def classify_code(n: int) -> Classified:
    tag, payload = unpair(n)
    if tag == 0:
        names = {0: "n0", 1: "n1", 2: "nat"}
        if payload in names:
            return Classified(0, names[payload], {"j": payload})
        return Classified(None, "junk", {"tag": tag, "payload": payload})
    if tag == 4:
        return Classified(4, "list", {"n": payload})
    if tag in _FIELDS:
        names = _FIELDS[tag]
        vals = unpair(payload) if len(names) == 2 else untuple(payload, len(names))
        return Classified(tag, TAG_NAMES[tag], dict(zip(names, vals)))
    return Classified(None, "junk", {"tag": tag, "payload": payload})


def show_numeral(n: int, limit: int = 60) -> str:
    """Decimal form, elided in the middle when longer than ``limit`` digits."""
    if n.bit_length() < 3 * limit:
        text = str(n)
        if len(text) <= limit:
            return text
    bits = n.bit_length()
    low = str(n % 10**12).rjust(12, "0")
    return f"<{bits}-bit numeral ...{low}>"


def describe(n: int, depth: int = 3) -> str:
    """Decoded tag tree, expanding nested set codes up to ``depth``."""
    c = classify_code(n)
    if c.is_junk:
        return f"junk({show_numeral(n)})"
    if c.tag == 0:
        return c.name
    if depth <= 0:
        return f"{c.name}(...)"
    nested = {"k", "n", "m", "s"} if c.tag in (1, 2, 3, 4, 5, 6, 9) else set()
    parts = []
    for k, v in c.fields.items():
        if k in nested and not (c.tag == 5 and k != "n"):
            parts.append(f"{k}={describe(v, depth - 1)}")
        else:
            parts.append(f"{k}={show_numeral(v)}")
    return f"{c.name}(" + ", ".join(parts) + ")"
