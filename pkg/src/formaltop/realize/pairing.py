"""Cantor pairing ``p(n, m) = (n+m)(n+m+1)/2 + m``, tuples and list codes.

Tuples nest to the left: ``p(a, b, c) = p(p(a, b), c)``.  Finite lists use
``nil = 0`` and ``cons(h, t) = 1 + p(h, t)``, which is a bijection between
lists of naturals and naturals.
"""

from math import isqrt


def pair(n: int, m: int) -> int:
    if n < 0 or m < 0:
        raise ValueError("pairing is defined on naturals only")
    s = n + m
    return s * (s + 1) // 2 + m


def unpair(k: int) -> tuple[int, int]:
    if k < 0:
        raise ValueError("pairing is defined on naturals only")
    w = (isqrt(8 * k + 1) - 1) // 2
    m = k - w * (w + 1) // 2
    return w - m, m


def proj(i: int, k: int) -> int:
    return unpair(k)[i]


def p0(k: int) -> int:
    return unpair(k)[0]


def p1(k: int) -> int:
    return unpair(k)[1]


def tuple_code(*xs: int) -> int:
    if len(xs) < 2:
        raise ValueError("tuples have at least two components")
    acc = pair(xs[0], xs[1])
    for x in xs[2:]:
        acc = pair(acc, x)
    return acc


def untuple(k: int, n: int) -> tuple[int, ...]:
    if n < 2:
        raise ValueError("tuples have at least two components")
    out = []
    for _ in range(n - 2):
        k, last = unpair(k)
        out.append(last)
    a, b = unpair(k)
    return (a, b, *reversed(out))


def tuple_proj(n: int, i: int, k: int) -> int:
    return untuple(k, n)[i]


def list_encode(xs) -> int:
    code = 0
    for x in reversed(list(xs)):
        code = 1 + pair(x, code)
    return code


def list_decode(code: int) -> list[int]:
    out = []
    while code:
        h, code = unpair(code - 1)
        out.append(h)
    return out


def list_length(code: int) -> int:
    return len(list_decode(code))


def list_component(code: int, i: int) -> int:
    return list_decode(code)[i]
