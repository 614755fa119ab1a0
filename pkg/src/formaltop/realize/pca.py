"""A partial combinatory algebra on the naturals.

Programs are untyped lambda terms with numerals, a few arithmetic and
pairing primitives, natural-number recursion and a lazy conditional.
Closed programs are Gödel-numbered by a prefix token stream in which each
token ``t`` is written as the Elias-gamma code of ``t + 1``; the program
code is the integer whose binary expansion is ``1`` followed by those bits.
Numbers that do not decode to a closed program are junk and diverge when
applied.

Evaluation is a CEK machine with a step budget.  Every value is read back
to a natural: numerals are themselves, a closure becomes the code of the
closed lambda obtained by substituting its environment.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import count
from typing import Union

from .pairing import pair as _pair, unpair as _unpair


# ---------------------------------------------------------------------------
# Named syntax


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Prim:
    op: str


@dataclass(frozen=True)
class If:
    cond: "Term"
    then: "Term"
    orelse: "Term"


Term = Union[Var, Lam, App, Num, Prim, If]

PRIM_ARITY = {"succ": 1, "pred": 1, "pair": 2, "fst": 1, "snd": 1, "eq": 2, "natrec": 3}
PRIM_IDS = {name: i for i, name in enumerate(PRIM_ARITY)}
PRIM_NAMES = {i: name for name, i in PRIM_IDS.items()}


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def lam(*names_and_body) -> Term:
    *names, body = names_and_body
    for n in reversed(names):
        body = Lam(n, body)
    return body


def let(name: str, value: Term, body: Term) -> Term:
    return App(Lam(name, body), value)


def num(k: int) -> Num:
    return Num(k)


def prim(op: str, *args: Term) -> Term:
    if op not in PRIM_ARITY:
        raise ValueError(f"unknown primitive {op!r}")
    return app(Prim(op), *args)


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, If):
        return free_vars(t.cond) | free_vars(t.then) | free_vars(t.orelse)
    return frozenset()


_fresh_counter = count()


def fresh(avoid, base="v") -> str:
    while True:
        name = f"{base}%{next(_fresh_counter)}"
        if name not in avoid:
            return name


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution ``t[value/name]``."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(subst(t.fn, name, value), subst(t.arg, name, value))
    if isinstance(t, If):
        return If(subst(t.cond, name, value), subst(t.then, name, value), subst(t.orelse, name, value))
    if isinstance(t, Lam):
        if t.var == name or name not in free_vars(t.body):
            return t
        fv = free_vars(value)
        if t.var in fv:
            new = fresh(fv | free_vars(t.body) | {name}, t.var.split("%")[0])
            return Lam(new, subst(subst(t.body, t.var, Var(new)), name, value))
        return Lam(t.var, subst(t.body, name, value))
    return t


# ---------------------------------------------------------------------------
# De Bruijn form: ("v", i) ("l", body) ("a", f, x) ("n", k) ("p", op) ("i", c, t, e)


def to_debruijn(t: Term, scope=()) -> tuple:
    if isinstance(t, Var):
        for i, n in enumerate(reversed(scope)):
            if n == t.name:
                return ("v", i)
        raise ValueError(f"free variable {t.name!r} in a program")
    if isinstance(t, Lam):
        return ("l", to_debruijn(t.body, scope + (t.var,)))
    if isinstance(t, App):
        return ("a", to_debruijn(t.fn, scope), to_debruijn(t.arg, scope))
    if isinstance(t, Num):
        return ("n", t.value)
    if isinstance(t, Prim):
        return ("p", PRIM_IDS[t.op])
    if isinstance(t, If):
        return ("i", to_debruijn(t.cond, scope), to_debruijn(t.then, scope), to_debruijn(t.orelse, scope))
    raise TypeError(f"not a program term: {t!r}")


def alpha_equal(a: Term, b: Term) -> bool:
    fv = sorted(free_vars(a) | free_vars(b))
    wrap_a, wrap_b = a, b
    for n in reversed(fv):
        wrap_a, wrap_b = Lam(n, wrap_a), Lam(n, wrap_b)
    return to_debruijn(wrap_a) == to_debruijn(wrap_b)


# ---------------------------------------------------------------------------
# Gödel numbering


def _gamma(x: int) -> str:
    b = bin(x)[2:]
    return "0" * (len(b) - 1) + b


def _tokens(d: tuple, out: list):
    tag = d[0]
    if tag == "v":
        out += (0, d[1])
    elif tag == "l":
        out.append(1)
        _tokens(d[1], out)
    elif tag == "a":
        out.append(2)
        _tokens(d[1], out)
        _tokens(d[2], out)
    elif tag == "n":
        out += (3, d[1])
    elif tag == "p":
        out += (4, d[1])
    else:
        out.append(5)
        _tokens(d[1], out)
        _tokens(d[2], out)
        _tokens(d[3], out)


def encode_debruijn(d: tuple) -> int:
    toks: list[int] = []
    _tokens(d, toks)
    return int("1" + "".join(_gamma(t + 1) for t in toks), 2)


def encode(t: Term) -> int:
    """Gödel number of a closed program."""
    return encode_debruijn(to_debruijn(t))


class _Junk(Exception):
    pass


@lru_cache(maxsize=4096)
def decode(code: int):
    """De Bruijn program for ``code``, or ``None`` if the code is junk."""
    if code < 2:
        return None
    bits = bin(code)[3:]
    pos = 0

    def token():
        nonlocal pos
        z = 0
        while pos < len(bits) and bits[pos] == "0":
            z += 1
            pos += 1
        if pos + z + 1 > len(bits):
            raise _Junk
        val = int(bits[pos:pos + z + 1], 2)
        pos += z + 1
        return val - 1

    def term(depth):
        tag = token()
        if tag == 0:
            i = token()
            if i >= depth:
                raise _Junk
            return ("v", i)
        if tag == 1:
            return ("l", term(depth + 1))
        if tag == 2:
            return ("a", term(depth), term(depth))
        if tag == 3:
            return ("n", token())
        if tag == 4:
            op = token()
            if op not in PRIM_NAMES:
                raise _Junk
            return ("p", op)
        if tag == 5:
            return ("i", term(depth), term(depth), term(depth))
        raise _Junk

    try:
        d = term(0)
    except (_Junk, RecursionError):
        return None
    if pos != len(bits):
        return None
    return d


def from_debruijn(d: tuple, scope=()) -> Term:
    tag = d[0]
    if tag == "v":
        return Var(scope[-1 - d[1]])
    if tag == "l":
        name = f"x{len(scope)}"
        return Lam(name, from_debruijn(d[1], scope + (name,)))
    if tag == "a":
        return App(from_debruijn(d[1], scope), from_debruijn(d[2], scope))
    if tag == "n":
        return Num(d[1])
    if tag == "p":
        return Prim(PRIM_NAMES[d[1]])
    return If(from_debruijn(d[1], scope), from_debruijn(d[2], scope), from_debruijn(d[3], scope))


def decode_term(code: int) -> Term | None:
    d = decode(code)
    return None if d is None else from_debruijn(d)


# ---------------------------------------------------------------------------
# Evaluation


class Divergent:
    """Result of an application that did not finish within its budget."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DIVERGENT"


DIVERGENT = Divergent()


class _OutOfFuel(Exception):
    pass


class Closure:
    __slots__ = ("body", "env", "code")

    def __init__(self, body, env):
        self.body = body
        self.env = env
        self.code = None


class PrimVal:
    __slots__ = ("op", "args", "code")

    def __init__(self, op, args):
        self.op = op
        self.args = args
        self.code = None


def _lookup(env, i):
    while i:
        env = env[1]
        i -= 1
    return env[0]


def _readback(d, env, depth):
    tag = d[0]
    if tag == "v":
        if d[1] < depth:
            return d
        return ("n", to_nat(_lookup(env, d[1] - depth)))
    if tag == "l":
        return ("l", _readback(d[1], env, depth + 1))
    if tag == "a":
        return ("a", _readback(d[1], env, depth), _readback(d[2], env, depth))
    if tag == "i":
        return ("i", _readback(d[1], env, depth), _readback(d[2], env, depth), _readback(d[3], env, depth))
    return d


def to_nat(v) -> int:
    """Read a value back as a natural number."""
    if isinstance(v, int):
        return v
    if v.code is None:
        if isinstance(v, Closure):
            v.code = encode_debruijn(("l", _readback(v.body, v.env, 1)))
        else:
            d = ("p", PRIM_IDS[v.op])
            for a in v.args:
                d = ("a", d, ("n", to_nat(a)))
            v.code = encode_debruijn(d)
    return v.code


class Machine:
    """CEK evaluator sharing one step budget across calls."""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > self.fuel:
            raise _OutOfFuel

    def run(self, d, env=None):
        stack: list = []
        mode_eval = True
        ctrl, cenv, val = d, env, None
        while True:
            self._tick()
            if mode_eval:
                tag = ctrl[0]
                if tag == "v":
                    val, mode_eval = _lookup(cenv, ctrl[1]), False
                elif tag == "l":
                    val, mode_eval = Closure(ctrl[1], cenv), False
                elif tag == "a":
                    stack.append(("arg", ctrl[2], cenv))
                    ctrl = ctrl[1]
                elif tag == "n":
                    val, mode_eval = ctrl[1], False
                elif tag == "p":
                    val, mode_eval = PrimVal(PRIM_NAMES[ctrl[1]], ()), False
                else:
                    stack.append(("if", ctrl[2], ctrl[3], cenv))
                    ctrl = ctrl[1]
                continue
            if not stack:
                return val
            frame = stack.pop()
            kind = frame[0]
            if kind == "arg":
                stack.append(("fn", val))
                ctrl, cenv, mode_eval = frame[1], frame[2], True
            elif kind == "fn":
                ctrl, cenv, val, mode_eval = self._apply(frame[1], val, stack)
            elif kind == "with":
                ctrl, cenv, val, mode_eval = self._apply(val, frame[1], stack)
            elif kind == "if":
                taken = frame[1] if to_nat(val) != 0 else frame[2]
                ctrl, cenv, mode_eval = taken, frame[3], True
            else:  # natrec: frame = ("rec", step, k, n)
                _, step, k, n = frame
                if k == n:
                    continue
                stack.append(("rec", step, k + 1, n))
                stack.append(("with", val))
                ctrl, cenv, val, mode_eval = self._apply(step, k, stack)

    def _apply(self, f, x, stack):
        """Returns the next machine registers ``(ctrl, env, val, eval?)``."""
        if isinstance(f, Closure):
            return f.body, (x, f.env), None, True
        if isinstance(f, PrimVal):
            args = f.args + (x,)
            if len(args) < PRIM_ARITY[f.op]:
                return None, None, PrimVal(f.op, args), False
            return self._prim(f.op, args, stack)
        d = decode(f)
        if d is None:
            raise _OutOfFuel  # junk codes never return
        stack.append(("with", x))
        return d, None, None, True

    def _prim(self, op, args, stack):
        if op == "natrec":
            n, base, step = args
            n = to_nat(n)
            if n == 0:
                return None, None, base, False
            stack.append(("rec", step, 1, n))
            stack.append(("with", base))
            return self._apply(step, 0, stack)
        nums = [to_nat(a) for a in args]
        if op == "succ":
            out = nums[0] + 1
        elif op == "pred":
            out = max(0, nums[0] - 1)
        elif op == "pair":
            out = _pair(nums[0], nums[1])
        elif op == "fst":
            out = _unpair(nums[0])[0]
        elif op == "snd":
            out = _unpair(nums[0])[1]
        else:  # eq
            out = 1 if nums[0] == nums[1] else 0
        return None, None, out, False


def evaluate(t: Term, fuel: int = 100_000):
    """Value of a closed program as a natural, or :data:`DIVERGENT`."""
    return run_debruijn(to_debruijn(t), fuel)


def run_debruijn(d, fuel: int):
    m = Machine(fuel)
    try:
        return to_nat(m.run(d))
    except _OutOfFuel:
        return DIVERGENT


def kleene_apply(e: int, *args: int, fuel: int = 100_000):
    """``{e}(n1, ..., nk)`` with a shared step budget."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    d = ("n", e)
    for a in args:
        d = ("a", d, ("n", a))
    return run_debruijn(d, fuel)


def kleene_apply_counted(e: int, args, fuel: int):
    """Like :func:`kleene_apply` but also reports steps used."""
    d = ("n", e)
    for a in args:
        d = ("a", d, ("n", a))
    m = Machine(fuel)
    try:
        return to_nat(m.run(d)), m.steps
    except _OutOfFuel:
        return DIVERGENT, m.steps


def lambda_encode(t: Term) -> int:
    """Code of a closed term; open terms must be closed by the caller."""
    fv = free_vars(t)
    if fv:
        raise ValueError(f"cannot encode open term; free variables {sorted(fv)}")
    return encode(t)


# ---------------------------------------------------------------------------
# Library programs

IDENTITY = lam("x", Var("x"))
FST = Prim("fst")
SND = Prim("snd")
PAIR = Prim("pair")


def pair_t(a: Term, b: Term) -> Term:
    return app(PAIR, a, b)


def fst_t(a: Term) -> Term:
    return App(FST, a)


def snd_t(a: Term) -> Term:
    return App(SND, a)


def tuple_t(*xs: Term) -> Term:
    acc = pair_t(xs[0], xs[1])
    for x in xs[2:]:
        acc = pair_t(acc, x)
    return acc


def z_combinator() -> Term:
    """Call-by-value fixpoint: ``Z f = f (λv. Z f v)``."""
    inner = lam("x%z", App(Var("f%z"), lam("v%z", app(Var("x%z"), Var("x%z"), Var("v%z")))))
    return lam("f%z", App(inner, inner))


def fix(name: str, body: Term) -> Term:
    """``fix name. body`` for a ``body`` that is a lambda."""
    return App(z_combinator(), Lam(name, body))


def table(var: str, entries, default: Term = Num(0)) -> Term:
    """``if var = k1 then v1 else if ... else default`` for ``(k, v)`` entries."""
    out = default
    for k, v in reversed(list(entries)):
        out = If(prim("eq", Var(var), Num(k)), v, out)
    return out
