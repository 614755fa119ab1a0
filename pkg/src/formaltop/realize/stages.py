"""Staged set codes and membership over the naturals.

``Set_α(m)`` and ``k ε_α m`` are computed clause by clause.  A stage is
either a natural ``n`` (so ``β ∈ α`` ranges over ``0..n-1``) or ``None``,
meaning "at some stage": the relation is then evaluated by structural
recursion on the code, with a dependency cycle counting as failure because
every clause is inductive.

Quantifiers over members of a code are exact when the code has a finite,
enumerable extension.  Otherwise a fixed number of candidates is sampled:
a counterexample refutes, but success only yields UNKNOWN.
"""

from __future__ import annotations

from typing import Callable

from ..core import NO, YES, TriBool, tri, tri_all, tri_any, unknown
from ..errors import FamConditionFailed, StarConditionFailed
from . import codes
from .pairing import list_decode, pair, unpair
from .pca import DIVERGENT, decode, kleene_apply_counted, run_debruijn


def _mentions_var(d, depth=0) -> bool:
    tag = d[0]
    if tag == "v":
        return d[1] >= depth
    if tag == "l":
        return _mentions_var(d[1], depth + 1)
    if tag == "a":
        return _mentions_var(d[1], depth) or _mentions_var(d[2], depth)
    if tag == "i":
        return any(_mentions_var(x, depth) for x in d[1:])
    return False


class StageMachine:
    """Memoized clause evaluator; confine one instance to one worker."""

    def __init__(self, stage: int | None = None, fuel: int = 10_000,
                 sample_bound: int = 6, node_budget: int = 5_000):
        self.stage = stage
        self.fuel = fuel
        self.sample_bound = sample_bound
        self.node_budget = node_budget
        self.spent = 0
        self.set_table: dict = {}
        self.mem_table: dict = {}
        self._members: dict = {}
        self._apply_memo: dict = {}
        self._const_memo: dict = {}
        self._v_memo: dict = {}
        self._z_memo: dict = {}
        self._active: set = set()

    # -- helpers -----------------------------------------------------------

    def _unknown(self) -> TriBool:
        return unknown(self.spent)

    def apply(self, e: int, *args: int):
        """``{e}(args)`` or :data:`DIVERGENT` when the budget runs out."""
        key = (e, args)
        if key in self._apply_memo:
            return self._apply_memo[key]
        out, steps = kleene_apply_counted(e, args, self.fuel)
        self.spent += steps
        self._apply_memo[key] = out
        return out

    def _constant_value(self, e: int):
        """If ``e`` codes ``λx. t`` with ``t`` closed, the value of ``t``."""
        if e in self._const_memo:
            return self._const_memo[e]
        d = decode(e)
        out = None
        if d is not None and d[0] == "l" and not _mentions_var(d[1]):
            val = run_debruijn(d[1], self.fuel)
            out = None if val is DIVERGENT else val
        self._const_memo[e] = out
        return out

    def below(self, alpha):
        if alpha is None:
            return [None]
        return range(alpha)

    def _guard(self, key, compute, table) -> TriBool:
        if key in table:
            return table[key]
        if key in self._active:
            return NO
        self._active.add(key)
        try:
            out = compute()
        finally:
            self._active.discard(key)
        table[key] = out
        return out

    # -- finite extensions ---------------------------------------------------

    def members(self, m: int):
        """Finite list of candidate members of ``m``, or ``None`` if the
        extension is infinite or cannot be enumerated."""
        if m in self._members:
            return self._members[m]
        if ("members", m) in self._active:
            return None
        self._active.add(("members", m))
        try:
            out = self._members_of(m)
        finally:
            self._active.discard(("members", m))
        self._members[m] = out
        return out

    def _members_of(self, m: int):
        c = codes.classify_code(m)
        if c.is_junk:
            return []
        f = c.fields
        if c.tag == 0:
            return {0: [], 1: [0], 2: None}[f["j"]]
        if c.tag == 1:
            base = self.members(f["k"])
            if base is None:
                return None
            out = []
            for j in base:
                fiber = self.apply(f["e"], j)
                if fiber is DIVERGENT:
                    return None
                ms = self.members(fiber)
                if ms is None:
                    return None
                out.extend(pair(j, x) for x in ms)
            return out
        if c.tag == 2:
            base = self.members(f["k"])
            if base:
                for j in base:
                    fiber = self.apply(f["e"], j)
                    if fiber is not DIVERGENT and self.members(fiber) == []:
                        return []
            return None
        if c.tag == 3:
            left, right = self.members(f["n"]), self.members(f["m"])
            if left is None or right is None:
                return None
            return [pair(0, x) for x in left] + [pair(1, y) for y in right]
        if c.tag == 4:
            return [0] if self.members(f["n"]) == [] else None
        if c.tag == 5:
            return [f["m"]] if f["m"] == f["k"] else []
        if c.tag in (7, 8):
            return []
        return None

    def forall_members(self, k: int, beta, pred: Callable[[int], TriBool]) -> TriBool:
        """``(∀i ε_β k) pred(i)``."""
        cands = self.members(k)
        if cands is not None:
            def each(i):
                inside = self.mem(i, k, beta)
                if inside.is_no:
                    return YES
                got = pred(i)
                if inside.is_yes or got.is_yes:
                    return got
                return self._unknown()
            return tri_all(lambda i=i: each(i) for i in cands)
        for i in range(self.sample_bound):
            if self.mem(i, k, beta).is_yes and pred(i).is_no:
                return NO
        return self._unknown()

    # -- Set and membership -------------------------------------------------

    def is_set(self, m: int, stage="default") -> TriBool:
        alpha = self.stage if stage == "default" else stage
        return self._guard(("set", alpha, m), lambda: self._set_clause(m, alpha), self.set_table)

    def mem(self, k: int, m: int, stage="default") -> TriBool:
        alpha = self.stage if stage == "default" else stage
        return self._guard(("mem", alpha, k, m), lambda: self._mem_clause(k, m, alpha), self.mem_table)

    def fam(self, e: int, k: int, beta) -> TriBool:
        """``Set_β(k)`` and every ``{e}(j)`` for ``j ε_β k`` is a set at ``β``."""
        base = self.is_set(k, beta)
        if base.is_no:
            return NO
        const = self._constant_value(e)
        if const is not None:
            fiber = self.is_set(const, beta)
            if not fiber.is_no:
                return tri_all([base, fiber])
        return tri_all([base, lambda: self.forall_members(k, beta, lambda j: self._set_of_app(e, (j,), beta))])

    def _set_of_app(self, e, args, beta) -> TriBool:
        val = self.apply(e, *args)
        if val is DIVERGENT:
            return self._unknown()
        return self.is_set(val, beta)

    def _mem_of_app(self, x, e, args, beta) -> TriBool:
        val = self.apply(e, *args)
        if val is DIVERGENT:
            return self._unknown()
        return self.mem(x, val, beta)

    def _set_clause(self, m: int, alpha) -> TriBool:
        c = codes.classify_code(m)
        if c.is_junk or c.tag in (7, 8):
            return NO
        f = c.fields
        if c.tag == 0:
            return YES
        below = self.below(alpha)
        if c.tag in (1, 2):
            return tri_any(lambda b=b: self.fam(f["e"], f["k"], b) for b in below)
        if c.tag == 3:
            return tri_any(lambda b=b: tri_all([self.is_set(f["n"], b), lambda: self.is_set(f["m"], b)])
                           for b in below)
        if c.tag == 4:
            return tri_any(lambda b=b: self.is_set(f["n"], b) for b in below)
        if c.tag == 5:
            return tri_any(lambda b=b: self.is_set(f["n"], b) for b in below)
        if c.tag in (6, 9):
            return tri_any(lambda b=b: self.star(f, b) for b in below)
        return tri_any(lambda b=b: self.fam(f["b"], f["a"], b) for b in below)

    def _mem_clause(self, x: int, m: int, alpha) -> TriBool:
        c = codes.classify_code(m)
        if c.is_junk or c.tag in (7, 8):
            return NO
        f = c.fields
        if c.tag == 0:
            return tri(f["j"] == 2 or x < f["j"])
        below = self.below(alpha)
        if c.tag == 2:
            k, e = f["k"], f["e"]

            def at(b):
                return tri_all([self.fam(e, k, b), lambda: self.forall_members(
                    k, b, lambda i: self._pi_component(x, e, i, b))])
            return tri_any(lambda b=b: at(b) for b in below)
        if c.tag == 1:
            k, e = f["k"], f["e"]
            first, second = unpair(x)
            return tri_any(lambda b=b: tri_all([
                self.fam(e, k, b), lambda: self.mem(first, k, b),
                lambda: self._mem_of_app(second, e, (first,), b)]) for b in below)
        if c.tag == 3:
            side, inner = unpair(x)
            if side > 1:
                return NO
            target = f["n"] if side == 0 else f["m"]
            return tri_any(lambda b=b: tri_all([
                self.is_set(f["n"], b), lambda: self.is_set(f["m"], b),
                lambda: self.mem(inner, target, b)]) for b in below)
        if c.tag == 4:
            items = list_decode(x)
            return tri_any(lambda b=b: tri_all([self.is_set(f["n"], b)] + [
                lambda y=y: self.mem(y, f["n"], b) for y in items]) for b in below)
        if c.tag == 5:
            if not (x == f["m"] == f["k"]):
                return NO
            return tri_any(lambda b=b: tri_all([self.is_set(f["n"], b), lambda: self.mem(f["m"], f["n"], b)])
                           for b in below)
        if c.tag == 6:
            return tri_any(lambda b=b: tri_all([self.star(f, b), lambda: self.in_v(f, b, f["a"], x)])
                           for b in below)
        if c.tag == 9:
            return tri_any(lambda b=b: tri_all([self.star(f, b), lambda: self.in_w(f, b, f["a"], x)])
                           for b in below)
        return tri_any(lambda b=b: self.in_z(b, x) for b in below)

    def _pi_component(self, x, e, i, b) -> TriBool:
        val = self.apply(x, i)
        if val is DIVERGENT:
            return self._unknown()
        return self._mem_of_app(val, e, (i,), b)

    # -- cover and positivity codes -----------------------------------------

    def star(self, f: dict, beta) -> TriBool:
        s, i, c = f["s"], f["i"], f["c"]
        return tri_all([
            self.is_set(s, beta),
            lambda: self.mem(f["a"], s, beta),
            lambda: self.fam(f["v"], s, beta),
            lambda: self.fam(i, s, beta),
            lambda: self.forall_members(s, beta, lambda x: self._index_fams(c, i, x, s, beta)),
        ])

    def _index_fams(self, c, i, x, s, beta) -> TriBool:
        ix = self.apply(i, x)
        if ix is DIVERGENT:
            return self._unknown()

        def one(y):
            fam_code = self.apply(c, x, y)
            if fam_code is DIVERGENT:
                return self._unknown()
            return self.fam(fam_code, s, beta)
        return self.forall_members(ix, beta, one)

    def in_v(self, f: dict, beta, z: int, q: int) -> TriBool:
        """``p(z, q)`` in the least set closed under the rf/tr clauses."""
        key = ("V", beta, f["v"], f["s"], f["i"], f["c"], z, q)
        return self._guard(key, lambda: self._v_clause(f, beta, z, q), self._v_memo)

    def _v_clause(self, f, beta, z, q) -> TriBool:
        s, v, i, c = f["s"], f["v"], f["i"], f["c"]
        cq = codes.classify_code(q)
        if cq.tag == 7 and cq.fields["a"] == z:
            return tri_all([self.mem(z, s, beta), lambda: self._mem_of_app(cq.fields["r"], v, (z,), beta)])
        if cq.tag == 8 and cq.fields["a"] == z:
            j, r = cq.fields["j"], cq.fields["r"]

            def child(u):
                def under(t):
                    sub = self.apply(r, u, t)
                    if sub is DIVERGENT:
                        return self._unknown()
                    return self.in_v(f, beta, u, sub)
                cover_u = self.apply(c, z, j, u)
                if cover_u is DIVERGENT:
                    return self._unknown()
                return self.forall_members(cover_u, beta, under)

            return tri_all([
                self.mem(z, s, beta),
                lambda: self._mem_of_app(j, i, (z,), beta),
                lambda: self.forall_members(s, beta, child),
            ])
        return NO

    def in_w(self, f: dict, beta, a: int, q: int) -> TriBool:
        """``p(a, q)`` in the largest set satisfying the positivity clauses.

        Obligations are explored from ``(a, q)``; membership fails exactly
        when some reachable node fails its local conditions.
        """
        s, v, i, c = f["s"], f["v"], f["i"], f["c"]
        seen = {(a, q)}
        todo = [(a, q)]
        pending = None
        while todo:
            if len(seen) > self.node_budget:
                return self._unknown()
            z, qq = todo.pop()
            inside = self.mem(z, s, beta)
            if inside.is_no:
                continue
            if inside.is_unknown:
                pending = pending or inside
            head, tail = unpair(qq)
            local = [self._mem_of_app(head, v, (z,), beta)]
            idx = self.apply(i, z)
            if idx is DIVERGENT:
                local.append(self._unknown())
            else:
                succs = []

                def obligation(j):
                    w = self.apply(tail, j)
                    if w is DIVERGENT:
                        return self._unknown()
                    y, rest = unpair(w)
                    evidence, nxt = unpair(rest)
                    succs.append((y, nxt))
                    return tri_all([
                        self.mem(y, s, beta),
                        lambda: self._mem_of_app(evidence, c, (z, j, y), beta),
                    ])
                local.append(self.forall_members(idx, beta, obligation))
                for node in succs:
                    if node not in seen:
                        seen.add(node)
                        todo.append(node)
            verdict = tri_all(local)
            if verdict.is_no:
                return NO if not inside.is_unknown else self._unknown()
            if verdict.is_unknown:
                pending = pending or verdict
        return pending if pending is not None else YES

    # -- sub-universe codes --------------------------------------------------

    def in_z(self, beta, d: int) -> TriBool:
        return self._guard(("Z", beta, d), lambda: self._z_clause(beta, d), self._z_memo)

    def _z_clause(self, beta, d: int) -> TriBool:
        c = codes.classify_code(d)
        if c.is_junk:
            return NO
        f = c.fields
        if c.tag == 0:
            return YES
        if c.tag in (1, 2):
            n, m = f["k"], f["e"]

            def fibre(x):
                val = self.apply(m, x)
                if val is DIVERGENT:
                    return self._unknown()
                return self.in_z(beta, val)
            return tri_all([self.fam(m, n, beta), lambda: self.in_z(beta, n),
                            lambda: self.forall_members(n, beta, fibre)])
        if c.tag == 3:
            return tri_all([self.is_set(f["m"], beta), lambda: self.is_set(f["n"], beta),
                            lambda: self.in_z(beta, f["m"]), lambda: self.in_z(beta, f["n"])])
        if c.tag == 4:
            return tri_all([self.is_set(f["n"], beta), lambda: self.in_z(beta, f["n"])])
        if c.tag == 5:
            return tri_all([self.is_set(f["n"], beta), lambda: self.in_z(beta, f["n"])])
        return NO

    # -- checkers with preconditions ------------------------------------------

    def _payload(self, code_or_fields, tag):
        if isinstance(code_or_fields, dict):
            return code_or_fields
        c = codes.classify_code(code_or_fields)
        if c.tag != tag:
            raise ValueError(f"expected a tag-{tag} code")
        return c.fields

    def _checker(self, f, member, failure):
        pre = tri_any(lambda b=b: self.star(f, b) for b in self.below(self.stage))
        if pre.is_no:
            raise failure("the star conditions fail for this code")

        def check(a: int, q: int) -> TriBool:
            return tri_any(lambda b=b: tri_all([self.star(f, b), lambda: member(f, b, a, q)])
                           for b in self.below(self.stage))
        return check

    def compute_V(self, cover_code) -> Callable[[int, int], TriBool]:
        return self._checker(self._payload(cover_code, 6), self.in_v, StarConditionFailed)

    def compute_W(self, pos_code) -> Callable[[int, int], TriBool]:
        return self._checker(self._payload(pos_code, 9), self.in_w, StarConditionFailed)

    def compute_Z(self, u_code) -> Callable[[int], TriBool]:
        f = self._payload(u_code, 10)
        pre = tri_any(lambda b=b: self.fam(f["b"], f["a"], b) for b in self.below(self.stage))
        if pre.is_no:
            raise FamConditionFailed("the family condition fails for this universe code")

        def check(d: int) -> TriBool:
            return tri_any(lambda b=b: self.in_z(b, d) for b in self.below(self.stage))
        return check


def is_set_at_stage(sm: StageMachine, m: int) -> TriBool:
    return sm.is_set(m)


def mem_at_stage(sm: StageMachine, k: int, m: int) -> TriBool:
    return sm.mem(k, m)
