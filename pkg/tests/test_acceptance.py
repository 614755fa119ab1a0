"""Exit-gate checks.  Each test prints one ``CRITERION n PASS|FAIL`` line.

Run with ``pytest tests/test_acceptance.py`` and the lines show up even
under output capture.
"""

import itertools
import random
import time
from functools import cache

import pytest

from formaltop.constructions import coreflect, pos_predicate
from formaltop.core import Subset, ex1
from formaltop.covers import Rf, covers, eval_ind, extract_proof, saturate
from formaltop.deriv import corpus_files
from formaltop.deriv.checker import check_derivation
from formaltop.deriv.schemas import RULESETS, table_rules
from formaltop.deriv.syntax import Bind, Node, parse_derivation_file
from formaltop.errors import FormalTopError, UnknownRule
from formaltop.positivity import compatibility_witness, interior, is_positive
from formaltop.quotient import QuotientMap, es, transform_quotient
from formaltop.realize.ct import ct_demo
from formaltop.realize.encode import EncodedAxioms
from formaltop.realize.interp import Realizer, to_target
from formaltop.realize.pairing import pair, unpair
from formaltop.realize.pca import DIVERGENT
from formaltop.realize.stages import StageMachine

from oracles import (
    all_setoids, closed_family, exhaustive_axiom_sets, gfp_oracle, lfp_oracle, random_axiom_set,
    random_axiom_sets,
)

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n} {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


@cache
def family():
    """Every axiom-set on carriers <= 3 with <= 2 indices per element, then
    500 random ones on carriers <= 5."""
    return list(exhaustive_axiom_sets(3, 2)) + random_axiom_sets(500, seed=1, max_carrier=5)


def subsets(n):
    return [Subset(n, b) for b in range(1 << n)]


def test_criterion_1_lfp_oracle(report):
    t0 = time.perf_counter()
    mismatches = checked = 0
    for ax in family():
        closed = closed_family(ax)
        for v in subsets(ax.carrier_size):
            checked += 1
            mismatches += saturate(ax, v).closure != lfp_oracle(ax, v, closed)
    dt = time.perf_counter() - t0
    report(1, mismatches == 0 and dt < 60,
           f"saturate vs powerset intersection: {mismatches} mismatches over {checked} (ax, V) "
           f"from {len(family())} axiom-sets in {dt:.1f}s")


def test_criterion_2_gfp_oracle(report):
    t0 = time.perf_counter()
    mismatches = checked = 0
    for ax in family():
        for v in subsets(ax.carrier_size):
            checked += 1
            mismatches += interior(ax, v).interior != gfp_oracle(ax, v)
    dt = time.perf_counter() - t0
    report(2, mismatches == 0 and dt < 60,
           f"interior vs union of post-fixed sets: {mismatches} mismatches over {checked} (ax, V) in {dt:.1f}s")


def test_criterion_3_duality(report):
    t0 = time.perf_counter()
    mismatches = checked = 0
    for ax in family():
        for v in subsets(ax.carrier_size):
            co = v.complement()
            for a in range(ax.carrier_size):
                checked += 1
                mismatches += is_positive(ax, a, v) != (not covers(ax, a, co))
    dt = time.perf_counter() - t0
    report(3, mismatches == 0 and dt < 60,
           f"a pos V vs not a cov -V: {mismatches} mismatches over {checked} (a, V) in {dt:.1f}s")


def test_criterion_4_compatibility(report):
    t0 = time.perf_counter()
    failures = calls = 0
    for ax in family():
        subs = subsets(ax.carrier_size)
        pos = [interior(ax, v).interior for v in subs]
        closure = [saturate(ax, u).closure for u in subs]
        for v, p in zip(subs, pos):
            for u, c in zip(subs, closure):
                for a in (p & c).members:
                    calls += 1
                    x = compatibility_witness(ax, a, v, u)
                    failures += not (x in u and x in p)
    dt = time.perf_counter() - t0
    report(4, failures == 0,
           f"compatibility witness: {failures} failures over {calls} (a, V, U) in {dt:.1f}s")


def _class_axiom_sets(k, rng):
    """Exhaustive up to two classes, a random sample beyond."""
    if k <= 2:
        yield from exhaustive_axiom_sets_of_size(k)
        return
    for _ in range(1000):
        yield random_axiom_set(rng, max_carrier=k, min_carrier=k, max_indices=2)


def exhaustive_axiom_sets_of_size(k):
    return (ax for ax in exhaustive_axiom_sets(k, 2) if ax.carrier_size == k)


def test_criterion_5_quotient_transfer(report):
    t0 = time.perf_counter()
    rng = random.Random(5)
    mismatches = checked = instances = 0
    for eq in all_setoids(4):
        qm = QuotientMap.of(eq)
        for cax in _class_axiom_sets(qm.class_count, rng):
            instances += 1
            bax = transform_quotient(qm, cax)
            for w in subsets(qm.class_count):
                cl, pos = saturate(cax, w).closure, interior(cax, w).interior
                ew = es(qm, w)
                bcl, bpos = saturate(bax, ew).closure, interior(bax, ew).interior
                for b in range(qm.base_size):
                    checked += 2
                    mismatches += (qm.class_of(b) in cl) != (b in bcl)
                    mismatches += (qm.class_of(b) in pos) != (b in bpos)
    dt = time.perf_counter() - t0
    report(5, mismatches == 0 and dt < 120,
           f"[b] cov/pos W vs b cov/pos es(W): {mismatches} mismatches over {checked} checks, "
           f"{instances} (setoid, class axioms) pairs in {dt:.1f}s")


def test_criterion_6_coreflection_openness(report):
    mismatches = not_extending = checked = 0
    for ax in family():
        plus = coreflect(ax)
        pos = [pos_predicate(ax, a) for a in range(ax.carrier_size)]
        for v in subsets(ax.carrier_size):
            cl = saturate(plus, v).closure
            for a in range(ax.carrier_size):
                checked += 1
                lhs = a in cl
                mismatches += lhs != ((not pos[a]) or lhs)
                not_extending += covers(ax, a, v) and not lhs
    report(6, mismatches == 0 and not_extending == 0,
           f"a cov+ V iff (Pos(a) implies a cov+ V): {mismatches} mismatches, "
           f"{not_extending} lost covers, over {checked} (a, V)")


def _load(path):
    return parse_derivation_file(path.read_text())


def test_criterion_7_rule_coverage(report):
    seen, wrong = {}, []
    files = corpus_files()
    for path in files:
        df = _load(path)
        verdicts = [check_derivation(d, df.ruleset).ok for d in df.derivations]
        if all(verdicts) != (df.expect == "accept"):
            wrong.append(path.name)
        for d in df.derivations:
            seen.setdefault((df.ruleset, d.rule), set()).add(df.expect)
    missing = [(rs, rule) for rs in RULESETS for rule in table_rules(rs)
               if not (rule == "repl" and rs != "MLtt") and seen.get((rs, rule)) != {"accept", "reject"}]
    xi = _load(next(p for p in files if p.name == "bad_xi.drv"))
    xi_res = check_derivation(xi.derivations[0], xi.ruleset)
    xi_ok = not xi_res.ok and isinstance(xi_res.errors[0], UnknownRule)
    report(7, not wrong and not missing and xi_ok,
           f"{len(files) - len(wrong)}/{len(files)} corpus files as expected, "
           f"{len(seen)} (ruleset, rule) pairs seen, missing={missing}, xi rejected={xi_ok}")


def _unfold(p, q1, q2):
    if isinstance(p, Rf):
        return q1(p.a, p.evidence)
    return q2(p.a, p.j, {z: _unfold(c, q1, q2) for z, c in p.children})


def test_criterion_8_eliminator_equations(report):
    rng = random.Random(8)
    q1 = lambda a, ev: (7 * a + 3, ev)
    q2 = lambda a, j, kids: (a, j, tuple(sorted(kids.items())))
    proofs = []
    while len(proofs) < 100:
        ax = random_axiom_set(rng, max_carrier=6, max_indices=3)
        if ax.carrier_size == 0:
            continue
        v = Subset(ax.carrier_size, rng.randrange(1 << ax.carrier_size))
        covered = saturate(ax, v).closure
        # prefer elements covered through an axiom so most roots are transitivity nodes
        pool = (covered & v.complement()).members or covered.members
        if pool:
            a = rng.choice(pool)
            proofs.append((ax, v, extract_proof(ax, a, v)))
    bad = tr_nodes = 0
    for ax, v, p in proofs:
        got = eval_ind(ax, v, p, q1, q2)
        bad += got != _unfold(p, q1, q2)
        # the computation rules at the root
        if isinstance(p, Rf):
            bad += got != q1(p.a, p.evidence)
        else:
            tr_nodes += 1
            bad += got != q2(p.a, p.j, {z: eval_ind(ax, v, c, q1, q2) for z, c in p.children})
    report(8, bad == 0, f"eval_ind vs direct unfolding: {bad} mismatches over {len(proofs)} proofs "
                        f"({tr_nodes} rooted in transitivity)")


def test_criterion_9_realizability_soundness(report):
    t0 = time.perf_counter()
    yes = no = unknown = 0
    unknown_lines = []
    for path in corpus_files():
        df = _load(path)
        if df.expect != "accept":
            continue
        assert all(check_derivation(d, df.ruleset).ok for d in df.derivations)
        r = Realizer(df.decls, fuel=100_000)
        for d in df.derivations:
            for node in d.nodes():
                if node.is_assumption:
                    continue
                res = r.judgement(to_target(node.conclusion, df.ruleset))
                if res.is_yes:
                    yes += 1
                elif res.is_no:
                    no += 1
                else:
                    unknown += 1
                    unknown_lines.append(f"{path.name}: {node.conclusion}")
    total = yes + no + unknown
    dt = time.perf_counter() - t0
    report(9, no == 0 and unknown <= 0.05 * total,
           f"{yes} YES, {no} NO, {unknown} UNKNOWN over {total} judgements at fuel 1e5 in {dt:.1f}s"
           + (f"; unknown: {unknown_lines}" if unknown_lines else ""))


def test_criterion_10_cross_semantics(report):
    instances = [ex1()] + random_axiom_sets(20, seed=10, max_carrier=4, min_carrier=1)
    mismatches = checked = 0
    for ax in instances:
        enc = EncodedAxioms(ax)
        for v in subsets(ax.carrier_size):
            for a in range(ax.carrier_size):
                got = StageMachine().compute_W(enc.pos_code(a, v))(enc.element(a), enc.certificate(a, v))
                checked += 1
                mismatches += not (got.is_yes if is_positive(ax, a, v) else got.is_no)
    report(10, mismatches == 0,
           f"compute_W vs is_positive on canonical certificates: {mismatches} mismatches over "
           f"{checked} (a, V) across {len(instances)} axiom-sets")


def test_criterion_11_church_thesis(report):
    t0 = time.perf_counter()
    ok = True
    details = []
    for rel in ("succ", "zero"):
        first, second = ct_demo(rel, bound=10), ct_demo(rel, bound=10)
        ok &= first.ok and first == second and len(first.rows) == 11
        details.append(f"{rel}: {sum(r.ok for r in first.rows)}/11 ok, deterministic={first == second}")
    dt = time.perf_counter() - t0
    report(11, ok and dt < 5, "; ".join(details) + f" in {dt:.2f}s")


def _closed_subterms(t):
    yield t
    if isinstance(t, Node):
        for a in t.args:
            yield from _closed_subterms(a)
    elif isinstance(t, Bind):
        for d in t.doms:
            if d is not None:
                yield from _closed_subterms(d)
        yield from _closed_subterms(t.body)


def _corpus_codes():
    codes = set()
    for path in corpus_files():
        df = _load(path)
        if df.expect != "accept":
            continue
        r = Realizer(df.decls, fuel=20_000)
        for d in df.derivations:
            for node in d.nodes():
                j = to_target(node.conclusion, df.ruleset)
                for t in itertools.chain(j.terms, (ty for _, ty in j.ctx)):
                    for sub in _closed_subterms(t):
                        try:
                            v = r.value(sub, {})
                        except (FormalTopError, TypeError, ValueError):
                            continue
                        if v is not DIVERGENT and isinstance(v, int):
                            codes.add(v)
    return sorted(codes)


def test_criterion_12_pairing_and_stages(report):
    bad_pairs = 0
    for n in range(1001):
        for m in range(1001):
            bad_pairs += unpair(pair(n, m)) != (n, m)
    seen = set()
    for k in range(pair(0, 0), pair(0, 1001)):
        seen.add(unpair(k))
    bad_pairs += len(seen) != pair(0, 1001) - pair(0, 0)

    codes = _corpus_codes()
    stages = [StageMachine(stage=s, fuel=20_000) for s in range(6)]
    violations = sets = mem_checks = 0
    for m in codes:
        was_set = False
        for sm in stages:
            now = sm.is_set(m).is_yes
            violations += was_set and not now
            was_set |= now
        sets += was_set
        members = [k for k in range(8)] + [m]
        for k in members:
            was_mem = False
            for sm in stages:
                now = sm.mem(k, m).is_yes
                mem_checks += 1
                violations += was_mem and not now
                was_mem |= now
    report(12, bad_pairs == 0 and violations == 0 and len(codes) > 0,
           f"pairing: {bad_pairs} failures on n,m <= 1000; stages 0..5: {violations} monotonicity "
           f"violations over {len(codes)} corpus codes ({sets} sets, {mem_checks} membership checks)")
