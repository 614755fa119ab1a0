"""Batch front-end.

Exit status: 0 yes/success, 1 no/rejection, 2 unknown, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .constructions import coreflect, formal_closeds, formal_opens
from .core import DEFAULT_ORACLE_BOUND, Subset, parse_axiom_set, parse_setoid
from .covers import covers, extract_proof, proof_to_sexpr, saturate
from .errors import FormalTopError, ParseError
from .oracles import compare
from .positivity import extract_splitting_set, interior, is_positive
from .quotient import QuotientMap, index_labels, transform_quotient

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3
DEFAULT_FUEL = 10_000


class InputError(Exception):
    pass


def _read(path: str | None, what: str) -> tuple[str, str]:
    if not path:
        raise InputError(f"--{what} FILE is required")
    try:
        return Path(path).read_text(encoding="utf-8"), path
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _axioms(args):
    text, path = _read(args.axioms, "axioms")
    try:
        return parse_axiom_set(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None


def _setoid(args):
    text, path = _read(args.setoid, "setoid")
    try:
        return parse_setoid(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None


def _subset(args, n: int) -> Subset:
    raw = args.subset or ""
    try:
        members = [int(t) for t in raw.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"--subset expects naturals, got {raw!r}") from None
    return Subset.of(n, members)


def _elem(args, n: int) -> int:
    if args.elem is None:
        raise InputError("--elem N is required")
    if not 0 <= args.elem < n:
        raise InputError(f"element {args.elem} is outside the carrier 0..{n - 1}")
    return args.elem


def _yes_no(b: bool) -> int:
    print("YES" if b else "NO")
    return EXIT_YES if b else EXIT_NO


# -- subcommands ------------------------------------------------------------------------

def cmd_saturate(args):
    ax = _axioms(args)
    res = saturate(ax, _subset(args, ax.carrier_size))
    print(f"closure {res.closure}")
    for x in sorted(res.witness_depth):
        how = f"axiom {res.fired_by[x]}" if x in res.fired_by else "member"
        print(f"  {x} depth={res.witness_depth[x]} via {how}")
    return EXIT_YES


def cmd_interior(args):
    ax = _axioms(args)
    res = interior(ax, _subset(args, ax.carrier_size))
    print(f"interior {res.interior}")
    print(f"rounds {res.iterations}")
    return EXIT_YES


def cmd_cover(args):
    ax = _axioms(args)
    a, v = _elem(args, ax.carrier_size), _subset(args, ax.carrier_size)
    ok = covers(ax, a, v)
    code = _yes_no(ok)
    if ok:
        print(f"proof {proof_to_sexpr(extract_proof(ax, a, v))}")
    return code


def cmd_pos(args):
    ax = _axioms(args)
    a, v = _elem(args, ax.carrier_size), _subset(args, ax.carrier_size)
    ok = is_positive(ax, a, v)
    code = _yes_no(ok)
    if ok:
        print(f"certificate {extract_splitting_set(ax, v).to_sexpr()}")
    return code


def cmd_oracle(args):
    ax = _axioms(args)
    setoid = _setoid(args) if args.mode in ("eqcov", "ceqcov") else None
    rows = compare(ax, args.mode, setoid, args.oracle_bound)
    bad = 0
    for r in rows:
        bad += not r.agrees
        print(f"{r.label} engine={_show(r.engine)} oracle={_show(r.oracle)} {'agree' if r.agrees else 'DISAGREE'}")
    print(f"mode {args.mode}: {len(rows) - bad}/{len(rows)} agree")
    return EXIT_YES if bad == 0 else EXIT_NO


def _show(x):
    if isinstance(x, bool):
        return "YES" if x else "NO"
    return str(x)


def cmd_lattice(args):
    ax = _axioms(args)
    opens = formal_opens(ax, args.oracle_bound)
    closeds = formal_closeds(ax, args.oracle_bound)
    print(f"formal opens ({len(opens)})")
    for v in opens:
        print(f"  {v}")
    print(f"formal closeds ({len(closeds)})")
    for v in closeds:
        print(f"  {v}")
    return EXIT_YES


def cmd_quotient(args):
    ax, setoid = _axioms(args), _setoid(args)
    qm = QuotientMap.of(setoid)
    out = transform_quotient(qm, ax)
    print("# classes: " + " ".join(f"{b}->{qm.class_of(b)}" for b in range(qm.base_size)))
    for b in range(qm.base_size):
        labels = ", ".join(f"{j}:{kind} {k}" for j, (kind, k) in enumerate(index_labels(qm, ax, b)))
        print(f"# element {b}: {labels}")
    print(out.to_text(), end="")
    return EXIT_YES


def cmd_coreflect(args):
    print(coreflect(_axioms(args)).to_text(), end="")
    return EXIT_YES


def _derivation_file(args):
    from .deriv.syntax import parse_derivation_file

    text, path = _read(args.deriv, "deriv")
    try:
        df = parse_derivation_file(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None
    ruleset = args.ruleset or df.ruleset
    if ruleset is None:
        raise InputError("no ruleset given; use --ruleset or a (ruleset NAME) form")
    return df, ruleset


def _check_all(df, ruleset):
    from .deriv.checker import check_derivation

    results = []
    for k, d in enumerate(df.derivations):
        res = check_derivation(d, ruleset)
        results.append(res)
        label = f"derivation {k + 1} ({d.rule or 'assume'})"
        for w in res.warnings:
            print(f"{label}: {w}")
        if res.ok:
            print(f"{label}: ACCEPT")
        else:
            for diag in res.diagnostics:
                print(f"{label}: REJECT {diag}")
    return results


def cmd_check(args):
    df, ruleset = _derivation_file(args)
    results = _check_all(df, ruleset)
    return EXIT_YES if results and all(r.ok for r in results) else EXIT_NO


def cmd_realize(args):
    from .realize.codes import describe, show_numeral
    from .realize.interp import Realizer, report_line, to_target

    df, ruleset = _derivation_file(args)
    results = _check_all(df, ruleset)
    if not all(r.ok for r in results):
        return EXIT_NO
    r = Realizer(df.decls, fuel=args.fuel)
    worst = EXIT_YES
    for d in df.derivations:
        for node in d.nodes():
            if node.is_assumption:
                continue
            target = to_target(node.conclusion, ruleset)
            res = r.judgement(target)
            print(report_line(target, res))
            if target.form == "in" and not target.ctx:
                try:
                    v = r.value(target.terms[0], {})
                except FormalTopError:
                    v = None
                if isinstance(v, int):
                    # only universe members are codes; other values are plain numerals
                    if str(target.terms[1]) in ("U0", "S"):
                        print(f"  CODE {show_numeral(v)} = {describe(v)}")
                    else:
                        print(f"  VALUE {show_numeral(v)}")
            if res.is_no:
                worst = EXIT_NO
            elif res.is_unknown and worst == EXIT_YES:
                worst = EXIT_UNKNOWN
    return worst


def cmd_ct_demo(args):
    from .realize.ct import ct_demo

    rep = ct_demo(args.relation, args.f, args.bound, args.fuel)
    for line in rep.lines():
        print(line)
    print("YES" if rep.ok else "NO")
    return EXIT_YES if rep.ok else EXIT_NO


COMMANDS = {
    "saturate": (cmd_saturate, "closure of a subset under the cover"),
    "interior": (cmd_interior, "greatest split subset of a subset"),
    "cover": (cmd_cover, "decide a ◁ V and print a proof tree"),
    "pos": (cmd_pos, "decide a ⋉ V and print a splitting certificate"),
    "oracle": (cmd_oracle, "compare an engine with its powerset oracle"),
    "lattice": (cmd_lattice, "list formal opens and formal closeds"),
    "quotient": (cmd_quotient, "transfer class axioms to the base of a setoid"),
    "coreflect": (cmd_coreflect, "axiom-set of the open coreflection"),
    "check": (cmd_check, "check derivation trees"),
    "realize": (cmd_realize, "check derivations, then evaluate their realizability"),
    "ct-demo": (cmd_ct_demo, "extract a choice function from a realizer"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--axioms", metavar="FILE")
    common.add_argument("--setoid", metavar="FILE")
    common.add_argument("--deriv", metavar="FILE")
    common.add_argument("--elem", type=int, metavar="N")
    common.add_argument("--subset", metavar='"n1 n2 ..."')
    common.add_argument("--ruleset", choices=("emTT", "mTT", "MLtt", "MLS"))
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, metavar="N")
    common.add_argument("--oracle-bound", type=int, default=DEFAULT_ORACLE_BOUND, metavar="N")
    common.add_argument("--mode", choices=("duality", "lfp", "gfp", "eqcov", "ceqcov"), default="duality")
    parser = argparse.ArgumentParser(prog="formaltop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "ct-demo":
            p.add_argument("--relation", choices=("succ", "zero"), default="succ")
            p.add_argument("--bound", type=int, default=10, metavar="N")
            p.add_argument("--f", type=int, metavar="CODE", help="realizer code (default: canonical one)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    if args.fuel <= 0:
        print("error: --fuel must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command][0](args)
    except (InputError, FormalTopError, ValueError) as exc:
        print(f"error: {type(exc).__name__ if isinstance(exc, FormalTopError) else 'input'}: {exc}",
              file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
