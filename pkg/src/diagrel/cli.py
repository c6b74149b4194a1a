"""Batch command-line front end.

Exit codes: 0 success / holds / accepted; 1 semantic failure (non-model,
rejected proof, axiom failure); 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import doctrine as D
from . import finrel, rewrite, theory as theory_mod
from .finrel import evaluate, included, inclusion_witness, parse_interpretation
from .terms import DiagrelError, ParseError, Signature, parse_term, print_term, typecheck


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _term_arg(text, sig):
    """A term argument is a file path or a literal s-expression."""
    if os.path.exists(text):
        text = _read(text)
    return parse_term(text, sig)


def _load_sig(args):
    if not args.sig:
        return Signature({})
    return Signature.parse(_read(args.sig))


def _load_interp(args, sig):
    if not args.interp:
        raise DiagrelError("this command needs --interp FILE")
    return parse_interpretation(_read(args.interp), sig)


def _print_relation(rel, name="result"):
    print(f"rel {name} {rel.dom_arity} {rel.cod_arity} {{")
    for xs, ys in rel.pairs():
        print("  (" + " ".join(map(str, xs)) + " ; " + " ".join(map(str, ys)) + ")")
    print("}")


def _cmd_typecheck(args):
    sig = _load_sig(args)
    n, m = typecheck(_term_arg(args.term, sig), sig)
    print(f"{n} -> {m}")
    return 0


def _cmd_desugar(args):
    sig = _load_sig(args)
    from .terms import desugar
    print(print_term(desugar(_term_arg(args.term, sig), sig)))
    return 0


def _cmd_eval(args):
    sig = _load_sig(args)
    interp = _load_interp(args, sig)
    _print_relation(evaluate(_term_arg(args.term, sig), interp))
    return 0


def _cmd_included(args):
    sig = _load_sig(args)
    interp = _load_interp(args, sig)
    lv = evaluate(_term_arg(args.lhs, sig), interp)
    rv = evaluate(_term_arg(args.rhs, sig), interp)
    if included(lv, rv):
        print("included")
        return 0
    print(f"not included: witness {inclusion_witness(lv, rv)}")
    return 1


def _cmd_check_model(args):
    theory = theory_mod.parse_theory(_read(args.theory))
    interp = _load_interp(args, theory.signature)
    report = theory_mod.check_model(theory, interp)
    if args.machine:
        for name, holds, witness in report.verdicts:
            print(f"axiom={name} holds={str(holds).lower()}"
                  + (f" witness={witness}" if witness else ""))
    else:
        print(report)
    print("model" if report.is_model else "not a model")
    return 0 if report.is_model else 1


def _cmd_find_models(args):
    theory = theory_mod.parse_theory(_read(args.theory))
    models = theory_mod.enumerate_models(theory, args.size, bound=args.max_space)
    print(f"models: {len(models)}")
    for i, interp in enumerate(models):
        if args.machine:
            for name in sorted(interp.assignment):
                rel = interp.assignment[name]
                print(f"model={i} rel={name} bits={rel.bits}")
        else:
            print(f"# model {i}")
            sys.stdout.write(finrel.print_interpretation(interp))
    return 0


def _cmd_check_proof(args):
    sig = _load_sig(args)
    script = rewrite.parse_proof(_read(args.proof), sig)
    verdict = rewrite.check_proof(script, sig)
    print(verdict)
    if not verdict.accepted:
        return 1
    if args.spotcheck:
        ok, counter = rewrite.semantic_spotcheck(
            script, sig, trials=args.trials, k=args.size, seed=args.seed)
        if not ok:
            print(f"spotcheck countermodel: {counter[1]}")
            return 1
        print(f"spotcheck passed ({args.trials} trials, carrier {args.size})")
    return 0


def _cmd_verify_axioms(args):
    reports = rewrite.verify_axioms(
        k=args.size, trials=args.trials, seed=args.seed, family=args.family)
    failures = 0
    for r in reports:
        if args.machine:
            print(f"axiom={r.name} family={r.family} trials={r.trials} "
                  f"failures={r.failures}")
        else:
            line = f"{r.name} [{r.family}]: {r.trials - r.failures}/{r.trials}"
            if not r.ok:
                line += f"  counterexample: {r.counterexample}"
            print(line)
        failures += r.failures
    print(f"axioms: {len(reports)}  failing: {sum(1 for r in reports if not r.ok)}")
    return 0 if failures == 0 else 1


def _cmd_spider(args):
    sig = _load_sig(args)
    form = rewrite.spider_normalize(_term_arg(args.term, sig), sig)
    blocks = sorted(sorted(b) for b in form.partition)
    print(f"colour: {'white' if form.colour == 'w' else 'black'}")
    print(f"type: {form.n} -> {form.m}")
    print("partition: " + " ".join("{" + ",".join(b) + "}" for b in blocks))
    print(f"closed components: {form.closed}")
    return 0


def _cmd_doctrine(args):
    if args.action == "comprehension":
        X = D.FinSetObj(args.size)
        alpha = D.Predicate.from_members(X, args.members)
        X_a, incl, report = D.comprehension(alpha)
        print(f"object size: {X_a.size}")
        print("incl " + D.print_morphism(incl))
        for key, val in report.items():
            print(f"{key}: {str(val).lower()}")
        return 0 if all(report.values()) else 1
    if args.action == "ruc":
        X, Y = D.FinSetObj(args.size), D.FinSetObj(args.size)
        phi = D.Predicate.from_members(D.prod(X, Y), args.members)
        f = D.ruc_witness(phi, X, Y)
        if f is None:
            print("none (not entire)")
            return 1
        print(D.print_morphism(f))
        return 0
    raise DiagrelError(f"unknown doctrine action {args.action!r}")


def build_parser():
    top = argparse.ArgumentParser(
        prog="diagrel",
        description="Two-coloured diagram calculus: typechecking, relation "
                    "semantics, proof checking, model finding.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, interp=False):
        p.add_argument("--sig", help="signature file (`sig NAME : N -> M` lines)")
        if interp:
            p.add_argument("--interp", help="interpretation file")
        p.add_argument("--max-bits", type=int, default=finrel.MAX_BITS,
                       help="relation size guard in bits")

    p = sub.add_parser("typecheck", help="type a term")
    common(p)
    p.add_argument("term")
    p.set_defaults(fn=_cmd_typecheck)

    p = sub.add_parser("desugar", help="expand derived constructors")
    common(p)
    p.add_argument("term")
    p.set_defaults(fn=_cmd_desugar)

    p = sub.add_parser("eval", help="evaluate a term as a finite relation")
    common(p, interp=True)
    p.add_argument("term")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("included", help="test semantic inclusion of two terms")
    common(p, interp=True)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(fn=_cmd_included)

    p = sub.add_parser("check-model", help="check an interpretation against a theory")
    p.add_argument("theory", help="theory file")
    p.add_argument("--interp", help="interpretation file")
    p.add_argument("--machine", action="store_true")
    p.add_argument("--max-bits", type=int, default=finrel.MAX_BITS)
    p.set_defaults(fn=_cmd_check_model)

    p = sub.add_parser("find-models", help="enumerate models at a carrier size")
    p.add_argument("theory", help="theory file")
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--max-space", type=int, default=theory_mod.DEFAULT_SEARCH_BOUND)
    p.add_argument("--machine", action="store_true")
    p.add_argument("--max-bits", type=int, default=finrel.MAX_BITS)
    p.set_defaults(fn=_cmd_find_models)

    p = sub.add_parser("check-proof", help="validate a proof script")
    common(p)
    p.add_argument("proof", help="proof file")
    p.add_argument("--spotcheck", action="store_true",
                   help="also test the claim on random interpretations")
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check_proof)

    p = sub.add_parser("verify-axioms",
                       help="check the axiom database against the relation model")
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=["cartesian", "cocartesian", "linear",
                                        "fo", "structural", "generator-adjoint"])
    p.add_argument("--machine", action="store_true")
    p.add_argument("--max-bits", type=int, default=finrel.MAX_BITS)
    p.set_defaults(fn=_cmd_verify_axioms)

    p = sub.add_parser("spider", help="normalize a Frobenius-fragment term")
    common(p)
    p.add_argument("term")
    p.set_defaults(fn=_cmd_spider)

    p = sub.add_parser("doctrine", help="powerset-doctrine utilities")
    p.add_argument("action", choices=["comprehension", "ruc"])
    p.add_argument("--size", type=int, required=True,
                   help="object size (for ruc: both object sizes)")
    p.add_argument("members", type=int, nargs="*",
                   help="member indices of the predicate")
    p.set_defaults(fn=_cmd_doctrine)

    return top


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 2
    if getattr(args, "max_bits", None):
        finrel.MAX_BITS = args.max_bits
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DiagrelError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
