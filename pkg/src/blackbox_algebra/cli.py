"""Command-line front end.

Every subcommand prints a JSON report (stdout, or ``--out``) and a short
human summary on stderr.  Exit codes: 0 success, 1 attack failure outcome,
2 usage error.  ``BBA_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time

from .attack import attack_field, attack_group_small, miller_rabin_bb, verify_encrypts
from .core import QueryBudgetReport
from .demos import DEMOS
from .errors import (
    BlackBoxError,
    InsufficientPlaintextError,
    RecognitionInconsistency,
    ValidationError,
    WrongStructureError,
)
from .explicit import encrypt, make_field, parse_field_spec, parse_structure
from .fields import find_characteristic, recognize_field
from .isomorphism import generating_tuple
from .sampling import DEFAULT_BURN_IN, uniformity_report

log = logging.getLogger("blackbox_algebra")

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "subcommand",
        "config",
        "success",
        "outcome",
        "delta",
        "query_budget",
        "verification",
        "wall_time_s",
    ],
    "properties": {
        "subcommand": {"type": "string"},
        "config": {"type": "object", "required": ["seed"]},
        "success": {"type": "boolean"},
        "outcome": {"type": "string"},
        "delta": {"type": ["object", "null"]},
        "query_budget": {
            "type": "object",
            "required": ["sample_calls", "apply_calls", "equal_calls"],
            "properties": {
                k: {"type": "integer", "minimum": 0}
                for k in ("sample_calls", "apply_calls", "equal_calls")
            },
        },
        "verification": {
            "type": "object",
            "required": ["checked", "mismatches"],
            "properties": {
                "checked": {"type": "integer", "minimum": 0},
                "mismatches": {"type": "integer", "minimum": 0},
            },
        },
        "wall_time_s": {"type": "number", "minimum": 0},
        "details": {"type": "object"},
    },
}

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _report(args, success, outcome, delta=None, budget=None, verification=None, details=None):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "verbose")}
    return {
        "subcommand": args.command if args.command != "demo" else f"demo {args.name}",
        "config": config,
        "success": success,
        "outcome": outcome,
        "delta": delta,
        "query_budget": (budget or QueryBudgetReport()).as_dict(),
        "verification": verification or {"checked": 0, "mismatches": 0},
        "details": details or {},
    }


def _structure(text):
    try:
        return parse_structure(text)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


def _field_spec(text):
    try:
        return parse_field_spec(text)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


def _extra_plaintexts(order, taken, count, seed):
    rng = random.Random(f"known-{seed}")
    pool = [a for a in range(order) if a not in taken]
    rng.shuffle(pool)
    return pool[:count]


# -- subcommands ----------------------------------------------------------

def cmd_field_attack(args):
    spec = _field_spec(args.spec)
    X, oracle = encrypt(make_field(spec), args.seed)
    # x generates F_{p^n} over F_p, so one pair on it fixes the Frobenius power
    first = [spec.p if spec.n > 1 else 1]
    plains = (first + _extra_plaintexts(spec.order, set(first), max(0, args.known - 1), args.seed))[: args.known]
    known = [(a, oracle.encrypt(a)) for a in plains]
    details = {"known_plaintexts": plains, "suggestion": "one pair on a field generator (e.g. x) suffices"}
    try:
        result = attack_field(X, spec, known, oracle=oracle, method=args.method)
    except InsufficientPlaintextError as exc:
        r = exc.report
        return _report(args, False, "insufficient_plaintext", r.delta, r.budget, details=details), EXIT_FAILURE
    except RecognitionInconsistency as exc:
        details["error"] = str(exc)
        return _report(args, False, "recognition_inconsistency", budget=X.budget(), details=details), EXIT_FAILURE
    r = result.report
    details["hidden_inverse_calls_during_attack"] = r.hidden_inverse_calls_during_attack
    code = EXIT_OK if r.success else EXIT_FAILURE
    return _report(args, r.success, r.outcome, r.delta, r.budget, r.verification, details), code


def cmd_group_attack(args):
    A = _structure(args.structure)
    if A.signature.kind != "group":
        raise UsageError(f"{args.structure} is not a group; use field-attack")
    X, oracle = encrypt(A, args.seed)
    gens = list(generating_tuple(A))
    plains = gens[: args.known]
    plains += _extra_plaintexts(A.order, set(plains), args.known - len(plains), args.seed)
    known = [(a, oracle.encrypt(a)) for a in plains]
    details = {"known_plaintexts": plains, "generators": gens, "pairs_needed": len(gens)}
    try:
        result = attack_group_small(X, A, known, oracle=oracle)
    except InsufficientPlaintextError as exc:
        r = exc.report
        return _report(args, False, "insufficient_plaintext", r.delta, r.budget, details=details), EXIT_FAILURE
    except (WrongStructureError, RecognitionInconsistency) as exc:
        details["error"] = str(exc)
        return _report(args, False, "wrong_structure", budget=X.budget(), details=details), EXIT_FAILURE
    r = result.report
    details["hidden_inverse_calls_during_attack"] = r.hidden_inverse_calls_during_attack
    code = EXIT_OK if r.success else EXIT_FAILURE
    return _report(args, r.success, r.outcome, r.delta, r.budget, r.verification, details), code


def cmd_verify(args):
    plain = _structure(args.box)
    target = _structure(args.target)
    X, _ = encrypt(plain, args.seed)
    answer = verify_encrypts(X, target, confidence=args.confidence)
    outcome = "isomorphic" if answer else "not_isomorphic"
    return _report(args, True, outcome, budget=X.budget(), details={"answer": answer}), EXIT_OK


def cmd_miller_rabin(args):
    if args.n < 3 or args.n % 2 == 0:
        raise UsageError("--n must be odd and at least 3")
    r = miller_rabin_bb(args.n, args.rounds, args.seed)
    details = {"verdict": r.verdict, "witness": r.witness, "error_bound": r.error_bound}
    return _report(args, True, r.verdict, budget=r.budget, details=details), EXIT_OK


def cmd_pr_stats(args):
    A = _structure(args.structure)
    if A.signature.kind != "group":
        raise UsageError("pr-stats needs a group structure")
    X, oracle = encrypt(A, args.seed)
    gens = [oracle.encrypt(g) for g in generating_tuple(A)] or [X.identity()]
    samples = args.samples if args.samples is not None else 1000 * A.order
    rep = uniformity_report(X, gens, samples, burn_in=args.burn_in, seed=args.seed)
    details = rep.as_dict()
    passed = rep.p_value > args.alpha
    return _report(args, passed, "uniform" if passed else "non_uniform", budget=X.budget(), details=details), EXIT_OK


def cmd_recognize_field(args):
    spec = _field_spec(args.spec)
    X, oracle = encrypt(make_field(spec), args.seed)
    char = find_characteristic(X)
    R = recognize_field(X, spec, method=args.method)
    hidden_before = oracle.decrypt_calls
    # verification: beta must be a field homomorphism and alpha its inverse
    A = make_field(spec)
    mismatches = sum(R.alpha(R.beta(a)) != a for a in range(spec.order))
    details = {
        "characteristic": char,
        "method": R.method,
        "min_poly": list(R.min_poly),
        "root": R.root,
        "cost": R.cost.as_dict(),
        "hidden_inverse_calls": oracle.decrypt_calls - hidden_before,
    }
    verification = {"checked": A.order, "mismatches": mismatches}
    return _report(args, mismatches == 0, "recognized", None, X.budget(), verification, details), EXIT_OK


def cmd_demo(args):
    result = DEMOS[args.name](args.seed)
    box = result.pop("box")
    ok = result.pop("success")
    return _report(args, ok, "verified" if ok else "failed", budget=box.budget(), details=result), (
        EXIT_OK if ok else EXIT_FAILURE
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bba", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("field-attack", cmd_field_attack, "recover E and E^-1 for an encrypted finite field")
    p.add_argument("--spec", required=True, help="f:p^n[/modulus]")
    p.add_argument("--known", type=int, default=1, help="number of known plaintext pairs")
    p.add_argument("--method", choices=("table", "bsgs"), default="table")

    p = add("group-attack", cmd_group_attack, "recover E and E^-1 for an encrypted small group")
    p.add_argument("--structure", required=True)
    p.add_argument("--known", type=int, default=2)

    p = add("verify", cmd_verify, "does encrypt(BOX) encrypt TARGET?")
    p.add_argument("--box", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--confidence", type=int, default=40)

    p = add("miller-rabin", cmd_miller_rabin, "Miller-Rabin as black-box verification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rounds", type=int, default=40)

    p = add("pr-stats", cmd_pr_stats, "chi-square uniformity of product replacement")
    p.add_argument("--structure", required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    p.add_argument("--alpha", type=float, default=1e-3)

    p = add("recognize-field", cmd_recognize_field, "constructive recognition of an encrypted field")
    p.add_argument("--spec", required=True)
    p.add_argument("--method", choices=("table", "bsgs"), default="table")

    p = add("demo", cmd_demo, "amalgamation / reification / augmentation fixtures")
    p.add_argument("name", choices=sorted(DEMOS))
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(message)s")
    env_seed = os.environ.get("BBA_SEED")
    if env_seed:
        args.seed = int(env_seed)
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except UsageError as exc:
        print(f"bba: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BlackBoxError as exc:
        report = _report(args, False, type(exc).__name__, details={"error": str(exc)})
        code = EXIT_FAILURE
    report["wall_time_s"] = time.perf_counter() - start
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(
        f"{report['subcommand']}: {report['outcome']} (success={report['success']}, "
        f"mismatches={report['verification']['mismatches']}, {report['wall_time_s']:.3f}s)",
        file=sys.stderr,
    )
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
