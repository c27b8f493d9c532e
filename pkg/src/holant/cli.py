"""Command-line front end.

Subcommands parse signature sets, grids, and CSP instances from JSON
files, dispatch to the library, and print one canonical JSON document on
stdout.  Exit codes: 0 success, 2 parse error, 3 precondition violation,
4 a bounded search ran out (informational, never a refutation).
"""

import argparse
import random as _random
import sys

from . import scalar as _sc
from . import serialize as ser
from .classes import class_membership, transformable_search
from .classifier import (
    check_csp, check_csp2, check_cspd_neq, check_delta0, check_eo,
    check_pc, check_single_weighted, register_search_candidates,
)
from .constructions import (
    DescendStep, EqualityCase, HatPin, OrthoCase, extract_delta_power,
    ghz_normal_form, nonvanishing_witness, odd_arity_route,
    reduce_arity_gap, selfloop_reduce, symmetrize_search,
)
from .errors import (
    HolantError, ParseError, PreconditionError, SearchExhausted,
)
from .factorization import upf
from .grid import eval_csp, eval_eo, eval_holant, random_grid
from .scalar import DEFAULT_EPS
from .signature import Signature
from .transforms import Mat2, apply_holographic, hat, named_matrix, unhat

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_EXHAUSTED = 4

CLASS_CHOICES = ("A", "P", "E", "M", "XM", "T", "M-closure", "XM-closure",
                 "R-closure", "L")
LEMMA_CHOICES = ("selfloop", "delta-power", "odd-route", "arity-gap",
                 "ghz", "symmetrize", "witness")


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc))


def _load_set(path: str, args) -> tuple:
    data = _read_json(path)
    field, sigs = ser.sigset_from_json(data, eps=args.epsilon)
    if args.field and args.field != field:
        raise ParseError("file %s declares field %r but --field asked for "
                         "%r" % (path, field, args.field))
    return field, sigs


def _pick_sig(sigs: dict, name: str) -> Signature:
    if name not in sigs:
        raise ParseError("no signature named %r in the set (have: %s)"
                         % (name, ", ".join(sorted(sigs)) or "none"))
    return sigs[name]


def _emit(data) -> None:
    sys.stdout.write(ser.canonical_dumps(data) + "\n")


def _names_for(grid_sigs, sigs: dict) -> list:
    names = []
    for s in grid_sigs:
        name = next((n for n, t in sigs.items() if t == s), None)
        if name is None:
            raise ParseError("grid vertex signature is not in the set")
        names.append(name)
    return names


def _load_candidates(path: str) -> int:
    data = _read_json(path)
    if not isinstance(data, dict) or "matrices" not in data:
        raise ParseError("candidates file needs a 'matrices' list")
    field = data.get("field", "cyclo24")
    if field not in ser.FIELDS:
        raise ParseError("unknown field %r" % (field,))
    named = []
    for i, entry in enumerate(data["matrices"]):
        try:
            name = str(entry["name"])
            entries = list(entry["entries"])
        except (KeyError, TypeError):
            raise ParseError("matrix %d needs 'name' and 'entries'" % i)
        if len(entries) != 4:
            raise ParseError("matrix %r needs 4 entries" % name)
        a, b, c, d = (_sc.parse_literal(str(t), field) for t in entries)
        named.append((name, Mat2(a, b, c, d, field)))
    return register_search_candidates(named)


# -- subcommands --------------------------------------------------------------------


def _cmd_classify(args) -> int:
    if args.candidates:
        _load_candidates(args.candidates)
    _, sigs = _load_set(args.set, args)
    members = list(sigs.values())
    if args.cspd is not None:
        verdict = check_cspd_neq(members, args.cspd)
    elif args.csp2:
        verdict = check_csp2(members)
    elif args.csp:
        verdict = check_csp(members)
    elif args.eo:
        verdict = check_eo(members)
    elif args.single_weighted:
        verdict = check_single_weighted(members)
    elif args.with_delta0:
        verdict = check_delta0(members)
    else:
        verdict = check_pc(members)
    _emit(verdict.to_json())
    if verdict.outcome == "HardModuloSearch":
        return EXIT_EXHAUSTED
    if verdict.outcome == "NotApplicable":
        return EXIT_PRECONDITION
    return EXIT_OK


def _cmd_eval(args) -> int:
    if args.instance is None:
        combined = _read_json(args.set)
        if not isinstance(combined, dict) or "set" not in combined:
            raise ParseError("single-file eval expects {'set':..., "
                             "'grid':...} or {'set':..., 'csp':...}")
        field, sigs = ser.sigset_from_json(combined["set"],
                                           eps=args.epsilon)
        if args.field and args.field != field:
            raise ParseError("embedded set declares field %r" % field)
        instance = combined.get("grid", combined.get("csp"))
        if instance is None:
            raise ParseError("combined file carries neither 'grid' nor "
                             "'csp'")
    else:
        _, sigs = _load_set(args.set, args)
        instance = _read_json(args.instance)
    if ser.is_csp_json(instance):
        csp, _ = ser.csp_from_json(instance, sigs)
        value = eval_csp(csp)
    else:
        grid, _ = ser.grid_from_json(instance, sigs)
        value = eval_eo(grid) if args.eo else eval_holant(grid)
    _emit(_sc.format_literal(value))
    return EXIT_OK


def _cmd_factor(args) -> int:
    _, sigs = _load_set(args.set, args)
    f = _pick_sig(sigs, args.sig)
    form = upf(f)
    factors = [("f%d" % i, g) for i, (_, g) in enumerate(form.factors)]
    _emit({
        "scalar": _sc.format_literal(form.scalar),
        "blocks": [list(p) for p, _ in form.factors],
        "factors": ser.sigset_to_json(factors, f.backend),
    })
    return EXIT_OK


def _cmd_check(args) -> int:
    _, sigs = _load_set(args.set, args)
    f = _pick_sig(sigs, args.sig)
    report = class_membership(f, args.cls)
    _emit(report.to_json())
    return EXIT_OK


def _cmd_construct(args) -> int:
    _, sigs = _load_set(args.set, args)
    f = _pick_sig(sigs, args.sig)

    def bits(text, flag):
        if text is None:
            raise ParseError("lemma %r needs %s" % (args.lemma, flag))
        if len(text) != f.arity or any(c not in "01" for c in text):
            raise ParseError("%s must be %d bits of 0/1" % (flag, f.arity))
        return int(text, 2) if text else 0

    if args.lemma == "selfloop":
        _emit(ser.script_to_json(
            selfloop_reduce(f, bits(args.alpha, "--alpha"))))
    elif args.lemma == "delta-power":
        _emit(ser.script_to_json(extract_delta_power(f)))
    elif args.lemma == "arity-gap":
        _emit(ser.script_to_json(reduce_arity_gap(
            f, bits(args.alpha, "--alpha"), bits(args.beta, "--beta"))))
    elif args.lemma == "odd-route":
        out = odd_arity_route(f)
        if isinstance(out, DescendStep):
            _emit({"outcome": "DescendStep",
                   "script": ser.script_to_json(out.script)})
        elif isinstance(out, HatPin):
            _emit({"outcome": "HatPin", "bit": out.c})
        elif isinstance(out, OrthoCase):
            q = out.q
            _emit({"outcome": "OrthoCase",
                   "matrix": [_sc.format_literal(v)
                              for v in (q.a, q.b, q.c, q.d)]})
        elif isinstance(out, EqualityCase):
            _emit({"outcome": "EqualityCase", "arity": out.arity,
                   "a": _sc.format_literal(out.a),
                   "b": _sc.format_literal(out.b)})
        else:
            raise HolantError("unexpected route outcome %r" % (out,))
    elif args.lemma == "ghz":
        m = ghz_normal_form(f)
        _emit({"outcome": "Basis",
               "matrix": [_sc.format_literal(v)
                          for v in (m.a, m.b, m.c, m.d)]})
    elif args.lemma == "symmetrize":
        script = symmetrize_search(f, budget=args.budget)
        if script is None:
            _emit({"outcome": "SearchExhausted", "budget": args.budget})
            return EXIT_EXHAUSTED
        _emit(ser.script_to_json(script))
    elif args.lemma == "witness":
        grid = nonvanishing_witness(f)
        pool = {}
        for s in grid.signatures:
            name = next((n for n, t in pool.items() if t == s), None)
            if name is None:
                pool["s%d" % len(pool)] = s
        _emit({"set": ser.sigset_to_json(list(pool.items()), f.backend),
               "grid": ser.grid_to_json(grid, _names_for(grid.signatures,
                                                         pool))})
    return EXIT_OK


def _cmd_transform(args) -> int:
    field, sigs = _load_set(args.set, args)
    if args.hat:
        out = [(n, hat(s)) for n, s in sigs.items()]
    elif args.unhat:
        out = [(n, unhat(s)) for n, s in sigs.items()]
    else:
        m = named_matrix(args.matrix, field, args.epsilon)
        out = [(n, apply_holographic(s, m, side=args.side))
               for n, s in sigs.items()]
    _emit(ser.sigset_to_json(out, field))
    return EXIT_OK


_RANDOM_POOL = {
    "cyclo24": ("0", "0", "1", "1", "-1", "2", "i", "-i", "w", "w^3"),
    "approx": ("0", "0", "1", "1", "-1", "2", "0.5", "1j", "-1j", "1.5"),
}


def _cmd_random(args) -> int:
    rng = _random.Random(args.seed)
    if args.what == "sig":
        field = args.field or "cyclo24"
        pool = _RANDOM_POOL[field]
        named = []
        for k in range(args.count):
            arity = rng.randint(1, args.arity_max)
            table = [_sc.parse_literal(rng.choice(pool), field,
                                       args.epsilon)
                     for _ in range(1 << arity)]
            if all(v.is_zero() for v in table):
                table[0] = _sc.parse_literal("1", field, args.epsilon)
            named.append(("s%d" % k,
                          Signature(table, field=field, eps=args.epsilon)))
        _emit(ser.sigset_to_json(named, field))
        return EXIT_OK
    field, sigs = _load_set(args.set, args)
    if not sigs:
        raise PreconditionError("random grid needs a non-empty set")
    grid = random_grid(args.seed, list(sigs.values()), args.vertices)
    _emit({"set": ser.sigset_to_json(list(sigs.items()), field),
           "grid": ser.grid_to_json(grid, _names_for(grid.signatures,
                                                     sigs))})
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def _common_flags(sub):
    sub.add_argument("--field", choices=ser.FIELDS, default=None,
                     help="require this scalar field")
    sub.add_argument("--epsilon", type=float, default=DEFAULT_EPS,
                     help="tolerance for the approx field")
    sub.add_argument("--threads", type=int, default=1,
                     help="upper bound on worker parallelism; the output "
                          "never depends on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holant",
        description="Exact toolkit for complex-valued Boolean Holant "
                    "problems.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="run the dichotomy batteries "
                        "on a signature set")
    p.add_argument("set", help="signature set JSON")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--with-delta0", action="store_true",
                      help="set extended by the report-0 pin")
    mode.add_argument("--eo", action="store_true",
                      help="balanced-support battery")
    mode.add_argument("--single-weighted", action="store_true",
                      help="uniform-support-weight battery")
    mode.add_argument("--csp", action="store_true",
                      help="constraint-language battery")
    mode.add_argument("--csp2", action="store_true",
                      help="even-occurrence constraint battery")
    mode.add_argument("--cspd", type=int, default=None, metavar="D",
                      help="occurrence-multiple-of-D battery with a "
                           "disequality edge")
    p.add_argument("--candidates", default=None,
                   help="JSON file of extra basis-change candidates")
    _common_flags(p)
    p.set_defaults(fn=_cmd_classify)

    p = subs.add_parser("eval", help="evaluate a grid or CSP instance")
    p.add_argument("set", help="signature set JSON, or a combined "
                   "{'set','grid'} file")
    p.add_argument("instance", nargs="?", default=None,
                   help="grid or CSP JSON")
    p.add_argument("--eo", action="store_true",
                   help="orientation-style evaluation over balanced "
                        "assignments")
    _common_flags(p)
    p.set_defaults(fn=_cmd_eval)

    p = subs.add_parser("factor", help="unique product form of one "
                        "signature")
    p.add_argument("set")
    p.add_argument("--sig", required=True)
    _common_flags(p)
    p.set_defaults(fn=_cmd_factor)

    p = subs.add_parser("check", help="class membership with witness")
    p.add_argument("cls", choices=CLASS_CHOICES, metavar="class")
    p.add_argument("set")
    p.add_argument("--sig", required=True)
    _common_flags(p)
    p.set_defaults(fn=_cmd_check)

    p = subs.add_parser("construct", help="run a constructive lemma and "
                        "emit its replayable script")
    p.add_argument("lemma", choices=LEMMA_CHOICES)
    p.add_argument("set")
    p.add_argument("--sig", required=True)
    p.add_argument("--alpha", default=None, help="support string")
    p.add_argument("--beta", default=None, help="second support string")
    p.add_argument("--budget", type=int, default=3,
                   help="vertex budget for bounded searches")
    _common_flags(p)
    p.set_defaults(fn=_cmd_construct)

    p = subs.add_parser("transform", help="apply a basis change to a "
                        "whole set")
    p.add_argument("set")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--matrix", default=None,
                       help="name from the matrix registry")
    which.add_argument("--hat", action="store_true",
                       help="move to the flip world")
    which.add_argument("--unhat", action="store_true",
                       help="leave the flip world")
    p.add_argument("--side", choices=("col", "row"), default="col")
    _common_flags(p)
    p.set_defaults(fn=_cmd_transform)

    p = subs.add_parser("random", help="seeded random signatures or "
                        "grids")
    p.add_argument("what", choices=("sig", "grid"))
    p.add_argument("set", nargs="?", default=None,
                   help="signature pool (grid mode)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--arity-max", type=int, default=3)
    p.add_argument("--vertices", type=int, default=4)
    _common_flags(p)
    p.set_defaults(fn=_cmd_random)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    if args.command == "random" and args.what == "grid" and not args.set:
        parser.error("random grid needs a signature set")
    try:
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write("parse error: %s\n" % exc)
        return EXIT_PARSE
    except SearchExhausted as exc:
        sys.stderr.write("search exhausted: %s\n" % exc)
        return EXIT_EXHAUSTED
    except PreconditionError as exc:
        sys.stderr.write("precondition violated: %s\n" % exc)
        return EXIT_PRECONDITION
    except HolantError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())
