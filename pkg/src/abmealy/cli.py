"""Command line interface.

One subcommand per operation; `--json` switches any of them to a single
machine-readable object on stdout.  Exit status 0 means the requested
answer was produced (even a negative one like "not abelian"), 1 means a
domain error (bad format, matrix does not fit, no embedding, ...), and 2 is
argparse's usage-error status.  A word argument of "-" stands for the empty
word.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import check_scc_instance, infer_matrix, path_polynomial, witness_search
from .complete import (
    CompleteConfig,
    GTildeElement,
    LocationMap,
    embed_scale,
    find_location_mismatch,
    format_vector,
    gtilde_add,
    gtilde_eq,
    gtilde_residual,
    locate,
    orbit,
    orbit_automaton,
    parse_int_poly,
    parse_vector,
    unit_vector,
)
from .errors import AbmealyError, FormatError
from .exactalg import (
    RationalPolynomial,
    char_poly,
    chi_star,
    companion_from_chi,
    parse_matrix,
    serialize_matrix,
)
from .group import build_principal, check_abelian, gamma_of
from .mealy import parse_automaton

DEFAULT_BOUND = 100000


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_aut(path: str):
    return parse_automaton(_read(path))


def _load_matrix(path: str):
    return parse_matrix(_read(path))


def _word(arg: str) -> str:
    return "" if arg == "-" else arg


def _parse_rational_list(text: str) -> RationalPolynomial:
    try:
        return RationalPolynomial(Fraction(t) for t in text.split())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad polynomial {text!r}: {exc}") from None


def _poly_json(p):
    if p is None:
        return None, None
    return list(p.coeffs), str(p)


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _write_or_print(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    elif args.json:
        pass
    else:
        print(text, end="")


# -- command bodies ---------------------------------------------------------------


def _cmd_transduce(args) -> int:
    aut = _load_aut(args.aut)
    word = _word(args.word)
    out = aut.transduce(args.state, word)
    _emit(args, {"state": args.state, "input": word, "output": out}, [out])
    return 0


def _cmd_check(args) -> int:
    aut = _load_aut(args.aut)
    report = check_abelian(aut, bound=args.bound)
    gamma = str(report.gamma) if report.gamma is not None else None
    witness = None
    lines = [f"verdict: {report.verdict}"]
    if gamma is not None:
        lines.append(f"gamma: {gamma}")
    if report.witness is not None:
        state, reason = report.witness
        witness = {"state": state, "reason": reason}
        lines.append(f"witness: {state}")
        lines.append(f"reason: {reason}")
    _emit(
        args,
        {"verdict": str(report.verdict), "gamma": gamma, "witness": witness},
        lines,
    )
    return 0


def _cmd_gamma(args) -> int:
    aut = _load_aut(args.aut)
    g = gamma_of(aut)
    _emit(args, {"gamma": str(g)}, [str(g)])
    return 0


def _cmd_principal(args) -> int:
    if args.chi is not None:
        chi = _parse_rational_list(args.chi)
        A = companion_from_chi(chi)
        config = CompleteConfig(A, unit_vector(A.dim))
        machine = orbit_automaton(config, [unit_vector(A.dim)], bound=args.bound)
    else:
        machine = build_principal(_load_aut(args.aut), bound=args.bound)
    text = machine.serialize()
    _write_or_print(args, text)
    if args.json:
        print(json.dumps(
            {"name": machine.name, "states": list(machine.states), "aut": text}
        ))
    return 0


def _cmd_orbit(args) -> int:
    A = _load_matrix(args.matrix)
    e = parse_vector(args.e)
    start = parse_vector(args.start) if args.start else e
    config = CompleteConfig(A, e)
    vectors = orbit(config, start, bound=args.bound)
    _emit(
        args,
        {"count": len(vectors), "vectors": [list(v) for v in vectors]},
        [format_vector(v) for v in vectors],
    )
    return 0


def _cmd_locate(args) -> int:
    aut = _load_aut(args.aut)
    A = _load_matrix(args.matrix)
    locmap = locate(aut, A, bound=args.bound)
    text = locmap.serialize()
    _write_or_print(args, text)
    if args.json:
        pc, ps = _poly_json(locmap.p)
        print(json.dumps({
            "p": pc,
            "p_str": ps,
            "e": list(locmap.e),
            "assignment": {s: list(v) for s, v in sorted(locmap.assignment.items())},
        }))
    return 0


def _cmd_verify(args) -> int:
    aut = _load_aut(args.aut)
    A = _load_matrix(args.matrix)
    if args.map:
        locmap = LocationMap.parse(_read(args.map))
    else:
        locmap = locate(aut, A, bound=args.bound)
    mismatch = find_location_mismatch(aut, A, locmap, max_len=args.maxlen)
    if mismatch is None:
        _emit(args, {"ok": True, "maxlen": args.maxlen, "mismatch": None},
              [f"ok: all words up to length {args.maxlen} agree"])
        return 0
    payload = {
        "ok": False,
        "maxlen": args.maxlen,
        "mismatch": {
            "state": mismatch.state,
            "word": mismatch.word,
            "automaton_output": mismatch.automaton_output,
            "vector_output": mismatch.vector_output,
        },
    }
    _emit(args, payload, [
        f"mismatch: state {mismatch.state} word {mismatch.word}: automaton "
        f"{mismatch.automaton_output}, vectors {mismatch.vector_output}",
    ])
    return 1


def _cmd_embed(args) -> int:
    A = _load_matrix(args.matrix)
    star = chi_star(char_poly(A))
    p = parse_int_poly(args.p)
    q = parse_int_poly(args.q)
    r = embed_scale(p, q, star)
    rc, rs = _poly_json(r)
    _emit(args, {"r": rc, "r_str": rs}, [f"r: {rs}"])
    return 0


def _parse_gtilde(vec: str, poly: str) -> GTildeElement:
    return GTildeElement(parse_vector(vec), parse_int_poly(poly))


def _cmd_gtilde(args) -> int:
    A = _load_matrix(args.matrix)
    if args.op == "eq":
        a = _parse_gtilde(args.v1, args.p1)
        b = _parse_gtilde(args.v2, args.p2)
        equal = gtilde_eq(a, b, A)
        _emit(args, {"equal": equal}, ["equal" if equal else "not equal"])
        return 0
    if args.op == "add":
        a = _parse_gtilde(args.v1, args.p1)
        b = _parse_gtilde(args.v2, args.p2)
        c = gtilde_add(a, b, A)
        pc, ps = _poly_json(c.p)
        _emit(args, {"v": list(c.v), "p": pc, "p_str": ps},
              [f"v: {format_vector(c.v)}", f"p: {ps}"])
        return 0
    a = _parse_gtilde(args.v1, args.p1)
    res, out = gtilde_residual(a, args.bit, A)
    pc, ps = _poly_json(res.p)
    _emit(args, {"v": list(res.v), "p": pc, "p_str": ps, "output": out},
          [f"v: {format_vector(res.v)}", f"p: {ps}", f"out: {out}"])
    return 0


def _cmd_scc(args) -> int:
    A = _load_matrix(args.matrix)
    report = check_scc_instance(A, witness_degree=args.degree, bound=args.bound)
    wc, ws = _poly_json(report.witness)
    payload = {
        "chi": [str(c) for c in report.chi.coeffs],
        "chi_star": list(report.chi_star.coeffs),
        "states": len(report.states),
        "components": [
            {"vectors": [list(v) for v in comp], "cyclic": report.decomposition.cyclic[i]}
            for i, comp in enumerate(report.decomposition.components)
        ],
        "nontrivial_components": list(report.nontrivial_components),
        "single_nontrivial": report.single_nontrivial,
        "witness": wc,
        "witness_str": ws,
        "witness_degree": report.witness_degree,
    }
    lines = [
        f"chi: {report.chi}",
        f"chi*: {report.chi_star}",
        f"states: {len(report.states)}",
        f"components: {len(report.decomposition.components)}",
    ]
    for i, comp in enumerate(report.decomposition.components):
        tag = " cyclic" if report.decomposition.cyclic[i] else ""
        lines.append(
            f"  [{i}]{tag}: " + " ".join(format_vector(v) for v in comp)
        )
    lines.append(
        "single nontrivial component: "
        + ("yes" if report.single_nontrivial else "no")
    )
    lines.append(f"witness: {ws if ws is not None else 'none'}")
    _emit(args, payload, lines)
    return 0


def _cmd_pathpoly(args) -> int:
    word = _word(args.word)
    p = path_polynomial(word)
    pc, ps = _poly_json(p)
    _emit(args, {"word": word, "poly": pc, "poly_str": ps},
          [f"{ps}", " ".join(str(c) for c in p.coeffs)])
    return 0


def _cmd_witness(args) -> int:
    star = parse_int_poly(args.chistar)
    w = witness_search(star, max_degree=args.degree)
    wc, ws = _poly_json(w)
    _emit(args, {"modulus": list(star.coeffs), "degree": args.degree,
                 "witness": wc, "witness_str": ws},
          [ws if ws is not None else "none"])
    return 0


def _cmd_infer(args) -> int:
    aut = _load_aut(args.aut)
    result = infer_matrix(
        aut,
        max_dim=args.max_dim,
        coeff_bound=args.coeff_bound,
        max_len=args.maxlen,
        bound=args.bound,
    )
    if result is None:
        _emit(args, {"found": False, "chi": None, "matrix": None, "location": None},
              ["no matrix found within bounds"])
        return 1
    mat_text = serialize_matrix(result.matrix)
    loc_text = result.location.serialize()
    pc, ps = _poly_json(result.location.p)
    payload = {
        "found": True,
        "chi": [str(c) for c in result.chi.coeffs],
        "matrix": [[str(x) for x in row] for row in result.matrix.rows],
        "location": {
            "p": pc,
            "p_str": ps,
            "e": list(result.location.e),
            "assignment": {
                s: list(v) for s, v in sorted(result.location.assignment.items())
            },
        },
    }
    lines = [f"chi: {result.chi}"]
    lines.extend(mat_text.rstrip("\n").splitlines())
    lines.extend(loc_text.rstrip("\n").splitlines())
    _emit(args, payload, lines)
    return 0


# -- parser ----------------------------------------------------------------------


def _add_json(p):
    p.add_argument("--json", action="store_true", help="emit one JSON object")


def _add_bound(p):
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                   help=f"exploration bound (default {DEFAULT_BOUND})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abmealy",
        description="Analyze abelian binary Mealy automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transduce", help="run a word through a machine state")
    p.add_argument("aut", help="AUT file")
    p.add_argument("state")
    p.add_argument("word", help="binary word, or - for the empty word")
    _add_json(p)
    p.set_defaults(func=_cmd_transduce)

    p = sub.add_parser("check", help="classify a machine by the abelian criterion")
    p.add_argument("aut")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("gamma", help="print the residual difference of the least odd state")
    p.add_argument("aut")
    _add_json(p)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("principal", help="build the principal machine")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--aut", help="derive from a machine in an AUT file")
    src.add_argument("--chi", help="derive from a characteristic polynomial "
                                   "(space separated, constant first)")
    p.add_argument("-o", "--output", help="write the AUT text to a file")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_principal)

    p = sub.add_parser("orbit", help="list vectors reachable in a complete automaton")
    p.add_argument("matrix", help="MATRIX file")
    p.add_argument("--e", required=True, help="translation vector, e.g. '(3,2)'")
    p.add_argument("--start", help="start vector (default: e)")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("locate", help="embed a machine into a complete automaton")
    p.add_argument("aut")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", help="write the location map to a file")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_locate)

    p = sub.add_parser("verify", help="recheck a location word by word")
    p.add_argument("aut")
    p.add_argument("matrix")
    p.add_argument("--map", help="location map file (default: locate first)")
    p.add_argument("--maxlen", type=int, default=10,
                   help="exhaustive word length bound (default 10)")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("embed", help="solve r*p = q modulo chi*")
    p.add_argument("matrix")
    p.add_argument("p", help="polynomial, e.g. '3 + 2x' or '3 2'")
    p.add_argument("q")
    _add_json(p)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("gtilde", help="arithmetic on fraction elements (v, p)")
    ops = p.add_subparsers(dest="op", required=True)
    for op in ("eq", "add"):
        q = ops.add_parser(op)
        q.add_argument("matrix")
        q.add_argument("v1")
        q.add_argument("p1")
        q.add_argument("v2")
        q.add_argument("p2")
        _add_json(q)
        q.set_defaults(func=_cmd_gtilde)
    q = ops.add_parser("res")
    q.add_argument("matrix")
    q.add_argument("v1")
    q.add_argument("p1")
    q.add_argument("bit", type=int, choices=(0, 1))
    _add_json(q)
    q.set_defaults(func=_cmd_gtilde)

    p = sub.add_parser("scc", help="probe the orbit of the unit vector and its negation")
    p.add_argument("matrix")
    p.add_argument("--degree", type=int, default=12,
                   help="witness search degree (default 12)")
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_scc)

    p = sub.add_parser("pathpoly", help="path polynomial of a word over 0/1/n")
    p.add_argument("word", help="word over 0, 1, n; - for the empty word")
    _add_json(p)
    p.set_defaults(func=_cmd_pathpoly)

    p = sub.add_parser("witness", help="search for a monic {-1,0,1} witness = -1 mod chi*")
    p.add_argument("chistar", help="modulus polynomial, constant first")
    p.add_argument("--degree", type=int, default=12)
    _add_json(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("infer", help="search for a matrix that fits a machine")
    p.add_argument("aut")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--coeff-bound", type=int, default=2)
    p.add_argument("--maxlen", type=int, default=10)
    _add_bound(p)
    _add_json(p)
    p.set_defaults(func=_cmd_infer)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AbmealyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
