"""Command line front end (``hznf``).

Field files hold one term per line::

    hznf 1
    params 3
    rotation 1
    # l k [mu exponents] coefficient
    E 1 1 [0,0,0] 1
    E 0 1 [0,1,0] 3/2

Exit codes: 0 success, 1 degenerate input or failed check, 2 parse or
usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction
from typing import Optional

from . import algebra as alg
from .algebra import AlgebraElement, ContractError, ScalarSeries
from .engine import (
    DegenerateError,
    NormalFormResult,
    normalize_orbital,
    normalize_parametric,
    normalize_state,
    solve_symmetry,
)
from .verify import (
    cone_invariance_check,
    first_integral_obstruction,
    reproduce_paper_example,
)

__all__ = ["ParseError", "parse_field", "serialize_field", "result_doc", "main", "run"]

FORMAT_VERSION = 1
EXIT_OK, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_TERM = re.compile(r"^E\s+(\d+)\s+(\d+)\s+\[([^\]]*)\]\s+(\S+)$")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _rational(text: str, line: int) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(line, f"malformed rational {text!r}")
    return Fraction(text)


def parse_field(text: str) -> AlgebraElement:
    """Parse a field file; duplicate terms are summed."""
    q: Optional[int] = None
    rotation = Fraction(0)
    terms: dict = {}
    seen_header = False
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if not seen_header:
            if words != ["hznf", str(FORMAT_VERSION)]:
                raise ParseError(no, f"expected header 'hznf {FORMAT_VERSION}'")
            seen_header = True
            continue
        if words[0] == "params":
            if len(words) != 2 or not words[1].isdigit():
                raise ParseError(no, "expected 'params <q>'")
            if q is not None or terms:
                raise ParseError(no, "'params' must come once, before any term")
            q = int(words[1])
        elif words[0] == "rotation":
            if len(words) != 2:
                raise ParseError(no, "expected 'rotation <p/q>'")
            rotation = _rational(words[1], no)
        elif words[0] == "E":
            m = _TERM.match(line)
            if m is None:
                raise ParseError(no, "expected 'E <l> <k> [m1,...,mq] <p/q>'")
            l, k = int(m.group(1)), int(m.group(2))
            inner = m.group(3).strip()
            try:
                mu = tuple(int(t) for t in inner.split(",")) if inner else ()
            except ValueError:
                raise ParseError(no, f"malformed exponent list [{inner}]") from None
            c = _rational(m.group(4), no)
            if q is None:
                q = 0
            if len(mu) != q:
                raise ParseError(no, f"expected {q} parameter exponents, got {len(mu)}")
            if any(e < 0 for e in mu):
                raise ParseError(no, "negative parameter exponent")
            if l > k:
                raise ParseError(no, f"E^{l}_{k} needs l <= k")
            if l == 0 and k == 0 and not any(mu):
                raise ParseError(no, "the constant term E 0 0 [] is not allowed")
            terms[(l, k, mu)] = terms.get((l, k, mu), 0) + c
        else:
            raise ParseError(no, f"unknown directive {words[0]!r}")
    if not seen_header:
        raise ParseError(1, f"missing header 'hznf {FORMAT_VERSION}'")
    return AlgebraElement(terms, rotation=rotation, q=q or 0)


def _sorted_items(v: AlgebraElement):
    return sorted(v.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))


def serialize_field(v: AlgebraElement) -> str:
    lines = [f"hznf {FORMAT_VERSION}", f"params {v.q}"]
    if v.rotation:
        lines.append(f"rotation {v.rotation}")
    for (l, k, m), c in _sorted_items(v):
        lines.append(f"E {l} {k} [{','.join(map(str, m))}] {c}")
    return "\n".join(lines) + "\n"


def _terms_json(items) -> list:
    return [{"l": l, "k": k, "mu": list(m), "coeff": str(c)}
            for (l, k, m), c in sorted(items, key=lambda kv: kv[0])]


def _field_json(v: AlgebraElement) -> dict:
    return {"params": v.q, "rotation": str(v.rotation), "terms": _terms_json(v.items())}


def _entry_json(e) -> dict:
    out = {"stage": e.stage, "kind": e.kind, "grade": e.grade, "level": e.level}
    if e.S is not None:
        out["S"] = _terms_json(e.S.items())
    if e.T is not None:
        out["T"] = _terms_json(e.T.items())
    if e.P is not None:
        out["P"] = [[{"mu": list(m), "coeff": str(c)} for m, c in sorted(comp.items())]
                    for comp in e.P.components]
    if e.scale is not None:
        out["scale"] = str(e.scale)
    if e.matrix is not None:
        out["matrix"] = [[str(x) for x in row] for row in e.matrix]
    return out


def result_doc(mode: str, res: NormalFormResult, emit_transforms: bool = False,
               verification: Optional[dict] = None) -> dict:
    tr = res.truncation
    doc = {
        "format": FORMAT_VERSION,
        "mode": mode,
        "r": res.r,
        "rDetected": res.r_detected,
        "caseTag": res.case_tag,
        "truncation": {"maxGrade": tr.max_grade, "maxParamDegree": tr.max_param_deg},
        "field": _field_json(res.normalized),
    }
    if emit_transforms:
        doc["transforms"] = [_entry_json(e) for e in res.log]
    if verification is not None:
        doc["verification"] = verification
    return doc


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _normalize(args) -> int:
    v = parse_field(_read(args.input))
    if args.mode == "state":
        res = normalize_state(v, args.max_grade)
    elif args.mode == "orbital":
        res = normalize_orbital(v, args.max_grade)
    else:
        res = normalize_parametric(v, args.max_grade, args.max_param_degree)
    verification = None
    if args.verify:
        verification = {
            "inputCone": cone_invariance_check(v),
            "outputCone": cone_invariance_check(res.normalized),
            "logReplay": res.log.replay(v) == res.normalized,
        }
    if args.format == "json":
        doc = result_doc(args.mode, res, args.emit_transforms, verification)
        print(json.dumps(doc, indent=2))
    else:
        print(f"# mode {args.mode}")
        print(f"# r {res.r if res.r_detected else 'not detected <= max grade'}")
        print(f"# case {res.case_tag}")
        if verification is not None:
            for name, ok in verification.items():
                print(f"# verify {name} {'ok' if ok else 'FAILED'}")
        if args.emit_transforms:
            for e in res.log:
                print(f"# transform {e.stage} {e.kind} grade={e.grade} level={e.level}")
        sys.stdout.write(serialize_field(res.normalized))
    if verification is not None and not all(verification.values()):
        return EXIT_DEGENERATE
    return EXIT_OK


def _bracket(args) -> int:
    v = parse_field(_read(args.left))
    w = parse_field(_read(args.right))
    if v.q != w.q:
        raise ParseError(1, f"parameter counts differ ({v.q} vs {w.q})")
    out = alg.bracket(v, w)
    if args.format == "json":
        print(json.dumps(_field_json(out), indent=2))
    else:
        sys.stdout.write(serialize_field(out))
    return EXIT_OK


def _check_integral(args) -> int:
    v = parse_field(_read(args.input))
    dim = first_integral_obstruction(v.without_rotation(), args.max_deg)
    print(f"dimension: {dim}")
    return EXIT_OK


def _random_tuple(rng: random.Random) -> tuple:
    while True:
        a, b, c, d, e = (Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))
                         for _ in range(5))
        if a * b * (d * a - c * b) != 0 and a != b:
            return a, b, c, d, e


def _example(args) -> int:
    rng = random.Random(args.seed)
    reports = [reproduce_paper_example(*_random_tuple(rng), max_grade=args.max_grade,
                                       max_param_deg=args.max_param_degree)
               for _ in range(args.trials)]
    passed = sum(r.passed for r in reports)
    if args.format == "json":
        print(json.dumps({"trials": args.trials, "passed": passed,
                          "reports": [r.as_dict() for r in reports]}, indent=2))
    else:
        for r in reports:
            params = ",".join(map(str, r.params))
            if r.error:
                print(f"({params}) error: {r.error}")
                continue
            print(f"({params}) beta1={r.beta1} [{'ok' if r.beta1_ok else 'expected ' + str(r.expected_beta1)}]"
                  f" beta2={r.beta2} [{'ok' if r.beta2_ok else 'expected ' + str(r.expected_beta2)}]"
                  f" unfolding={'ok' if r.unit_unfolding else 'bad'}")
        print(f"passed {passed}/{args.trials}")
    return EXIT_OK if passed == args.trials else EXIT_DEGENERATE


def _symmetry(args) -> int:
    u = parse_field(_read(args.input))
    sol = solve_symmetry(u, args.l, args.k, args.max_grade)
    if sol is None:
        print("no solution below the truncation")
        return EXIT_DEGENERATE
    S, T = sol
    if args.format == "json":
        print(json.dumps({"S": _terms_json(S.items()),
                          "T": _terms_json(T.items()) if T is not None else []}, indent=2))
    else:
        print("# state part")
        sys.stdout.write(serialize_field(S))
        print("# time part")
        for (l, k, m), c in sorted((T or ScalarSeries()).items()):
            print(f"Z {l} {k} [{','.join(map(str, m))}] {c}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hznf", description="Simplest normal forms of quasi-Eulerian Hopf-zero fields.")
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("normalize", help="normalize a field file")
    n.add_argument("--input", "-i", default="-", help="field file, '-' for stdin")
    n.add_argument("--mode", choices=["state", "orbital", "parametric"], default="state")
    n.add_argument("--max-grade", type=int, default=12)
    n.add_argument("--max-param-degree", type=int, default=4)
    n.add_argument("--format", choices=["text", "json"], default="text")
    n.add_argument("--emit-transforms", action="store_true")
    n.add_argument("--verify", action="store_true", help="check cone invariance and log replay")
    n.set_defaults(func=_normalize)

    b = sub.add_parser("bracket", help="Lie bracket of two field files")
    b.add_argument("left")
    b.add_argument("right")
    b.add_argument("--format", choices=["text", "json"], default="text")
    b.set_defaults(func=_bracket)

    c = sub.add_parser("check-integral", help="dimension of polynomial first integrals")
    c.add_argument("--input", "-i", default="-")
    c.add_argument("--max-deg", type=int, default=8)
    c.set_defaults(func=_check_integral)

    e = sub.add_parser("example", help="run the three-parameter worked example on random tuples")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--trials", type=int, default=20)
    e.add_argument("--max-grade", type=int, default=12)
    e.add_argument("--max-param-degree", type=int, default=3)
    e.add_argument("--format", choices=["text", "json"], default="text")
    e.set_defaults(func=_example)

    s = sub.add_parser("symmetry", help="solve for a symmetry generator of an orbital normal form")
    s.add_argument("--input", "-i", default="-")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-grade", type=int, default=12)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=_symmetry)
    return p


def run(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"hznf: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hznf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateError, ContractError) as exc:
        print(f"hznf: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"hznf: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
