"""Command-line entry point: JSON in, JSON out.

Exit codes: 0 success, 2 malformed input, 3 search budget exhausted or
undecided verdict, 4 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .classify import CrossCheckError, pipeline
from .cup_complex import TripleCupForm, homology
from .exact_linalg import IntMatrix, smith_normal_form
from .lattice import (
    DEFAULT_BUDGET,
    SearchBudgetExhausted,
    Verdict,
    diagonalize_stably,
    discriminant,
    split_presentation,
    stably_equivalent,
)
from .surgery_cone import ConeModel, cone_rank, mn_rank, x_set

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_UNDECIDED = 3
EXIT_CROSSCHECK = 4

_SAFE_INT = 2 ** 53


class MalformedInput(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= _SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _read(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(str(exc)) from exc


def _parse(fn, data):
    try:
        return fn(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"{type(exc).__name__}: {exc}") from exc


def _cmd_cup_homology(args):
    mu = _parse(TripleCupForm.from_json, _read(args.input))
    return homology(mu).to_json(), EXIT_OK


def _cmd_classify(args):
    mu = _parse(TripleCupForm.from_json, _read(args.input))
    if mu.b not in (3, 4):
        raise MalformedInput(f"classification needs b = 3 or 4, got {mu.b}")
    return pipeline(mu), EXIT_OK


def _cmd_mn_rank(args):
    if args.n < 0:
        raise MalformedInput("--n must be nonnegative")
    step = x_set()[args.step - 1].matrix
    return {"n": args.n, "rank": mn_rank(args.n, step)}, EXIT_OK


def _cmd_cone_rank(args):
    model = _parse(ConeModel.from_json, _read(args.input))
    return {"rank": cone_rank(model), "theta_shift": model.theta_shift()}, EXIT_OK


def _cmd_x_set(args):
    return [{"index": x.index, "matrix": x.matrix.to_dict()} for x in x_set()], EXIT_OK


def _matrix(args) -> IntMatrix:
    return _parse(IntMatrix.from_dict, _read(args.input))


def _symmetric(args) -> IntMatrix:
    m = _matrix(args)
    if not m.is_symmetric():
        raise MalformedInput("expected a symmetric matrix")
    return m


def _cmd_snf(args):
    return smith_normal_form(_matrix(args)).to_dict(), EXIT_OK


def _cmd_discriminant(args):
    d = discriminant(_symmetric(args))
    return {**d.to_json(), "order": d.order}, EXIT_OK


def _cmd_stably_equivalent(args):
    data = _read(args.input)
    left = _parse(lambda d: IntMatrix.from_dict(d["left"]), data)
    right = _parse(lambda d: IntMatrix.from_dict(d["right"]), data)
    verdict = _parse(lambda _: stably_equivalent(left, right, args.budget), None)
    code = EXIT_UNDECIDED if verdict is Verdict.UNDECIDED else EXIT_OK
    return {"verdict": verdict.value}, code


def _cmd_diagonalize(args):
    m = _symmetric(args)
    try:
        d = diagonalize_stably(m, args.budget)
    except SearchBudgetExhausted as exc:
        return {"verdict": "undecided", "partial": exc.partial}, EXIT_UNDECIDED
    return {"stabilizer": d.stabilizer, "change_of_basis": d.change_of_basis.to_dict(),
            "diagonal": d.diagonal}, EXIT_OK


def _cmd_split_presentation(args):
    m = _symmetric(args)
    try:
        p = split_presentation(m, args.budget)
    except SearchBudgetExhausted as exc:
        return {"verdict": "undecided", "partial": exc.partial}, EXIT_UNDECIDED
    return p.to_json(), EXIT_OK


def _random_form(rng: random.Random, b: int, bound: int) -> TripleCupForm:
    from itertools import combinations
    return TripleCupForm.from_dict(
        b, {t: rng.randint(-bound, bound) for t in combinations(range(1, b + 1), 3)})


def _cmd_self_check(args):
    rng = random.Random(args.seed)
    checked = 0
    for _ in range(args.count):
        b = rng.choice((3, 4))
        pipeline(_random_form(rng, b, 9))
        checked += 1
    return {"seed": args.seed, "checked": checked, "status": "ok"}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfinf", description="HF-infinity predictions from triple cup product forms")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="search budget for lattice computations (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
        p.set_defaults(func=fn)
        return p

    with_input("cup-homology", _cmd_cup_homology, "homology of the d3 complex of a cup form")
    with_input("classify", _cmd_classify, "surgery class and cross-checked HF^inf rank (b1 = 3, 4)")
    with_input("cone-rank", _cmd_cone_rank, "mapping-cone rank of a canonical-basis model")
    with_input("snf", _cmd_snf, "Smith normal form of an integer matrix")
    with_input("discriminant", _cmd_discriminant, "discriminant-bilinear form of a lattice")
    with_input("stably-equivalent", _cmd_stably_equivalent,
               "stable equivalence of {\"left\": matrix, \"right\": matrix}")
    with_input("diagonalize", _cmd_diagonalize, "stable diagonalization with certificate")
    with_input("split-presentation", _cmd_split_presentation,
               "homologically split presentation from a linking matrix")

    p = sub.add_parser("mn-rank", help="HF^inf rank of M_n via the composition induction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--step", type=int, default=1, choices=range(1, 7),
                   help="which X element represents D^{-Z_1} (default 1)")
    p.set_defaults(func=_cmd_mn_rank)

    p = sub.add_parser("x-set", help="print the six X matrices")
    p.set_defaults(func=_cmd_x_set)

    p = sub.add_parser("self-check", help="randomized classify/homology/cone agreement check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=_cmd_self_check)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, code = args.func(args)
    except MalformedInput as exc:
        print(f"hfinf: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except CrossCheckError as exc:
        print(f"hfinf: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    sys.stdout.write(dumps(result) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
