"""Command-line interface.

Exit codes: 0 success, 1 valid input with a negative verdict, 2 malformed
input or a structural failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from .configuration import ConfigurationError, validate_configuration
from .diagram import FORMATS, build_simple_diagram, emit_diagram
from .documents import (
    DocumentError,
    document_layer,
    dump_characteristic,
    dump_skeleton,
    parse_characteristic,
    parse_skeleton,
    skeleton_to_dot,
)
from .dynamics import ModelFamily, MTooSmall, SynchronizedData, enumerate_sparkling, m_min, plus_points
from .generate import InfeasibleRequest, random_characteristic
from .marked import (
    CharacteristicData,
    MarkedCircleSet,
    characteristic_witness,
    combinatorial_equivalent,
    format_fraction,
    non_synchronized,
    validate_characteristic,
)
from .realization import NotRealizable, check_realizable, realize
from .skeleton import SkeletonError, extract_characteristic_data, validate_skeleton

OK, NEGATIVE, STRUCTURAL = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise _Fail(STRUCTURAL, f"cannot read {path}: {exc.strerror}") from None


def _load_data(path: str) -> CharacteristicData:
    try:
        return parse_characteristic(_read(path))
    except DocumentError as exc:
        raise _Fail(STRUCTURAL, f"{path}: parse error at {exc}") from None
    except ConfigurationError as exc:
        raise _Fail(NEGATIVE, f"{path}: {exc}") from None


def _load_valid_data(path: str) -> CharacteristicData:
    D = _load_data(path)
    problems = validate_characteristic(D)
    if problems:
        raise _Fail(STRUCTURAL, f"{path}: invalid characteristic data: " + "; ".join(problems))
    return D


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------- commands


def cmd_validate(args: argparse.Namespace) -> int:
    D = _load_data(args.input)
    lines = [f"configuration {D.config.word}: ok"]
    failed = False
    problems = validate_characteristic(D)
    lines.append("characteristic sets: ok" if not problems else "characteristic sets: FAIL")
    lines += [f"  {p}" for p in problems]
    failed |= bool(problems)
    plus = list(D.Aplus.points) + ([D.beta1] if D.config.a2 == 1 and D.beta1 is not None else [])
    if non_synchronized(MarkedCircleSet(plus), D.Aminus):
        lines.append("non-synchronized: ok")
    else:
        lines.append("non-synchronized: FAIL (Malta-Palis condition fails)")
        failed = True
    print("\n".join(lines))
    return NEGATIVE if failed else OK


def cmd_realize(args: argparse.Namespace) -> int:
    D = _load_valid_data(args.input)
    report = check_realizable(D)
    if not report:
        raise _Fail(STRUCTURAL, "not realizable; failed conditions: " + ", ".join(report.failed)
                    + "\n" + "\n".join(report.messages))
    g = realize(D)
    _write(dump_skeleton(g), args.out)
    if args.dot:
        Path(args.dot).write_text(skeleton_to_dot(g))
    return OK


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        g = parse_skeleton(_read(args.input))
    except DocumentError as exc:
        raise _Fail(STRUCTURAL, f"{args.input}: parse error at {exc}") from None
    problems = validate_skeleton(g)
    if problems:
        raise _Fail(STRUCTURAL, "invalid skeleton:\n" + "\n".join(f"  {p}" for p in problems))
    try:
        D = extract_characteristic_data(g)
    except SkeletonError as exc:
        raise _Fail(STRUCTURAL, f"invalid skeleton: {exc}") from None
    _write(dump_characteristic(D, layer="combinatorial"), args.out)
    return OK


def cmd_equiv(args: argparse.Namespace) -> int:
    A, B = _load_valid_data(args.a), _load_valid_data(args.b)
    try:
        combinatorial = args.layer == "combinatorial" or "combinatorial" in (
            document_layer(_read(args.a)), document_layer(_read(args.b)))
    except DocumentError as exc:
        raise _Fail(STRUCTURAL, f"parse error at {exc}") from None
    if combinatorial:
        same = combinatorial_equivalent(A, B)
        print("equivalent (combinatorial layer)" if same else "inequivalent (combinatorial layer)")
        return OK if same else NEGATIVE
    if A.config != B.config:
        print(f"inequivalent: configurations {A.config.word} and {B.config.word} differ")
        return NEGATIVE
    w = characteristic_witness(A, B)
    if w is None:
        print("inequivalent")
        return NEGATIVE
    print("equivalent")
    print(f"alpha: {format_fraction(w.alignment.alpha)}")
    print(f"Aplus rotation: {w.alignment.shift_plus}")
    print(f"Aminus rotation: {w.alignment.shift_minus}")
    print(f"L1 class map: {list(w.L1_map)}")
    print(f"L2 class map: {list(w.L2_map)}")
    return OK


def cmd_sparkle(args: argparse.Namespace) -> int:
    D = _load_valid_data(args.input)
    family = ModelFamily()
    lowest = m_min(family, args.lam)
    if args.m_from < lowest:
        raise _Fail(STRUCTURAL, f"m = {args.m_from} is below m_min = {lowest} for the model family")
    if args.m_to < args.m_from:
        raise _Fail(STRUCTURAL, "--m-to must not be smaller than --m-from")
    try:
        events = enumerate_sparkling(family, D, args.lam, range(args.m_from, args.m_to + 1))
    except SynchronizedData as exc:
        raise _Fail(NEGATIVE, str(exc)) from None
    except MTooSmall as exc:
        raise _Fail(STRUCTURAL, str(exc)) from None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epsilon", "i", "j", "m", "lambda"])
    for e in events:
        writer.writerow([repr(e.epsilon), e.i, e.j, e.m, repr(args.lam)])
    _write(buf.getvalue(), args.csv)
    return OK


def cmd_diagram(args: argparse.Namespace) -> int:
    D = _load_valid_data(args.input)
    if not non_synchronized(MarkedCircleSet(plus_points(D, 0.0)), D.Aminus):
        raise _Fail(NEGATIVE, "Malta-Palis condition fails: the data is synchronized")
    try:
        d = build_simple_diagram(D, args.periods, ModelFamily() if args.numeric else None)
    except NotRealizable as exc:
        raise _Fail(STRUCTURAL, str(exc)) from None
    _write(emit_diagram(d, args.format), args.out)
    return OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        config = validate_configuration(args.config)
    except ConfigurationError as exc:
        raise _Fail(STRUCTURAL, str(exc)) from None
    rng = random.Random(args.seed)
    try:
        D = random_characteristic(config, args.k, args.n, args.l, args.m_count, rng,
                                  allow_pairs=args.two_element_classes)
    except InfeasibleRequest as exc:
        raise _Fail(STRUCTURAL, str(exc)) from None
    _write(dump_characteristic(D), args.out)
    return OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pchc", description="Characteristic data and skeletons of PC-HC families.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable[[argparse.Namespace], int], help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check a characteristic-data document")
    sp.add_argument("input")

    sp = add("realize", cmd_realize, "build a skeleton from characteristic data")
    sp.add_argument("input")
    sp.add_argument("--out", help="skeleton JSON path (default stdout)")
    sp.add_argument("--dot", help="also write Graphviz DOT here")

    sp = add("extract", cmd_extract, "read characteristic data off a skeleton")
    sp.add_argument("input")
    sp.add_argument("--out")

    sp = add("equiv", cmd_equiv, "decide equivalence of two characteristic-data documents")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--layer", choices=("auto", "full", "combinatorial"), default="auto",
                    help="auto compares combinatorially when either document came from a skeleton")

    sp = add("sparkle", cmd_sparkle, "sparkling connection values for the model family")
    sp.add_argument("input")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--m-from", type=int, default=30)
    sp.add_argument("--m-to", type=int, default=40)
    sp.add_argument("--csv", help="CSV path (default stdout)")

    sp = add("diagram", cmd_diagram, "simple bifurcation diagram")
    sp.add_argument("input")
    sp.add_argument("--periods", type=int, default=1)
    sp.add_argument("--format", choices=FORMATS, default="dot")
    sp.add_argument("--numeric", action="store_true", help="attach eps values from the model family")
    sp.add_argument("--out")

    sp = add("gen", cmd_gen, "random realizable characteristic data")
    sp.add_argument("--config", required=True)
    sp.add_argument("--k", type=int, default=2, help="size of Aplus")
    sp.add_argument("--n", type=int, default=2, help="size of Aminus")
    sp.add_argument("--l", type=int, default=2, help="size of L1")
    sp.add_argument("--m-count", type=int, default=2, help="size of L2")
    sp.add_argument("--seed", type=int, default=0)
    pairs = sp.add_mutually_exclusive_group()
    pairs.add_argument("--two-element-classes", dest="two_element_classes", action="store_const", const=True,
                       help="require that two-element classes may be drawn")
    pairs.add_argument("--singletons-only", dest="two_element_classes", action="store_const", const=False)
    sp.add_argument("--out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
