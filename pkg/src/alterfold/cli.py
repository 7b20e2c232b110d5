"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import catdata, mednykh, pachner, statesum, surfacecalc
from .exactnum import AlgNum, format_algnum, format_with_decimal, is_psd, rank, sign
from .simplicial import TriangulationError, read_triangulation

__all__ = ["main", "run", "selftest"]

MOVES = {"1,5": 1, "5,1": 1, "2,4": 2, "4,2": 2, "3,3": 3, "1,3": 1, "3,1": 1, "2,2": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


class Out:
    """Report writer: human lines, or tab-separated records with --machine."""

    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def record(self, kind: str, *fields, human: str | None = None):
        if self.machine:
            print("\t".join([kind, *map(str, fields)]), file=self.stream)
        else:
            print(human if human is not None else f"{kind} " + " ".join(map(str, fields)), file=self.stream)

    def number(self, kind: str, value: AlgNum):
        if self.machine:
            self.record(kind, format_algnum(value), f"{float(value):.12g}")
        else:
            self.record(kind, human=f"{kind} {format_with_decimal(value)}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="alterfold", description="Exact state sums for an Ising-type alterfold TQFT.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, data=True, jobs=False):
        sp.add_argument("--machine", action="store_true", help="tab-separated records")
        if data:
            sp.add_argument("--data", default="ising3", help="dataset file, or ising3 / ising3-table / toy1")
        if jobs:
            sp.add_argument("--jobs", type=_positive_int, default=1)

    sp = sub.add_parser("eval", help="partition function of a triangulation")
    sp.add_argument("--triangulation", required=True)
    common(sp, jobs=True)

    sp = sub.add_parser("verify-pachner", help="check the Pachner-move equations")
    sp.add_argument("--move", required=True, choices=sorted(MOVES))
    sp.add_argument("--sample", type=_nonneg_int, help="spot-check this many boundary colorings")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-failures", type=_nonneg_int, default=20)
    common(sp, jobs=True)

    sp = sub.add_parser("gram", help="Gram matrix of surface connected types")
    sp.add_argument("--circles", type=_positive_int, required=True)
    sp.add_argument("--kernel", action="store_true")
    sp.add_argument("--psd", action="store_true")
    common(sp, data=False)

    sp = sub.add_parser("mednykh", help="check Mednykh's formula for a finite group")
    sp.add_argument("--group", required=True, help="group file or bundled name: " + ", ".join(mednykh.BUNDLED))
    sp.add_argument("--genus", type=_nonneg_int, required=True)
    common(sp, data=False)

    sp = sub.add_parser("validate-data", help="check dataset invariants")
    common(sp)

    sp = sub.add_parser("selftest", help="fast acceptance subset")
    sp.add_argument("--sample", type=_nonneg_int, default=200)
    sp.add_argument("--seed", type=int, default=1)
    common(sp, jobs=True)
    return p


def _load(name: str):
    try:
        return catdata.load_dataset(name)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except catdata.DataError as exc:
        raise UsageError(f"invalid dataset {name}: {exc}") from None


def cmd_eval(args, out: Out) -> int:
    d = _load(args.data)
    try:
        t = read_triangulation(args.triangulation)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except TriangulationError as exc:
        raise UsageError(f"invalid triangulation: {exc}") from None
    try:
        if args.jobs > 1:
            ev = statesum.evaluate_sharded(t, d, shards=args.jobs, jobs=args.jobs)
        else:
            ev = statesum.evaluate(t, d)
    except statesum.StateSumError as exc:
        raise UsageError(str(exc)) from None
    out.number("value", ev.value)
    out.record("colorings_visited", ev.colorings_visited)
    out.record("pruned", ev.pruned)
    return 0


def _report(rep: pachner.PachnerReport, out: Out, max_failures: int):
    for eq in rep.first_failures[:max_failures]:
        if out.machine:
            colors = " ".join(f"{'-'.join(map(str, s))}:{lab}" for s, lab in eq.boundary)
            out.record("failure", f"{eq.move[0]},{eq.move[1]}", colors, format_algnum(eq.lhs),
                       format_algnum(eq.rhs))
        else:
            out.record("failure", human="FAIL " + pachner.format_equation(eq))
    out.record("result", f"{rep.move[0]},{rep.move[1]}", rep.total, rep.passed, rep.failed, rep.vanishing,
               human=f"{rep.passed}/{rep.total} passed ({rep.failed} failed, "
                     f"{rep.vanishing} colorings with vanishing sums on both sides)")


def cmd_verify(args, out: Out) -> int:
    d = _load(args.data)
    k = MOVES[args.move]
    if d.n + 3 != sum(int(x) for x in args.move.split(",")):
        raise UsageError(f"move {args.move} does not apply to an n={d.n} dataset")
    if args.sample is not None:
        rep = pachner.spot_check(d, k, args.sample, args.seed)
    else:
        rep = pachner.verify(d, k, max_failures=args.max_failures, jobs=args.jobs)
    _report(rep, out, args.max_failures)
    return 0 if rep.ok else 1


def cmd_gram(args, out: Out) -> int:
    m = args.circles
    problem = surfacecalc.gram_problem(m)
    gram = surfacecalc.gram_matrix(problem)
    labels = [surfacecalc.type_label(b) for b in problem.basis]
    out.record("basis", *labels, human="basis " + " ".join(labels))
    for lab, row in zip(labels, gram.to_rows()):
        out.record("row", lab, *map(format_algnum, row), human=f"{lab}: " + ", ".join(format_with_decimal(x, 6) for x in row))
    out.record("rank", rank(gram))
    if args.kernel:
        vecs = surfacecalc.kernel_relations(m)
        out.record("kernel_dim", len(vecs))
        for v in vecs:
            out.record("kernel", *map(format_algnum, v),
                       human="kernel (" + ", ".join(format_with_decimal(x, 6) for x in v) + ")")
    if args.psd:
        out.record("psd", str(is_psd(gram)).lower())
    return 0


def cmd_mednykh(args, out: Out) -> int:
    try:
        g = mednykh.load_group(args.group)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except mednykh.GroupError as exc:
        raise UsageError(f"invalid group: {exc}") from None
    if not g.irreps:
        raise UsageError("group file has no 'irreps' line")
    try:
        homs = mednykh.count_homs(g, args.genus)
    except mednykh.GroupError as exc:
        raise UsageError(str(exc)) from None
    euler = 2 - 2 * args.genus
    lhs = homs * Fraction(g.order) ** (euler - 1)
    rhs = mednykh.state_sum_side(g.irreps, args.genus)
    out.record("homs", homs)
    out.record("lhs", lhs)
    out.record("rhs", rhs)
    ok = lhs == rhs
    out.record("mednykh", "pass" if ok else "fail")
    return 0 if ok else 1


def cmd_validate(args, out: Out) -> int:
    d = _load(args.data)
    problems = catdata.validate(d) + catdata.global_dimension_defects(d)
    for p in problems:
        out.record("violation", p)
    out.record("keys", len(d.fsymbols))
    out.record("violations", len(problems))
    return 0 if not problems else 1


# ------------------------------------------------------------------ selftest

def _suite_field(seed: int) -> bool:
    rng = random.Random(seed)

    def rnd():
        return AlgNum(*(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(4)))

    for _ in range(500):
        a, b, c = rnd(), rnd(), rnd()
        if (a + b) * c != a * c + b * c or (a * b) * c != a * (b * c):
            return False
        if not a.is_zero() and (a * a.inv() != 1 or sign(a) * sign(b) != sign(a * b)):
            return False
    return True


def _suite_gram() -> bool:
    return all(surfacecalc.quotient_dim(m) == 2 ** (m - 1) and surfacecalc.rp_check(m) for m in range(1, 5))


def _suite_mednykh() -> bool:
    return all(mednykh.mednykh_check(mednykh.load_group(n), None, g) for n in mednykh.BUNDLED for g in range(4))


def selftest(data: str = "ising3", sample: int = 200, seed: int = 1, jobs: int = 1,
             emit: Callable[[str, bool], None] | None = None) -> dict[str, bool]:
    """Run the fast acceptance subset; returns suite name -> passed."""
    results: dict[str, bool] = {}

    def run_suite(name, fn):
        try:
            ok = bool(fn())
        except Exception:  # noqa: BLE001 - any crash is a failed suite
            ok = False
        results[name] = ok
        if emit:
            emit(name, ok)
        return ok

    d_holder = {}

    def validate():
        d = catdata.load_dataset(data)
        d_holder["d"] = d
        return not catdata.validate(d) and not catdata.global_dimension_defects(d)

    if not run_suite("validate-data", validate):
        for name in ("field", "gram", "mednykh", "pachner-spot"):
            results[name] = False
            if emit:
                emit(name, False)
        return results
    run_suite("field", lambda: _suite_field(seed))
    run_suite("gram", _suite_gram)
    run_suite("mednykh", _suite_mednykh)
    d = d_holder["d"]
    run_suite("pachner-spot", lambda: all(pachner.spot_check(d, k, sample, seed).ok for k in (1, 2, 3)))
    return results


def cmd_selftest(args, out: Out) -> int:
    results = selftest(args.data, args.sample, args.seed, args.jobs,
                       emit=lambda name, ok: out.record("suite", name, "pass" if ok else "fail",
                                                        human=f"{name}: {'pass' if ok else 'FAIL'}"))
    return 0 if all(results.values()) else 1


COMMANDS = {
    "eval": cmd_eval,
    "verify-pachner": cmd_verify,
    "gram": cmd_gram,
    "mednykh": cmd_mednykh,
    "validate-data": cmd_validate,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, Out(args.machine, stdout))
    except UsageError as exc:
        print(str(exc).rstrip(), file=stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
