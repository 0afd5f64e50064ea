"""Command-line interface: ``clusterweyl build | mutate | verify``.

Exit codes: ``0`` success / all checks pass, ``1`` a check failed, ``2`` usage
error (bad type, inadmissible ``m``, malformed sequence file, ...).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from . import lie_data
from .cluster_core import (
    Mutate, MutationSequence, Swap, apply_sequence, green_trace, initial_seed,
    tropical_sign,
)
from .lie_data import cartan_data, parse_type
from .quiver_builders import build_affine_periodic, build_periodic, build_window, vertex_label
from .weyl_action import Report, R_i_sequence, r_word_sequence

SUITES = ("mutation", "braid", "green", "peripheral", "closed-form", "root-embedding",
          "qchar", "qchar-infinite", "poisson", "toda")


class UsageError(ValueError):
    """Invalid command-line input (exit code 2)."""


@dataclass(frozen=True)
class Task:
    """One unit of verification work: ``func(*args)`` returning a :class:`Report`."""

    func: Callable[..., Report]
    args: tuple


def _run_task(task: Task) -> Report:
    return task.func(*task.args)


# ---------------------------------------------------------------------------
# suite construction
# ---------------------------------------------------------------------------

def default_m(suite: str, t) -> int:
    """Smallest admissible ``m`` for a suite: ``2``, or ``max(2, rank)`` for the y-side suites."""
    if suite == "qchar":
        return max(2, t.rank)
    return 2


def _braid_pair(t, m, i, j, budget):
    from .weyl_action import verify_braid
    return verify_braid(t, m, i, j, time_budget=budget)


def _green_all(t, m):
    from .weyl_action import verify_green_word
    rep = Report("green", str(t), m)
    for i in t.nodes:
        rep.extend(verify_green_word(t, m, [i]))
    rep.extend(verify_green_word(t, m, lie_data.longest_word(t)))
    return rep


def _root_embedding(t, m, seed, count):
    from .weyl_action import root_embedding_check
    rng = random.Random(seed)
    rep = Report("root-embedding", str(t), m)
    words = [lie_data.random_reduced_word(t, rng) for _ in range(count)]
    words.append(lie_data.longest_word(t))
    for w in words:
        sub = root_embedding_check(t, m, w)
        # the one-step formulas are repeated for every word; keep them once
        for c in sub.checks:
            if c.ref != "root embedding one-step" or w is words[0]:
                rep.checks.append(c)
    return rep


def _qchar(t, m):
    from . import qchar_bridge as qb
    rep = Report("qchar", str(t), m)
    rep.extend(qb.lemma_AY_check(t))
    rep.extend(qb.diagram_check(t, m))
    rep.extend(qb.qchar_invariance(t, m))
    return rep


def default_r_hat_window(t, K: int) -> tuple[int, int]:
    step = max(cartan_data(t).step(i) for i in t.nodes)
    return -(K + 4) * step, 2 * step


def _qchar_infinite(t, K, window):
    from .qchar_bridge import r_hat_invariance
    return r_hat_invariance(t, window or default_r_hat_window(t, K), K)


def _poisson(t, m):
    from .qchar_bridge import beta_poisson_check
    from .toda_bridge import sigma_check
    rep = beta_poisson_check(t, m)
    rep.extend(sigma_check(t, m))
    return rep


def _toda(t, m, seed, points):
    from .toda_bridge import numerical_toda_check, screening_vs_hamiltonian, toda_diagram_check
    rep = toda_diagram_check(t, m)
    rep.extend(numerical_toda_check(t, m, seed, points))
    rep.extend(screening_vs_hamiltonian(t))
    return rep


def suite_tasks(suite: str, t, m: int, args) -> list[Task]:
    from . import weyl_action as wa
    if suite == "mutation":
        return [Task(wa.mutation_check, (t, m, args.steps, args.seed))]
    if suite == "braid":
        pairs = [(i, j) for i, j in lie_data.iter_node_pairs(t)
                 if (args.i is None or args.i in (i, j)) and (args.j is None or args.j in (i, j))]
        if not pairs:
            raise UsageError(f"no node pair of {t} matches --i {args.i} --j {args.j}")
        tasks = [Task(_braid_pair, (t, m, i, j, args.time_budget)) for i, j in pairs]
        if str(t) in ("B2", "G2") and args.i is None and args.j is None:
            tasks.append(Task(wa.trajectory_check, (t, m)))
        return tasks
    if suite == "green":
        return [Task(_green_all, (t, m))]
    if suite == "peripheral":
        return [Task(wa.peripheral_check, (t, m, i)) for i in t.nodes if args.i in (None, i)]
    if suite == "closed-form":
        return [Task(wa.quiver_preservation_check, (t, m)), Task(wa.closed_form_check, (t, m))]
    if suite == "root-embedding":
        return [Task(_root_embedding, (t, m, args.seed, args.words))]
    if suite == "qchar":
        return [Task(_qchar, (t, m))]
    if suite == "qchar-infinite":
        return [Task(_qchar_infinite, (t, args.order, tuple(args.window) if args.window else None))]
    if suite == "poisson":
        return [Task(_poisson, (t, m))]
    if suite == "toda":
        if args.numeric:
            from .toda_bridge import numerical_toda_check
            return [Task(numerical_toda_check, (t, m, args.seed, args.points))]
        return [Task(_toda, (t, m, args.seed, args.points))]
    raise UsageError(f"unknown suite {suite!r}")


def run_suite(suite: str, t, m: int, args) -> Report:
    tasks = suite_tasks(suite, t, m, args)
    report = Report(suite, str(t), None if suite == "qchar-infinite" else m)
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]
    for sub in results:
        report.extend(sub)
    return report


# ---------------------------------------------------------------------------
# sequence files
# ---------------------------------------------------------------------------

def parse_sequence(text: str, t, m: int) -> MutationSequence:
    """Parse ``mu i k``, ``swap i k i' k'``, ``R i`` and ``Rword i_p ... i_1`` lines.

    Blank lines and ``#`` comments are ignored.  ``Rword`` follows the
    word convention of :func:`r_word_sequence` (rightmost letter first).
    """
    moves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise UsageError(f"line {lineno}: non-integer argument in {raw!r}") from None
        if head == "mu" and len(nums) == 2:
            moves.append(Mutate(tuple(nums)))
        elif head == "swap" and len(nums) == 4:
            moves.append(Swap(tuple(nums[:2]), tuple(nums[2:])))
        elif head == "R" and len(nums) == 1:
            if nums[0] not in t.nodes:
                raise UsageError(f"line {lineno}: node {nums[0]} not in {t}")
            moves.extend(R_i_sequence(t, m, nums[0]))
        elif head == "Rword" and nums:
            if any(i not in t.nodes for i in nums):
                raise UsageError(f"line {lineno}: word {nums} has nodes outside {t}")
            moves.extend(r_word_sequence(t, m, nums))
        else:
            raise UsageError(f"line {lineno}: cannot parse {raw!r}")
    return MutationSequence(tuple(moves))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _type_arg(s: str):
    try:
        return parse_type(s)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args) -> int:
    t = _type_arg(args.type)
    if args.window is not None and args.m is not None:
        raise UsageError("--window and --m are mutually exclusive")
    try:
        if args.window is not None:
            if args.affine or args.dual_affine:
                raise UsageError("affine builds are periodic only")
            Q = build_window(t, *args.window)
        else:
            m = 2 if args.m is None else args.m
            if args.affine or args.dual_affine:
                Q = build_affine_periodic(t, m, dual=args.dual_affine)
            else:
                Q = build_periodic(t, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = cartan_data(t).d
    if args.format == "dot":
        out = Q.to_dot(name=str(t), label=lambda v: vertex_label(v, d))
    elif args.format == "text":
        out = "\n".join(f"{vertex_label(u, d)} -> {vertex_label(v, d)}" + (f" x{e}" if e > 1 else "")
                        for u, v, e in Q.arrows())
    else:
        out = json.dumps(Q.to_json_obj(), indent=2)
    _emit(out, args.output)
    return 0


def cmd_mutate(args) -> int:
    t = _type_arg(args.type)
    m = 2 if args.m is None else args.m
    try:
        Q = build_periodic(t, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = sys.stdin.read() if args.sequence == "-" else open(args.sequence, encoding="utf-8").read()
    seq = parse_sequence(text, t, m)
    try:
        seq.validate(Q)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid move: {exc}") from None
    trace, trop = green_trace(Q, seq)
    obj = {
        "type": str(t),
        "m": m,
        "moves": [str(mv) for mv in seq],
        "green_trace": trace,
        "quiver_preserved": trop.quiver == Q,
        "tropical": {vertex_label(v, cartan_data(t).d): list(x) for v, x in zip(trop.quiver.vertices, trop.x)},
        "tropical_signs": {vertex_label(v, cartan_data(t).d): tropical_sign(x)
                           for v, x in zip(trop.quiver.vertices, trop.x)},
    }
    if not args.tropical_only:
        s = apply_sequence(initial_seed(Q), seq)
        obj["seed"] = {
            "quiver": s.quiver.to_json_obj(),
            "X": [str(x) for x in s.X],
            "A": [str(a) for a in s.A],
        }
    _emit(json.dumps(obj, indent=2), args.output)
    return 0


def cmd_verify(args) -> int:
    t = _type_arg(args.type)
    suite = args.suite or args.suite_pos
    if suite is None:
        raise UsageError("a suite is required (positional or --suite)")
    if args.suite and args.suite_pos and args.suite != args.suite_pos:
        raise UsageError(f"conflicting suites {args.suite_pos!r} and {args.suite!r}")
    if args.infinite:
        if suite != "qchar":
            raise UsageError("--infinite only applies to the qchar suite")
        suite = "qchar-infinite"
    for name in ("i", "j"):
        node = getattr(args, name)
        if node is not None and node not in t.nodes:
            raise UsageError(f"--{name} {node} is not a node of {t}")
    suites = SUITES if suite == "all" else (suite,)
    reports = []
    for suite in suites:
        m = default_m(suite, t) if args.m is None else args.m
        if suite == "qchar" and m <= t.rank - 1:
            raise UsageError(f"suite qchar needs m > rank - 1 = {t.rank - 1} for {t}, got m={m}")
        if m < 2:
            raise UsageError(f"periodicity m={m} must be >= 2")
        reports.append(run_suite(suite, t, m, args))
    if len(reports) == 1:
        obj = reports[0].as_dict()
    else:
        obj = {"suite": "all", "type": str(t), "m": args.m,
               "checks": [c for r in reports for c in r.as_dict()["checks"]]}
    _emit(json.dumps(obj, indent=2), args.output)
    return 0 if all(r.ok for r in reports) else 1


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 as well; keep the message format
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clusterweyl", description="Cluster realisations of Weyl group actions on lattice quivers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build a periodic, window or affine quiver")
    b.add_argument("--type", required=True)
    b.add_argument("--m", type=int)
    b.add_argument("--window", type=int, nargs=2, metavar=("KMIN", "KMAX"))
    g = b.add_mutually_exclusive_group()
    g.add_argument("--affine", action="store_true", help="add the untwisted affine node 0")
    g.add_argument("--dual-affine", action="store_true", help="add the node 0 of the dual affine type")
    b.add_argument("--format", choices=("json", "dot", "text"), default="json")
    b.add_argument("--output")
    b.set_defaults(func=cmd_build)

    mu = sub.add_parser("mutate", help="replay a sequence file on the initial seed of Q_m")
    mu.add_argument("sequence", help="sequence file ('-' for stdin)")
    mu.add_argument("--type", required=True)
    mu.add_argument("--m", type=int)
    mu.add_argument("--tropical-only", action="store_true", help="skip the symbolic X/A replay")
    mu.add_argument("--output")
    mu.set_defaults(func=cmd_mutate)

    v = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    v.add_argument("suite_pos", nargs="?", choices=SUITES + ("all",), metavar="SUITE",
                   help="suite to run: " + ", ".join(SUITES + ("all",)))
    v.add_argument("--suite", choices=SUITES + ("all",), help="same as the positional SUITE")
    v.add_argument("--type", required=True)
    v.add_argument("--m", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--steps", type=int, default=1000, help="random mutation steps (mutation suite)")
    v.add_argument("--words", type=int, default=50, help="random reduced words (root-embedding suite)")
    v.add_argument("--points", "--samples", dest="points", type=int, default=20,
                   help="random points (toda suite)")
    v.add_argument("--numeric", action="store_true", help="toda suite: only the numerical Toda check")
    v.add_argument("--infinite", action="store_true", help="qchar suite: run the truncated r-hat check")
    v.add_argument("--i", type=int, help="restrict braid/peripheral checks to node pairs containing I")
    v.add_argument("--j", type=int, help="restrict braid checks to node pairs containing J")
    v.add_argument("--order", type=int, default=4, help="truncation grade K (qchar-infinite suite)")
    v.add_argument("--window", type=int, nargs=2, metavar=("KMIN", "KMAX"),
                   help="index window (qchar-infinite suite)")
    v.add_argument("--time-budget", type=float, default=120.0,
                   help="seconds allowed per symbolic braid replay")
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"clusterweyl: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"clusterweyl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
