"""Command-line interface: compute, verify, and mkstate subcommands.

Exit codes: 0 success (for verify: every determinate trial passed),
1 verification failures, 2 state-file parse failure (with line and
column on stderr), 3 state invariant violation, 64 usage errors
(unknown suite or family, malformed or out-of-range parameters).
"""

from __future__ import annotations

import argparse
import re
import sys

from .criteria import ppt_criterion, reduction_criterion
from .entropy import (
    lemma2_bound,
    negative_conditional_entropy,
    von_neumann_entropy,
)
from .errors import (
    InputError,
    NormalizationError,
    ShapeError,
    StateFileParseError,
    StateInvariantError,
)
from .solver import ree_ppt
from .statefile import dumps_state, load_state
from .states import (
    BipartiteDims,
    bell_diagonal,
    partial_trace_A,
    partial_trace_B,
    pure_from_schmidt,
    random_density,
    singlet,
    werner,
)
from .verify import (
    SUITE_NAMES,
    record_to_json,
    run_suite,
    summary_to_json,
)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_USAGE = 64

_FAMILIES = ("singlet", "werner", "bell_diagonal", "random", "pure_schmidt")


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped onto exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _parse_dims(text: str) -> BipartiteDims:
    m = re.fullmatch(r"(\d+)x(\d+)", text)
    if not m:
        raise InputError(f"dims must look like 2x2, got {text!r}")
    da, db = int(m.group(1)), int(m.group(2))
    if da < 1 or db < 1:
        raise InputError(f"dims must be positive, got {text!r}")
    return BipartiteDims(da, db)


def _parse_weights(text: str, name: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"{name} must be comma-separated numbers, got {text!r}") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="reelab", description="Entropic entanglement toolbox.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_compute = sub.add_parser("compute", help="report entropies and criteria for a state file")
    p_compute.add_argument("state", help="path to a state file")
    p_compute.add_argument("--ree", action="store_true", help="also run the REE solver")
    p_compute.add_argument(
        "--tol-criteria", type=float, default=1e-9, metavar="X",
        help="PSD tolerance for the criterion verdicts",
    )

    p_verify = sub.add_parser("verify", help="run a seeded verification suite")
    p_verify.add_argument("suite", help="one of: " + "|".join(SUITE_NAMES))
    p_verify.add_argument("--trials", type=int, default=100, metavar="N")
    p_verify.add_argument("--seed", type=int, default=0, metavar="S")
    p_verify.add_argument("--dims", default="2x2", metavar="dAxdB")
    p_verify.add_argument("--out", default=None, metavar="PATH",
                          help="write records there instead of stdout")
    for name in SUITE_NAMES:
        p_verify.add_argument(
            f"--tol-{name}", type=float, default=None, metavar="X",
            help=f"override the {name} suite tolerance",
        )

    p_mkstate = sub.add_parser("mkstate", help="write a canonical state file")
    p_mkstate.add_argument("family", help="one of: " + "|".join(_FAMILIES))
    p_mkstate.add_argument("--F", type=float, default=None,
                           help="werner singlet weight in [0, 1]")
    p_mkstate.add_argument("--weights", default=None, metavar="p0,p1,p2,p3",
                           help="bell_diagonal mixing weights")
    p_mkstate.add_argument("--alpha", default=None, metavar="a0,a1,...",
                           help="pure_schmidt coefficients, squares sum to 1")
    p_mkstate.add_argument("--dims", default=None, metavar="dAxdB")
    p_mkstate.add_argument("--seed", type=int, default=None, metavar="S")
    p_mkstate.add_argument("--rank", type=int, default=None, metavar="R")
    p_mkstate.add_argument("--out", default=None, metavar="PATH")
    return parser


def _cmd_compute(args) -> int:
    try:
        state = load_state(args.state)
    except StateFileParseError as exc:
        where = ""
        if exc.line is not None:
            where = f" at line {exc.line}, column {exc.column}"
        print(f"reelab: parse failure{where}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StateInvariantError as exc:
        print(f"reelab: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"reelab: cannot read {args.state}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if state.dims is None:
        print(
            "reelab: invariant violation: state file carries no dims, "
            "but the computed quantities need an A|B split",
            file=sys.stderr,
        )
        return EXIT_INVARIANT

    tol = args.tol_criteria
    red = reduction_criterion(state, tol)
    ppt = ppt_criterion(state, tol)
    lines = [
        f"dims: {state.dims.da}x{state.dims.db}",
        f"entropy_joint_bits: {_fmt(von_neumann_entropy(state))}",
        f"entropy_a_bits: {_fmt(von_neumann_entropy(partial_trace_B(state)))}",
        f"entropy_b_bits: {_fmt(von_neumann_entropy(partial_trace_A(state)))}",
        f"neg_conditional_a_bits: {_fmt(negative_conditional_entropy(state, 'A'))}",
        f"neg_conditional_b_bits: {_fmt(negative_conditional_entropy(state, 'B'))}",
        f"lemma2_bound_bits: {_fmt(lemma2_bound(state))}",
        f"reduction_holds: {_bool(red.holds)}",
        f"reduction_witness: {_fmt(float(red.witness_eigenvalue))}",
        f"ppt_holds: {_bool(ppt.holds)}",
        f"ppt_witness: {_fmt(float(ppt.witness_eigenvalue))}",
    ]
    if args.ree:
        res = ree_ppt(state)
        lines += [
            f"ree_bits: {_fmt(res.value_bits)}",
            f"ree_converged: {_bool(res.converged)}",
            f"ree_iterations: {res.iterations}",
            f"ree_grad_norm: {_fmt(res.final_grad_norm)}",
        ]
    print("\n".join(lines))
    return EXIT_OK


def _cmd_verify(args, parser: _Parser) -> int:
    if args.suite not in SUITE_NAMES:
        parser.print_usage(sys.stderr)
        print(
            f"reelab: unknown suite {args.suite!r}; expected one of "
            + ", ".join(SUITE_NAMES),
            file=sys.stderr,
        )
        return EXIT_USAGE
    overrides = {
        name: getattr(args, f"tol_{name}")
        for name in SUITE_NAMES
        if getattr(args, f"tol_{name}") is not None
    }
    stray = sorted(set(overrides) - {args.suite})
    if stray:
        print(
            "reelab: tolerance overrides for suites not being run: "
            + ", ".join(stray),
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        dims = _parse_dims(args.dims)
        result = run_suite(
            args.suite,
            trials=args.trials,
            seed=args.seed,
            dims=dims,
            tol=overrides.get(args.suite),
        )
    except (InputError, NormalizationError, ShapeError) as exc:
        print(f"reelab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    lines = [record_to_json(r) for r in result.records]
    lines.append(summary_to_json(result.summary))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(summary_to_json(result.summary))
    return EXIT_OK if result.all_pass else EXIT_FAILURES


def _flag_clash(args, family: str, allowed: set[str]) -> str | None:
    given = {
        name
        for name in ("F", "weights", "alpha", "dims", "seed", "rank")
        if getattr(args, name) is not None
    }
    extra = sorted(given - allowed)
    if extra:
        return f"family {family!r} does not take --" + ", --".join(extra)
    return None


def _cmd_mkstate(args) -> int:
    family = args.family
    if family not in _FAMILIES:
        print(
            f"reelab: unknown family {family!r}; expected one of "
            + ", ".join(_FAMILIES),
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        if family == "singlet":
            clash = _flag_clash(args, family, set())
            if clash:
                raise InputError(clash)
            state = singlet()
        elif family == "werner":
            clash = _flag_clash(args, family, {"F"})
            if clash:
                raise InputError(clash)
            if args.F is None:
                raise InputError("werner needs --F")
            state = werner(args.F)
        elif family == "bell_diagonal":
            clash = _flag_clash(args, family, {"weights"})
            if clash:
                raise InputError(clash)
            if args.weights is None:
                raise InputError("bell_diagonal needs --weights p0,p1,p2,p3")
            state = bell_diagonal(_parse_weights(args.weights, "--weights"))
        elif family == "random":
            clash = _flag_clash(args, family, {"dims", "seed", "rank"})
            if clash:
                raise InputError(clash)
            if args.dims is None or args.seed is None:
                raise InputError("random needs --dims and --seed")
            dims = _parse_dims(args.dims)
            rank = dims.total if args.rank is None else args.rank
            state = random_density(dims.total, rank, args.seed).tagged(dims.da, dims.db)
        else:
            clash = _flag_clash(args, family, {"alpha", "dims"})
            if clash:
                raise InputError(clash)
            if args.alpha is None or args.dims is None:
                raise InputError("pure_schmidt needs --alpha and --dims")
            dims = _parse_dims(args.dims)
            state = pure_from_schmidt(_parse_weights(args.alpha, "--alpha"), dims).density()
    except ValueError as exc:
        # InputError, NormalizationError, ShapeError, StateInvariantError,
        # and numpy's own seed validation are all ValueError subclasses
        print(f"reelab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = dumps_state(state)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "compute":
        return _cmd_compute(args)
    if args.command == "verify":
        return _cmd_verify(args, parser)
    if args.command == "mkstate":
        return _cmd_mkstate(args)
    parser.print_usage(sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
