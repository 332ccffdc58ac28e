"""Command line entry point.

Conventions: machine-readable JSON goes to stdout, human-readable text to
stderr.  Exit codes: 0 all checks passed, 1 a check failed or the flow blew
up, 2 bad configuration (unparseable flags, files, or matrices).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import cochain, suites, toda
from .homalg import HomLieContext
from .linalg import (
    Involution,
    InvolutionError,
    LinearAlgebraError,
    NotSymmetricError,
    involution_from_spec,
    parse_matrix,
    read_matrix,
)
from .sampling import random_tridiagonal_symmetric


class ConfigError(Exception):
    """Unusable command line configuration; maps to exit code 2."""


def _default_seed() -> int:
    raw = os.environ.get("HOMLIE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"HOMLIE_SEED must be an integer, got {raw!r}")


def _alternating_signs_spec(n: int) -> str:
    if n == 1:
        return "id"
    signs = ["1" if i % 2 == 0 else "-1" for i in range(n)]
    return "diag(" + ",".join(signs) + ")"


def _resolve_involution(arg: str | None, n: int) -> tuple[Involution, str]:
    """An involution from an inline form, a matrix file, or the default
    alternating sign pattern; returns it with its identifier string."""
    if arg is None:
        spec = _alternating_signs_spec(n)
        return involution_from_spec(spec, n), spec
    try:
        return involution_from_spec(arg, n), arg.strip()
    except InvolutionError as exc:
        inline_err = exc
    path = Path(arg)
    if path.exists():
        try:
            beta = Involution(read_matrix(path))
        except (LinearAlgebraError, ValueError) as exc:
            raise ConfigError(f"--beta file {arg}: {exc}")
        if beta.n != n:
            raise ConfigError(
                f"--beta file {arg} is {beta.n}x{beta.n} but n={n} was requested"
            )
        return beta, f"file:{path.name}"
    raise ConfigError(f"--beta {arg!r}: {inline_err} (and no such file exists)")


def _load_matrix(arg: str, what: str) -> np.ndarray:
    path = Path(arg)
    if path.exists():
        try:
            return read_matrix(path)
        except (LinearAlgebraError, ValueError) as exc:
            raise ConfigError(f"{what} file {arg}: {exc}")
    try:
        return parse_matrix(arg)
    except (LinearAlgebraError, ValueError) as exc:
        raise ConfigError(f"{what} {arg!r} is neither a file nor inline matrix text: {exc}")


def _emit(report, json_out=True) -> int:
    if json_out:
        sys.stdout.write(report.to_json())
    sys.stderr.write(report.summary_text() + "\n")
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    beta, beta_id = _resolve_involution(args.beta, args.n)
    fn = {
        "algebra": suites.algebra_suite,
        "cochain": suites.cochain_suite,
        "group": suites.group_suite,
        "all": suites.combined_suite,
    }[args.suite]
    report = fn(beta, seed=args.seed, samples=args.samples, beta_id=beta_id)
    return _emit(report)


def _cmd_cohomology(args) -> int:
    if args.n > cochain.MAX_COHOMOLOGY_N:
        raise ConfigError(
            f"cohomology is brute-force and capped at n <= {cochain.MAX_COHOMOLOGY_N}"
        )
    beta, beta_id = _resolve_involution(args.beta, args.n)
    kmax = min(args.kmax, args.n * args.n)
    report = cochain.cohomology(HomLieContext(beta), kmax)
    payload = {
        "schema": 1,
        "suite": "cohomology",
        "config": {"n": args.n, "beta_id": beta_id, "kmax": kmax},
        "n": args.n,
        "beta_id": beta_id,
    }
    payload.update(report.to_dict())
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    sys.stderr.write(report.format_table() + "\n")
    return 0 if report.dims_match else 1


def _cmd_group(args) -> int:
    beta, beta_id = _resolve_involution(args.beta, 2 if args.case == "o11" else args.n)
    if args.case == "o11" and args.n != 2:
        raise ConfigError("the hyperbolic components are 2x2; use --n 2")
    conjugator = None
    if args.C is not None:
        conjugator = _load_matrix(args.C, "--C")
        if conjugator.shape != (beta.n, beta.n):
            raise ConfigError("--C dimension does not match --n")
    if args.case in ("gl", "on", "det") and args.n < 2:
        raise ConfigError(f"--case {args.case} needs n >= 2")
    report = suites.group_case_report(
        args.case,
        args.n,
        beta,
        seed=args.seed,
        samples=args.samples,
        beta_id=beta_id,
        conjugator=conjugator,
    )
    return _emit(report)


def _cmd_toda(args) -> int:
    beta, beta_id = _resolve_involution(args.beta, args.n)
    if args.l0 is not None and args.random_seed is not None:
        raise ConfigError("give either --l0 or --random-seed, not both")
    if args.l0 is not None:
        l0 = _load_matrix(args.l0, "--l0")
        if l0.shape != (args.n, args.n):
            raise ConfigError(f"--l0 is {l0.shape[0]}x{l0.shape[1]} but n={args.n}")
    else:
        seed = args.random_seed if args.random_seed is not None else args.seed
        l0 = random_tridiagonal_symmetric(np.random.default_rng(seed), args.n)
    config = {
        "n": args.n,
        "beta_id": beta_id,
        "t_end": args.t_end,
        "dt": args.dt,
        "record_every": args.record,
    }
    try:
        ctx = HomLieContext(beta)
        traj = toda.integrate(ctx, l0, args.t_end, args.dt, record_every=args.record)
        aborted = False
    except (NotSymmetricError, LinearAlgebraError, ValueError) as exc:
        raise ConfigError(str(exc))
    except toda.FlowBlowupError as exc:
        sys.stderr.write(f"integration aborted: {exc}\n")
        traj = exc.trajectory
        aborted = True
    if args.out:
        traj.write_csv(args.out)
        sys.stderr.write(f"trajectory written to {args.out}\n")
    if args.plot_data:
        traj.write_plot_csv(args.plot_data)
        sys.stderr.write(f"plot data written to {args.plot_data}\n")
    sys.stdout.write(json.dumps(traj.summary_dict(config), indent=2, sort_keys=True) + "\n")
    drift = traj.drift_summary()
    for key in sorted(drift):
        sys.stderr.write(f"  {key}: {drift[key]}\n")
    return 1 if aborted else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homlie",
        description="Twisted matrix brackets, their cohomology, group "
        "components, and the deformed Toda flow: verification suites and "
        "a small simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_n=2):
        p.add_argument("--n", type=int, default=default_n, help="matrix dimension")
        p.add_argument(
            "--beta",
            default=None,
            help="involution: inline ('id', 'diag(1,-1,...)', 'perm(i,j)') or a "
            "matrix file; default alternates diagonal signs",
        )
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help="RNG seed (default: env HOMLIE_SEED, else 0)",
        )

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "suite",
        nargs="?",
        default="all",
        choices=["algebra", "cochain", "group", "all"],
        help="which suite (default: all)",
    )
    common(p)
    p.add_argument("--samples", type=int, default=100, help="random draws per check")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("cohomology", help="brute-force cohomology of both complexes")
    common(p)
    p.add_argument(
        "--kmax", type=int, default=4, help="highest cochain degree (capped at n**2)"
    )
    p.set_defaults(fn=_cmd_cohomology)

    p = sub.add_parser("group", help="one focused group-level check")
    p.add_argument(
        "--case",
        required=True,
        choices=["gl", "on", "o11", "mbeta", "morphism", "det"],
        help="which component or theorem to check",
    )
    common(p)
    p.add_argument("--samples", type=int, default=100, help="random draws per check")
    p.add_argument("--C", default=None, help="conjugator matrix (file or inline)")
    p.set_defaults(fn=_cmd_group)

    p = sub.add_parser("toda", help="integrate the deformed Toda flow")
    common(p, default_n=4)
    p.add_argument("--l0", default=None, help="initial symmetric matrix (file or inline)")
    p.add_argument(
        "--random-seed",
        type=int,
        default=None,
        help="draw a random symmetric tridiagonal start instead of --l0",
    )
    p.add_argument("--t-end", type=float, default=10.0, help="integration horizon")
    p.add_argument("--dt", type=float, default=1e-3, help="RK4 step size")
    p.add_argument(
        "--record", type=int, default=10, help="record every this many steps"
    )
    p.add_argument("--out", default=None, help="trajectory CSV path")
    p.add_argument("--plot-data", default=None, help="reduced CSV (t, eigenvalues, trL2)")
    p.set_defaults(fn=_cmd_toda)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", None) is None:
            args.seed = _default_seed()
        if args.n < 1:
            raise ConfigError("--n must be a positive integer")
        return args.fn(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InvolutionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
