"""Command-line front door: estimate from CSV, run simulations, kernel tools.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal error.  No output file is written on an error path.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

from .errors import (
    CensTailError,
    ConfigError,
    DegenerateP,
    DomainError,
    EmptySample,
    InvalidIndicator,
    InvalidK,
    InvalidSpec,
    NonPositiveObservation,
    ParseError,
    UnknownKernel,
    ZeroSurvivalAtThreshold,
)
from .estimators import ESTIMATOR_NAMES, estimate_path
from .kernels import (
    BUILTIN_KERNEL_NAMES,
    MomentSpec,
    asymptotic_bias,
    asymptotic_variance,
    builtin_kernel,
    check_kernel_axioms,
)
from .samples import CsvFormat, read_csv, render_csv, sort_with_concomitants
from .simulate import SimulationConfig, run_simulation

WORKERS_ENV_VAR = "CENS_TAIL_THREADS"

_USAGE_ERRORS = (ConfigError, InvalidSpec, UnknownKernel, DomainError)
_DATA_ERRORS = (
    ParseError,
    InvalidIndicator,
    NonPositiveObservation,
    EmptySample,
    InvalidK,
    DegenerateP,
    ZeroSurvivalAtThreshold,
    FileNotFoundError,
    IsADirectoryError,
    PermissionError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(
        prog="censtail",
        description="Tail-index estimation for right-censored heavy-tailed data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate tail indices from a CSV sample")
    est.add_argument("--input", required=True, help="value,delta CSV file")
    est.add_argument("--output", required=True, help="destination CSV path")
    est.add_argument("--k", type=int, help="single number of top order statistics")
    est.add_argument("--k-min", type=int, help="start of a k grid")
    est.add_argument("--k-max", type=int, help="end of a k grid (inclusive)")
    est.add_argument("--k-step", type=int, default=1, help="k grid step (default 1)")
    est.add_argument(
        "--estimators",
        default="hill,efg,worms,mns",
        help=f"comma list from {{{','.join(ESTIMATOR_NAMES)}}}",
    )
    est.add_argument(
        "--kernels",
        default="biweight,triweight",
        help=f"comma list from {{{','.join(BUILTIN_KERNEL_NAMES)}}}; empty to skip",
    )
    est.add_argument(
        "--header",
        choices=("auto", "present", "absent"),
        default="auto",
        help="whether the input file starts with a header line",
    )

    sim = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    sim.add_argument("--config", required=True, help="JSON configuration file")
    sim.add_argument("--output", required=True, help="destination CSV path; a JSON "
                     "result document is written next to it")
    sim.add_argument("--seed", type=int, help="override the configured master seed")

    mom = sub.add_parser("moments", help="print asymptotic moments of a kernel")
    mom.add_argument("--kernels", default="indicator,biweight,triweight",
                     help="comma list of kernels")
    mom.add_argument("--p", type=float, required=True,
                     help="upper uncensored proportion, must exceed 1/2")
    mom.add_argument("--gamma1", type=float, required=True, help="tail index")
    mom.add_argument("--tau1", type=float, default=0.0,
                     help="second-order parameter, <= 0")
    mom.add_argument("--lam", type=float, default=0.0,
                     help="second-order bias scale")

    chk = sub.add_parser("check-kernels", help="verify the kernel axioms")
    chk.add_argument("--kernels", default=",".join(BUILTIN_KERNEL_NAMES),
                     help="comma list of kernels")
    return parser


def _split_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _k_values(args):
    if args.k is not None:
        if args.k_min is not None or args.k_max is not None:
            raise _UsageError("--k and --k-min/--k-max are mutually exclusive")
        return [args.k]
    if args.k_min is None or args.k_max is None:
        raise _UsageError("either --k or both --k-min and --k-max are required")
    if args.k_step < 1:
        raise _UsageError("--k-step must be >= 1")
    if args.k_max < args.k_min:
        raise _UsageError("--k-max must be >= --k-min")
    return list(range(args.k_min, args.k_max + 1, args.k_step))


def _write_atomic(path, text):
    """Write text to path via a same-directory temp file and rename, so a
    failure can never leave a partial output file behind."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_estimate(args):
    header = {"auto": None, "present": True, "absent": False}[args.header]
    sample = read_csv(args.input, CsvFormat(header=header))
    sorted_sample = sort_with_concomitants(sample)
    estimators = _split_list(args.estimators)
    for name in estimators:
        if name not in ESTIMATOR_NAMES:
            raise _UsageError(f"unknown estimator {name!r}")
    if "p_hat" not in estimators:
        estimators = ["p_hat"] + estimators
    kernels = [builtin_kernel(name) for name in _split_list(args.kernels)]
    path = estimate_path(sorted_sample, _k_values(args), estimators, kernels)
    _write_atomic(args.output, render_csv(path.to_table()))
    return 0


def _cmd_simulate(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {args.config}: {exc}") from None
    config = SimulationConfig.from_json_dict(doc)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    env_workers = os.environ.get(WORKERS_ENV_VAR)
    if env_workers:
        try:
            config = dataclasses.replace(config, workers=int(env_workers))
        except ValueError:
            raise ConfigError(
                f"{WORKERS_ENV_VAR} must be an integer, got {env_workers!r}"
            ) from None
    result = run_simulation(config)
    json_path = os.path.splitext(args.output)[0] + ".json"
    csv_text = render_csv(result.to_table())
    json_text = json.dumps(result.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_atomic(args.output, csv_text)
    _write_atomic(json_path, json_text)
    print(f"wrote {args.output} and {json_path}")
    return 0


def _cmd_moments(args):
    spec = MomentSpec(gamma1=args.gamma1, p=args.p, tau1=args.tau1, lam=args.lam)
    for name in _split_list(args.kernels):
        kernel = builtin_kernel(name)
        mu = asymptotic_bias(kernel, spec)
        sigma2 = asymptotic_variance(kernel, spec)
        print(f"{kernel.name}: mu_K = {mu:.12g}, sigma2_K = {sigma2:.12g}")
    return 0


def _cmd_check_kernels(args):
    all_passed = True
    for name in _split_list(args.kernels):
        report = check_kernel_axioms(builtin_kernel(name))
        verdicts = (
            f"monotone={'pass' if report.monotone else 'FAIL'} "
            f"support={'pass' if report.support_ok else 'FAIL'} "
            f"integral={report.integral:.12f}"
            f"({'pass' if report.integrates_to_one else 'FAIL'}) "
            f"bounded={'pass' if report.bounded else 'FAIL'}"
        )
        print(f"{report.kernel_name}: {verdicts}")
        all_passed = all_passed and report.passed
    return 0 if all_passed else 2


_COMMANDS = {
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "moments": _cmd_moments,
    "check-kernels": _cmd_check_kernels,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CensTailError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
