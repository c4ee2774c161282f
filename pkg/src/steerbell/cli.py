"""Command-line interface: ``steerbell <command> [flags]``.

Exit codes: 0 success, 1 counterexample or failed proof check,
2 I/O or parse error, 3 state validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import (
    MU_DEFAULT,
    MapSpec,
    bell_via_steering,
    inverse_map,
    map_to_steering,
    settings_by_name,
)
from .errors import InvalidState, ParameterOutOfRange, ProofInvalidMu, SteerBellError, StateFormatError
from .experiments import (
    SampleSpec,
    default_grid,
    onset,
    sample_separable,
    scan_to_csv,
    verify_theorem,
    werner_scan,
)
from .lhs import components_from_json, construct_lhs, lhv_from_separable, verify_lhs
from .rng import RNG_ALGORITHM, stream
from .states import TwoQubitState, bell_state, matrix_from_json, maximally_mixed, pure_state, state_to_json, werner

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_IO, EXIT_INVALID = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def named_state(spec: str) -> TwoQubitState:
    """``bell``, ``mixed``, ``werner:<w>`` or ``basis:<ij>`` (e.g. ``basis:00``)."""
    name, _, arg = spec.partition(":")
    if name == "bell":
        return bell_state()
    if name == "mixed":
        return maximally_mixed()
    if name == "werner":
        try:
            return werner(float(arg))
        except ValueError as exc:
            raise CliError(f"bad Werner visibility {arg!r}: {exc}", EXIT_IO) from None
    if name == "basis" and len(arg) == 2 and set(arg) <= {"0", "1"}:
        psi = np.zeros(4)
        psi[int(arg, 2)] = 1.0
        return pure_state(psi)
    raise CliError(f"unknown state {spec!r}; use bell, mixed, werner:<w> or basis:<ij>", EXIT_IO)


def load_state(args) -> TwoQubitState:
    if args.state and args.input:
        raise CliError("give either --state or --in, not both", EXIT_IO)
    if args.state:
        return named_state(args.state)
    if not args.input:
        raise CliError("an input state is required (--in FILE or --state NAME)", EXIT_IO)
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc}", EXIT_IO) from None
    m = matrix_from_json(text)
    if m.shape != (4, 4):
        raise CliError("expected a two-qubit state (dim 4)", EXIT_IO)
    return TwoQubitState(m)


def write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    tau = load_state(args)
    report = bell_via_steering(tau, settings_by_name(args.settings), MapSpec(args.mu))
    if args.format == "text":
        lines = [f"mu = {report.mu:.6f}"]
        for r in report.steering:
            flag = "violated" if r.violated else "not violated"
            lines.append(f"{r.label}: S = {r.value:.6f}, C = {r.bound:.6f} ({flag})")
        lines.append(f"CHSH max = {report.chsh.max_value:.6f}")
        lines.append(f"verdict: {report.verdict}")
        write_output("\n".join(lines) + "\n", args.out)
    else:
        write_output(_dumps(report.to_dict()), args.out)
    return EXIT_OK


def cmd_map(args) -> int:
    rho = map_to_steering(load_state(args), MapSpec(args.mu))
    write_output(state_to_json(rho), args.out)
    return EXIT_OK


def cmd_invert(args) -> int:
    verdict = inverse_map(load_state(args), MapSpec(args.mu))
    if args.format == "text":
        write_output(
            f"is_density_matrix: {str(verdict.is_density_matrix).lower()}\n"
            f"min_eigenvalue: {verdict.min_eigenvalue:.12g}\n",
            args.out,
        )
        return EXIT_OK
    head = json.dumps(verdict.to_dict())[:-1]
    write_output(f'{head}, "candidate": {state_to_json(verdict.candidate).strip()}}}\n', args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    settings = settings_by_name(args.settings)
    if args.format == "text":
        text = "".join(f"C_{s.n} ({s.label}) = {s.classical_bound:.6f}\n" for s in settings)
    else:
        text = _dumps({s.label: {"n": s.n, "classical_bound": s.classical_bound} for s in settings})
    write_output(text, args.out)
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    spec = SampleSpec(args.samples, args.generator, args.seed, args.settings, args.mu)
    stats = verify_theorem(spec, workers=args.workers)
    out = {"generator": spec.generator, "seed": spec.seed, "settings": spec.settings_label,
           "mu": spec.mu, "rng": RNG_ALGORITHM, **stats.to_dict()}
    write_output(_dumps(out), args.out)
    return EXIT_COUNTEREXAMPLE if stats.n_counterexamples else EXIT_OK


def cmd_scan_werner(args) -> int:
    if not 0 < args.step <= 1:
        raise CliError("--step must lie in (0, 1]", EXIT_IO)
    rows = werner_scan(default_grid(args.step), MapSpec(args.mu))
    if args.format == "json":
        write_output(_dumps({
            "steering_onset_s6": onset(rows, "bell_via_s6"),
            "steering_onset_s10": onset(rows, "bell_via_s10"),
            "chsh_onset": onset(rows, "chsh_violated"),
            "rows": [r.__dict__ for r in rows],
        }), args.out)
    else:
        write_output(scan_to_csv(rows), args.out)
    return EXIT_OK


def cmd_check_proof(args) -> int:
    spec = MapSpec(args.mu)
    if args.input:
        try:
            data = json.loads(Path(args.input).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read components file: {exc}", EXIT_IO) from None
        comps = components_from_json(data)
    elif args.random:
        _, comps = sample_separable(stream(args.seed, 0xC0, args.random), args.random)
    else:
        raise CliError("check-proof needs --in FILE or --random K", EXIT_IO)
    model = lhv_from_separable(comps)
    ensemble = construct_lhs(model, spec)
    rho = map_to_steering(model.state(), spec)
    report = verify_lhs(ensemble, rho, args.directions, args.tol, args.seed)
    write_output(_dumps({"components": len(comps), "mu": spec.mu, **report.to_dict()}), args.out)
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerbell",
        description="Certify Bell nonlocality of two-qubit states through EPR steering.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, default=MU_DEFAULT, help="map weight (default 1/sqrt(3))")
    common.add_argument("--out", help="write output to this file (atomically)")

    state_in = argparse.ArgumentParser(add_help=False)
    state_in.add_argument("--in", dest="input", help="state JSON file")
    state_in.add_argument("--state", help="named state: bell, mixed, werner:<w>, basis:<ij>")

    settings = argparse.ArgumentParser(add_help=False)
    settings.add_argument("--settings", choices=["6", "10", "both", "n6", "n10"], default="both")

    def fmt(p, choices, default):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("analyze", parents=[common, state_in, settings], help="full nonlocality report")
    fmt(p, ["json", "text"], "json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("map", parents=[common, state_in], help="apply the steering map")
    fmt(p, ["json"], "json")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("invert", parents=[common, state_in], help="invert the steering map")
    fmt(p, ["json", "text"], "json")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("bounds", parents=[common, settings], help="classical bounds C_N")
    fmt(p, ["json", "text"], "json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-theorem", parents=[common, settings], help="Monte Carlo check")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generator", default="haar_pure", help="haar_pure, hs_mixed or separable_<k>")
    p.add_argument("--workers", type=int, default=1)
    fmt(p, ["json"], "json")
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("scan-werner", parents=[common], help="scan Werner visibilities")
    p.add_argument("--step", type=float, default=1e-3)
    fmt(p, ["csv", "json"], "csv")
    p.set_defaults(func=cmd_scan_werner)

    p = sub.add_parser("check-proof", parents=[common], help="replay the hidden-state construction")
    p.add_argument("--in", dest="input", help="components JSON file")
    p.add_argument("--random", type=int, help="use K random pure product components")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--directions", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    fmt(p, ["json"], "json")
    p.set_defaults(func=cmd_check_proof)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 < args.mu <= 1 or math.isnan(args.mu):
        print(f"steerbell: error: --mu must lie in (0, 1], got {args.mu}", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except CliError as exc:
        print(f"steerbell: error: {exc}", file=sys.stderr)
        return exc.code
    except StateFormatError as exc:
        print(f"steerbell: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidState, ProofInvalidMu) as exc:
        print(f"steerbell: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParameterOutOfRange, SteerBellError) as exc:
        print(f"steerbell: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
