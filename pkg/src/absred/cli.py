"""Command-line frontend: parse inputs, dispatch, emit JSON/CSV reports.

Exit codes of ``check``: 0 = In, 1 = Out, 2 = Unknown, 64 = usage error.
Other commands exit 0 on success and 64 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import oracle as oracle_mod
from .ared import AredOptions, ared_decide, ared_objective, witness_unitary
from .config import TOLERANCE_PROFILES
from .linalg import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    matrix_from_json,
    matrix_to_json,
)
from .schmidt import cluster, hat_entries
from .sets import (
    PseudoPureParams,
    Verdict,
    appt_member,
    ared_mu_threshold,
    ger_member,
    lambda_max,
    ls_member,
    ppt_member,
    pseudopure_spectrum,
    pseudopure_thresholds,
    red_member,
    sepball_member,
)

USAGE_ERROR = 64
EXIT_BY_STATUS = {"In": 0, "Out": 1, "Unknown": 2}

SPECTRUM_SETS = {"ared", "appt", "ger", "sepball"}
MATRIX_SETS = {"red:a", "red:b", "ppt"}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise CliError(message)


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.asarray([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError as exc:
        raise CliError(f"could not parse {text!r} as comma-separated reals: {exc}")


def _load_spectrum(arg: str, dims: BipartiteDims) -> tuple[Spectrum, list[int]]:
    """Inline csv, the literal 'uniform', or a JSON file.  Returns the spectrum
    and the permutation that sorted the given values descending."""
    if arg == "uniform":
        return Spectrum.uniform(dims), list(range(dims.d))
    if os.path.exists(arg):
        with open(arg) as fh:
            payload = json.load(fh)
        file_dims = payload.get("dims")
        if file_dims is not None and tuple(file_dims) != (dims.n, dims.k):
            raise CliError(f"file dims {file_dims} disagree with --dims {dims.n},{dims.k}")
        raw = np.asarray(payload["values"], dtype=float)
    else:
        raw = _parse_floats(arg)
    perm = list(np.argsort(-raw, kind="stable"))
    try:
        return Spectrum(dims, raw), [int(p) for p in perm]
    except ValueError as exc:
        raise CliError(str(exc))


def _load_density(path: str, dims: BipartiteDims) -> DensityMatrix:
    try:
        with open(path) as fh:
            payload = json.load(fh)
        return DensityMatrix(dims, matrix_from_json(payload))
    except (OSError, KeyError, ValueError) as exc:
        raise CliError(f"could not load density matrix from {path}: {exc}")


def _emit(report: dict, args) -> None:
    if getattr(args, "quiet", False):
        return
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _verdict_report(verdict: Verdict, dims: BipartiteDims, extra: dict | None = None) -> dict:
    report = {
        "v": 1,
        "set": verdict.set_id,
        "dims": [dims.n, dims.k],
        "status": verdict.status,
        "certificate": verdict.certificate,
        "margin": verdict.margin,
    }
    if extra:
        report.update(extra)
    return report


def cmd_check(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    sid = args.set.lower()
    extra: dict = {}
    if sid in MATRIX_SETS:
        if not args.matrix:
            raise CliError(f"set {sid!r} needs --matrix")
        rho = _load_density(args.matrix, dims)
        if sid == "ppt":
            verdict = ppt_member(rho, tol)
        else:
            verdict = red_member(rho, sid.split(":")[1], tol)
    else:
        if not args.spectrum:
            raise CliError(f"set {sid!r} needs --spectrum")
        spectrum, perm = _load_spectrum(args.spectrum, dims)
        extra["permutation"] = perm
        if sid == "ared":
            options = AredOptions(seed=args.seed, force_optimizer=args.force_optimizer)
            report = ared_decide(spectrum, options, tol)
            verdict = report.verdict
            extra.update({"method": report.method, "min_value": report.min_value,
                          "argmin": report.argmin.tolist()})
        elif sid == "appt":
            verdict = appt_member(spectrum, tol)
        elif sid == "ger":
            verdict = ger_member(spectrum, tol)
        elif sid == "sepball":
            verdict = sepball_member(spectrum, tol)
        elif sid.startswith("ls:"):
            try:
                p = int(sid.split(":", 1)[1])
            except ValueError:
                raise CliError(f"bad ls set id {sid!r}")
            verdict = ls_member(spectrum, p, tol)
        else:
            raise CliError(f"unknown set id {sid!r}")
    _emit(_verdict_report(verdict, dims, extra), args)
    return EXIT_BY_STATUS[verdict.status]


def cmd_hat(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    x = _parse_floats(args.schmidt)
    try:
        pattern = hat_entries(x, dims, tol)
        merged = cluster(x[x > 0], tol.cluster_rel).merged
    except ValueError as exc:
        raise CliError(str(exc))
    _emit(
        {
            "v": 1,
            "dims": [dims.n, dims.k],
            "schmidt": [float(v) for v in x],
            "pattern": pattern,
            "sorted": sorted(pattern),
            "merged_clusters": merged,
        },
        args,
    )
    return 0


def cmd_lambda(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    try:
        value = lambda_max(args.set, dims)
    except ValueError as exc:
        raise CliError(str(exc))
    report = {"v": 1, "set": args.set.lower(), "dims": [dims.n, dims.k], "value": value}
    if args.verify:
        report["verification"] = _verify_lambda(args.set.lower(), dims, value, args.seed, tol)
    _emit(report, args)
    return 0


def _verify_lambda(sid: str, dims: BipartiteDims, value: float, seed: int, tol) -> dict:
    """Exhibit a member spectrum whose largest eigenvalue attains the bound."""
    d = dims.d
    if sid == "ared":
        mu = ared_mu_threshold(dims)
        spec = pseudopure_spectrum(dims, mu)
        verdict = ared_decide(spec, AredOptions(seed=seed), tol).verdict
        return {
            "construction": "pseudo-pure state at the membership threshold",
            "mu": mu,
            "spectrum": spec.values.tolist(),
            "lambda1": float(spec.values[0]),
            "attains": bool(abs(spec.values[0] - value) < 1e-10),
            "status": verdict.status,
        }
    if sid.startswith("ls:"):
        p = int(sid.split(":", 1)[1])
        a = 1.0 / (d + p - 1)
        vals = np.full(d, a)
        vals[0] = p * a
        spec = Spectrum(dims, vals)
        verdict = ls_member(spec, p, tol)
    elif sid == "sepball":
        vals = np.full(d, (1.0 - 2.0 / d) / (d - 1))
        vals[0] = 2.0 / d
        spec = Spectrum(dims, vals)
        verdict = sepball_member(spec, tol)
    elif sid in ("appt", "asep", "ger"):
        spec = pseudopure_spectrum(dims, d / (d + 2.0))
        verdict = ger_member(spec, tol) if sid == "ger" else appt_member(spec, tol)
    else:
        return {"construction": "none"}
    return {
        "construction": "extremal spectrum",
        "spectrum": spec.values.tolist(),
        "lambda1": float(spec.values[0]),
        "attains": bool(abs(spec.values[0] - value) < 1e-10),
        "status": verdict.status,
    }


def cmd_pseudopure(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    nu = _parse_floats(args.schmidt)
    try:
        params = PseudoPureParams(dims, nu, args.mu)
    except ValueError as exc:
        raise CliError(str(exc))
    verdicts = pseudopure_thresholds(params, tol)
    _emit(
        {
            "v": 1,
            "dims": [dims.n, dims.k],
            "mu": args.mu,
            "schmidt": [float(v) for v in params.nu],
            "verdicts": {name: v.to_json() for name, v in verdicts.items()},
            "spectrum": pseudopure_spectrum(dims, args.mu).values.tolist(),
        },
        args,
    )
    return 0


def cmd_witness(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    spectrum, _ = _load_spectrum(args.spectrum, dims)
    if args.schmidt:
        x = _parse_floats(args.schmidt)
        x = x / x.sum()
    else:
        report = ared_decide(spectrum, AredOptions(seed=args.seed), tol)
        x = report.argmin
    try:
        U, lam_min = witness_unitary(spectrum, x, tol)
        pairing = ared_objective(spectrum, np.sort(x)[::-1], tol)
    except ValueError as exc:
        raise CliError(str(exc))
    _emit(
        {
            "v": 1,
            "dims": [dims.n, dims.k],
            "schmidt": [float(v) for v in np.sort(x)[::-1]],
            "pairing": pairing,
            "lambda_min": lam_min,
            "unitary": matrix_to_json(U),
        },
        args,
    )
    return 0


def cmd_oracle(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    spectrum, _ = _load_spectrum(args.spectrum, dims)
    inject = None
    witness_info: dict = {}
    if args.inject_witness:
        report = ared_decide(spectrum, AredOptions(seed=args.seed), tol)
        U, lam_min = witness_unitary(spectrum, report.argmin, tol)
        inject = U
        witness_info = {"witness_schmidt": report.argmin.tolist(),
                        "witness_lambda_min": lam_min}
    minimum, argmin_index = oracle_mod.mc_reduction_min(
        spectrum, args.samples, seed=args.seed, inject=inject, tol=tol
    )
    _emit(
        {
            "v": 1,
            "dims": [dims.n, dims.k],
            "samples": args.samples,
            "seed": args.seed,
            "min": minimum,
            "argmin_index": argmin_index,
            **witness_info,
        },
        args,
    )
    return 0


def cmd_survey(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    tol = TOLERANCE_PROFILES[args.tol_profile]
    csv_path = args.out or "survey.csv"
    _, summary = oracle_mod.survey(
        dims, args.count, alpha=args.alpha, seed=args.seed, csv_path=csv_path, tol=tol
    )
    summary["csv"] = csv_path
    summary["v"] = 1
    if not args.quiet:
        print(json.dumps(summary, indent=2))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="absred", description="Spectral membership for absolute entanglement criteria")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--tol-profile", choices=sorted(TOLERANCE_PROFILES), default="default")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="exit codes only, no report")
    common.add_argument("--threads", type=int, default=1,
                        help="reserved for parallel sampling; current build is sequential")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="membership verdict for one set")
    p.add_argument("--dims", required=True, help="bipartite dimensions n,k")
    p.add_argument("--set", required=True,
                   help="ared | appt | ger | sepball | ls:<p> | red:a | red:b | ppt")
    p.add_argument("--spectrum", help="inline csv, 'uniform', or a JSON file")
    p.add_argument("--matrix", help="density-matrix JSON file (red/ppt sets)")
    p.add_argument("--force-optimizer", action="store_true",
                   help="skip the qubit closed forms of the ared decider")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hat", parents=[common], help="reduced-projector spectrum of a Schmidt vector")
    p.add_argument("--dims", required=True)
    p.add_argument("--schmidt", required=True, help="comma-separated Schmidt coefficients")
    p.set_defaults(func=cmd_hat)

    p = sub.add_parser("lambda", parents=[common], help="largest-eigenvalue bound of a set")
    p.add_argument("--dims", required=True)
    p.add_argument("--set", required=True, help="ared | appt | asep | ger | sepball | ls:<p>")
    p.add_argument("--verify", action="store_true",
                   help="also exhibit a member spectrum attaining the bound")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("pseudopure", parents=[common], help="threshold verdicts of a pseudo-pure state")
    p.add_argument("--dims", required=True)
    p.add_argument("--schmidt", required=True, help="Schmidt coefficients of the pure part")
    p.add_argument("--mu", type=float, required=True, help="mixing weight in [0, 1]")
    p.set_defaults(func=cmd_pseudopure)

    p = sub.add_parser("witness", parents=[common], help="unitary witness for a spectrum")
    p.add_argument("--dims", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--schmidt", help="witness Schmidt vector; defaults to the decider's argmin")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("oracle", parents=[common], help="Haar-sampling check of a spectrum")
    p.add_argument("--dims", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--inject-witness", action="store_true",
                   help="put the decider's witness unitary in sample slot 0")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("survey", parents=[common], help="classify random spectra against every set")
    p.add_argument("--dims", required=True)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=1.0, help="Dirichlet concentration")
    p.set_defaults(func=cmd_survey)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
