"""Independent verification: Haar sampling against the unitary quantifier,
and exhaustive lattice minimization against the local optimizer."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .ared import FAST_OPTIONS, AredOptions, _grid_points, _pairing_function, ared_decide
from .config import DEFAULT_TOL, Tolerances
from .linalg import BipartiteDims, Spectrum
from .sets import IN, OUT, appt_member, ger_member, ls_member, sepball_member

#: Samples per derived stream; fixed so results do not depend on batching.
_MC_CHUNK = 256


def _haar_batch(dims_d: int, count: int, seed: int, chunk_index: int) -> np.ndarray:
    """A chunk of Haar unitaries from one split-off stream of the master seed."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk_index,)))
    z = rng.standard_normal((count, dims_d, dims_d)) + 1j * rng.standard_normal(
        (count, dims_d, dims_d)
    )
    q, r = np.linalg.qr(z / np.sqrt(2))
    diag = np.einsum("bii->bi", r)
    return q * (diag / np.abs(diag))[:, None, :]


def _batch_reduction_min(U: np.ndarray, lam: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Smallest eigenvalue of (U diag(lam) U*)^red for a stack of unitaries."""
    n, k = dims.n, dims.k
    rho = (U * lam[None, None, :]) @ U.conj().transpose(0, 2, 1)
    rho5 = rho.reshape(-1, n, k, n, k)
    rho_a = np.einsum("biaja->bij", rho5)
    red = np.einsum("bij,ac->biajc", rho_a, np.eye(k)).reshape(-1, dims.d, dims.d) - rho
    return np.linalg.eigvalsh(red)[:, 0]


def mc_reduction_min(
    spectrum: Spectrum,
    samples: int,
    seed: int = 0,
    inject: np.ndarray | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, int]:
    """Running minimum of the rotated-reduction smallest eigenvalue over Haar
    unitaries.  An optional witness unitary occupies sample slot 0 so that
    falsification runs are not flaky.  Deterministic given the seed.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    dims = spectrum.dims
    lam = spectrum.values
    best = np.inf
    best_index = -1
    position = 0
    if inject is not None:
        val = float(_batch_reduction_min(np.asarray(inject, dtype=complex)[None], lam, dims)[0])
        best, best_index = val, 0
        position = 1
    chunk_index = 0
    while position < samples:
        take = min(_MC_CHUNK, samples - position)
        U = _haar_batch(dims.d, _MC_CHUNK, seed, chunk_index)[:take]
        mins = _batch_reduction_min(U, lam, dims)
        i = int(np.argmin(mins))
        if mins[i] < best:
            best, best_index = float(mins[i]), position + i
        position += take
        chunk_index += 1
    return best, best_index


def grid_min_objective(
    spectrum: Spectrum, r: int, step: float, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Exhaustive scan of the ordered-simplex lattice; the brute-force oracle
    for the local optimizer.  Supported for rank 2 and 3 only."""
    if r not in (2, 3):
        raise ValueError(f"lattice scan supports rank 2 or 3, got {r}")
    if not 0.0 < step <= 0.5:
        raise ValueError(f"step must lie in (0, 0.5], got {step}")
    pairing = _pairing_function(spectrum, tol)
    best_x, best_val = None, np.inf
    for x in _grid_points(r, step):
        val = pairing(x)
        if val < best_val:
            best_x, best_val = x, val
    return best_x, float(best_val)


@dataclass
class SurveyRow:
    values: np.ndarray = field(repr=False)
    bits: dict[str, int] = field(default_factory=dict)
    ared_min: float = 0.0
    ared_witness: list[float] = field(default_factory=list)


_BIT = {IN: 1, OUT: 0}


def _verdict_bit(verdict) -> int:
    return _BIT.get(verdict.status, -1)


def survey(
    dims: BipartiteDims,
    count: int,
    alpha: float = 1.0,
    seed: int = 0,
    csv_path: str | None = None,
    options: AredOptions | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[list[SurveyRow], dict]:
    """Classify Dirichlet(alpha) spectra against every set and audit the
    proved inclusions; violations of any of them are counted (and expected
    to be zero).  Writes one CSV row per spectrum when a path is given."""
    if count < 1:
        raise ValueError("need at least one sample")
    options = options or FAST_OPTIONS
    rng = np.random.default_rng(seed)
    d, k = dims.d, dims.k
    p_top = min(2 * k - 1, d)
    rows: list[SurveyRow] = []
    violations = {
        "appt_in_ls3_out": 0,
        "ls3_in_lsk_out": 0,
        "lsk_in_ared_out": 0,
        "ared_in_ls2k1_out": 0,
        "ared_appt_mismatch_k2": 0,
    }
    in_counts = {name: 0 for name in ("ls3", "lsk", "ared", "appt", "ger", "sepball")}

    for _ in range(count):
        spec = Spectrum(dims, np.sort(rng.dirichlet(alpha * np.ones(d)))[::-1])
        report = ared_decide(spec, options, tol)
        bits = {
            "ls3": _verdict_bit(ls_member(spec, 3, tol)),
            "lsk": _verdict_bit(ls_member(spec, k, tol)),
            "ared": _verdict_bit(report.verdict),
            "appt": _verdict_bit(appt_member(spec, tol)),
            "ger": _verdict_bit(ger_member(spec, tol)),
            "sepball": _verdict_bit(sepball_member(spec, tol)),
        }
        ls2k1 = _verdict_bit(ls_member(spec, p_top, tol))
        if bits["appt"] == 1 and bits["ls3"] == 0:
            violations["appt_in_ls3_out"] += 1
        if k >= 3 and bits["ls3"] == 1 and bits["lsk"] == 0:
            violations["ls3_in_lsk_out"] += 1
        if bits["lsk"] == 1 and bits["ared"] == 0:
            violations["lsk_in_ared_out"] += 1
        if bits["ared"] == 1 and ls2k1 == 0:
            violations["ared_in_ls2k1_out"] += 1
        if k == 2 and bits["ared"] != bits["appt"]:
            violations["ared_appt_mismatch_k2"] += 1
        for name in in_counts:
            in_counts[name] += int(bits[name] == 1)
        rows.append(
            SurveyRow(spec.values, bits, report.min_value, report.argmin.tolist())
        )

    if csv_path is not None:
        header = [f"lambda{i + 1}" for i in range(d)] + [
            "ls3", "lsk", "ared", "appt", "ger", "sepball",
        ]
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow(
                    [f"{v:.17g}" for v in row.values]
                    + [row.bits[name] for name in ("ls3", "lsk", "ared", "appt", "ger", "sepball")]
                )

    summary = {
        "dims": [dims.n, dims.k],
        "count": count,
        "alpha": alpha,
        "seed": seed,
        "in_counts": in_counts,
        "violations": violations,
        "total_violations": int(sum(violations.values())),
    }
    return rows, summary
