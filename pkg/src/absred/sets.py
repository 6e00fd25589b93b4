"""Membership predicates for the spectral sets and their closed forms.

All verdicts are three-valued (In / Out / Unknown) and carry a certificate
with the raw numbers that decided them, so callers can re-decide under a
different slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .linalg import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    eig_hermitian,
    partial_transpose,
    reduction_A,
    reduction_B,
)

IN, OUT, UNKNOWN = "In", "Out", "Unknown"


@dataclass(frozen=True)
class Verdict:
    set_id: str
    status: str
    certificate: dict | None = None

    def __post_init__(self):
        if self.status not in (IN, OUT, UNKNOWN):
            raise ValueError(f"invalid status {self.status!r}")
        if self.status == OUT and self.certificate is None:
            raise ValueError("Out verdicts must carry a certificate")

    @property
    def is_in(self) -> bool:
        return self.status == IN

    @property
    def margin(self) -> float | None:
        if self.certificate is None:
            return None
        m = self.certificate.get("margin")
        return None if m is None else float(m)

    def to_json(self) -> dict:
        return {"set": self.set_id, "status": self.status, "certificate": self.certificate}


def _ineq(set_id: str, lhs: float, rhs: float, tol: Tolerances, extra: dict | None = None) -> Verdict:
    """In iff lhs <= rhs, with additive slack so equality cases land In."""
    cert = {"lhs": float(lhs), "rhs": float(rhs), "margin": float(rhs - lhs)}
    if extra:
        cert.update(extra)
    status = IN if lhs <= rhs + tol.ineq_slack else OUT
    return Verdict(set_id, status, cert)


def ls_member(spectrum: Spectrum, p: int, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Largest eigenvalue at most the sum of the p smallest."""
    d = spectrum.dims.d
    if not 1 <= p <= d:
        raise ValueError(f"p must be in [1, {d}], got {p}")
    vals = spectrum.values
    return _ineq(f"ls:{p}", float(vals[0]), float(vals[-p:].sum()), tol)


def ger_member(spectrum: Spectrum, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Gershgorin-style polyhedral sufficient condition for APPT membership."""
    vals = spectrum.values
    r = spectrum.dims.r
    lhs = float(vals[: r - 1].sum())
    rhs = float(2 * vals[-1] + vals[-r:-1].sum())
    return _ineq("ger", lhs, rhs, tol)


def sepball_member(spectrum: Spectrum, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Purity at most 1/(nk-1): the largest ball of states around the center."""
    vals = spectrum.values
    purity = float((vals * vals).sum())
    return _ineq("sepball", purity, 1.0 / (spectrum.dims.d - 1), tol, {"purity": purity})


def _qubit_tail_inequality(vals: np.ndarray, set_id: str, tol: Tolerances) -> Verdict:
    """lambda_1 <= lambda_(d-1) + 2*sqrt(lambda_(d-2)*lambda_d) on the sorted tail."""
    d = vals.size
    rhs = float(vals[d - 2] + 2 * math.sqrt(max(vals[d - 3], 0.0) * max(vals[d - 1], 0.0)))
    return _ineq(set_id, float(vals[0]), rhs, tol)


def ared_qubit_B(spectrum: Spectrum, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Exact membership when the reduced factor is a qubit (k = 2)."""
    if spectrum.dims.k != 2:
        raise ValueError(f"closed form requires k = 2, got k = {spectrum.dims.k}")
    return _qubit_tail_inequality(spectrum.values, "ared", tol)


def ared_qubit_A(spectrum: Spectrum, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Exact membership when the untouched factor is a qubit (n = 2)."""
    dims = spectrum.dims
    if dims.n != 2:
        raise ValueError(f"closed form requires n = 2, got n = {dims.n}")
    k = dims.k
    vals = spectrum.values
    t1 = float(vals[1:k].sum())
    t2 = float(vals[k + 1 : 2 * k].sum())
    rhs = float(vals[k] + 2 * math.sqrt(max(t1, 0.0) * max(t2, 0.0)))
    return _ineq("ared", float(vals[0]), rhs, tol)


def cor_ared_necessary(spectrum: Spectrum, r: int, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Necessary-only test: (r-1)*lambda_1 <= sum of the rk-1 smallest.

    The pairing against the uniform rank-r Schmidt vector; a violation is a
    certified rejection, a pass decides nothing.
    """
    dims = spectrum.dims
    if not 1 <= r <= dims.r:
        raise ValueError(f"r must be in [1, {dims.r}], got {r}")
    vals = spectrum.values
    lhs = (r - 1) * float(vals[0])
    rhs = float(vals[(dims.n - r) * dims.k + 1 :].sum())
    cert = {"lhs": lhs, "rhs": rhs, "margin": rhs - lhs, "rank": r, "necessary_only": True}
    status = OUT if lhs > rhs + tol.ineq_slack else UNKNOWN
    return Verdict("ared", status, cert)


def maxent_pt_necessary(spectrum: Spectrum, m: int, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Necessary APPT test from the partial transpose of a rank-m maximally
    entangled projector: pairing against (-1/m) x m(m-1)/2, (+1/m) x m(m+1)/2."""
    dims = spectrum.dims
    if not 2 <= m <= dims.r:
        raise ValueError(f"m must be in [2, {dims.r}], got {m}")
    vals = spectrum.values
    c_neg = m * (m - 1) // 2
    c_pos = m * (m + 1) // 2
    pairing = float(-vals[:c_neg].sum() / m + vals[-c_pos:].sum() / m)
    cert = {"pairing": pairing, "margin": pairing, "m": m, "necessary_only": True}
    status = OUT if pairing < -tol.ineq_slack else UNKNOWN
    return Verdict("appt", status, cert)


def _appt_r3_matrices(vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The two 3x3 matrices whose positivity decides APPT at Schmidt rank 3.

    Indices are 1-based into the descending spectrum of length d."""
    d = vals.size

    def L(i: int) -> float:  # 1-based accessor
        return float(vals[i - 1])

    m1 = np.array(
        [
            [2 * L(d), L(d - 1) - L(1), L(d - 2) - L(2)],
            [L(d - 1) - L(1), 2 * L(d - 3), L(d - 4) - L(3)],
            [L(d - 2) - L(2), L(d - 4) - L(3), 2 * L(d - 5)],
        ]
    )
    m2 = np.array(
        [
            [2 * L(d), L(d - 1) - L(1), L(d - 3) - L(2)],
            [L(d - 1) - L(1), 2 * L(d - 2), L(d - 4) - L(3)],
            [L(d - 3) - L(2), L(d - 4) - L(3), 2 * L(d - 5)],
        ]
    )
    return m1, m2


def appt_member(spectrum: Spectrum, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Absolute-PPT membership.

    Exact for min(n,k) <= 3; for larger ranks the verdict is bracketed by the
    sufficient conditions (GER, SEPBALL) and the necessary ones (LS_3 and the
    maximally-entangled partial-transpose tests) and may come back Unknown.
    """
    dims = spectrum.dims
    vals = spectrum.values
    r = dims.r
    if r == 2:
        v = _qubit_tail_inequality(vals, "appt", tol)
        cert = dict(v.certificate or {})
        cert["branch"] = "exact_r2"
        return Verdict("appt", v.status, cert)
    if r == 3:
        m1, m2 = _appt_r3_matrices(vals)
        w1 = float(np.linalg.eigvalsh(m1)[0])
        w2 = float(np.linalg.eigvalsh(m2)[0])
        worst = min(w1, w2)
        cert = {
            "branch": "exact_r3",
            "min_eig_first": w1,
            "min_eig_second": w2,
            "margin": worst,
        }
        return Verdict("appt", IN if worst >= -tol.ineq_slack else OUT, cert)

    # r >= 4: sufficient / necessary bracket only
    ger = ger_member(spectrum, tol)
    if ger.is_in:
        return Verdict("appt", IN, {"branch": "ger_sufficient", **(ger.certificate or {})})
    ball = sepball_member(spectrum, tol)
    if ball.is_in:
        return Verdict("appt", IN, {"branch": "sepball_sufficient", **(ball.certificate or {})})
    ls3 = ls_member(spectrum, 3, tol)
    if ls3.status == OUT:
        return Verdict("appt", OUT, {"branch": "ls3_necessary", **(ls3.certificate or {})})
    maxent = {}
    for m in range(2, r + 1):
        v = maxent_pt_necessary(spectrum, m, tol)
        maxent[m] = v.certificate["pairing"]
        if v.status == OUT:
            return Verdict("appt", OUT, {"branch": f"maxent_necessary_m{m}", **v.certificate})
    return Verdict(
        "appt",
        UNKNOWN,
        {
            "branch": "bracket_inconclusive",
            "necessary_passed": ["ls3"] + [f"maxent_m{m}" for m in maxent],
            "sufficient_failed": ["ger", "sepball"],
            "ger_margin": ger.margin,
            "sepball_margin": ball.margin,
            "maxent_pairings": maxent,
        },
    )


@dataclass(frozen=True)
class PseudoPureParams:
    """Mixture mu * I/(nk) + (1-mu) * vv* with Schmidt coefficients nu of v."""

    dims: BipartiteDims
    nu: np.ndarray = field(repr=False)
    mu: float = 0.0

    def __post_init__(self):
        nu = np.sort(np.asarray(self.nu, dtype=float))[::-1].copy()
        if nu.size > self.dims.r:
            raise ValueError(f"Schmidt rank {nu.size} exceeds min(n,k) = {self.dims.r}")
        if np.any(nu < -1e-12):
            raise ValueError("Schmidt coefficients must be non-negative")
        if abs(float(nu.sum()) - 1.0) > 1e-12:
            raise ValueError(f"Schmidt coefficients sum to {nu.sum():.15f}, expected 1")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.mu}")
        nu[nu < 0] = 0.0
        nu.setflags(write=False)
        object.__setattr__(self, "nu", nu)


def ared_mu_threshold(dims: BipartiteDims) -> float:
    """Smallest mixing weight keeping a pseudo-pure state absolutely reduced."""
    r = dims.r
    return 1.0 / ((dims.k - 1) / dims.d * r / (r - 1) + 1.0)


def appt_mu_threshold(dims: BipartiteDims) -> float:
    """Smallest mixing weight keeping a pseudo-pure state absolutely PPT."""
    return 1.0 / (2.0 / dims.d + 1.0)


def pseudopure_spectrum(dims: BipartiteDims, mu: float) -> Spectrum:
    """Spectrum of the pseudo-pure state: one eigenvalue mu/(nk) + 1 - mu,
    the other nk - 1 equal to mu/(nk).  Independent of the pure vector."""
    base = mu / dims.d
    vals = np.full(dims.d, base)
    vals[0] = base + (1.0 - mu)
    return Spectrum(dims, vals)


def pseudopure_thresholds(params: PseudoPureParams, tol: Tolerances = DEFAULT_TOL) -> dict[str, Verdict]:
    """The four membership verdicts of a pseudo-pure state.

    ARED and APPT (= ASEP) depend only on mu; PPT (= SEP) involves the top two
    Schmidt coefficients; RED is the summed-resolvent condition, always In at
    mu = 1.
    """
    dims, nu, mu = params.dims, params.nu, params.mu
    d = dims.d

    def _threshold_verdict(set_id: str, threshold: float) -> Verdict:
        cert = {"mu": mu, "threshold": threshold, "margin": mu - threshold}
        status = IN if mu >= threshold - tol.ineq_slack else OUT
        return Verdict(set_id, status, cert)

    out = {"ared": _threshold_verdict("ared", ared_mu_threshold(dims))}

    nu1 = float(nu[0])
    nu2 = float(nu[1]) if nu.size > 1 else 0.0
    if nu2 <= 0.0:
        out["ppt"] = Verdict("ppt", IN, {"mu": mu, "threshold": 0.0, "margin": mu,
                                         "note": "product pure part"})
    else:
        out["ppt"] = _threshold_verdict("ppt", 1.0 / (1.0 / (d * math.sqrt(nu1 * nu2)) + 1.0))

    out["appt"] = _threshold_verdict("appt", appt_mu_threshold(dims))

    if mu >= 1.0:
        out["red"] = Verdict("red:b", IN, {"mu": mu, "lhs": 0.0, "rhs": 1.0, "margin": 1.0,
                                           "note": "maximally mixed limit"})
    else:
        c = mu / (1.0 - mu) * (dims.k - 1) / d
        lhs = float(sum(1.0 / (c / v + 1.0) for v in nu if v > 0))
        out["red"] = _ineq("red:b", lhs, 1.0, tol, {"mu": mu})
    return out


def lambda_max(set_id: str, dims: BipartiteDims) -> float:
    """Supremum of the largest eigenvalue over the named spectral set."""
    d = dims.d
    sid = set_id.lower()
    if sid == "ared":
        if dims.k <= dims.n:
            return (dims.k + 1) / (dims.k * (dims.n + 1))
        return 1.0 / dims.n
    if sid.startswith("ls:"):
        p = int(sid.split(":", 1)[1])
        if not 1 <= p <= d:
            raise ValueError(f"p must be in [1, {d}], got {p}")
        return p / (d + p - 1)
    if sid in ("appt", "asep", "ger"):
        return 3.0 / (2.0 + d)
    if sid == "sepball":
        return 2.0 / d
    raise ValueError(f"unknown set id {set_id!r}")


def _psd_verdict(set_id: str, mapped: np.ndarray, tol: Tolerances) -> Verdict:
    w, v = eig_hermitian(mapped, tol)
    lam_min = float(w[0])
    vec = v[:, 0]
    cert = {
        "lambda_min": lam_min,
        "margin": lam_min,
        "eigenvector_re": [float(t) for t in vec.real],
        "eigenvector_im": [float(t) for t in vec.imag],
    }
    return Verdict(set_id, IN if lam_min >= tol.psd_floor else OUT, cert)


def red_member(rho: DensityMatrix, side: str, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Positivity of the reduction applied to one factor of a fixed state."""
    side = side.lower()
    if side == "a":
        mapped = reduction_A(rho.matrix, rho.dims)
    elif side == "b":
        mapped = reduction_B(rho.matrix, rho.dims)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    return _psd_verdict(f"red:{side}", mapped, tol)


def ppt_member(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Positivity of the partial transpose of a fixed state."""
    return _psd_verdict("ppt", partial_transpose(rho.matrix, rho.dims), tol)
