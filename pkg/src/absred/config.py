"""Central numerical tolerances shared by every predicate in the package."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """One record of every tolerance; predicates accept it as a keyword.

    Defaults are the working values for normalized spectra (entries O(1)).
    """

    hermiticity: float = 1e-12        # entrywise |X - X*| accepted on ingestion
    trace_atol: float = 1e-12         # |Tr[rho] - 1| for density matrices
    psd_floor: float = -1e-10         # smallest admissible eigenvalue of a mapped state
    unitarity: float = 1e-10          # entrywise |U U* - I|
    ineq_slack: float = 1e-12         # additive slack on <= membership comparisons
    cluster_rel: float = 1e-11        # relative gap below which Schmidt values merge
    secular_residual: float = 1e-12   # |F(eta)| accepted for a converged secular root
    secular_width: float = 1e-15      # bracket width accepted for a converged secular root
    ared_reject: float = -1e-9        # optimizer minima below this certify rejection
    witness_pairing: float = 1e-9     # |pairing - rotated trace| allowed for a witness


DEFAULT_TOL = Tolerances()

#: Named profiles selectable from the CLI (--tol-profile).
TOLERANCE_PROFILES = {
    "default": DEFAULT_TOL,
    "strict": replace(DEFAULT_TOL, ineq_slack=1e-14, ared_reject=-1e-11),
    "loose": replace(DEFAULT_TOL, ineq_slack=1e-9, ared_reject=-1e-6),
}
