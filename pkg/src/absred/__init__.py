"""Spectral membership tests for absolute entanglement criteria.

Decides whether every state with a given spectrum stays positive under the
one-sided reduction map (and companion criteria) for a bipartite system,
computes reduced-pure-state spectra from Schmidt coefficients, and certifies
rejections with explicit unitary witnesses.
"""

from .ared import (
    AredOptions,
    AredReport,
    ared_decide,
    ared_objective,
    minimize_over_simplex,
    witness_unitary,
)
from .config import DEFAULT_TOL, TOLERANCE_PROFILES, Tolerances
from .linalg import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    eig_hermitian,
    haar_unitary,
    majorizes,
    matrix_from_json,
    matrix_to_json,
    partial_trace_A,
    partial_trace_B,
    partial_transpose,
    reduction_A,
    reduction_B,
)
from .oracle import grid_min_objective, mc_reduction_min, survey
from .schmidt import (
    ClusteredSchmidt,
    build_pure_state,
    cluster,
    disturbance,
    hat,
    schmidt_coefficients,
    secular_roots,
)
from .sets import (
    PseudoPureParams,
    Verdict,
    appt_member,
    ared_mu_threshold,
    ared_qubit_A,
    ared_qubit_B,
    appt_mu_threshold,
    cor_ared_necessary,
    ger_member,
    lambda_max,
    ls_member,
    maxent_pt_necessary,
    ppt_member,
    pseudopure_spectrum,
    pseudopure_thresholds,
    red_member,
    sepball_member,
)

__version__ = "0.1.0"
