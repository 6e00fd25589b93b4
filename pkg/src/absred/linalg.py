"""Dense complex linear algebra for small bipartite systems.

Everything here is a pure function of its inputs; matrices are plain
``numpy`` arrays and random streams are explicit arguments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class BipartiteDims:
    """Dimensions (n, k) of a bipartite system; both factors at least 2."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 2 or self.k < 2:
            raise ValueError(f"both factors must have dimension >= 2, got ({self.n}, {self.k})")

    @property
    def d(self) -> int:
        """Total dimension n*k."""
        return self.n * self.k

    @property
    def r(self) -> int:
        """Maximal Schmidt rank min(n, k)."""
        return min(self.n, self.k)

    def swapped(self) -> "BipartiteDims":
        return BipartiteDims(self.k, self.n)

    @staticmethod
    def parse(text: str) -> "BipartiteDims":
        """Parse 'n,k' as used on the command line."""
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'n,k', got {text!r}")
        return BipartiteDims(int(parts[0]), int(parts[1]))


def hermitian_part(X: np.ndarray) -> np.ndarray:
    return (X + X.conj().T) / 2


def worst_hermiticity_violation(X: np.ndarray) -> tuple[float, int, int]:
    """Largest |X_ij - conj(X_ji)| and the offending index pair."""
    dev = np.abs(X - X.conj().T)
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[i, j]), int(i), int(j)


def require_hermitian(X: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return the Hermitian part of X, rejecting clearly non-Hermitian input."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    dev, i, j = worst_hermiticity_violation(X)
    scale = max(1.0, float(np.abs(X).max()))
    if dev > 100 * tol.hermiticity * scale:
        raise ValueError(
            f"matrix is not Hermitian: |X[{i},{j}] - conj(X[{j},{i}])| = {dev:.3e}"
        )
    if dev > tol.hermiticity:
        warnings.warn(f"hermitizing input, correction {dev:.3e} exceeds {tol.hermiticity:.0e}")
    return hermitian_part(X)


def eig_hermitian(H: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as orthonormal columns).
    """
    H = require_hermitian(H, tol)
    w, v = np.linalg.eigh(H)
    return w, v


@dataclass(frozen=True)
class Spectrum:
    """Normalized eigenvalue vector of a bipartite state, stored descending."""

    dims: BipartiteDims
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float))[::-1].copy()
        if vals.size != self.dims.d:
            raise ValueError(f"expected {self.dims.d} eigenvalues, got {vals.size}")
        if vals[-1] < -1e-12:
            raise ValueError(f"negative eigenvalue {vals[-1]:.3e}")
        if abs(vals.sum() - 1.0) > DEFAULT_TOL.trace_atol:
            raise ValueError(f"eigenvalues sum to {vals.sum():.15f}, expected 1")
        vals[vals < 0] = 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @staticmethod
    def uniform(dims: BipartiteDims) -> "Spectrum":
        return Spectrum(dims, np.full(dims.d, 1.0 / dims.d))

    def with_dims(self, dims: BipartiteDims) -> "Spectrum":
        """Same eigenvalues read as a state of a different bipartition."""
        return Spectrum(dims, self.values)

    def to_json(self) -> dict:
        return {"dims": [self.dims.n, self.dims.k], "values": [float(v) for v in self.values]}

    @staticmethod
    def from_json(payload: dict) -> "Spectrum":
        dims = BipartiteDims(int(payload["dims"][0]), int(payload["dims"][1]))
        return Spectrum(dims, np.asarray(payload["values"], dtype=float))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace matrix with a bipartition."""

    dims: BipartiteDims
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        X = require_hermitian(self.matrix)
        if X.shape[0] != self.dims.d:
            raise ValueError(f"matrix dimension {X.shape[0]} != n*k = {self.dims.d}")
        tr = float(np.trace(X).real)
        if abs(tr - 1.0) > DEFAULT_TOL.trace_atol:
            raise ValueError(f"trace is {tr:.15f}, expected 1")
        wmin = float(np.linalg.eigvalsh(X)[0])
        if wmin < DEFAULT_TOL.psd_floor:
            raise ValueError(f"matrix has eigenvalue {wmin:.3e} below the PSD floor")
        X.setflags(write=False)
        object.__setattr__(self, "matrix", X)

    def spectrum(self) -> Spectrum:
        w = np.linalg.eigvalsh(self.matrix)
        w = np.clip(w, 0.0, None)
        return Spectrum(self.dims, w / w.sum())


def matrix_to_json(X: np.ndarray) -> dict:
    """Wire format {"dim": d, "re": [[...]], "im": [[...]]}."""
    X = np.asarray(X, dtype=complex)
    return {
        "dim": int(X.shape[0]),
        "re": X.real.tolist(),
        "im": X.imag.tolist(),
    }


def matrix_from_json(payload: dict) -> np.ndarray:
    d = int(payload["dim"])
    re = np.asarray(payload["re"], dtype=float)
    im = np.asarray(payload["im"], dtype=float)
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValueError(f"matrix payload shape mismatch for dim {d}")
    return re + 1j * im


def _check_dim(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (dims.d, dims.d):
        raise ValueError(f"matrix shape {X.shape} does not match n*k = {dims.d}")
    return X


def partial_trace_B(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Trace out the second factor: (X_A)_ij = sum_b X_(i,b),(j,b)."""
    X = _check_dim(X, dims)
    return np.einsum("iaja->ij", X.reshape(dims.n, dims.k, dims.n, dims.k))


def partial_trace_A(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Trace out the first factor."""
    X = _check_dim(X, dims)
    return np.einsum("aiaj->ij", X.reshape(dims.n, dims.k, dims.n, dims.k))


def reduction_map(X: np.ndarray) -> np.ndarray:
    """Single-system reduction Tr[X]*I - X (a positive map)."""
    X = np.asarray(X, dtype=complex)
    return np.trace(X) * np.eye(X.shape[0]) - X


def reduction_B(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Apply the reduction map to the second factor: X_A (x) I_k - X."""
    X = _check_dim(X, dims)
    return np.kron(partial_trace_B(X, dims), np.eye(dims.k)) - X


def reduction_A(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Apply the reduction map to the first factor: I_n (x) X_B - X."""
    X = _check_dim(X, dims)
    return np.kron(np.eye(dims.n), partial_trace_A(X, dims)) - X


def partial_transpose(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Transpose the second factor blockwise; an involution."""
    X = _check_dim(X, dims)
    return (
        X.reshape(dims.n, dims.k, dims.n, dims.k)
        .transpose(0, 3, 2, 1)
        .reshape(dims.d, dims.d)
    )


def as_generator(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def haar_unitary(dim: int, seed_or_rng=0) -> np.ndarray:
    """Haar-distributed unitary via a complex Ginibre matrix and phase-fixed QR.

    The raw QR factor is not Haar; dividing out the phases of diag(R) is
    what makes the distribution invariant.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    rng = as_generator(seed_or_rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def is_unitary(U: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    U = np.asarray(U, dtype=complex)
    return bool(np.abs(U @ U.conj().T - np.eye(U.shape[0])).max() <= tol.unitarity)


def majorizes(rho_spec: Spectrum, sigma_spec: Spectrum, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff sigma is majorized by rho: every prefix sum of sigma's sorted
    values is dominated by rho's (totals agree by normalization)."""
    if rho_spec.values.size != sigma_spec.values.size:
        raise ValueError("spectra have different lengths")
    pr = np.cumsum(rho_spec.values)
    ps = np.cumsum(sigma_spec.values)
    return bool(np.all(ps <= pr + tol.ineq_slack))
