"""Pure-state machinery: secular roots, the hat spectrum, disturbance.

The reduced projector of a pure state with Schmidt vector x has a fully
explicit spectrum: each distinct Schmidt value v with multiplicity m
appears m*k - 1 times, the root block of

    F(t) = sum_j m_j v_j / (v_j - t) - 1 = 0

contributes one simple eigenvalue per distinct value (exactly one of them
non-positive), and the rest of the spectrum is zero.  ``hat`` assembles
that pattern for given bipartite dimensions.

The root solvers work on plain floats; they sit inside the optimizer's
innermost loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .linalg import BipartiteDims


@dataclass(frozen=True)
class ClusteredSchmidt:
    """Distinct positive Schmidt values (descending) with multiplicities."""

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    merged: bool = False  # True when inexactly-equal entries were grouped

    @property
    def q(self) -> int:
        return len(self.values)

    @property
    def rank(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def total(self) -> float:
        return float(sum(m * v for v, m in zip(self.values, self.multiplicities)))


def _as_descending_positive(x) -> list[float]:
    xs = [float(v) for v in np.asarray(x, dtype=float).ravel()]
    if any(v < -1e-12 for v in xs):
        raise ValueError("Schmidt coefficients must be non-negative")
    return sorted((v for v in xs if v > 0.0), reverse=True)


def _cluster_sorted(xs: list[float], rel_tol: float) -> tuple[list[float], list[int], bool]:
    """Group descending positive floats whose relative gap is at most rel_tol."""
    values: list[float] = []
    mults: list[int] = []
    merged = False
    acc = xs[0]
    count = 1
    prev = xs[0]
    for v in xs[1:]:
        if prev - v <= rel_tol * prev:
            merged = merged or v != prev
            acc += v
            count += 1
        else:
            values.append(acc / count)
            mults.append(count)
            acc, count = v, 1
        prev = v
    values.append(acc / count)
    mults.append(count)
    return values, mults, merged


def cluster(x, tol: float = DEFAULT_TOL.cluster_rel) -> ClusteredSchmidt:
    """Group strictly positive entries whose relative gap is at most tol.

    Zeros are dropped; an all-zero input is rejected.
    """
    if tol <= 0:
        raise ValueError("clustering tolerance must be positive")
    xs = _as_descending_positive(x)
    if not xs:
        raise ValueError("Schmidt vector has no positive entries")
    values, mults, merged = _cluster_sorted(xs, tol)
    return ClusteredSchmidt(tuple(values), tuple(mults), merged)


def secular_function(c: ClusteredSchmidt, t: float) -> float:
    """F(t) = sum m_j v_j/(v_j - t) - 1."""
    return sum(m * v / (v - t) for v, m in zip(c.values, c.multiplicities)) - 1.0


def _interior_root(vals, mults, lo: float, hi: float, tol: Tolerances) -> float:
    """Newton iteration safeguarded by bisection on the open bracket (lo, hi),
    where F runs from -inf to +inf."""
    scale = max(1.0, sum(m * v for v, m in zip(vals, mults)))
    t = 0.5 * (lo + hi)
    for _ in range(200):
        f = -1.0
        fp = 0.0
        for v, m in zip(vals, mults):
            dv = v - t
            term = m * v / dv
            f += term
            fp += term / dv
        if abs(f) <= tol.secular_residual:
            return t
        if f < 0.0:
            lo = t
        else:
            hi = t
        if hi - lo <= tol.secular_width * scale:
            return 0.5 * (lo + hi)
        tn = t - f / fp  # fp > 0 everywhere off the poles
        t = tn if lo < tn < hi else 0.5 * (lo + hi)
    return t


def _roots_from_clusters(vals, mults, tol: Tolerances) -> list[float]:
    """All q secular roots, descending.

    One and two clusters admit closed forms (the two-cluster secular equation
    clears to a quadratic); more clusters use bracketed Newton for the
    interior roots and the exact zero-trace identity for the bottom one.
    """
    q = len(vals)
    if q == 1:
        return [vals[0] * (1.0 - mults[0])]
    if q == 2:
        v1, v2 = vals
        m1, m2 = mults
        b = m1 * v1 + m2 * v2 - v1 - v2
        c = v1 * v2 * (1.0 - m1 - m2)  # < 0, so the roots straddle zero
        hi = 0.5 * (-b + math.sqrt(b * b - 4.0 * c))
        return [hi, c / hi]
    roots = [_interior_root(vals, mults, vals[i + 1], vals[i], tol) for i in range(q - 1)]
    bottom = -sum(roots) - sum((m - 1) * v for v, m in zip(vals, mults))
    roots.append(bottom)
    return roots


def secular_roots(c: ClusteredSchmidt, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """All q real roots of the secular equation, descending.

    The top q-1 roots interlace the distinct values; the bottom root lies in
    [-(r-1)/r * sum(x), 0] and is the only non-positive one.
    """
    return np.asarray(_roots_from_clusters(c.values, c.multiplicities, tol))


def _hat_pattern(vals, mults, roots, n: int, k: int, rank: int) -> list[float]:
    """Block order: each value k-1 times then its root-block eigenvalue
    (equal values share the cluster root), zeros, the non-positive root last."""
    out: list[float] = []
    q = len(vals)
    for j in range(q):
        v = vals[j]
        m = mults[j]
        for t in range(m):
            out.extend([v] * (k - 1))
            if t < m - 1:
                out.append(v)
            elif j < q - 1:
                out.append(roots[j])
    out.extend([0.0] * ((n - rank) * k))
    out.append(roots[-1])
    return out


def hat_entries(x, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """Eigenvalue pattern of the reduced projector, in block order."""
    xs = _as_descending_positive(x)
    r = len(xs)
    if r > dims.r:
        raise ValueError(f"Schmidt rank {r} exceeds min(n,k) = {dims.r}")
    if r == 0:
        raise ValueError("Schmidt vector has no positive entries")
    vals, mults, _ = _cluster_sorted(xs, tol.cluster_rel)
    roots = _roots_from_clusters(vals, mults, tol)
    out = _hat_pattern(vals, mults, roots, dims.n, dims.k, r)
    assert len(out) == dims.d, "hat pattern must have length n*k"
    return out


def hat(x, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The length-nk reduced-projector spectrum of a Schmidt vector.

    Accepts unnormalized x; the entries sum to (k-1)*sum(x).
    """
    return np.asarray(hat_entries(x, dims, tol))


def disturbance(x, tol: Tolerances = DEFAULT_TOL) -> float:
    """Negated smallest reduction eigenvalue of the pure state with Schmidt
    vector x; the unique non-negative root c of sum x_i/(x_i + c) = 1."""
    xs = _as_descending_positive(x)
    if abs(sum(xs) - 1.0) > 1e-8:
        raise ValueError("Schmidt vector must be normalized")
    if len(xs) == 1:
        return 0.0
    vals, mults, _ = _cluster_sorted(xs, tol.cluster_rel)
    return max(0.0, -_roots_from_clusters(vals, mults, tol)[-1])


def schmidt_coefficients(psi, dims: BipartiteDims) -> np.ndarray:
    """Squared singular values of the n x k reshaping of psi, descending."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dims.d:
        raise ValueError(f"vector length {psi.size} != n*k = {dims.d}")
    if np.linalg.norm(psi) == 0.0:
        raise ValueError("zero vector has no Schmidt decomposition")
    s = np.linalg.svd(psi.reshape(dims.n, dims.k), compute_uv=False)
    return np.sort(s * s)[::-1]


def build_pure_state(x, dims: BipartiteDims) -> np.ndarray:
    """Vector sum_i sqrt(x_i) e_i (x) f_i on the canonical bases."""
    xs = np.sort(np.asarray(x, dtype=float).ravel())[::-1]
    if xs.size > dims.r:
        raise ValueError(f"Schmidt rank {xs.size} exceeds min(n,k) = {dims.r}")
    if np.any(xs < -1e-12):
        raise ValueError("Schmidt coefficients must be non-negative")
    psi = np.zeros(dims.d, dtype=complex)
    for i, v in enumerate(xs):
        if v > 0:
            psi[i * dims.k + i] = np.sqrt(v)
    return psi
