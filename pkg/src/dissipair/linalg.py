"""Dense complex linear algebra sized for small operator spaces.

Everything here targets the 4x4 density matrices and 16x16 superoperators
used elsewhere in the package, so simplicity and robustness win over
asymptotic speed.  The Hermitian eigensolver is a cyclic Jacobi iteration,
which at these dimensions is accurate to machine precision and needs no
external factorization routines; the matrix exponential uses scaling and
squaring with a truncated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    ShapeMismatchError,
)

DEFAULT_TOL = 1e-10

# Convergence target for the Jacobi sweep: off-diagonal Frobenius mass
# relative to the matrix norm.  Reachable in float64 for n <= 16.
_JACOBI_REL_OFF = 1e-13
_MAX_SWEEPS = 60
_MAX_SERIES_TERMS = 64


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ShapeMismatchError(f"{name} contains non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product with the left factor owning the slow index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order with eigenvectors as matching columns."""

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eigensystem(a, tol: float = DEFAULT_TOL) -> EigenSystem:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix; entrywise deviation from `a.conj().T`
        must not exceed `tol`.
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    EigenSystem
        Real eigenvalues ascending, orthonormal eigenvector columns.
    """
    a = _as_square(a)
    defect = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if defect > tol:
        raise NotHermitianError(f"Hermiticity defect {defect:.3e} exceeds tol {tol:.3e}")
    n = a.shape[0]
    w = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(w))
    if scale == 0.0 or n == 1:
        return EigenSystem(np.diagonal(w).real.copy(), v)
    thresh = _JACOBI_REL_OFF * scale
    skip = thresh / (4.0 * n)
    for _ in range(_MAX_SWEEPS):
        off = float(np.linalg.norm(w - np.diag(np.diagonal(w))))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                d = w[p, q]
                ad = abs(d)
                if ad <= skip:
                    continue
                # Phase factor makes the pivot real, then a real rotation
                # annihilates it (Golub-Van Loan symmetric Schur form).
                u = d.conjugate() / ad
                tau = (w[q, q].real - w[p, p].real) / (2.0 * ad)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                us = u * s
                uc = u * c
                wp = w[:, p].copy()
                wq = w[:, q].copy()
                w[:, p] = c * wp - us * wq
                w[:, q] = s * wp + uc * wq
                rp = w[p, :].copy()
                rq = w[q, :].copy()
                w[p, :] = c * rp - us.conjugate() * rq
                w[q, :] = s * rp + uc.conjugate() * rq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - us * vq
                v[:, q] = s * vp + uc * vq
    else:
        raise NoConvergenceError(f"Jacobi sweep budget exhausted at off-norm {off:.3e}")
    values = np.diagonal(w).real.copy()
    order = np.argsort(values, kind="stable")
    return EigenSystem(values[order], v[:, order])


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything lower raises
    NotPSDError.
    """
    es = hermitian_eigensystem(a, max(tol, DEFAULT_TOL))
    low = float(es.values.min()) if es.values.size else 0.0
    if low < -tol:
        raise NotPSDError(f"eigenvalue {low:.3e} below -tol {-tol:.3e}")
    roots = np.sqrt(np.clip(es.values, 0.0, None))
    b = (es.vectors * roots) @ es.vectors.conj().T
    return 0.5 * (b + b.conj().T)


def matrix_exponential(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """exp(a) by scaling and squaring around a truncated power series.

    The argument is halved until its max-row-sum norm drops to 0.5, the
    series is summed until terms fall below the working tolerance, and the
    result is squared back up.
    """
    a = _as_square(a)
    n = a.shape[0]
    norm = float(np.abs(a).sum(axis=1).max()) if n else 0.0
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    b = a / (2.0 ** squarings)
    total = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    floor = min(tol, 1e-16)
    for k in range(1, _MAX_SERIES_TERMS + 1):
        term = term @ b / k
        total = total + term
        if float(np.abs(term).sum(axis=1).max()) <= floor * max(1.0, float(np.abs(total).sum(axis=1).max())):
            break
    else:
        raise NoConvergenceError("series for matrix exponential did not settle")
    for _ in range(squarings):
        total = total @ total
    return total


def null_vector(a, gap_tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Unit vector minimizing ||a v||, found from the eigensystem of a'a.

    Returns
    -------
    (vector, gap)
        `vector` is the eigenvector of `dagger(a) @ a` for its smallest
        eigenvalue; `gap` is the second-smallest singular value of `a`,
        which the caller reads as a degeneracy indicator.
    """
    a = _as_square(a)
    m = dagger(a) @ a
    m = 0.5 * (m + m.conj().T)
    es = hermitian_eigensystem(m, max(gap_tol, 1e-8 * (1.0 + float(np.abs(m).max()))))
    sing = np.sqrt(np.clip(es.values, 0.0, None))
    gap = float(sing[1]) if sing.size > 1 else math.inf
    return es.vectors[:, 0].copy(), gap
