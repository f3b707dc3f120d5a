"""Quantities read out from two-qubit states and model parameters.

Includes the excited-state populations, the entanglement of formation
witness (concurrence), the change of basis to the collective states
{|ee>, (|eg>+|ge>)/sqrt2, (|eg>-|ge>)/sqrt2, |gg>}, and the damping-force
bookkeeping that quantifies how one-way the qubit-qubit influence is.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NegativeRateError, ShapeMismatchError
from .linalg import hermitian_eigensystem, kron, psd_sqrt
from .model import SIGMA_Y_2

# Spin-flip kernel sigma_y kron sigma_y; real in the fixed basis.
_FLIP = kron(SIGMA_Y_2, SIGMA_Y_2).real.astype(complex)

# Rows map computational amplitudes onto |ee>, |+>, |->, |gg>.
_SQ2 = 1.0 / math.sqrt(2.0)
COLLECTIVE_TRANSFORM = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, _SQ2, _SQ2, 0.0],
        [0.0, _SQ2, -_SQ2, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ],
    dtype=complex,
)

_STATE_TOL = 1e-6


@dataclass(frozen=True)
class IsolationReport:
    """Damping forces in both directions and their normalized imbalance."""

    F12: float
    F21: float
    delta_F: float


@dataclass(frozen=True)
class CollectivePopulations:
    P_E: float
    P_plus: float
    P_minus: float
    P_G: float


def _require_state(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeMismatchError(f"state must be 4x4, got {rho.shape}")
    if float(np.abs(rho - rho.conj().T).max()) > _STATE_TOL:
        raise InvalidStateError("state is not Hermitian within tolerance")
    if abs(rho.trace() - 1.0) > _STATE_TOL:
        raise InvalidStateError("state trace deviates from 1 beyond tolerance")
    return rho


def populations(rho) -> tuple[float, float]:
    """Excited-state population of each qubit."""
    rho = _require_state(rho)
    p1 = float((rho[0, 0] + rho[1, 1]).real)
    p2 = float((rho[0, 0] + rho[2, 2]).real)
    return p1, p2


def concurrence(rho) -> float:
    """Entanglement monotone of a two-qubit mixed state.

    Uses the Hermitian route: eigenvalues of sqrt(rho) rho_tilde sqrt(rho)
    with rho_tilde = (sy kron sy) conj(rho) (sy kron sy), which are the
    squares of the usual quartet.  Returns
    max(0, r1 - r2 - r3 - r4) for the descending square roots r_i.
    """
    rho = _require_state(rho)
    root = psd_sqrt(rho, tol=_STATE_TOL)
    flipped = _FLIP @ rho.conj() @ _FLIP
    middle = root @ flipped @ root
    middle = 0.5 * (middle + middle.conj().T)
    es = hermitian_eigensystem(middle, tol=1e-8 * (1.0 + float(np.abs(middle).max())))
    # Rank-deficient products leave O(eps) residue where an eigenvalue is
    # mathematically zero; the square root would amplify that to ~1e-8.
    # Anything this far below the top eigenvalue is roundoff, not signal.
    floor = 1e-13 * max(float(es.values[3]), 0.0)
    vals = np.where(es.values < floor, 0.0, es.values)
    r = np.sqrt(np.clip(vals, 0.0, None))
    return float(max(0.0, r[3] - r[2] - r[1] - r[0]))


def to_collective_basis(rho) -> np.ndarray:
    """Rewrite a state in the collective basis |ee>, |+>, |->, |gg>."""
    rho = _require_state(rho)
    t = COLLECTIVE_TRANSFORM
    return t @ rho @ t.conj().T


def collective_populations(rho) -> CollectivePopulations:
    """Diagonal of the state in the collective basis."""
    diag = np.diagonal(to_collective_basis(rho)).real
    return CollectivePopulations(*(float(x) for x in diag))


def damping_forces(J: complex, Gamma: float, phi: float) -> IsolationReport:
    """Directional damping forces and their imbalance.

    F12 = |1j J + (Gamma/2) exp(1j phi)| measures how strongly qubit 2
    pushes on qubit 1; F21 mirrors it with conjugated coupling and phase.
    delta_F normalizes the difference to [-1, 1] and is defined as 0 when
    both forces vanish.
    """
    if Gamma < 0.0:
        raise NegativeRateError(f"Gamma must be >= 0, got {Gamma}")
    J = complex(J)
    half = 0.5 * Gamma
    f12 = abs(1j * J + half * cmath.exp(1j * phi))
    f21 = abs(1j * J.conjugate() + half * cmath.exp(-1j * phi))
    total = f12 + f21
    delta = (f12 - f21) / total if total > 0.0 else 0.0
    return IsolationReport(F12=float(f12), F21=float(f21), delta_F=float(delta))


def effective_decay_amplitudes(Gamma: float, phi: float) -> tuple[complex, complex, complex, complex]:
    """Collective-basis decay amplitudes, ordered (E->+, +->G, E->-, -->G).

    sqrt(Gamma/2) times (1 + e), (1 + e), (-1 + e), (1 - e) with
    e = exp(1j phi).  A zero amplitude pair marks a dark state: |-> at
    phi = 0, |+> at phi = pi.
    """
    if Gamma < 0.0:
        raise NegativeRateError(f"Gamma must be >= 0, got {Gamma}")
    root = math.sqrt(0.5 * Gamma)
    e = cmath.exp(1j * phi)
    return (
        root * (1.0 + e),
        root * (1.0 + e),
        root * (-1.0 + e),
        root * (1.0 - e),
    )


def isolation_map(J: complex, gamma_values, phi_values) -> np.ndarray:
    """delta_F on a grid: rows follow `gamma_values`, columns `phi_values`."""
    gamma_values = np.asarray(gamma_values, dtype=float)
    phi_values = np.asarray(phi_values, dtype=float)
    out = np.empty((gamma_values.size, phi_values.size), dtype=float)
    for i, g in enumerate(gamma_values):
        for j, p in enumerate(phi_values):
            out[i, j] = damping_forces(J, float(g), float(p)).delta_F
    return out
