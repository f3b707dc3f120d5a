"""Operators and parameters for a pair of qubits sharing a waveguide.

Basis convention, fixed across the package: two-qubit states are ordered
|ee>, |eg>, |ge>, |gg> with qubit 1 as the left tensor factor, and the
single-qubit basis is (|e>, |g>).  In that ordering the lowering operator
is [[0, 0], [1, 0]] and sigma_z is diag(1, -1).

The qubits interact two ways: direct excitation exchange with complex
amplitude J, and emission into a shared one-dimensional channel that
correlates their decay with a phase phi set by how far apart they sit
along the channel.  Individual dephasing enters at rate kappa.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadEnergyError,
    BadIndexError,
    BadWavelengthError,
    NegativeRateError,
)
from .linalg import kron

IDENTITY_2 = np.eye(2, dtype=complex)
LOWER_2 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
RAISE_2 = LOWER_2.conj().T
SIGMA_Z_2 = np.diag([1.0, -1.0]).astype(complex)
SIGMA_Y_2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)

# Below this E_J / E_C ratio the charge-insensitive regime assumption is shaky.
TRANSMON_RATIO_FLOOR = 10.0


@dataclass(frozen=True)
class Drive:
    """Resonant drive on one qubit: target in {1, 2}, amplitude >= 0."""

    target: int
    amplitude: float

    def __post_init__(self):
        if self.target not in (1, 2):
            raise BadIndexError(f"drive target must be 1 or 2, got {self.target}")
        if self.amplitude < 0.0:
            raise NegativeRateError(f"drive amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class ModelParams:
    """Rates and phases in units of the exchange coupling.

    phi is stored as given; every operator built from it only ever uses
    exp(1j * phi), so adding 2 pi changes nothing.
    """

    J: complex = 1.0
    Gamma: float = 0.0
    phi: float = 0.0
    kappa: float = 0.0
    drive: Drive | None = None
    omega0: float = 0.0

    def __post_init__(self):
        if self.Gamma < 0.0:
            raise NegativeRateError(f"Gamma must be >= 0, got {self.Gamma}")
        if self.kappa < 0.0:
            raise NegativeRateError(f"kappa must be >= 0, got {self.kappa}")


@dataclass(frozen=True)
class GeometryParams:
    """Positions along the channel: separation >= 0, wavelength > 0."""

    separation: float
    wavelength: float

    def __post_init__(self):
        if self.separation < 0.0:
            raise BadWavelengthError(f"separation must be >= 0, got {self.separation}")
        if self.wavelength <= 0.0:
            raise BadWavelengthError(f"wavelength must be > 0, got {self.wavelength}")


@dataclass(frozen=True)
class CircuitParams:
    """Charging and Josephson energies of two transmons and their coupler."""

    E_C1: float
    E_C2: float
    E_J1: float
    E_J2: float
    E_Cc: float

    def __post_init__(self):
        for name in ("E_C1", "E_C2", "E_J1", "E_J2", "E_Cc"):
            if getattr(self, name) <= 0.0:
                raise BadEnergyError(f"{name} must be > 0, got {getattr(self, name)}")
        for name, ej, ec in (("1", self.E_J1, self.E_C1), ("2", self.E_J2, self.E_C2)):
            if ej / ec < TRANSMON_RATIO_FLOOR:
                warnings.warn(
                    f"qubit {name}: E_J/E_C = {ej / ec:.3g} below {TRANSMON_RATIO_FLOOR}, "
                    "outside the charge-insensitive regime",
                    stacklevel=2,
                )


def _check_qubit(qubit: int) -> None:
    if qubit not in (1, 2):
        raise BadIndexError(f"qubit index must be 1 or 2, got {qubit}")


def _embed(op: np.ndarray, qubit: int) -> np.ndarray:
    return kron(op, IDENTITY_2) if qubit == 1 else kron(IDENTITY_2, op)


def sigma_minus(qubit: int) -> np.ndarray:
    """Lowering operator of one qubit embedded in the two-qubit space."""
    _check_qubit(qubit)
    return _embed(LOWER_2, qubit)


def sigma_plus(qubit: int) -> np.ndarray:
    """Raising operator of one qubit embedded in the two-qubit space."""
    _check_qubit(qubit)
    return _embed(RAISE_2, qubit)


def sigma_z(qubit: int) -> np.ndarray:
    """Population-inversion operator of one qubit, diag(+1) on excited."""
    _check_qubit(qubit)
    return _embed(SIGMA_Z_2, qubit)


def build_coherent_hamiltonian(J: complex) -> np.ndarray:
    """Excitation-exchange Hamiltonian J s1+ s2- + conj(J) s1- s2+."""
    J = complex(J)
    return J * (sigma_plus(1) @ sigma_minus(2)) + J.conjugate() * (sigma_minus(1) @ sigma_plus(2))


def build_drive_hamiltonian(target: int, amplitude: float) -> np.ndarray:
    """Resonant drive amplitude * (s+ + s-) on the target qubit."""
    drive = Drive(target, float(amplitude))
    return drive.amplitude * (sigma_plus(drive.target) + sigma_minus(drive.target))


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Full coherent generator: exchange term plus any drive."""
    h = build_coherent_hamiltonian(params.J)
    if params.drive is not None and params.drive.amplitude != 0.0:
        h = h + build_drive_hamiltonian(params.drive.target, params.drive.amplitude)
    return h


def build_jump_operators(params: ModelParams) -> list[np.ndarray]:
    """Collapse operators with rates absorbed into the amplitudes.

    The shared channel contributes a single collective operator
    sqrt(Gamma) * (s1- + exp(1j phi) s2-); dephasing adds sqrt(kappa) * s_z
    per qubit when kappa > 0.
    """
    if params.Gamma < 0.0:
        raise NegativeRateError(f"Gamma must be >= 0, got {params.Gamma}")
    if params.kappa < 0.0:
        raise NegativeRateError(f"kappa must be >= 0, got {params.kappa}")
    jumps = []
    if params.Gamma > 0.0:
        jumps.append(math.sqrt(params.Gamma) * (sigma_minus(1) + cmath.exp(1j * params.phi) * sigma_minus(2)))
    if params.kappa > 0.0:
        root = math.sqrt(params.kappa)
        jumps.append(root * sigma_z(1))
        jumps.append(root * sigma_z(2))
    return jumps


def phase_from_separation(geometry: GeometryParams) -> float:
    """Propagation phase 2 pi separation / wavelength picked up between qubits."""
    return 2.0 * math.pi * geometry.separation / geometry.wavelength


def collective_decay_matrix(Gamma: float, phi: float) -> np.ndarray:
    """2x2 decay matrix of the shared channel.

    Diagonal entries Gamma / 2, off-diagonal (Gamma / 2) exp(1j phi); the
    off-diagonal phase encodes the travel distance between the qubits.
    """
    if Gamma < 0.0:
        raise NegativeRateError(f"Gamma must be >= 0, got {Gamma}")
    half = 0.5 * Gamma
    cross = half * cmath.exp(1j * phi)
    return np.array([[half, cross], [cross, half]], dtype=complex)


def transmon_frequency(E_C: float, E_J: float) -> float:
    """Transition frequency sqrt(8 E_C E_J) - E_C of a single transmon."""
    if E_C <= 0.0:
        raise BadEnergyError(f"E_C must be > 0, got {E_C}")
    if E_J <= 0.0:
        raise BadEnergyError(f"E_J must be > 0, got {E_J}")
    if E_J / E_C < TRANSMON_RATIO_FLOOR:
        warnings.warn(
            f"E_J/E_C = {E_J / E_C:.3g} below {TRANSMON_RATIO_FLOOR}, "
            "outside the charge-insensitive regime",
            stacklevel=2,
        )
    return math.sqrt(8.0 * E_C * E_J) - E_C


def coupling_from_circuit(circuit: CircuitParams) -> float:
    """Exchange amplitude produced by a capacitive coupler.

    Coefficient of (s1+ s2- + s1- s2+):
    (2 E_C1 E_C2 / E_Cc) * (E_J1 / (2 E_C1))**(1/4) * (E_J2 / (2 E_C2))**(1/4),
    in the same energy units as the inputs.
    """
    prefactor = 2.0 * circuit.E_C1 * circuit.E_C2 / circuit.E_Cc
    ratio = (circuit.E_J1 / (2.0 * circuit.E_C1)) * (circuit.E_J2 / (2.0 * circuit.E_C2))
    return prefactor * ratio ** 0.25
