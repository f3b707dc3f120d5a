"""Open-system evolution in Liouville space.

Density matrices are vectorized by stacking columns, so vec(A X B) equals
(B.T kron A) vec(X) and the master equation becomes a single dense
generator acting on a length-16 vector.  Two propagators are provided on
purpose: a fixed-step classical Runge-Kutta integrator for production
runs and an exponential-map propagator that serves as an independent
cross-check of the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergenceError,
    NotAStateError,
    NotHermitianError,
    ShapeMismatchError,
    StateInvariantViolatedError,
    StepTooLargeError,
)
from .linalg import dagger, hermitian_eigensystem, kron, matrix_exponential
from .model import ModelParams, build_hamiltonian, build_jump_operators

# Hard ceiling on dt * ||L||_inf; above this RK4 accuracy degrades fast.
MAX_STEP_NORM = 0.1
# Spectral gap below which the stationary manifold is reported degenerate.
UNIQUE_GAP = 1e-8
# Per-sample drift tolerances while integrating.
TRACE_DRIFT_TOL = 1e-6
NEGATIVITY_TOL = 1e-6

_DIM = 4

_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)

INITIAL_STATE_NAMES = ("EE", "EG", "GE", "GG", "E", "PLUS", "MINUS", "G")


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray, dim: int = _DIM) -> np.ndarray:
    """Inverse of `vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def initial_state(name: str) -> np.ndarray:
    """Named initial projector.

    EE/EG/GE/GG are the computational basis states (E also maps to |ee>,
    G to |gg>); PLUS and MINUS are the symmetric and antisymmetric
    single-excitation superpositions.
    """
    key = str(name).strip()
    basis = {"EE": 0, "E": 0, "EG": 1, "GE": 2, "GG": 3, "G": 3}
    if key in basis:
        rho = np.zeros((_DIM, _DIM), dtype=complex)
        rho[basis[key], basis[key]] = 1.0
        return rho
    if key == "PLUS":
        return np.outer(_PLUS, _PLUS.conj())
    if key == "MINUS":
        return np.outer(_MINUS, _MINUS.conj())
    raise ShapeMismatchError(f"unknown initial state {name!r}, expected one of {INITIAL_STATE_NAMES}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, n dt] with an output stride.

    The integrator always steps by dt; `sample_every` only thins what gets
    stored.  The final step is stored regardless of the stride.
    """

    t_max: float
    dt: float
    sample_every: int = 1

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ShapeMismatchError(f"dt must be > 0, got {self.dt}")
        if self.t_max <= 0.0:
            raise ShapeMismatchError(f"t_max must be > 0, got {self.t_max}")
        if self.dt > self.t_max:
            raise ShapeMismatchError(f"dt {self.dt} exceeds t_max {self.t_max}")
        if int(self.sample_every) < 1:
            raise ShapeMismatchError(f"sample_every must be >= 1, got {self.sample_every}")

    @property
    def n_steps(self) -> int:
        return max(1, int(math.ceil(self.t_max / self.dt - 1e-9)))

    def sample_steps(self) -> np.ndarray:
        steps = np.arange(0, self.n_steps + 1, int(self.sample_every))
        if steps[-1] != self.n_steps:
            steps = np.append(steps, self.n_steps)
        return steps

    def sample_times(self) -> np.ndarray:
        return self.sample_steps() * self.dt


@dataclass(frozen=True)
class Liouvillian:
    """Dense generator in column-stacked convention plus its provenance."""

    matrix: np.ndarray
    params: ModelParams | None = None


@dataclass(frozen=True)
class Trajectory:
    """Sampled states along one evolution."""

    times: np.ndarray
    states: np.ndarray
    provenance: str = ""


@dataclass(frozen=True)
class SteadyStateResult:
    state: np.ndarray
    spectral_gap: float
    unique: bool


@dataclass(frozen=True)
class StateDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float


def build_liouvillian(
    hamiltonian: np.ndarray,
    jump_operators: list[np.ndarray] | tuple[np.ndarray, ...] = (),
    params: ModelParams | None = None,
    tol: float = 1e-10,
) -> Liouvillian:
    """Assemble the master-equation generator.

    L = -1j (I kron H - H.T kron I)
        + sum_k [ conj(L_k) kron L_k
                  - (I kron L_k' L_k + (L_k' L_k).T kron I) / 2 ]

    Parameters
    ----------
    hamiltonian : array_like
        Hermitian within `tol`.
    jump_operators : sequence of array_like
        Collapse operators with rates absorbed into their amplitudes.
    params : ModelParams, optional
        Carried along as metadata only.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ShapeMismatchError(f"hamiltonian must be square, got {h.shape}")
    defect = float(np.abs(h - h.conj().T).max())
    if defect > tol:
        raise NotHermitianError(f"hamiltonian defect {defect:.3e} exceeds {tol:.3e}")
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    gen = -1j * (kron(eye, h) - kron(h.T, eye))
    for op in jump_operators:
        op = np.asarray(op, dtype=complex)
        if op.shape != (n, n):
            raise ShapeMismatchError(f"jump operator shape {op.shape} does not match {h.shape}")
        square = dagger(op) @ op
        gen = gen + kron(op.conj(), op)
        gen = gen - 0.5 * kron(eye, square)
        gen = gen - 0.5 * kron(square.T, eye)
    return Liouvillian(matrix=gen, params=params)


def liouvillian_from_params(params: ModelParams) -> Liouvillian:
    """Generator for the standard model: exchange, collective decay, dephasing."""
    return build_liouvillian(build_hamiltonian(params), build_jump_operators(params), params=params)


def validate_density_matrix(rho, tol: float = 1e-10) -> StateDiagnostics:
    """Report Hermiticity defect, trace defect, and minimum eigenvalue.

    Purely diagnostic; thresholds are the caller's business.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeMismatchError(f"state must be square, got {rho.shape}")
    herm = float(np.abs(rho - rho.conj().T).max())
    trace = float(abs(rho.trace() - 1.0))
    sym = 0.5 * (rho + rho.conj().T)
    es = hermitian_eigensystem(sym, tol=max(tol, 10.0 * herm + 1e-12))
    return StateDiagnostics(herm, trace, float(es.values[0]))


def _check_samples(states: np.ndarray, provenance: str) -> None:
    # Batch validation of every stored sample; np.linalg handles the
    # stacked 4x4 eigenvalue problems far faster than checking one by one.
    traces = np.abs(np.einsum("kii->k", states) - 1.0)
    if float(traces.max()) > TRACE_DRIFT_TOL:
        k = int(traces.argmax())
        raise StateInvariantViolatedError(
            f"{provenance}: trace drift {traces[k]:.3e} at sample {k} exceeds {TRACE_DRIFT_TOL:.1e}"
        )
    sym = 0.5 * (states + np.conj(np.transpose(states, (0, 2, 1))))
    lows = np.linalg.eigvalsh(sym)[:, 0]
    if float(lows.min()) < -NEGATIVITY_TOL:
        k = int(lows.argmin())
        raise StateInvariantViolatedError(
            f"{provenance}: negativity {lows[k]:.3e} at sample {k} exceeds {NEGATIVITY_TOL:.1e}"
        )


def _require_state_input(rho: np.ndarray, n: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (n, n):
        raise ShapeMismatchError(f"initial state shape {rho.shape}, expected {(n, n)}")
    if float(np.abs(rho - rho.conj().T).max()) > 1e-8 or abs(rho.trace() - 1.0) > 1e-8:
        raise NotAStateError("initial state must be Hermitian with unit trace")
    return rho


def evolve_rk4(rho0, liouvillian: Liouvillian, grid: TimeGrid) -> Trajectory:
    """Fixed-step classical Runge-Kutta propagation.

    Parameters
    ----------
    rho0 : array_like
        Initial density matrix.
    liouvillian : Liouvillian
        Generator; dt * ||matrix||_inf must stay at or below 0.1.
    grid : TimeGrid
        Step size and sampling stride.

    Returns
    -------
    Trajectory
        Stored samples, each re-validated for trace and positivity drift.
    """
    gen = liouvillian.matrix
    n = int(round(math.sqrt(gen.shape[0])))
    rho0 = _require_state_input(rho0, n)
    norm = float(np.abs(gen).sum(axis=1).max())
    if grid.dt * norm > MAX_STEP_NORM:
        raise StepTooLargeError(
            f"dt * ||L||_inf = {grid.dt * norm:.3e} exceeds {MAX_STEP_NORM}; shrink dt"
        )
    steps = grid.sample_steps()
    wanted = set(int(k) for k in steps)
    states = np.empty((len(steps), n, n), dtype=complex)
    v = vec(rho0)
    dt = grid.dt
    out = 0
    for k in range(grid.n_steps + 1):
        if k in wanted:
            states[out] = unvec(v, n)
            out += 1
        if k == grid.n_steps:
            break
        k1 = gen @ v
        k2 = gen @ (v + (0.5 * dt) * k1)
        k3 = gen @ (v + (0.5 * dt) * k2)
        k4 = gen @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    provenance = f"rk4 dt={grid.dt:g}"
    _check_samples(states, provenance)
    return Trajectory(times=grid.sample_times(), states=states, provenance=provenance)


def evolve_expm(rho0, liouvillian: Liouvillian, grid: TimeGrid) -> Trajectory:
    """Propagation by the exact exponential map over each sample interval.

    Independent of the Runge-Kutta route; used to cross-check it.
    """
    gen = liouvillian.matrix
    n = int(round(math.sqrt(gen.shape[0])))
    rho0 = _require_state_input(rho0, n)
    steps = grid.sample_steps()
    states = np.empty((len(steps), n, n), dtype=complex)
    v = vec(rho0)
    states[0] = unvec(v, n)
    # Distinct strides only; the tail interval may be shorter than the rest.
    props: dict[int, np.ndarray] = {}
    for i in range(1, len(steps)):
        span = int(steps[i] - steps[i - 1])
        if span not in props:
            props[span] = matrix_exponential(gen * (span * grid.dt))
        v = props[span] @ v
        states[i] = unvec(v, n)
    provenance = f"expm dt={grid.dt:g}"
    _check_samples(states, provenance)
    return Trajectory(times=grid.sample_times(), states=states, provenance=provenance)


def steady_state(liouvillian: Liouvillian, gap_threshold: float = UNIQUE_GAP) -> SteadyStateResult:
    """Stationary state from the null space of the generator.

    The null direction comes from the eigensystem of L' L.  When the
    second-smallest singular value sits at or below `gap_threshold` the
    stationary manifold is degenerate: `unique` is False and the returned
    state is just one Hermitized, unit-trace element of the manifold,
    with no attempt to resolve the rest.
    """
    gen = liouvillian.matrix
    m = dagger(gen) @ gen
    m = 0.5 * (m + m.conj().T)
    es = hermitian_eigensystem(m, tol=1e-8 * (1.0 + float(np.abs(m).max())))
    sing = np.sqrt(np.clip(es.values, 0.0, None))
    gap = float(sing[1])
    unique = gap > gap_threshold
    n = int(round(math.sqrt(gen.shape[0])))
    candidates = [i for i in range(len(sing)) if sing[i] <= gap_threshold]
    if not candidates:
        candidates = [0]
    best = None
    best_trace = 0.0
    for i in candidates:
        cand = unvec(es.vectors[:, i], n)
        cand = 0.5 * (cand + cand.conj().T)
        tr = float(cand.trace().real)
        if abs(tr) > abs(best_trace):
            best, best_trace = cand, tr
    if best is None or abs(best_trace) < 1e-9:
        raise NotAStateError("null space holds no unit-trace Hermitian element within tolerance")
    rho = best / best_trace
    residual = float(np.linalg.norm(gen @ vec(rho)))
    if unique and residual > 1e-8 * (1.0 + float(np.abs(gen).max())):
        raise NoConvergenceError(f"stationary residual {residual:.3e} too large")
    return SteadyStateResult(state=rho, spectral_gap=gap, unique=unique)
