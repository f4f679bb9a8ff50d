"""Quantum Fisher information for pure output states.

For commuting generator sets the QFI is evaluated analytically from
generator covariances (valid for any expansion point); noncommuting models
are supported only at theta0 = 0, where derivative states are obtained by
central finite differences of the exact evolution.  The regularized
trace-of-inverse and per-parameter nuisance variances implement the
epsilon -> 0+ limit semantics, returning +inf for genuinely singular
directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, UnsupportedConfigurationError
from .operators import GeneratorSet
from .states import PureState, evolve

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-10
SATURABILITY_TOL = 1e-9
SINGULARITY_TOL = 1e-10
FD_STEP = 1e-5


@dataclass(frozen=True)
class QfiMatrix:
    """A p x p quantum Fisher information matrix (symmetric PSD)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
            raise InvalidArgumentError("QFI matrix is not symmetric to 1e-10")
        w = np.linalg.eigvalsh(m)
        if w[0] < -PSD_TOL * max(w[-1], 1.0):
            raise InvalidArgumentError("QFI matrix is not positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def p(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SaturabilityReport:
    """Antisymmetric SLD overlap imaginary parts; zero means saturable."""

    imag_parts: np.ndarray
    saturable: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.imag_parts, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "imag_parts", m)
        object.__setattr__(self, "saturable", bool(np.max(np.abs(m)) <= SATURABILITY_TOL))

    @property
    def p(self) -> int:
        return self.imag_parts.shape[0]


def _validate_inputs(gens: GeneratorSet, theta0, psi_in: PureState):
    theta0 = np.asarray(theta0, dtype=float)
    if theta0.shape != (gens.p,):
        raise InvalidArgumentError(f"theta0 has shape {theta0.shape}, expected ({gens.p},)")
    if psi_in.dim != gens.dim:
        raise InvalidArgumentError(
            f"state dimension {psi_in.dim} does not match generators ({gens.dim})"
        )
    if not gens.commuting and np.any(theta0 != 0.0):
        raise UnsupportedConfigurationError(
            "noncommuting generators are only supported at theta0 = 0"
        )
    return theta0


def _orthogonal_derivatives(gens: GeneratorSet, theta0, psi_in: PureState, n: int,
                            use_fd: bool):
    """Derivative states |D_i> = |d_i psi> - <psi|d_i psi>|psi> for n uses.

    With ``use_fd`` the derivatives come from central finite differences of
    the exact evolution with step FD_STEP; otherwise from the exact
    commuting-set derivative i n Lambda_i |psi>.
    """
    psi0 = evolve(gens, theta0, psi_in).amplitudes
    p = gens.p
    derivs = np.empty((p, gens.dim), dtype=complex)
    if use_fd:
        h = FD_STEP
        for i in range(p):
            step = np.zeros(p)
            step[i] = n * h
            plus = evolve(gens, step, PureState(psi0)).amplitudes
            minus = evolve(gens, -step, PureState(psi0)).amplitudes
            derivs[i] = (plus - minus) / (2.0 * h)
    else:
        for i, g in enumerate(gens.generators):
            derivs[i] = 1j * n * (g.entries @ psi0)
    for i in range(p):
        derivs[i] = derivs[i] - (psi0.conj() @ derivs[i]) * psi0
    return derivs


def _overlap_matrix(gens, theta0, psi_in, n, use_fd=None):
    if use_fd is None:
        use_fd = not gens.commuting
    d = _orthogonal_derivatives(gens, theta0, psi_in, n, use_fd)
    return 4.0 * (d.conj() @ d.T)


def qfi_pure(gens: GeneratorSet, theta0, psi_in: PureState, n: int = 1) -> QfiMatrix:
    """QFI matrix for n parallel uses, modeled as generator scaling n Lambda.

    Commuting sets: F_ij = 4 n^2 (Re<Lambda_i Lambda_j> - <Lambda_i><Lambda_j>)
    at the evolved point, for any theta0.  Noncommuting sets: finite-difference
    derivative overlap formula, theta0 = 0 only.
    """
    theta0 = _validate_inputs(gens, theta0, psi_in)
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    if gens.commuting:
        psi0 = evolve(gens, theta0, psi_in).amplitudes
        vs = np.stack([g.entries @ psi0 for g in gens.generators])
        second = np.real(vs.conj() @ vs.T)
        means = np.real(vs @ psi0.conj())
        base = 4.0 * (second - np.outer(means, means))
        return QfiMatrix((n * n) * base)
    overlap = _overlap_matrix(gens, theta0, psi_in, n)
    return QfiMatrix(np.real(overlap))


def saturability(gens: GeneratorSet, theta0, psi_in: PureState) -> SaturabilityReport:
    """Imaginary parts Im tr(rho L_i L_j) from the pure-state SLDs.

    The report is saturable iff the max entry is below 1e-9; only then is
    the multiparameter quantum Cramer-Rao bound asymptotically attainable
    with many repetitions.
    """
    _validate_inputs(gens, theta0, psi_in)
    overlap = _overlap_matrix(gens, theta0, psi_in, 1)
    return SaturabilityReport(np.imag(overlap))


def trace_inverse(f: QfiMatrix) -> float:
    """lim_{eps->0+} tr((F + eps)^{-1}); +inf when F is singular."""
    w = np.linalg.eigvalsh(f.entries)
    tol = SINGULARITY_TOL * max(1.0, float(w[-1]))
    if w[0] <= tol:
        return math.inf
    return float(np.sum(1.0 / w))


def nuisance_variance(f: QfiMatrix, i: int) -> float:
    """lim_{eps->0+} [(F + eps)^{-1}]_{ii}, treating other parameters as nuisance.

    Finite whenever the coordinate direction i is supported on the invertible
    part of F (e.g. an invertible diagonal block containing i); +inf otherwise.
    """
    if not 0 <= i < f.p:
        raise InvalidArgumentError(f"index {i} out of range for p={f.p}")
    w, v = np.linalg.eigh(f.entries)
    tol = SINGULARITY_TOL * max(1.0, float(w[-1]))
    comp2 = v[i, :] ** 2
    null = w <= tol
    if np.any(comp2[null] > 1e-12):
        return math.inf
    keep = ~null
    return float(np.sum(comp2[keep] / w[keep]))
