"""Minimax joint-estimation machinery: the Dirichlet ground state on the
cross-polytope, the Airy lower bound, the inscribed-ball upper bound, and
covariant phase-measurement costs with a Monte-Carlo verification harness.

The ground energy E of -Laplacian on {sum_i |mu_i| <= 1/2} with zero
boundary values estimates the joint minimax cost constant via cost = E/N^2.
Discretization is second-order central differences on a uniform
vertex-aligned grid; Dirichlet data is enforced by excluding boundary and
exterior nodes, and the smallest eigenvalue is found by inverse power
iteration with matrix-free conjugate-gradient inner solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.sparse.linalg import LinearOperator, cg

from .errors import ConvergenceError, InvalidArgumentError, NumericalError
from .special import airy_ai_prime_first_zero, airy_ai_with_prime, bessel_j_first_zero
from .states import PhaseStateCoefficients

NODE_CAP = 20_000_000
RESIDUAL_RTOL = 1e-9
MAX_POWER_ITERATIONS = 200
DEFAULT_PDF_GRID = 2 ** 14
DEFAULT_AIRY_CUTOFF = 14.0


@dataclass(frozen=True)
class SimplexSpectrum:
    """Converged ground-state data of the cross-polytope Dirichlet problem."""

    p: int
    h: float
    E: float
    iterations: int
    residual: float
    nodes: np.ndarray
    eigenvector: np.ndarray

    def __post_init__(self):
        if not self.E > 0:
            raise InvalidArgumentError("ground energy must be positive")
        if self.residual > 1e-8 * self.E:
            raise InvalidArgumentError("eigen-residual exceeds 1e-8 * E")
        self.nodes.flags.writeable = False
        self.eigenvector.flags.writeable = False


@dataclass(frozen=True)
class AiryBoundResult:
    """First Ai' zero, the three half-line integrals, and the p^3/N^2 coefficient."""

    a_prime_zero: float
    I_norm: float
    I_mean: float
    I_kinetic: float
    constant: float

    def __post_init__(self):
        if not -1.1 < self.a_prime_zero < -0.9:
            raise NumericalError("Ai' zero outside the expected window")
        if not 0.5 < self.constant < 0.7:
            raise NumericalError("Airy bound constant outside the expected window")


def _interior_mask(p: int, m: int):
    axes = np.linspace(-0.5, 0.5, m + 1)
    radial = np.abs(axes)
    total = np.zeros((m + 1,) * p)
    for d in range(p):
        shape = [1] * p
        shape[d] = m + 1
        total = total + radial.reshape(shape)
    mask = total < 0.5 - 1e-9 / m
    return axes, mask


def simplex_ground_energy(p: int, grid_points_per_axis: int) -> SimplexSpectrum:
    """Smallest Dirichlet eigenvalue of -Laplacian on {sum|mu_i| <= 1/2}.

    ``grid_points_per_axis`` is the number of grid intervals per axis
    (spacing h = 1/M).  Exact values: pi^2 for p = 1 and 4 pi^2 for p = 2;
    the discrete eigenvalue approaches the continuum limit from below at
    rate O(h^2).
    """
    if p not in (1, 2, 3, 4):
        raise InvalidArgumentError("the simplex solver supports p in {1, 2, 3, 4}")
    m = int(grid_points_per_axis)
    if m - 1 < 8:
        raise InvalidArgumentError("grid too coarse: fewer than 8 interior points per axis")
    if (m + 1) ** p > NODE_CAP:
        raise InvalidArgumentError(f"grid exceeds the {NODE_CAP:.0e}-node cap")
    h = 1.0 / m
    axes, mask = _interior_mask(p, m)
    flat_mask = mask.ravel()
    n = int(np.count_nonzero(flat_mask))
    compact_of_full = -np.ones(flat_mask.size, dtype=np.int64)
    compact_of_full[flat_mask] = np.arange(n)

    full_idx = np.flatnonzero(flat_mask)
    coords_idx = np.array(np.unravel_index(full_idx, mask.shape)).T
    strides = np.array([(m + 1) ** (p - 1 - d) for d in range(p)], dtype=np.int64)

    neighbors = np.full((n, 2 * p), n, dtype=np.int64)  # n = padded zero slot
    for d in range(p):
        for s_i, step in enumerate((-1, 1)):
            ok = (coords_idx[:, d] + step >= 0) & (coords_idx[:, d] + step <= m)
            nb_full = full_idx[ok] + step * strides[d]
            nb_compact = compact_of_full[nb_full]
            col = np.full(n, n, dtype=np.int64)
            valid = nb_compact >= 0
            rows = np.flatnonzero(ok)[valid]
            col[rows] = nb_compact[valid]
            neighbors[:, 2 * d + s_i] = col

    inv_h2 = 1.0 / (h * h)
    diag = 2.0 * p * inv_h2

    def matvec(u):
        u = np.asarray(u, dtype=float).ravel()
        padded = np.concatenate([u, [0.0]])
        return diag * u - inv_h2 * padded[neighbors].sum(axis=1)

    op = LinearOperator((n, n), matvec=matvec, dtype=float)

    coords = axes[coords_idx]
    x = 0.5 - np.sum(np.abs(coords), axis=1)  # tent profile start
    x /= np.linalg.norm(x)

    energy = residual = math.inf
    iterations = 0
    for iterations in range(1, MAX_POWER_ITERATIONS + 1):
        y = _cg_solve(op, x)
        y /= np.linalg.norm(y)
        ay = matvec(y)
        energy = float(y @ ay)
        residual = float(np.linalg.norm(ay - energy * y))
        x = y
        if residual <= RESIDUAL_RTOL * energy:
            break
    else:
        raise ConvergenceError(
            f"inverse iteration did not converge (residual {residual:.3e})",
            residual=residual,
        )
    return SimplexSpectrum(
        p=p,
        h=h,
        E=energy,
        iterations=iterations,
        residual=residual,
        nodes=coords,
        eigenvector=x,
    )


def _cg_solve(op, rhs):
    try:
        sol, info = cg(op, rhs, rtol=1e-12, atol=0.0, maxiter=20000)
    except TypeError:  # scipy < 1.12 spells the relative tolerance 'tol'
        sol, info = cg(op, rhs, tol=1e-12, atol=0.0, maxiter=20000)
    if info < 0:
        raise ConvergenceError(f"conjugate-gradient breakdown (info={info})")
    return sol


def airy_lower_bound(tail_cutoff: float = DEFAULT_AIRY_CUTOFF) -> AiryBoundResult:
    """Fundamental joint minimax bound coefficient from the Airy problem.

    Locates the first zero A0' of Ai', evaluates the three half-line
    integrals of |Ai|^2, |Ai|^2 mu and |Ai'|^2 shifted by A0', and returns
    the coefficient 4 I_kin I_mean^2 / I_norm^3 of p^3/N^2 (about 0.63).
    The integrands decay like exp(-(4/3) mu^(3/2)); ``tail_cutoff`` is the
    truncation point of the adaptive quadrature.
    """
    if tail_cutoff < 5.0:
        raise InvalidArgumentError("tail cutoff too small for the quadrature window")
    a0 = airy_ai_prime_first_zero()

    def ai_sq(mu):
        return airy_ai_with_prime(a0 + mu)[0] ** 2

    def ai_sq_mu(mu):
        return airy_ai_with_prime(a0 + mu)[0] ** 2 * mu

    def aip_sq(mu):
        return airy_ai_with_prime(a0 + mu)[1] ** 2

    values = []
    for f in (ai_sq, ai_sq_mu, aip_sq):
        val, err = quad(f, 0.0, tail_cutoff, limit=200, epsabs=1e-13, epsrel=1e-12)
        if err > 1e-8 * max(abs(val), 1e-12):
            raise NumericalError(f"quadrature error estimate {err:.2e} too large")
        values.append(val)
    i_norm, i_mean, i_kin = values
    constant = 4.0 * i_kin * i_mean ** 2 / i_norm ** 3
    return AiryBoundResult(
        a_prime_zero=a0,
        I_norm=i_norm,
        I_mean=i_mean,
        I_kinetic=i_kin,
        constant=constant,
    )


def ball_upper_bound(p: int) -> float:
    """Ground energy of the largest ball inscribed in the cross-polytope.

    The radius is 1/(2 sqrt(p)), so E = p (2 j_{p/2-1,1})^2 with j the first
    positive zero of the Bessel function of order p/2 - 1.  An admissible
    trial state, hence an upper estimate of the simplex ground energy (the
    coefficient of 1/N^2); E/p^3 -> 1 for large p.
    """
    if p < 1:
        raise InvalidArgumentError("p must be >= 1")
    j = bessel_j_first_zero(p / 2.0 - 1.0)
    return p * (2.0 * j) ** 2


# ---------------------------------------------------------------------------
# covariant phase-measurement costs


def phase_cost_analytic(coeffs: PhaseStateCoefficients) -> float:
    """Mean covariant-measurement cost of 4 sin^2(u/2) in closed form.

    Equals 2 - 2 Re sum_m conj(c_{m+1}) c_m; for the sine-profile
    coefficients this is exactly 2 (1 - cos(pi/(N+2))).
    """
    c = coeffs.c
    return float(2.0 - 2.0 * np.real(np.sum(np.conj(c[1:]) * c[:-1])))


@dataclass(frozen=True)
class PhaseMeasurementModel:
    """Covariant-measurement outcome density p(u) = |sum_m c_m e^{imu}|^2/(2 pi)
    of the mismatch u on [-pi, pi), tabulated on a uniform grid."""

    coeffs: PhaseStateCoefficients
    grid_points: int = DEFAULT_PDF_GRID
    u: np.ndarray = field(init=False, default=None)
    pdf: np.ndarray = field(init=False, default=None)

    def __post_init__(self):
        g = int(self.grid_points)
        if g < 4 * (self.coeffs.N + 1):
            raise InvalidArgumentError("pdf grid must have at least 4(N+1) points")
        c = self.coeffs.c
        m = np.arange(c.size)
        shifted = c * np.exp(-1j * m * np.pi)  # e^{im u} at u = -pi + 2 pi j / g
        amps = np.fft.ifft(shifted, n=g) * g
        pdf = np.abs(amps) ** 2 / (2.0 * np.pi)
        u = -np.pi + 2.0 * np.pi * np.arange(g) / g
        total = float(np.sum(pdf) * (2.0 * np.pi / g))
        if abs(total - 1.0) > 1e-8:
            raise NumericalError(f"pdf integrates to {total}, not 1")
        u.flags.writeable = False
        pdf.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "pdf", pdf)
        object.__setattr__(self, "grid_points", g)


def phase_cost_monte_carlo(model: PhaseMeasurementModel, samples: int, seed: int):
    """Empirical mean and standard error of 4 sin^2(u/2) under the model pdf.

    Draws by inverse-CDF sampling on the tabulated grid (piecewise-constant
    density, linear within cells) with a counter-based generator, so results
    are deterministic for a fixed (seed, samples, grid).
    """
    if samples < 1000:
        raise InvalidArgumentError("need at least 1000 samples")
    du = 2.0 * np.pi / model.grid_points
    weights = model.pdf * du
    total = float(np.sum(weights))
    if total <= 0:
        raise NumericalError("pdf grid is not normalizable")
    cum = np.cumsum(weights)
    rng = np.random.Generator(np.random.Philox(seed))
    r = rng.random(samples) * total
    idx = np.searchsorted(cum, r, side="left")
    idx = np.minimum(idx, model.grid_points - 1)
    prev = cum[idx] - weights[idx]
    frac = np.where(weights[idx] > 0, (r - prev) / np.where(weights[idx] > 0, weights[idx], 1.0), 0.5)
    u = model.u[idx] + frac * du
    costs = 4.0 * np.sin(0.5 * u) ** 2
    mean = float(np.mean(costs))
    stderr = float(np.std(costs, ddof=1) / math.sqrt(samples))
    return mean, stderr
