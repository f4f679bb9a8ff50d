"""Generator algebra for unitary multiparameter models.

Provides Hermitian generators, their linear combinations and spectral
spreads, parameter-space reparametrizations (including the Walsh-Hadamard
transform), and the two searches used by the cost bounds: the largest
combined spread over unit coefficient vectors and the orthogonal-rotation
bound sum.  All search results are certified lower bounds: every reported
value was attained by an explicitly evaluated candidate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidArgumentError, ResourceLimitError

logger = logging.getLogger(__name__)

HERMITICITY_TOL = 1e-12
COMMUTATOR_TOL = 1e-10
INDEPENDENCE_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10
DET_TOL = 1e-12
DEGENERATE_SPREAD_TOL = 1e-9

# Fixed seeds for the multi-start searches; results are deterministic.
_SEARCH_SEEDS = (11, 23, 47)

DIMENSION_CAP = 2 ** 12


def _as_complex_matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class HermitianOperator:
    """A finite-dimensional Hermitian matrix housing one evolution generator."""

    entries: np.ndarray

    def __post_init__(self):
        m = _as_complex_matrix(self.entries)
        if m.shape[0] < 1:
            raise InvalidArgumentError("dimension must be >= 1")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise InvalidArgumentError("matrix is not Hermitian to 1e-12")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_diagonal(self, tol: float = 1e-14) -> bool:
        off = self.entries - np.diag(np.diag(self.entries))
        return bool(np.max(np.abs(off)) <= tol) if off.size else True


@dataclass(frozen=True)
class GeneratorSet:
    """The vector of generators of a unitary model exp(i theta . Lambda).

    ``commuting`` is computed at construction: true iff every pairwise
    commutator has max-norm <= 1e-10.  Generators must be linearly
    independent as vectors in matrix space.
    """

    generators: tuple
    commuting: bool = field(init=False)

    def __post_init__(self):
        gens = tuple(
            g if isinstance(g, HermitianOperator) else HermitianOperator(g)
            for g in self.generators
        )
        if not gens:
            raise InvalidArgumentError("a generator set needs at least one generator")
        dim = gens[0].dim
        if any(g.dim != dim for g in gens):
            raise InvalidArgumentError("all generators must share one dimension")
        _check_linear_independence(gens)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "commuting", _all_commuting(gens))

    @property
    def p(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    def matrices(self) -> np.ndarray:
        """Stacked (p, dim, dim) array of generator entries."""
        return np.stack([g.entries for g in self.generators])


@dataclass(frozen=True)
class ReparamMatrix:
    """A real invertible parameter-space transformation theta = A theta'.

    ``orthogonal`` is computed at construction (A^T A = 1 to 1e-10).
    """

    entries: np.ndarray
    orthogonal: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
        col_norms = np.linalg.norm(m, axis=0)
        scale = float(np.prod(col_norms)) if np.all(col_norms > 0) else 0.0
        if scale == 0.0 or abs(np.linalg.det(m)) <= DET_TOL * scale:
            raise InvalidArgumentError("reparametrization matrix is singular")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        gram = m.T @ m
        ortho = np.max(np.abs(gram - np.eye(m.shape[0]))) <= ORTHOGONALITY_TOL
        object.__setattr__(self, "orthogonal", bool(ortho))

    @property
    def p(self) -> int:
        return self.entries.shape[0]


def _all_commuting(gens) -> bool:
    if all(g.is_diagonal() for g in gens):
        return True
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a, b = gens[i].entries, gens[j].entries
            if np.max(np.abs(a @ b - b @ a)) > COMMUTATOR_TOL:
                return False
    return True


def _check_linear_independence(gens):
    stacked = np.stack([g.entries for g in gens])
    gram = np.real(np.einsum("aij,bij->ab", stacked.conj(), stacked))
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[-1] <= INDEPENDENCE_TOL * max(sv[0], 1e-300):
        raise InvalidArgumentError("generators are not linearly independent")


# ---------------------------------------------------------------------------
# elementary operations


def spread(op: HermitianOperator) -> float:
    """Difference between the largest and smallest eigenvalues of ``op``."""
    if op.is_diagonal():
        d = np.real(np.diag(op.entries))
        return float(np.max(d) - np.min(d))
    w = np.linalg.eigvalsh(op.entries)
    return float(w[-1] - w[0])


def combine(gens: GeneratorSet, a) -> HermitianOperator:
    """Linear combination sum_i a_i Lambda_i."""
    a = np.asarray(a, dtype=float)
    if a.shape != (gens.p,):
        raise InvalidArgumentError(
            f"coefficient vector has length {a.shape}, expected ({gens.p},)"
        )
    total = np.tensordot(a, gens.matrices(), axes=(0, 0))
    return HermitianOperator(total)


@lru_cache(maxsize=None)
def build_fixed_atom_generators(p: int) -> GeneratorSet:
    """Single layer of p spin-1/2 sensors at fixed positions.

    Lambda_i acts as sigma_z/2 on atom i of a 2^p-dimensional register and
    trivially elsewhere; all generators are diagonal and commute.
    """
    if p < 1:
        raise InvalidArgumentError("p must be >= 1")
    if 2 ** p > DIMENSION_CAP:
        raise ResourceLimitError(f"2^{p} exceeds the dimension cap {DIMENSION_CAP}")
    sz = np.diag([0.5, -0.5])
    gens = []
    for i in range(p):
        m = np.eye(2 ** i)
        m = np.kron(m, sz)
        m = np.kron(m, np.eye(2 ** (p - i - 1)))
        gens.append(m)
    return GeneratorSet(tuple(gens))


@lru_cache(maxsize=None)
def build_free_atom_generators(p: int) -> GeneratorSet:
    """Spin-1/2 sensors freely distributed over p sites (2p single-atom levels).

    Lambda_i = (|i,+><i,+| - |i,-><i,-|)/2; the nonzero eigenspaces of
    different generators are mutually orthogonal.
    """
    if p < 1:
        raise InvalidArgumentError("p must be >= 1")
    gens = []
    for i in range(p):
        d = np.zeros(2 * p)
        d[2 * i] = 0.5
        d[2 * i + 1] = -0.5
        gens.append(np.diag(d))
    return GeneratorSet(tuple(gens))


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def build_pauli_generators(components) -> GeneratorSet:
    """Spin-1/2 field components sigma_i/2 for i in ``components`` (subset of xyz)."""
    comps = [c for c in "xyz" if c in set(components)]
    if not comps or len(set(components) - set("xyz")) > 0:
        raise InvalidArgumentError("components must be a nonempty subset of {x, y, z}")
    return GeneratorSet(tuple(0.5 * _PAULI[c] for c in comps))


def build_two_sector_generators(alpha: float, beta: float) -> GeneratorSet:
    """Two commuting 4-level generators with swapped strength patterns.

    Lambda_1 = diag(+a, -a, +b, -b)/2 and Lambda_2 = diag(+b, -b, +a, -a)/2
    with 0 < beta < alpha.  The pair is the canonical case where the optimal
    individual-measurement reparametrization is non-orthogonal.
    """
    if not (0 < beta < alpha):
        raise InvalidArgumentError("require 0 < beta < alpha")
    l1 = 0.5 * np.diag([alpha, -alpha, beta, -beta])
    l2 = 0.5 * np.diag([beta, -beta, alpha, -alpha])
    return GeneratorSet((l1, l2))


def walsh_hadamard(r: int) -> ReparamMatrix:
    """Orthogonal, involutory +-1/sqrt(p) transform on p = 2^r parameters."""
    if r < 0:
        raise InvalidArgumentError("r must be >= 0")
    p = 2 ** r
    if p > DIMENSION_CAP:
        raise ResourceLimitError(f"2^{r} exceeds the dimension cap {DIMENSION_CAP}")
    h = np.array([[1.0]])
    block = np.array([[1.0, 1.0], [1.0, -1.0]])
    for _ in range(r):
        h = np.kron(h, block)
    return ReparamMatrix(h / math.sqrt(p))


def rotate_generators(gens: GeneratorSet, a: ReparamMatrix) -> GeneratorSet:
    """Reparametrized set Lambda'_i = sum_j A[j, i] Lambda_j (i.e. A^T Lambda)."""
    if a.p != gens.p:
        raise InvalidArgumentError(f"matrix is {a.p}x{a.p} but the set has p={gens.p}")
    mats = gens.matrices()
    rotated = np.tensordot(a.entries.T, mats, axes=(1, 0))
    return GeneratorSet(tuple(rotated))


def rotated_spreads(gens: GeneratorSet, a: ReparamMatrix) -> np.ndarray:
    """Spreads of every generator of ``rotate_generators(gens, a)``."""
    return np.array([spread(g) for g in rotate_generators(gens, a).generators])


def eigenvalue_patterns(gens: GeneratorSet) -> np.ndarray:
    """Joint eigenvalue patterns of a commuting set, one (d, p) row per level.

    Row s holds (lambda_1[s], ..., lambda_p[s]) in a common eigenbasis; the
    eigenvalues of a combination a . Lambda are then the values patterns @ a.
    Raises if the set does not commute to working precision.
    """
    if not gens.commuting:
        raise InvalidArgumentError("eigenvalue patterns require a commuting set")
    mats = gens.matrices()
    if all(g.is_diagonal() for g in gens.generators):
        return np.real(np.diagonal(mats, axis1=1, axis2=2)).T.copy()
    # Generic weights keep distinct joint patterns non-degenerate.
    weights = np.sqrt(np.arange(2, gens.p + 2, dtype=float))
    probe = np.tensordot(weights, mats, axes=(0, 0))
    _, basis = np.linalg.eigh(probe)
    patterns = np.empty((gens.dim, gens.p))
    for i, m in enumerate(mats):
        transformed = basis.conj().T @ m @ basis
        off = transformed - np.diag(np.diag(transformed))
        if np.max(np.abs(off)) > 1e-8:
            raise InvalidArgumentError("failed to diagonalize the set simultaneously")
        patterns[:, i] = np.real(np.diag(transformed))
    return patterns


# ---------------------------------------------------------------------------
# searches


def _sphere_objective(gens):
    mats = gens.matrices()

    def value(x):
        nrm = np.linalg.norm(x)
        if nrm < 1e-12:
            return 0.0
        h = np.tensordot(x / nrm, mats, axes=(0, 0))
        w = np.linalg.eigvalsh(h)
        return float(w[-1] - w[0])

    return value


def _diameter_direction(patterns: np.ndarray):
    """Unit vector maximizing spread for a commuting set, via the diameter
    of the eigenvalue-pattern point set (exact for commuting models)."""
    pts = np.unique(np.round(patterns, 12), axis=0)
    d = pts.shape[0]
    if d > 2048:
        return None  # pairwise diameter too large; other candidates still apply
    sq = np.sum(pts ** 2, axis=1)
    dist2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
    s, t = np.unravel_index(np.argmax(dist2), dist2.shape)
    direction = pts[s] - pts[t]
    nrm = np.linalg.norm(direction)
    if nrm < 1e-15:
        return None
    return direction / nrm


def max_spread_over_sphere(gens: GeneratorSet):
    """Largest spread of a . Lambda over unit vectors a.

    Returns ``(a, value)``.  For commuting sets the maximum equals the
    diameter of the joint eigenvalue-pattern point set, which is computed
    exactly.  Otherwise structured candidates (coordinate axes, the uniform
    vector) are evaluated alongside seeded simplex refinements, so the value
    is a certified lower bound on the true maximum.
    """
    p = gens.p
    objective = _sphere_objective(gens)
    if gens.commuting:
        diam = _diameter_direction(eigenvalue_patterns(gens))
        if diam is not None:
            return diam, objective(diam)
    candidates = [np.eye(p)[i] for i in range(p)]
    candidates.append(np.full(p, 1.0 / math.sqrt(p)))
    for seed in _SEARCH_SEEDS:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(p)
        candidates.append(v / np.linalg.norm(v))

    best_a, best_val = None, -1.0
    for a0 in candidates:
        val0 = objective(a0)
        if val0 > best_val + 1e-12:
            best_a, best_val = a0 / np.linalg.norm(a0), val0
        res = minimize(
            lambda x: -objective(x),
            a0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
        )
        nrm = np.linalg.norm(res.x)
        if nrm > 1e-12 and -res.fun > best_val + 1e-12:
            best_a, best_val = res.x / nrm, float(-res.fun)
    return best_a, best_val


def rotation_bound_value(gens: GeneratorSet, a: ReparamMatrix) -> float:
    """The bound sum sum_i 1 / spread([A^T Lambda]_i)^2 for one rotation.

    Returns -inf when any rotated spread is degenerate (below 1e-9), so the
    candidate never wins a maximization.
    """
    spreads = rotated_spreads(gens, a)
    if np.any(spreads < DEGENERATE_SPREAD_TOL):
        return -math.inf
    return float(np.sum(1.0 / spreads ** 2))


def _skew_to_orthogonal(x: np.ndarray, p: int) -> np.ndarray:
    s = np.zeros((p, p))
    iu = np.triu_indices(p, k=1)
    s[iu] = x
    s = s - s.T
    # exp of a real skew-symmetric matrix via the Hermitian matrix iS
    w, v = np.linalg.eigh(1j * s)
    return np.real(v @ np.diag(np.exp(-1j * w)) @ v.conj().T)


def optimize_orthogonal_bound(gens: GeneratorSet):
    """Maximize sum_i 1/spread([O^T Lambda]_i)^2 over orthogonal O.

    Returns ``(ReparamMatrix, value)``.  The identity and (when p is a power
    of two) the Walsh-Hadamard transform are always evaluated; local searches
    over O = O_seed exp(skew) refine from fixed seeds.  The value is a
    certified lower bound on the supremum.  Rotations producing a degenerate
    spread are discarded with a warning.
    """
    p = gens.p
    if p < 2:
        raise InvalidArgumentError("the rotation bound needs p >= 2")
    structured = [np.eye(p)]
    r = int(round(math.log2(p)))
    if 2 ** r == p:
        structured.append(walsh_hadamard(r).entries)

    best_o, best_val = None, -math.inf
    for o in structured:
        val = rotation_bound_value(gens, ReparamMatrix(o))
        if val == -math.inf:
            logger.warning("discarding rotation candidate with degenerate spread")
            continue
        if val > best_val + 1e-12:
            best_o, best_val = o, val

    nvars = p * (p - 1) // 2
    mats = gens.matrices()

    def neg_bound(x, base):
        o = base @ _skew_to_orthogonal(x, p)
        rotated = np.tensordot(o.T, mats, axes=(1, 0))
        total = 0.0
        for m in rotated:
            w = np.linalg.eigvalsh(m)
            s = w[-1] - w[0]
            if s < DEGENERATE_SPREAD_TOL:
                return 1e300
            total += 1.0 / s ** 2
        return -total

    starts = [(np.zeros(nvars), base) for base in structured]
    for seed in _SEARCH_SEEDS:
        rng = np.random.default_rng(seed)
        starts.append((0.5 * rng.standard_normal(nvars), np.eye(p)))
    for x0, base in starts:
        res = minimize(
            neg_bound,
            x0,
            args=(base,),
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-11, "maxiter": 400 * max(nvars, 1)},
        )
        if -res.fun > best_val + 1e-12:
            candidate = base @ _skew_to_orthogonal(res.x, p)
            val = rotation_bound_value(gens, ReparamMatrix(candidate))
            if val > best_val + 1e-12:
                best_o, best_val = candidate, val
    if best_o is None:
        raise InvalidArgumentError("every rotation candidate had a degenerate spread")
    return ReparamMatrix(best_o), best_val
