"""Cost bounds and strategy costs for both resource paradigms.

Resource bookkeeping is leading-order only: a CR (many-repetition) cost
estimate with constant C means a total variance C/(k n^2); a minimax (MM)
estimate means C/N^2.  Separate strategies split the repetition budget k
(alpha = 1) or the total gate budget N (alpha = 2) optimally across
parameters via the power-mean allocation rule.

Per-parameter variance constants for individual estimation come from one of
two oracles: the spread oracle 1/lambda'^2 (pi^2/lambda'^2 for MM), which
ignores nuisance parameters and is attainable only when the rotated
generator can be sensed undisturbed, or the exact commuting-model oracle
based on the classical c-optimal design value over the joint eigenvalue
patterns, which accounts for nuisance parameters and is what the
reparametrization optimizer uses by default on commuting sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

from .errors import InvalidArgumentError
from .operators import (
    GeneratorSet,
    ReparamMatrix,
    eigenvalue_patterns,
    max_spread_over_sphere,
    optimize_orthogonal_bound,
    rotated_spreads,
    spread,
    walsh_hadamard,
)

PI2 = math.pi ** 2

_SEARCH_SEEDS = (5, 17, 29)


@dataclass(frozen=True)
class ResourceBudget:
    """Resource accounting: CR carries (n gates/trial, k trials); MM carries N.

    The relation N = n * k is documented, not enforced.
    """

    paradigm: str
    n: int | None = None
    k: int | None = None
    N: int | None = None

    def __post_init__(self):
        if self.paradigm not in ("cr", "mm"):
            raise InvalidArgumentError("paradigm must be 'cr' or 'mm'")
        if self.paradigm == "cr":
            if not (self.n and self.k) or self.n < 1 or self.k < 1:
                raise InvalidArgumentError("a CR budget needs positive n and k")
        else:
            if not self.N or self.N < 1:
                raise InvalidArgumentError("an MM budget needs positive N")

    @property
    def alpha(self) -> int:
        """Scaling exponent of the divisible resource (k for CR, N for MM)."""
        return 1 if self.paradigm == "cr" else 2


@dataclass(frozen=True)
class CostEstimate:
    """A leading-order asymptotic cost record.

    ``constant`` multiplies 1/(k n^2) in the CR paradigm and 1/N^2 in MM
    (or 1/(k n (n+2)) when ``finite_n`` is set, for the finite-n parallel
    field-sensing results).
    """

    paradigm: str
    strategy: str
    constant: float
    p_exponent: int
    status: str
    provenance: str = ""
    finite_n: bool = False

    _STATUSES = ("exact_asymptotic", "lower_bound", "upper_bound", "cited")

    def __post_init__(self):
        if self.paradigm not in ("cr", "mm"):
            raise InvalidArgumentError("paradigm must be 'cr' or 'mm'")
        if self.status not in self._STATUSES:
            raise InvalidArgumentError(f"unknown status {self.status!r}")
        if not self.constant > 0:
            raise InvalidArgumentError("cost constant must be positive")

    def cost(self, budget: ResourceBudget) -> float:
        """Evaluate the leading-order cost under ``budget``."""
        if budget.paradigm != self.paradigm:
            raise InvalidArgumentError("budget paradigm does not match the estimate")
        if self.paradigm == "cr":
            if self.finite_n:
                return self.constant / (budget.k * budget.n * (budget.n + 2))
            return self.constant / (budget.k * budget.n ** 2)
        return self.constant / budget.N ** 2


@dataclass(frozen=True)
class AllocationPlan:
    """Optimal split of a divisible resource across p independent tasks.

    With per-task constants c_i and variance c_i / x_i^alpha at share x_i,
    shares are proportional to c_i^(1/(alpha+1)) and the achievable total is
    (sum_i c_i^(1/(alpha+1)))^(alpha+1) in units of the full budget^alpha.
    """

    alpha: int
    c: np.ndarray
    shares: np.ndarray = field(init=False)
    total_constant: float = field(init=False)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise InvalidArgumentError("c must be a nonempty vector")
        if np.any(c <= 0):
            raise InvalidArgumentError("all allocation constants must be positive")
        if self.alpha not in (1, 2):
            raise InvalidArgumentError("alpha must be 1 (CR) or 2 (MM)")
        roots = c ** (1.0 / (self.alpha + 1))
        shares = roots / np.sum(roots)
        total = float(np.sum(roots) ** (self.alpha + 1))
        c.flags.writeable = False
        shares.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "shares", shares)
        object.__setattr__(self, "total_constant", total)


def allocate(c, alpha: int) -> AllocationPlan:
    """Lagrange-optimal resource split for variances c_i / x_i^alpha, sum x_i = 1."""
    return AllocationPlan(alpha, np.asarray(c, dtype=float))


def single_param_cr(lam: float, n: int, k: int) -> float:
    """Minimal single-parameter cost 1/(k n^2 lambda^2) with k repetitions."""
    if lam <= 0:
        raise InvalidArgumentError("lambda must be positive")
    return 1.0 / (k * n ** 2 * lam ** 2)


def single_param_mm(lam: float, N: int) -> float:
    """Minimal single-parameter minimax cost pi^2/(N^2 lambda^2) for N gates."""
    if lam <= 0:
        raise InvalidArgumentError("lambda must be positive")
    return PI2 / (N ** 2 * lam ** 2)


def weight_to_reparam(w) -> ReparamMatrix:
    """Factor a full-rank PSD weight matrix as W = A^T A (Cholesky-style)."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or np.max(np.abs(w - w.T)) > 1e-10:
        raise InvalidArgumentError("W must be a symmetric square matrix")
    try:
        lower = np.linalg.cholesky(w)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentError("W must be positive definite (full rank)") from exc
    return ReparamMatrix(lower.T)


# ---------------------------------------------------------------------------
# per-parameter variance oracles


def design_vectors(gens: GeneratorSet) -> np.ndarray:
    """Rows 2 * (joint eigenvalue pattern) of a commuting set, deduplicated
    up to sign.  The achievable QFI matrices are exactly the second-moment
    matrices of symmetric designs on these vectors."""
    pts = 2.0 * eigenvalue_patterns(gens)
    pts = np.round(pts, 12)
    canon = []
    for row in pts:
        nz = row[np.abs(row) > 0]
        if nz.size == 0:
            continue
        canon.append(row if nz[0] > 0 else -row)
    if not canon:
        raise InvalidArgumentError("all eigenvalue patterns are zero")
    return np.unique(np.array(canon), axis=0)


class _GaugeSolver:
    """Gauge of c with respect to conv(+-vectors): min ||b||_1 with V^T b = c.

    The minimum is attained on a basic solution supported on p vectors, so
    for small designs all invertible p-subsets are inverted once up front
    and each query is a batched solve; large designs fall back to a linear
    program per query.
    """

    _SUBSET_LIMIT = 3000

    def __init__(self, vectors: np.ndarray):
        self.vectors = np.asarray(vectors, dtype=float)
        self.m, self.p = self.vectors.shape
        self._inverses = None
        if self.m == self.p:
            self._inverses = np.linalg.inv(self.vectors.T)[None, :, :]
        elif math.comb(self.m, self.p) <= self._SUBSET_LIMIT:
            from itertools import combinations

            invs = []
            for subset in combinations(range(self.m), self.p):
                sub = self.vectors[list(subset)].T
                if abs(np.linalg.det(sub)) > 1e-12:
                    invs.append(np.linalg.inv(sub))
            if invs:
                self._inverses = np.stack(invs)

    def gauge(self, c: np.ndarray) -> float:
        if self._inverses is not None:
            coeffs = self._inverses @ c
            return float(np.min(np.sum(np.abs(coeffs), axis=1)))
        res = linprog(
            np.ones(2 * self.m),
            A_eq=np.hstack([self.vectors.T, -self.vectors.T]),
            b_eq=c,
            bounds=[(0, None)] * (2 * self.m),
            method="highs",
        )
        if not res.success:
            return math.inf
        return float(res.fun)


def _elfving_gauge(c: np.ndarray, vectors: np.ndarray) -> float:
    return _GaugeSolver(vectors).gauge(np.asarray(c, dtype=float))


def c_optimal_variance(gens: GeneratorSet, c) -> float:
    """Smallest achievable c^T F^{-1} c over input states, commuting sets.

    This is the squared gauge of c with respect to the symmetric convex hull
    of the design vectors (the classical c-optimal design value); it is the
    exact per-direction variance constant with the remaining parameters
    treated as nuisance.  Returns +inf when the direction is not estimable.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (gens.p,):
        raise InvalidArgumentError(f"direction has shape {c.shape}, expected ({gens.p},)")
    g = _elfving_gauge(c, design_vectors(gens))
    return g * g if math.isfinite(g) else math.inf


def spread_variance_oracle(gens: GeneratorSet, paradigm: str):
    """Oracle (A, i) -> 1/lambda'_i^2 (CR) or pi^2/lambda'_i^2 (MM).

    Ignores nuisance parameters; a valid constant only when parameter i can
    be sensed undisturbed in the A-parametrization, a certified lower bound
    per direction otherwise.
    """
    factor = PI2 if paradigm == "mm" else 1.0

    def oracle(a: ReparamMatrix, i: int) -> float:
        lam = rotated_spreads(gens, a)[i]
        if lam < 1e-12:
            return math.inf
        return factor / lam ** 2

    return oracle


def elfving_variance_oracle(gens: GeneratorSet, paradigm: str):
    """Exact nuisance-aware oracle for commuting sets (c-optimal design value)."""
    solver = _GaugeSolver(design_vectors(gens))
    factor = PI2 if paradigm == "mm" else 1.0

    def oracle(a: ReparamMatrix, i: int) -> float:
        row = np.linalg.inv(a.entries)[i]
        g = solver.gauge(row)
        return factor * g * g if math.isfinite(g) else math.inf

    return oracle


def default_variance_oracle(gens: GeneratorSet, paradigm: str):
    if gens.commuting:
        return elfving_variance_oracle(gens, paradigm)
    return spread_variance_oracle(gens, paradigm)


def per_parameter_spread_constants(gens: GeneratorSet, paradigm: str) -> np.ndarray:
    """Single-shot constants 1/lambda_i^2 (CR) or pi^2/lambda_i^2 (MM)."""
    factor = PI2 if paradigm == "mm" else 1.0
    lams = np.array([spread(g) for g in gens.generators])
    if np.any(lams < 1e-12):
        raise InvalidArgumentError("a generator has degenerate spectrum")
    return factor / lams ** 2


# ---------------------------------------------------------------------------
# strategy costs


def sep_cost(
    gens: GeneratorSet,
    budget: ResourceBudget,
    per_param_constants,
    nuisance_free: bool = True,
) -> CostEstimate:
    """Fixed-parametrization separate-strategy cost from per-parameter constants.

    ``per_param_constants`` are the single-shot constants (1/lambda_i^2 for
    CR, pi^2/lambda_i^2 for MM); the repetition budget k (CR) or gate budget
    N (MM) is split optimally.  Status is exact when the per-parameter
    protocols are unobstructed by nuisance parameters (caller-supplied flag),
    a lower bound otherwise.
    """
    plan = allocate(per_param_constants, budget.alpha)
    status = "exact_asymptotic" if nuisance_free else "lower_bound"
    return CostEstimate(
        paradigm=budget.paradigm,
        strategy="sep",
        constant=plan.total_constant,
        p_exponent=budget.alpha + 1,
        status=status,
        provenance="computed: optimal resource split of per-parameter protocols",
    )


def sep_plus_lower_bound(gens: GeneratorSet, budget: ResourceBudget) -> CostEstimate:
    """Reparametrized separate-strategy lower bound from the best combined spread.

    CR: p^2/(k n^2 L*^2); MM: p^3 pi^2/(N^2 L*^2), where L* is the maximal
    spread of a . Lambda over unit vectors a.
    """
    _, lam_star = max_spread_over_sphere(gens)
    p = gens.p
    if budget.paradigm == "cr":
        constant = p ** 2 / lam_star ** 2
    else:
        constant = p ** 3 * PI2 / lam_star ** 2
    return CostEstimate(
        paradigm=budget.paradigm,
        strategy="sep_plus",
        constant=constant,
        p_exponent=budget.alpha + 1,
        status="lower_bound",
        provenance="computed: single-vector spread maximization",
    )


def jnt_lower_bound(gens: GeneratorSet, budget: ResourceBudget) -> CostEstimate:
    """Joint-strategy lower bound from the orthogonal-rotation bound sum.

    The constant is max_O sum_i 1/lambda^2([O^T Lambda]_i), multiplied by
    pi^2 in the MM paradigm.
    """
    if gens.p == 1:
        value = 1.0 / spread(gens.generators[0]) ** 2
    else:
        _, value = optimize_orthogonal_bound(gens)
    factor = PI2 if budget.paradigm == "mm" else 1.0
    return CostEstimate(
        paradigm=budget.paradigm,
        strategy="jnt",
        constant=factor * value,
        p_exponent=1,
        status="lower_bound",
        provenance="computed: orthogonal-rotation bound search",
    )


def sep_plus_value(a: ReparamMatrix, variance_oracle, alpha: int, p: int) -> float:
    """Reparametrized separate cost (sum_i ([A^T A]_ii v_i)^(1/(alpha+1)))^(alpha+1)."""
    gram_diag = np.sum(a.entries ** 2, axis=0)
    total = 0.0
    for i in range(p):
        v = variance_oracle(a, i)
        if not math.isfinite(v):
            return math.inf
        total += (gram_diag[i] * v) ** (1.0 / (alpha + 1))
    return total ** (alpha + 1)


def _pattern_inverse_seed(gens: GeneratorSet) -> np.ndarray | None:
    """Candidate A whose inverse rows are extreme design vectors, one per
    parameter (the construction that decouples paired-sector models)."""
    try:
        vectors = design_vectors(gens)
    except InvalidArgumentError:
        return None
    rows = []
    for i in range(gens.p):
        order = np.lexsort(np.vstack([vectors.T[::-1], -np.abs(vectors[:, i])]))
        rows.append(vectors[order[0]])
    b = np.array(rows)
    if abs(np.linalg.det(b)) < 1e-10:
        return None
    return np.linalg.inv(b)


def sep_plus_optimize(
    gens: GeneratorSet,
    budget: ResourceBudget,
    variance_oracle=None,
):
    """Minimize the reparametrized separate cost over invertible A.

    Seeds: the identity, the Walsh-Hadamard transform (when p is a power of
    two), the inverse-pattern construction for commuting sets, and fixed
    random starts, each refined by a derivative-free simplex search.
    Singular candidates are discarded.  Returns ``(A, CostEstimate)`` with
    status ``upper_bound`` on the true reparametrized-separate optimum.
    """
    p = gens.p
    alpha = budget.alpha
    if variance_oracle is None:
        variance_oracle = default_variance_oracle(gens, budget.paradigm)

    def objective(flat):
        try:
            a = ReparamMatrix(flat.reshape(p, p))
        except InvalidArgumentError:
            return 1e300
        val = sep_plus_value(a, variance_oracle, alpha, p)
        return val if math.isfinite(val) else 1e300

    seeds = [np.eye(p)]
    r = int(round(math.log2(p)))
    if 2 ** r == p:
        seeds.append(walsh_hadamard(r).entries)
    pattern_seed = _pattern_inverse_seed(gens)
    if pattern_seed is not None:
        seeds.append(pattern_seed)
    for seed in _SEARCH_SEEDS:
        rng = np.random.default_rng(seed)
        seeds.append(np.eye(p) + 0.3 * rng.standard_normal((p, p)))

    best_a, best_val = None, math.inf
    for s in seeds:
        v0 = objective(np.asarray(s, dtype=float).ravel())
        if v0 < best_val - 1e-15:
            best_a, best_val = np.asarray(s, dtype=float), v0
        res = minimize(
            objective,
            np.asarray(s, dtype=float).ravel(),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12,
                     "maxiter": min(600 * p * p, 4000)},
        )
        if res.fun < best_val - 1e-15:
            best_a, best_val = res.x.reshape(p, p), float(res.fun)
    if best_a is None:
        raise InvalidArgumentError("no invertible reparametrization candidate found")
    estimate = CostEstimate(
        paradigm=budget.paradigm,
        strategy="sep_plus",
        constant=best_val,
        p_exponent=alpha + 1,
        status="upper_bound",
        provenance="computed: reparametrization search over invertible A",
    )
    return ReparamMatrix(best_a), estimate


def orthogonal_restricted_sep_plus(alpha_beta, angle_grid: int = 180) -> float:
    """Best orthogonally-reparametrized separate CR constant for the
    two-sector model, minimized over the rotation angle.

    Uses the exact nuisance-aware per-direction constants o_i^T F^{-1} o_i,
    scanned on a uniform angle grid with local refinement.  Returns the
    minimal constant (in units of 1/k at n = 1).
    """
    alpha, beta = alpha_beta
    if not (0 < beta < alpha):
        raise InvalidArgumentError("require 0 < beta < alpha")
    if angle_grid < 1:
        raise InvalidArgumentError("angle_grid must be positive")
    solver = _GaugeSolver(np.array([[alpha, beta], [beta, alpha]]))

    def value(phi):
        c, s = math.cos(phi), math.sin(phi)
        rows = (np.array([c, s]), np.array([-s, c]))
        total = 0.0
        for row in rows:
            g = solver.gauge(row)
            if not math.isfinite(g):
                return math.inf
            total += g
        return total ** 2

    # the cost has period pi/2 in the rotation angle
    lo, hi = 0.0, math.pi / 2
    grid = np.linspace(lo, hi, max(angle_grid, 8) + 1)
    vals = [value(x) for x in grid]
    i = int(np.argmin(vals))
    best_phi, best_val = float(grid[i]), vals[i]
    width = (hi - lo) / max(angle_grid, 8)
    for _ in range(7):
        local = np.linspace(best_phi - width, best_phi + width, 25)
        lvals = [value(x) for x in local]
        j = int(np.argmin(lvals))
        if lvals[j] < best_val:
            best_phi, best_val = float(local[j]), lvals[j]
        width /= 10.0
    return best_val
