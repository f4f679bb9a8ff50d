import math

import numpy as np
import pytest

from hlbounds import (
    InvalidArgumentError,
    ReparamMatrix,
    ResourceBudget,
    allocate,
    build_fixed_atom_generators,
    build_free_atom_generators,
    build_pauli_generators,
    build_two_sector_generators,
    c_optimal_variance,
    elfving_variance_oracle,
    jnt_lower_bound,
    orthogonal_restricted_sep_plus,
    per_parameter_spread_constants,
    sep_cost,
    sep_plus_lower_bound,
    sep_plus_optimize,
    single_param_cr,
    single_param_mm,
    spread_variance_oracle,
    weight_to_reparam,
)
from hlbounds.bounds import sep_plus_value

PI2 = math.pi ** 2
CR = ResourceBudget("cr", n=1, k=1)
MM = ResourceBudget("mm", N=1)


# ---------------------------------------------------------------------------
# single-parameter limits and allocation


def test_single_param_cr_examples():
    assert single_param_cr(1.0, 10, 100) == pytest.approx(1e-4)
    assert single_param_cr(2.0, 1, 1) == pytest.approx(0.25)
    assert single_param_cr(1.0, 1, 1) == 1.0
    with pytest.raises(InvalidArgumentError):
        single_param_cr(0.0, 1, 1)


def test_single_param_mm_examples():
    assert single_param_mm(1.0, 100) == pytest.approx(PI2 * 1e-4)
    assert single_param_mm(2.0, 10) == pytest.approx(PI2 / 400)


def test_mm_to_cr_ratio_is_pi_squared():
    # at N = n k with k = 1 the minimax constant is exactly pi^2 larger
    for lam in (1.0, 0.5, 3.0):
        ratio = single_param_mm(lam, 7) / single_param_cr(lam, 7, 1)
        assert ratio == pytest.approx(PI2, rel=1e-14)


def test_allocate_symmetric():
    plan = allocate([1.0, 1.0], 2)
    np.testing.assert_allclose(plan.shares, [0.5, 0.5])
    assert plan.total_constant == pytest.approx(8.0)


def test_allocate_sqrt_proportionality():
    plan = allocate([1.0, 4.0], 1)
    np.testing.assert_allclose(plan.shares, [1 / 3, 2 / 3])
    assert plan.total_constant == pytest.approx(9.0)


def test_allocate_three_phase_minimax():
    plan = allocate([PI2, PI2, PI2], 2)
    assert plan.total_constant == pytest.approx(27 * PI2)


def test_allocate_rejects_nonpositive():
    with pytest.raises(InvalidArgumentError):
        allocate([1.0, 0.0], 1)


def test_allocate_matches_grid_oracle():
    # brute-force nested-grid minimization of sum c_i / x_i^alpha on the simplex
    rng = np.random.default_rng(31)
    for _ in range(6):
        for alpha in (1, 2):
            c = rng.uniform(0.2, 5.0, size=3)
            plan = allocate(c, alpha)
            assert plan.total_constant == pytest.approx(
                _grid_minimum(c, alpha), rel=1e-6
            )


def _grid_minimum(c, alpha, rounds=5, k=41):
    c = np.asarray(c)
    lo = np.zeros(len(c))
    hi = np.ones(len(c))
    best_x, best = None, math.inf
    for _ in range(rounds):
        g0 = np.linspace(lo[0], hi[0], k)
        g1 = np.linspace(lo[1], hi[1], k)
        x0, x1 = np.meshgrid(g0, g1, indexing="ij")
        x2 = 1.0 - x0 - x1
        ok = (x0 > 1e-9) & (x1 > 1e-9) & (x2 > 1e-9)
        val = np.where(
            ok,
            c[0] / np.maximum(x0, 1e-12) ** alpha
            + c[1] / np.maximum(x1, 1e-12) ** alpha
            + c[2] / np.maximum(x2, 1e-12) ** alpha,
            math.inf,
        )
        i, j = np.unravel_index(np.argmin(val), val.shape)
        if val[i, j] < best:
            best = float(val[i, j])
            best_x = (g0[i], g1[j])
        span0 = (hi[0] - lo[0]) / (k - 1)
        span1 = (hi[1] - lo[1]) / (k - 1)
        lo = np.array([max(best_x[0] - span0, 0.0), max(best_x[1] - span1, 0.0), 0.0])
        hi = np.array([min(best_x[0] + span0, 1.0), min(best_x[1] + span1, 1.0), 1.0])
    return best


# ---------------------------------------------------------------------------
# weight-matrix reduction


def test_weight_to_reparam_examples():
    np.testing.assert_allclose(weight_to_reparam(np.eye(2)).entries, np.eye(2))
    np.testing.assert_allclose(
        weight_to_reparam(np.diag([4.0, 9.0])).entries, np.diag([2.0, 3.0])
    )


def test_weight_to_reparam_factorization_property():
    rng = np.random.default_rng(32)
    for _ in range(10):
        m = rng.standard_normal((3, 3))
        w = m @ m.T + 0.5 * np.eye(3)
        a = weight_to_reparam(w)
        np.testing.assert_allclose(a.entries.T @ a.entries, w, atol=1e-10)


def test_weight_to_reparam_rejects_rank_deficient():
    with pytest.raises(InvalidArgumentError):
        weight_to_reparam(np.diag([1.0, 0.0]))


# ---------------------------------------------------------------------------
# strategy costs


def test_sep_cost_fixed_atoms():
    for p in (2, 3, 5):
        gens = build_fixed_atom_generators(p)
        cr = sep_cost(gens, CR, per_parameter_spread_constants(gens, "cr"))
        assert cr.constant == pytest.approx(p ** 2, abs=1e-9)
        assert cr.status == "exact_asymptotic"
        mm = sep_cost(gens, MM, per_parameter_spread_constants(gens, "mm"))
        assert mm.constant == pytest.approx(PI2 * p ** 3, rel=1e-12)


def test_sep_cost_pauli3():
    gens = build_pauli_generators("xyz")
    cr = sep_cost(gens, ResourceBudget("cr", n=100, k=600),
                  per_parameter_spread_constants(gens, "cr"))
    assert cr.constant == pytest.approx(9.0, abs=1e-9)
    assert cr.cost(ResourceBudget("cr", n=100, k=600)) == pytest.approx(
        9.0 / (600 * 100 ** 2)
    )


def test_sep_plus_lower_bound_examples():
    mm4 = sep_plus_lower_bound(build_fixed_atom_generators(4), MM)
    assert mm4.constant == pytest.approx(PI2 * 16, rel=1e-10)
    assert mm4.status == "lower_bound"
    for p in (2, 3):
        mmf = sep_plus_lower_bound(build_free_atom_generators(p), MM)
        assert mmf.constant == pytest.approx(PI2 * p ** 3, rel=1e-10)
    cr3 = sep_plus_lower_bound(build_pauli_generators("xyz"), CR)
    assert cr3.constant == pytest.approx(9.0, rel=1e-7)


def test_jnt_lower_bound_examples():
    for p in (2, 3):
        mm = jnt_lower_bound(build_fixed_atom_generators(p), MM)
        assert mm.constant == pytest.approx(PI2 * p, rel=1e-9)
    mm_free = jnt_lower_bound(build_free_atom_generators(2), MM)
    assert mm_free.constant == pytest.approx(PI2 * 4, rel=1e-9)
    mm_pauli = jnt_lower_bound(build_pauli_generators("xyz"), MM)
    assert mm_pauli.constant == pytest.approx(3 * PI2, rel=1e-9)
    cr_pauli = jnt_lower_bound(build_pauli_generators("xyz"), CR)
    assert cr_pauli.constant == pytest.approx(3.0, rel=1e-9)


# ---------------------------------------------------------------------------
# per-direction variance constants (c-optimal design values)


def test_c_optimal_variance_known_values():
    gens = build_two_sector_generators(1.0, 0.5)
    # coordinate direction: hull boundary of conv(+-(1,.5), +-(.5,1)) along
    # e1 sits at (0.5, 0), so the variance constant is 2^2 = 4
    assert c_optimal_variance(gens, [1.0, 0.0]) == pytest.approx(4.0, abs=1e-9)
    diag = c_optimal_variance(gens, np.array([1.0, 1.0]) / math.sqrt(2))
    assert diag == pytest.approx(8.0 / 9.0, abs=1e-9)
    free = build_free_atom_generators(2)
    assert c_optimal_variance(free, [1.0, 0.0]) == pytest.approx(1.0, abs=1e-12)
    assert c_optimal_variance(
        free, np.array([1.0, 1.0]) / math.sqrt(2)
    ) == pytest.approx(2.0, abs=1e-9)


def test_c_optimal_variance_against_design_scan():
    # independent oracle: scan symmetric input designs q over the joint
    # eigenvalue patterns and minimize c^T Cov_q^{-1} c directly
    gens = build_two_sector_generators(1.0, 0.5)
    pts = np.array([[1.0, 0.5], [-1.0, -0.5], [0.5, 1.0], [-0.5, -1.0]])
    rng = np.random.default_rng(33)
    for _ in range(6):
        c = rng.standard_normal(2)
        c /= np.linalg.norm(c)
        best = math.inf
        for w in rng.dirichlet(np.ones(4), size=4000):
            m = (pts * w[:, None]).T @ pts - np.outer(w @ pts, w @ pts)
            try:
                best = min(best, float(c @ np.linalg.solve(m + 1e-12 * np.eye(2), c)))
            except np.linalg.LinAlgError:
                continue
        value = c_optimal_variance(gens, c)
        assert value <= best + 1e-6
        assert value == pytest.approx(best, rel=5e-3)


def test_sep_plus_optimize_two_sector():
    gens = build_two_sector_generators(1.0, 0.5)
    a, est = sep_plus_optimize(gens, CR)
    expected = 2 / 0.25 + 2 / 2.25
    assert est.constant == pytest.approx(expected, abs=1e-7)
    assert est.status == "upper_bound"
    # the optimum is the non-orthogonal pairing transform, A^{-1} rows
    # proportional to the strength patterns (1, 1/2) and (1/2, 1)
    inv = np.linalg.inv(a.entries)
    inv = inv / inv[0, 0]
    np.testing.assert_allclose(inv, [[1.0, 0.5], [0.5, 1.0]], atol=1e-4)


def test_sep_plus_optimize_fixed_atoms_p2():
    _, est = sep_plus_optimize(build_fixed_atom_generators(2), CR)
    assert est.constant == pytest.approx(2.0, abs=1e-7)


def test_sep_plus_optimize_free_atoms_matches_sep():
    gens = build_free_atom_generators(3)
    _, est = sep_plus_optimize(gens, CR)
    sep = sep_cost(gens, CR, per_parameter_spread_constants(gens, "cr"))
    assert est.constant == pytest.approx(sep.constant, rel=1e-9)


def test_sep_plus_optimize_never_exceeds_sep_cost():
    # identity is a seed, and at the identity the exact nuisance-aware
    # per-parameter constants never beat the spread-based separate protocol
    for gens, paradigm in (
        (build_fixed_atom_generators(2), "mm"),
        (build_free_atom_generators(2), "cr"),
    ):
        budget = MM if paradigm == "mm" else CR
        sep = sep_cost(gens, budget, per_parameter_spread_constants(gens, paradigm))
        _, est = sep_plus_optimize(gens, budget)
        assert est.constant <= sep.constant * (1 + 1e-9)


def test_spread_oracle_vs_elfving_oracle():
    gens = build_fixed_atom_generators(2)
    identity = ReparamMatrix(np.eye(2))
    spread_o = spread_variance_oracle(gens, "cr")
    exact_o = elfving_variance_oracle(gens, "cr")
    for i in range(2):
        # per-parameter sensing of a fixed-atom register is nuisance-free
        assert exact_o(identity, i) == pytest.approx(spread_o(identity, i), abs=1e-12)
    # at the identity the spread oracle underestimates the coupled model
    coupled = build_two_sector_generators(1.0, 0.5)
    assert spread_variance_oracle(coupled, "cr")(identity, 0) == pytest.approx(1.0)
    assert elfving_variance_oracle(coupled, "cr")(identity, 0) == pytest.approx(4.0, abs=1e-9)


# ---------------------------------------------------------------------------
# orthogonal-restricted reparametrization (two-sector model)


def test_orthogonal_restricted_decoupled_limit():
    beta = 1e-3
    general = 2 / (1 - beta) ** 2 + 2 / (1 + beta) ** 2
    ratio = orthogonal_restricted_sep_plus((1.0, beta), 180) / general
    assert abs(ratio - 1.0) < 1e-2


def test_orthogonal_restricted_strictly_worse_at_half():
    general = 2 / 0.25 + 2 / 2.25
    value = orthogonal_restricted_sep_plus((1.0, 0.5), 180)
    assert value / general > 1.01
    assert value >= general - 1e-9


def test_orthogonal_restricted_grid_refinement_stable():
    v1 = orthogonal_restricted_sep_plus((1.0, 0.5), 90)
    v2 = orthogonal_restricted_sep_plus((1.0, 0.5), 180)
    assert abs(v1 - v2) < 1e-8


# ---------------------------------------------------------------------------
# ordering invariants


@pytest.mark.parametrize(
    "maker,p",
    [(build_fixed_atom_generators, 2), (build_fixed_atom_generators, 3),
     (build_free_atom_generators, 2), (build_free_atom_generators, 4),
     (lambda p: build_pauli_generators("xyz"), 3),
     (lambda p: build_pauli_generators("xy"), 2)],
)
def test_strategy_ordering_chain(maker, p):
    gens = maker(p)
    for budget, paradigm, alpha in ((CR, "cr", 1), (MM, "mm", 2)):
        sep = sep_cost(gens, budget, per_parameter_spread_constants(gens, paradigm))
        sp = sep_plus_lower_bound(gens, budget)
        jnt = jnt_lower_bound(gens, budget)
        assert jnt.constant <= sp.constant * (1 + 1e-12)
        assert sp.constant <= sep.constant * (1 + 1e-12)
        assert sep.constant <= p ** alpha * jnt.constant * (1 + 1e-12)


def test_budget_validation():
    with pytest.raises(InvalidArgumentError):
        ResourceBudget("cr", n=5)
    with pytest.raises(InvalidArgumentError):
        ResourceBudget("mm")
    with pytest.raises(InvalidArgumentError):
        ResourceBudget("bayes", N=10)


def test_sep_plus_value_scale_invariance():
    gens = build_two_sector_generators(1.0, 0.5)
    oracle = elfving_variance_oracle(gens, "cr")
    a = np.array([[1.0, 0.2], [-0.3, 1.1]])
    v1 = sep_plus_value(ReparamMatrix(a), oracle, 1, 2)
    v2 = sep_plus_value(ReparamMatrix(a * np.array([2.0, 0.5])), oracle, 1, 2)
    assert v1 == pytest.approx(v2, rel=1e-9)
