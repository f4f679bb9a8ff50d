import math

import numpy as np
import pytest

from hlbounds import (
    InvalidArgumentError,
    PureState,
    QfiMatrix,
    UnsupportedConfigurationError,
    build_fixed_atom_generators,
    build_free_atom_generators,
    build_pauli_generators,
    build_two_sector_generators,
    nuisance_variance,
    qfi_pure,
    saturability,
    superposed_noon_state,
    trace_inverse,
    uniform_state,
)
from hlbounds.qfi import _overlap_matrix


def test_noon_qfi_is_n_squared():
    gens = build_fixed_atom_generators(1)
    psi = uniform_state(2)
    for n in range(1, 11):
        f = qfi_pure(gens, np.zeros(1), psi, n)
        assert abs(f.entries[0, 0] - n * n) <= 1e-9


def test_superposed_noon_qfi_diagonal():
    for p in (1, 2, 4):
        gens = build_free_atom_generators(p)
        f = qfi_pure(gens, np.zeros(p), superposed_noon_state(p, 1), 3)
        np.testing.assert_allclose(f.entries, 9.0 / p * np.eye(p), atol=1e-12)


def test_two_sector_qfi_matrix():
    # commuting-set covariance formula at the uniform four-level probe:
    # F = [[(a^2+b^2)/2, ab], [ab, (a^2+b^2)/2]], so trace_inverse is
    # 2/(a-b)^2 + 2/(a+b)^2
    gens = build_two_sector_generators(1.0, 0.5)
    f = qfi_pure(gens, np.zeros(2), uniform_state(4), 1)
    np.testing.assert_allclose(f.entries, [[0.625, 0.5], [0.5, 0.625]], atol=1e-12)
    assert trace_inverse(f) == pytest.approx(2 / 0.25 + 2 / 2.25, abs=1e-9)


def test_noncommuting_requires_zero_expansion_point():
    gens = build_pauli_generators("xy")
    psi = PureState([1.0, 0.0])
    with pytest.raises(UnsupportedConfigurationError):
        qfi_pure(gens, np.array([0.1, 0.0]), psi, 1)


def test_trace_inverse_examples():
    assert trace_inverse(QfiMatrix(9.0 * np.eye(3))) == pytest.approx(3 / 9.0)
    assert trace_inverse(QfiMatrix(np.diag([4.0, 0.0]))) == math.inf


def test_nuisance_variance_examples():
    assert nuisance_variance(QfiMatrix(np.diag([5.0, 0.0])), 0) == pytest.approx(0.2)
    assert nuisance_variance(QfiMatrix([[2.0, 1.0], [1.0, 2.0]]), 0) == pytest.approx(2 / 3)
    assert nuisance_variance(QfiMatrix(np.diag([0.0, 3.0])), 0) == math.inf
    with pytest.raises(InvalidArgumentError):
        nuisance_variance(QfiMatrix(np.eye(2)), 2)


def test_saturability_real_commuting_model():
    gens = build_two_sector_generators(1.0, 0.5)
    report = saturability(gens, np.zeros(2), uniform_state(4))
    assert report.saturable
    np.testing.assert_allclose(report.imag_parts, 0.0, atol=1e-12)


def test_saturability_fixed_atoms_product_plus():
    report = saturability(build_fixed_atom_generators(2), np.zeros(2), uniform_state(4))
    assert report.saturable


def test_saturability_pauli_xy_regression():
    # frozen regression value: Im tr(rho L_x L_y) = +1 on |0> at zero field
    report = saturability(build_pauli_generators("xy"), np.zeros(2), PureState([1.0, 0.0]))
    assert not report.saturable
    assert report.imag_parts[0, 1] == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(report.imag_parts, -report.imag_parts.T, atol=1e-12)


# ---------------------------------------------------------------------------
# invariants


def test_qfi_scales_exactly_as_n_squared():
    gens = build_fixed_atom_generators(2)
    rng = np.random.default_rng(21)
    amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi = PureState(amps / np.linalg.norm(amps))
    f1 = qfi_pure(gens, np.zeros(2), psi, 1)
    for n in (2, 3, 7):
        fn = qfi_pure(gens, np.zeros(2), psi, n)
        assert np.array_equal(fn.entries, n ** 2 * f1.entries)


def test_inverse_diagonal_dominates_reciprocal_diagonal():
    rng = np.random.default_rng(22)
    for _ in range(20):
        m = rng.standard_normal((4, 4))
        f = QfiMatrix(m @ m.T + 0.1 * np.eye(4))
        inv = np.linalg.inv(f.entries)
        for i in range(4):
            assert inv[i, i] >= 1.0 / f.entries[i, i] - 1e-12


def test_qfi_invariant_under_global_phase():
    gens = build_pauli_generators("xyz")
    rng = np.random.default_rng(23)
    amps = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    psi = PureState(amps / np.linalg.norm(amps))
    shifted = PureState(np.exp(1j * 0.7) * psi.amplitudes)
    f1 = qfi_pure(gens, np.zeros(3), psi, 1)
    f2 = qfi_pure(gens, np.zeros(3), shifted, 1)
    np.testing.assert_allclose(f1.entries, f2.entries, atol=1e-9)


def test_single_generator_qfi_bounded_by_spread():
    gens = build_fixed_atom_generators(1)
    rng = np.random.default_rng(24)
    for n in (1, 5):
        for _ in range(20):
            amps = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            psi = PureState(amps / np.linalg.norm(amps))
            f = qfi_pure(gens, np.zeros(1), psi, n)
            assert f.entries[0, 0] <= n ** 2 * 1.0 + 1e-10


def test_finite_difference_matches_analytic_on_commuting_sets():
    for gens in (build_fixed_atom_generators(2), build_two_sector_generators(1.0, 0.4)):
        rng = np.random.default_rng(25)
        amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi = PureState(amps / np.linalg.norm(amps))
        analytic = qfi_pure(gens, np.zeros(gens.p), psi, 1).entries
        fd = np.real(_overlap_matrix(gens, np.zeros(gens.p), psi, 1, use_fd=True))
        np.testing.assert_allclose(fd, analytic, atol=1e-6)


def test_qfi_matrix_validation():
    with pytest.raises(InvalidArgumentError):
        QfiMatrix([[1.0, 0.5], [0.0, 1.0]])  # not symmetric
    with pytest.raises(InvalidArgumentError):
        QfiMatrix([[-1.0, 0.0], [0.0, 1.0]])  # not PSD
