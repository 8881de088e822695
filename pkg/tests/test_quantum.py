import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qgame.quantum import (
    DimensionError,
    DomainError,
    StateVector,
    Unitary2,
    apply_product_operator,
    basis_state,
    computational_basis,
    ewl_basis,
    ewl_parameters,
    inner_product,
    measurement_probabilities,
    mw_initial_state,
    pauli,
    u_theta_alpha,
)

angles = st.floats(min_value=0.0, max_value=math.pi)
alphas = st.floats(min_value=0.0, max_value=math.pi / 2)


def random_state(rng, m):
    v = rng.normal(size=2**m) + 1j * rng.normal(size=2**m)
    return StateVector(v / np.linalg.norm(v))


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return Unitary2(q * (np.diag(r) / abs(np.diag(r))))


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for u in ops:
        out = np.kron(out, u.matrix)
    return out


@pytest.mark.parametrize(
    "label, m, index",
    [("000", 3, 0), ("11", 2, 3), ("101", 3, 5), ((0, 1), 2, 1)],
)
def test_basis_state_index(label, m, index):
    psi = basis_state(label, m)
    expected = np.zeros(2**m)
    expected[index] = 1
    assert np.array_equal(psi.amplitudes, expected)


def test_basis_state_length_mismatch():
    with pytest.raises(DimensionError):
        basis_state("01", 3)


def test_u_theta_alpha_examples():
    assert np.allclose(u_theta_alpha(0, 0).matrix, np.eye(2), atol=1e-15)
    assert np.allclose(u_theta_alpha(math.pi, 0).matrix, [[0, 1j], [1j, 0]], atol=1e-15)
    assert np.allclose(u_theta_alpha(0, math.pi / 2).matrix, [[1j, 0], [0, -1j]], atol=1e-15)


@pytest.mark.parametrize("theta, alpha", [(-0.1, 0), (math.pi + 0.1, 0), (1.0, -0.2), (1.0, 2.0)])
def test_u_theta_alpha_rejects_out_of_range(theta, alpha):
    with pytest.raises(DomainError):
        u_theta_alpha(theta, alpha)
    u_theta_alpha(theta, alpha, permissive=True)


@given(angles, alphas)
def test_u_theta_alpha_unitary_and_special(theta, alpha):
    u = u_theta_alpha(theta, alpha).matrix
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    assert abs(np.linalg.det(u) - 1) < 1e-12


@given(angles, alphas)
def test_ewl_parameters_recovers_angles(theta, alpha):
    u = u_theta_alpha(theta, alpha)
    raw = Unitary2(u.matrix)
    t, a = ewl_parameters(raw)
    assert np.allclose(u_theta_alpha(t, a).matrix, u.matrix, atol=1e-9)


def test_ewl_parameters_rejects_other_forms():
    assert ewl_parameters(pauli(1)) is None
    assert ewl_parameters(Unitary2(np.diag([1, -1]))) is None


def test_pauli():
    assert np.array_equal(pauli(0).matrix, np.eye(2))
    assert np.array_equal(pauli(1).matrix, [[0, 1], [1, 0]])
    with pytest.raises(DomainError):
        pauli(2)


def test_pauli_flip_is_involution(rng):
    psi = random_state(rng, 1)
    twice = apply_product_operator([pauli(1)], apply_product_operator([pauli(1)], psi))
    assert twice.allclose(psi)


def test_unitary_rejects_non_unitary():
    with pytest.raises(DomainError):
        Unitary2(np.array([[1, 1], [0, 1]]))


def test_state_rejects_unnormalized():
    with pytest.raises(DomainError):
        StateVector(np.array([1.0, 1.0]))
    with pytest.raises(DimensionError):
        StateVector(np.array([1.0, 0.0, 0.0]))


@pytest.mark.parametrize("gamma", [0.1, math.pi / 4, math.pi / 2, 2.5])
def test_mw_flip_profile(gamma):
    psi = mw_initial_state(gamma, 3)
    out = apply_product_operator([pauli(1), pauli(0), pauli(1)], psi)
    expected = np.zeros(8, dtype=complex)
    expected[0b101] = math.cos(gamma / 2)
    expected[0b010] = 1j * math.sin(gamma / 2)
    assert np.allclose(out.amplitudes, expected, atol=1e-15)


def test_identity_product_leaves_state(rng):
    psi = random_state(rng, 3)
    assert apply_product_operator([pauli(0)] * 3, psi).allclose(psi)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply_product_operator([pauli(0)] * 2, basis_state("000", 3))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_product_operator_matches_kronecker(rng, m):
    for _ in range(10):
        ops = [random_unitary(rng) for _ in range(m)]
        psi = random_state(rng, m)
        expected = kron_all(ops) @ psi.amplitudes
        assert np.allclose(apply_product_operator(ops, psi).amplitudes, expected, atol=1e-12)


@settings(max_examples=60)
@given(st.lists(st.tuples(angles, alphas), min_size=2, max_size=2), st.integers(0, 2**32 - 1))
def test_two_qubit_tensor_consistency(params, seed):
    rng = np.random.default_rng(seed)
    ops = [u_theta_alpha(t, a) for t, a in params]
    psi = random_state(rng, 2)
    kron = np.kron(ops[0].matrix, ops[1].matrix)
    assert np.allclose(apply_product_operator(ops, psi).amplitudes, kron @ psi.amplitudes, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_unitarity_preserves_norm(m, seed):
    rng = np.random.default_rng(seed)
    ops = [random_unitary(rng) for _ in range(m)]
    out = apply_product_operator(ops, random_state(rng, m))
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10


def test_inner_product_examples(rng):
    psi = random_state(rng, 3)
    assert abs(inner_product(psi, psi) - 1) < 1e-12
    assert inner_product(basis_state("000", 3), basis_state("111", 3)) == 0
    v = inner_product(ewl_basis(3).vector("000"), basis_state("000", 3))
    assert abs(v - 1 / math.sqrt(2)) < 1e-15
    with pytest.raises(DimensionError):
        inner_product(basis_state("00", 2), basis_state("000", 3))


def test_measurement_bell_state():
    psi = StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert np.allclose(measurement_probabilities(psi, computational_basis(2)), [0.5, 0, 0, 0.5])


@pytest.mark.parametrize("gamma", [0.0, 0.3, math.pi / 2, 2.0, math.pi])
def test_measurement_mw_initial_state(gamma):
    p = measurement_probabilities(mw_initial_state(gamma, 3), computational_basis(3))
    expected = np.zeros(8)
    expected[0] += math.cos(gamma / 2) ** 2
    expected[7] += math.sin(gamma / 2) ** 2
    assert np.allclose(p, expected, atol=1e-15)


def test_measurement_in_own_basis():
    b = ewl_basis(3)
    p = measurement_probabilities(b.vector("100"), b)
    expected = np.zeros(8)
    expected[4] = 1
    assert np.allclose(p, expected, atol=1e-15)


def test_ewl_basis_vectors():
    b = ewl_basis(3)
    expected = np.zeros(8, dtype=complex)
    expected[0] = 1 / math.sqrt(2)
    expected[7] = 1j / math.sqrt(2)
    assert np.allclose(b.vector("000").amplitudes, expected, atol=1e-15)
    assert np.allclose(ewl_basis(1).vector("0").amplitudes, [1 / math.sqrt(2), 1j / math.sqrt(2)])


@pytest.mark.parametrize("m", range(1, 7))
def test_bases_orthonormal(m):
    for b in (computational_basis(m), ewl_basis(m)):
        # Gram matrix from explicit pairwise inner products
        vecs = [b.vector(k) for k in [tuple(int(c) for c in format(i, f"0{m}b")) for i in range(2**m)]]
        gram = np.array([[inner_product(u, v) for v in vecs] for u in vecs])
        assert np.allclose(gram, np.eye(2**m), atol=1e-12)


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_probability_conservation(m, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, m)
    for b in (computational_basis(m), ewl_basis(m)):
        assert abs(measurement_probabilities(psi, b).sum() - 1) < 1e-10


@given(angles, angles, angles, alphas)
def test_ewl_measurement_matches_explicit_inner_products(t1, t2, t3, a3):
    b = ewl_basis(3)
    ops = [u_theta_alpha(t1), u_theta_alpha(t2), u_theta_alpha(t3, a3)]
    fin = apply_product_operator(ops, b.vector("000"))
    direct = [abs(inner_product(b.vector(format(k, "03b")), fin)) ** 2 for k in range(8)]
    assert np.allclose(measurement_probabilities(fin, b), direct, atol=1e-12)


@pytest.mark.parametrize(
    "gamma, expected",
    [
        (0.0, {0: 1}),
        (math.pi, {7: 1j}),
        (math.pi / 2, {0: 1 / math.sqrt(2), 7: 1j / math.sqrt(2)}),
    ],
)
def test_mw_initial_state_examples(gamma, expected):
    amps = np.zeros(8, dtype=complex)
    for k, v in expected.items():
        amps[k] = v
    assert np.allclose(mw_initial_state(gamma, 3).amplitudes, amps, atol=1e-15)


def test_mw_initial_state_at_half_pi_is_ewl_ground():
    assert mw_initial_state(math.pi / 2, 3).allclose(ewl_basis(3).vector("000"), atol=1e-15)


def test_mw_initial_state_domain():
    with pytest.raises(DomainError):
        mw_initial_state(-0.5, 3)
    with pytest.raises(DomainError):
        mw_initial_state(4.0, 3)


def test_state_is_immutable(rng):
    psi = random_state(rng, 2)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1
