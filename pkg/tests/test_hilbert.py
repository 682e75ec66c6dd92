"""Spaces, operators and state vectors."""

import numpy as np
import pytest

from kerrdce import (
    DickeSpace,
    FockSpace,
    Operator,
    ProductSpace,
    StateVector,
    ValidationError,
    annihilation,
    collective_sigma,
    embed_dicke,
    embed_fock,
    excitation_diag,
    identity,
    number_power,
    tensor,
)


class TestFockSpace:
    def test_dim(self):
        assert FockSpace(n_max=7).dim == 8

    def test_numbers(self):
        assert np.array_equal(FockSpace(n_max=3).numbers(), [0, 1, 2, 3])

    @pytest.mark.parametrize("bad", [-1, 0, 1])
    def test_rejects_too_small(self, bad):
        # two-photon processes need at least |0>, |1>, |2>
        with pytest.raises(ValidationError):
            FockSpace(n_max=bad)


class TestDickeSpace:
    @pytest.mark.parametrize(
        "n_qubits,expected",
        [
            (1, [1.0]),
            (2, [np.sqrt(2.0), np.sqrt(2.0)]),
            (3, [np.sqrt(3.0), 2.0, np.sqrt(3.0)]),
        ],
    )
    def test_lowering_entries(self, n_qubits, expected):
        space = DickeSpace(n_qubits=n_qubits, k_max=n_qubits)
        assert np.allclose(space.lowering_entries(), expected, rtol=0, atol=1e-15)

    def test_oscillator_limit_entries(self):
        space = DickeSpace(n_qubits=1, k_max=4, oscillator_limit=True)
        assert np.allclose(space.lowering_entries(), np.sqrt([1.0, 2.0, 3.0, 4.0]))

    def test_k_max_capped_by_n_qubits(self):
        with pytest.raises(ValidationError):
            DickeSpace(n_qubits=2, k_max=3)

    def test_oscillator_limit_uncapped(self):
        assert DickeSpace(n_qubits=1, k_max=9, oscillator_limit=True).dim == 10


class TestProductSpace:
    def test_index_roundtrip(self, qubit_space):
        for k in range(qubit_space.dicke.dim):
            for n in range(qubit_space.fock.dim):
                i = qubit_space.index(k, n)
                assert qubit_space.split_index(i) == (k, n)

    def test_fock_index_fast(self, qubit_space):
        assert qubit_space.index(0, 1) == 1
        assert qubit_space.index(1, 0) == qubit_space.fock.dim

    def test_out_of_range(self, qubit_space):
        with pytest.raises(ValidationError):
            qubit_space.index(2, 0)


class TestOperator:
    def test_hermiticity_validated(self, fock8):
        m = np.zeros((9, 9), dtype=complex)
        m[0, 1] = 1.0  # not symmetric
        with pytest.raises(ValidationError):
            Operator(m, fock8, hermitian=True)

    def test_dagger(self, fock8):
        a = annihilation(fock8)
        adag = a.dagger()
        assert np.allclose(adag.matrix, a.matrix.conj().T)

    def test_arithmetic(self, fock8):
        n = number_power(fock8, 1)
        two_n = n + n
        assert np.allclose(two_n.matrix, 2.0 * n.matrix)
        assert np.allclose((n - n).matrix, 0.0)
        assert np.allclose((n * 3.0).matrix, 3.0 * n.matrix)

    def test_matmul(self, fock8):
        a = annihilation(fock8)
        n = a.dagger() @ a
        assert np.allclose(n.matrix, number_power(fock8, 1).matrix)

    def test_expectation(self, fock8):
        n = number_power(fock8, 1)
        state = StateVector.basis_state(fock8, 3)
        assert n.expectation(state) == pytest.approx(3.0)


class TestStateVector:
    def test_vacuum(self, fock8):
        v = StateVector.vacuum(fock8)
        assert v.amplitudes[0] == 1.0
        assert v.norm_squared == pytest.approx(1.0)

    def test_norm_enforced(self, fock8):
        amps = np.zeros(9, dtype=complex)
        amps[0] = 0.5
        with pytest.raises(ValidationError):
            StateVector(amps, fock8)

    def test_from_unnormalized(self, fock8):
        amps = np.zeros(9, dtype=complex)
        amps[2] = 4.0
        v = StateVector.from_unnormalized(amps, fock8)
        assert v.norm_squared == pytest.approx(1.0)
        assert abs(v.amplitudes[2]) == pytest.approx(1.0)

    def test_overlap(self, fock8):
        a = StateVector.basis_state(fock8, 1)
        b = StateVector.basis_state(fock8, 2)
        assert a.overlap(b) == 0.0
        assert a.overlap(a) == pytest.approx(1.0)


class TestBuilders:
    def test_annihilation_entries(self, fock8):
        a = annihilation(fock8).matrix
        for n in range(1, 9):
            assert a[n - 1, n] == pytest.approx(np.sqrt(n))
        assert np.count_nonzero(a) == 8

    def test_commutator_on_interior(self, fock8):
        a = annihilation(fock8).matrix
        comm = a @ a.conj().T - a.conj().T @ a
        # identity except the last diagonal entry, which truncation corrupts
        assert np.allclose(np.diag(comm)[:-1], 1.0)
        assert np.allclose(comm - np.diag(np.diag(comm)), 0.0)

    @pytest.mark.parametrize("k,diag", [(1, [0, 1, 2, 3]), (2, [0, 1, 4, 9])])
    def test_number_power(self, k, diag):
        fock = FockSpace(n_max=3)
        assert np.allclose(np.diag(number_power(fock, k).matrix).real, diag)

    def test_number_power_validates(self, fock8):
        with pytest.raises(ValidationError):
            number_power(fock8, 0)

    def test_collective_sigma_entries(self):
        space = DickeSpace(n_qubits=3, k_max=3)
        low, sz = collective_sigma(space)
        assert low.matrix[0, 1] == pytest.approx(np.sqrt(3.0))
        assert low.matrix[1, 2] == pytest.approx(2.0)
        assert np.allclose(np.diag(sz.matrix).real, [-3, -1, 1, 3])

    def test_collective_sigma_oscillator_limit(self):
        space = DickeSpace(n_qubits=1, k_max=3, oscillator_limit=True)
        low, sz = collective_sigma(space)
        assert low.matrix[1, 2] == pytest.approx(np.sqrt(2.0))
        assert np.allclose(np.diag(sz.matrix).real, [0, 1, 2, 3])

    def test_excitation_diag(self, qubit):
        assert np.allclose(np.diag(excitation_diag(qubit).matrix).real, [0, 1])

    def test_tensor_layout(self, qubit, fock8):
        n_op = number_power(fock8, 1)
        full = tensor(identity(qubit), n_op)
        space = full.space
        state = StateVector.basis_state(space, space.index(1, 5))
        assert full.expectation(state) == pytest.approx(5.0)

    def test_tensor_guard(self):
        dicke = DickeSpace(n_qubits=1, k_max=1)
        fock = FockSpace(n_max=99)
        with pytest.raises(ValidationError):
            tensor(identity(dicke), identity(fock), dim_guard=100)

    def test_embeddings_commute(self, qubit, fock8):
        nf = embed_fock(number_power(fock8, 1), qubit)
        kd_ = embed_dicke(excitation_diag(qubit), fock8)
        assert np.allclose((nf @ kd_).matrix, (kd_ @ nf).matrix)

    def test_identity(self, fock8):
        assert np.allclose(identity(fock8).matrix, np.eye(9))
