"""Build the basic objects: Fock and emitter spaces, operators, states.

Everything downstream (spectra, dynamics, scenarios) is assembled from
these pieces, so this is the place to poke around first.
"""

import numpy as np

from kerrdce import (
    DickeSpace,
    FockSpace,
    Operator,
    ProductSpace,
    StateVector,
    annihilation,
    collective_sigma,
    embed_fock,
    number_power,
    tensor,
)

fock = FockSpace(n_max=6)
print(f"cavity space: {fock}, dim = {fock.dim}")

a = annihilation(fock)
n = number_power(fock, 1)
comm = a.matrix @ a.matrix.conj().T - a.matrix.conj().T @ a.matrix
print("commutator [a, a^dag] diagonal:", np.real(np.diag(comm)).round(12))
print("  (the -n_max entry in the last slot is the truncation artifact)")

n2 = number_power(fock, 2)
print("n^2 diagonal:", np.real(np.diag(n2.matrix)).round(12))

# one emitter: k_max = 1 keeps ground and single-excitation sectors
dicke = DickeSpace(n_qubits=1, k_max=1)
space = ProductSpace(dicke, fock)
print(f"\nproduct space: dim = {space.dim} (emitter {dicke.dim} x cavity {fock.dim})")

lowering, sz = collective_sigma(dicke)
print("collective lowering operator on the emitter sector:")
print(np.real(lowering.matrix))
print("inversion diagonal:", np.real(np.diag(sz.matrix)))

# embed the cavity number operator into the product space
n_full = embed_fock(n, dicke)
vac = StateVector.vacuum(space)
print(f"\nvacuum <n> = {np.vdot(vac.amplitudes, n_full.matrix @ vac.amplitudes).real:.3f}")

two = StateVector.basis_state(space, space.index(0, 2))
print(f"|ground, 2 photons> <n> = {np.vdot(two.amplitudes, n_full.matrix @ two.amplitudes).real:.3f}")

# operators validate hermiticity on construction when tagged
try:
    Operator(a.matrix, fock, hermitian=True)
except Exception as exc:
    print(f"\ntagging a lowering operator hermitian fails: {exc}")

big = tensor(Operator(np.eye(dicke.dim), dicke, hermitian=True), n)
print(f"tensor product shape: {big.matrix.shape}")
