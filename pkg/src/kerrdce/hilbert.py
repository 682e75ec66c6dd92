"""Truncated Fock and collective-spin spaces with dense matrix operators.

All operators are dense complex numpy arrays tagged with the space they act
on. Dimensions stay small (tens to a couple of hundred states), so dense
storage is simpler and fast enough; structure-aware fast paths live in
:mod:`kerrdce.dynamics`, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HERMITICITY_RTOL = 1e-12
NORM_TOL = 1e-9
DEFAULT_DIM_GUARD = 4096


@dataclass(frozen=True)
class FockSpace:
    """Photon-number basis |0>, ..., |n_max>."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 2:
            raise ValidationError(f"n_max must be >= 2, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def numbers(self) -> np.ndarray:
        return np.arange(self.dim)


@dataclass(frozen=True)
class DickeSpace:
    """Symmetric collective basis |k>, k excited emitters out of n_qubits.

    With ``oscillator_limit`` set the ladder entries follow the bosonic
    sqrt(k+1) rule instead of the finite-N collective ones, and k_max is
    not capped by n_qubits.
    """

    n_qubits: int
    k_max: int
    oscillator_limit: bool = False

    def __post_init__(self):
        if self.k_max < 0:
            raise ValidationError(f"k_max must be >= 0, got {self.k_max}")
        if not self.oscillator_limit:
            if self.n_qubits < 1:
                raise ValidationError("n_qubits must be >= 1 for a finite emitter set")
            if self.k_max > self.n_qubits:
                raise ValidationError(
                    f"k_max={self.k_max} exceeds n_qubits={self.n_qubits}"
                )

    @property
    def dim(self) -> int:
        return self.k_max + 1

    def lowering_entries(self) -> np.ndarray:
        """Entries f_k = <k|sigma_-|k+1> for k = 0..k_max-1."""
        k = np.arange(self.k_max)
        if self.oscillator_limit:
            return np.sqrt(k + 1.0)
        return np.sqrt((k + 1.0) * (self.n_qubits - k))


@dataclass(frozen=True)
class ProductSpace:
    """Emitter x cavity product basis, emitter index slow, Fock index fast."""

    dicke: DickeSpace
    fock: FockSpace

    @property
    def dim(self) -> int:
        return self.dicke.dim * self.fock.dim

    def index(self, k: int, n: int) -> int:
        if not (0 <= k <= self.dicke.k_max and 0 <= n <= self.fock.n_max):
            raise ValidationError(f"state ({k},{n}) outside space")
        return k * self.fock.dim + n

    def split_index(self, i: int) -> tuple[int, int]:
        return divmod(i, self.fock.dim)


Space = FockSpace | DickeSpace | ProductSpace


def _check_spaces_match(a, b, what: str):
    if a != b:
        raise ValidationError(f"{what}: spaces differ ({a} vs {b})")


@dataclass
class Operator:
    """Dense complex matrix tagged with its basis.

    Matrices flagged hermitian are verified against max|A - A^dag| <=
    1e-12 * max|A| at construction.
    """

    matrix: np.ndarray
    space: Space
    hermitian: bool = False

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        d = self.space.dim
        if self.matrix.shape != (d, d):
            raise ValidationError(
                f"matrix shape {self.matrix.shape} does not match space dim {d}"
            )
        if self.hermitian:
            scale = np.abs(self.matrix).max()
            dev = np.abs(self.matrix - self.matrix.conj().T).max()
            if dev > HERMITICITY_RTOL * max(scale, 1e-300):
                raise ValidationError(
                    f"matrix tagged hermitian deviates by {dev:.3e} (scale {scale:.3e})"
                )

    @property
    def dim(self) -> int:
        return self.space.dim

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space, hermitian=self.hermitian)

    def expectation(self, state: "StateVector") -> complex:
        _check_spaces_match(self.space, state.space, "expectation")
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))

    def __add__(self, other: "Operator") -> "Operator":
        _check_spaces_match(self.space, other.space, "add")
        return Operator(
            self.matrix + other.matrix,
            self.space,
            hermitian=self.hermitian and other.hermitian,
        )

    def __sub__(self, other: "Operator") -> "Operator":
        _check_spaces_match(self.space, other.space, "sub")
        return Operator(
            self.matrix - other.matrix,
            self.space,
            hermitian=self.hermitian and other.hermitian,
        )

    def __mul__(self, scalar) -> "Operator":
        herm = self.hermitian and abs(complex(scalar).imag) == 0.0
        return Operator(self.matrix * scalar, self.space, hermitian=herm)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_spaces_match(self.space, other.space, "matmul")
        return Operator(self.matrix @ other.matrix, self.space, hermitian=False)


@dataclass
class StateVector:
    """Complex amplitude vector on a tagged basis.

    ``norm_tol`` bounds the allowed deviation of the squared norm from 1;
    trajectory code widens it in step with the accumulated drift budget.
    """

    amplitudes: np.ndarray
    space: Space
    norm_tol: float = NORM_TOL

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.space.dim,):
            raise ValidationError(
                f"amplitude shape {self.amplitudes.shape} does not match dim {self.space.dim}"
            )
        dev = abs(self.norm_squared - 1.0)
        if dev > self.norm_tol:
            raise ValidationError(
                f"state norm^2 deviates from 1 by {dev:.3e} (tol {self.norm_tol:.1e})"
            )

    @property
    def norm_squared(self) -> float:
        return float(np.real(np.vdot(self.amplitudes, self.amplitudes)))

    def overlap(self, other: "StateVector") -> complex:
        _check_spaces_match(self.space, other.space, "overlap")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    @classmethod
    def basis_state(cls, space: Space, index: int) -> "StateVector":
        amps = np.zeros(space.dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, space)

    @classmethod
    def vacuum(cls, space: Space) -> "StateVector":
        """Bare ground state |0> (or |0,0> on a product space)."""
        return cls.basis_state(space, 0)

    @classmethod
    def from_unnormalized(cls, amplitudes, space: Space) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        nrm = math.sqrt(float(np.real(np.vdot(amps, amps))))
        if nrm == 0.0:
            raise ValidationError("cannot normalize a zero vector")
        return cls(amps / nrm, space)


def identity(space: Space) -> Operator:
    return Operator(np.eye(space.dim, dtype=np.complex128), space, hermitian=True)


def annihilation(fock: FockSpace) -> Operator:
    """Photon annihilation operator, <n-1|a|n> = sqrt(n)."""
    m = np.zeros((fock.dim, fock.dim), dtype=np.complex128)
    n = np.arange(1, fock.dim)
    m[n - 1, n] = np.sqrt(n)
    return Operator(m, fock)


def number_power(fock: FockSpace, k: int) -> Operator:
    """Diagonal operator n^k on the Fock basis; k must be a positive integer."""
    if int(k) != k or k < 1:
        raise ValidationError(f"drive exponent k must be an integer >= 1, got {k}")
    diag = fock.numbers().astype(np.float64) ** int(k)
    return Operator(np.diag(diag).astype(np.complex128), fock, hermitian=True)


def collective_sigma(dicke: DickeSpace) -> tuple[Operator, Operator]:
    """Collective lowering operator and inversion diagonal.

    Returns ``(lowering, sz)`` with <k|lowering|k+1> = f_k and sz =
    diag(2k - N). In the oscillator limit the inversion has no finite-N
    form; sz is then the excitation counter diag(k), which is what the
    Hamiltonian builders consume.
    """
    d = dicke.dim
    low = np.zeros((d, d), dtype=np.complex128)
    if dicke.k_max >= 1:
        k = np.arange(dicke.k_max)
        low[k, k + 1] = dicke.lowering_entries()
    if dicke.oscillator_limit:
        sz_diag = np.arange(d, dtype=np.float64)
    else:
        sz_diag = 2.0 * np.arange(d) - dicke.n_qubits
    sz = Operator(np.diag(sz_diag).astype(np.complex128), dicke, hermitian=True)
    return Operator(low, dicke), sz


def excitation_diag(dicke: DickeSpace) -> Operator:
    """Diagonal counter of emitter excitations, diag(k)."""
    return Operator(
        np.diag(np.arange(dicke.dim, dtype=np.float64)).astype(np.complex128),
        dicke,
        hermitian=True,
    )


def tensor(
    dicke_op: Operator, fock_op: Operator, dim_guard: int = DEFAULT_DIM_GUARD
) -> Operator:
    """Kronecker product with the emitter factor slow and the Fock factor fast."""
    if not isinstance(dicke_op.space, DickeSpace) or not isinstance(
        fock_op.space, FockSpace
    ):
        raise ValidationError("tensor expects (DickeSpace operator, FockSpace operator)")
    dim = dicke_op.dim * fock_op.dim
    if dim > dim_guard:
        raise ValidationError(
            f"product dimension {dim} exceeds guard {dim_guard}; "
            "raise dim_guard explicitly if this is intended"
        )
    space = ProductSpace(dicke_op.space, fock_op.space)
    return Operator(
        np.kron(dicke_op.matrix, fock_op.matrix),
        space,
        hermitian=dicke_op.hermitian and fock_op.hermitian,
    )


def embed_fock(op: Operator, dicke: DickeSpace, dim_guard: int = DEFAULT_DIM_GUARD) -> Operator:
    """Extend a cavity operator by the identity on the emitter factor."""
    return tensor(identity(dicke), op, dim_guard=dim_guard)


def embed_dicke(op: Operator, fock: FockSpace, dim_guard: int = DEFAULT_DIM_GUARD) -> Operator:
    """Extend an emitter operator by the identity on the cavity factor."""
    return tensor(op, identity(fock), dim_guard=dim_guard)
