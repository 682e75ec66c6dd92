"""Model parameters and Hamiltonian builders.

Two families are covered, both driven by a weak periodic modulation of a
Kerr-type nonlinearity, eps * sin(eta*t) * n^k with integer k >= 1:

* an otherwise static cavity coupled to N identical emitters (or their
  bosonic limit) with a constant Kerr term,
      H0 = omega*n + alpha*n^2
           + sum_k [ k*Omega |k><k| + g f_k (a + a^dag)(|k><k+1| + h.c.) ],
  expressed in units omega = 1 with nu = Omega/omega;

* a cavity whose bare frequency is modulated off-resonantly,
  omega(t) = omega0 + eps_w * sin(omega1*t) with omega1 != 2*omega0.
  In the lab frame
      H0 = omega(t)*n + i * (d omega/dt)/(4 omega(t)) * (a^dag^2 - a^2),
  and after moving to the frame rotating at omega1/2 and dropping fast
  terms the effective static form is
      H0 ~ zeta*n + i*chi*(a^dag^2 - a^2),
  zeta = omega0 - omega1/2, chi = eps_w*omega1/(8*omega0).

Builders cache the static matrices per (params, space); time-dependent
Hamiltonians are exposed as a static part plus scalar-weighted drive
matrices so the integrator never rebuilds a matrix inside the stepping
loop.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DispersiveLimitWarning, ValidationError
from .hilbert import (
    DickeSpace,
    FockSpace,
    Operator,
    ProductSpace,
    annihilation,
    collective_sigma,
    embed_dicke,
    embed_fock,
    excitation_diag,
    identity,
    number_power,
    tensor,
)


@dataclass(frozen=True)
class DickeKerrParams:
    """Parameters of the emitter-cavity model, cavity frequency omega = 1.

    ``k`` is the exponent of the driven nonlinearity. ``oscillator_limit``
    replaces the collective ladder by the bosonic one; ``g`` is then read
    as the rescaled coupling g_ho (finite-N couplings g = g_ho/sqrt(N)
    reproduce it as N grows).
    """

    nu: float
    g: float
    alpha: float
    k: int
    eps: float
    eta: float
    n_qubits: int = 1
    omega: float = 1.0
    oscillator_limit: bool = False

    def __post_init__(self):
        if self.omega <= 0:
            raise ValidationError("omega must be positive")
        if self.nu <= 0:
            raise ValidationError("nu = Omega/omega must be positive")
        if self.g < 0:
            raise ValidationError("coupling g must be >= 0")
        if self.eta <= 0:
            raise ValidationError("drive frequency eta must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValidationError(f"drive exponent k must be an integer >= 1, got {self.k}")
        if not self.oscillator_limit and self.n_qubits < 1:
            raise ValidationError("n_qubits must be >= 1")


@dataclass(frozen=True)
class ModCavityParams:
    """Parameters of the modulated-frequency cavity, omega0 = 1 by default.

    The modulation must stay off the principal parametric resonance
    (omega1 != 2*omega0) and weak (eps_w <= 0.1*omega0; above 0.02*omega0
    a warning is emitted because the quadratic effective treatment
    degrades).
    """

    omega1: float
    eps_w: float
    k: int
    eps: float
    eta: float
    omega0: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0 or self.omega1 <= 0:
            raise ValidationError("omega0 and omega1 must be positive")
        if abs(self.omega1 - 2.0 * self.omega0) < 1e-9 * self.omega0:
            raise ValidationError(
                "omega1 = 2*omega0 is the resonant parametric regime, outside scope"
            )
        if self.eps_w < 0 or self.eps_w > 0.1 * self.omega0:
            raise ValidationError("eps_w must lie in [0, 0.1*omega0]")
        if self.eps_w > 0.02 * self.omega0:
            warnings.warn(
                f"eps_w = {self.eps_w:g} exceeds 0.02*omega0; quadratic frame "
                "reduction loses accuracy",
                DispersiveLimitWarning,
                stacklevel=2,
            )
        if self.eta <= 0:
            raise ValidationError("drive frequency eta must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValidationError(f"drive exponent k must be an integer >= 1, got {self.k}")

    @property
    def zeta(self) -> float:
        """Detuning of the half-modulation frequency, omega0 - omega1/2."""
        return self.omega0 - 0.5 * self.omega1

    @property
    def chi(self) -> float:
        """Effective squeeze rate eps_w*omega1/(8*omega0)."""
        return self.eps_w * self.omega1 / (8.0 * self.omega0)


@dataclass(frozen=True)
class Coefficient:
    """Closed-form scalar weight c(t) for one Hamiltonian term.

    kinds: ``const`` a; ``sin`` a*sin(b t); ``freq_mod`` a + b*sin(c t);
    ``squeeze_rate`` a*cos(b t) / (4*(c + d*sin(b t))).
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __call__(self, t: float) -> float:
        if self.kind == "const":
            return self.a
        if self.kind == "sin":
            return self.a * math.sin(self.b * t)
        if self.kind == "freq_mod":
            return self.a + self.b * math.sin(self.c * t)
        if self.kind == "squeeze_rate":
            return (
                self.a
                * math.cos(self.b * t)
                / (4.0 * (self.c + self.d * math.sin(self.b * t)))
            )
        raise ValidationError(f"unknown coefficient kind {self.kind!r}")


@dataclass
class HamiltonianTerm:
    coeff: Coefficient
    op: Operator


class TimeDependentHamiltonian:
    """H(t) = sum_m c_m(t) * H_m with cached constant matrices H_m."""

    def __init__(self, terms: list[HamiltonianTerm], omega_fast: float):
        if not terms:
            raise ValidationError("at least one term required")
        space = terms[0].op.space
        for term in terms[1:]:
            if term.op.space != space:
                raise ValidationError("all terms must share one space")
        self.terms = terms
        self.space = space
        self.omega_fast = float(omega_fast)

    def __call__(self, t: float) -> Operator:
        m = np.zeros((self.space.dim, self.space.dim), dtype=np.complex128)
        for term in self.terms:
            m += term.coeff(t) * term.op.matrix
        return Operator(m, self.space, hermitian=True)

    @property
    def static(self) -> Operator:
        """Sum of the constant terms."""
        m = np.zeros((self.space.dim, self.space.dim), dtype=np.complex128)
        for term in self.terms:
            if term.coeff.kind == "const":
                m += term.coeff.a * term.op.matrix
        return Operator(m, self.space, hermitian=True)


def _check_dicke_compat(p: DickeKerrParams, dicke: DickeSpace):
    if dicke.oscillator_limit != p.oscillator_limit:
        raise ValidationError("params and DickeSpace disagree on the oscillator limit")
    if not p.oscillator_limit and dicke.n_qubits != p.n_qubits:
        raise ValidationError("params and DickeSpace disagree on n_qubits")


@lru_cache(maxsize=64)
def h0_dicke_kerr(p: DickeKerrParams, fock: FockSpace, dicke: DickeSpace) -> Operator:
    """Static emitter-cavity Hamiltonian with a constant Kerr term.

    Emits a DispersiveLimitWarning when the strongest ladder coupling,
    g * max_k f_k * sqrt(n_max), reaches half the detuning |omega - Omega|;
    dispersive-regime estimates are unreliable beyond that point.
    """
    _check_dicke_compat(p, dicke)
    omega_q = p.nu * p.omega
    entries = dicke.lowering_entries()
    if entries.size:
        strongest = p.g * float(entries.max()) * math.sqrt(fock.n_max)
        if strongest > 0.5 * abs(p.omega - omega_q):
            warnings.warn(
                f"coupling strain {strongest:g} exceeds half the detuning "
                f"{abs(p.omega - omega_q):g}; dispersive estimates degrade",
                DispersiveLimitWarning,
                stacklevel=2,
            )
    num = number_power(fock, 1)
    cavity = p.omega * num + p.alpha * (num @ num)
    cavity = Operator(cavity.matrix, fock, hermitian=True)
    lowering, _ = collective_sigma(dicke)
    emitters = omega_q * excitation_diag(dicke)
    a = annihilation(fock)
    quad = Operator(a.matrix + a.matrix.conj().T, fock, hermitian=True)
    flip = Operator(
        lowering.matrix + lowering.matrix.conj().T, dicke, hermitian=True
    )
    h = (
        embed_fock(cavity, dicke)
        + embed_dicke(emitters, fock)
        + p.g * tensor(flip, quad)
    )
    return Operator(h.matrix, h.space, hermitian=True)


@lru_cache(maxsize=64)
def dicke_kerr_drive(p: DickeKerrParams, fock: FockSpace, dicke: DickeSpace) -> Operator:
    """Driven operator n^k extended by the emitter identity."""
    return embed_fock(number_power(fock, p.k), dicke)


def dicke_kerr_hamiltonian(
    p: DickeKerrParams, fock: FockSpace, dicke: DickeSpace
) -> TimeDependentHamiltonian:
    """H(t) = H0 + eps*sin(eta*t)*n^k as static plus one sine-weighted term."""
    h0 = h0_dicke_kerr(p, fock, dicke)
    drive = dicke_kerr_drive(p, fock, dicke)
    return TimeDependentHamiltonian(
        [
            HamiltonianTerm(Coefficient("const", a=1.0), h0),
            HamiltonianTerm(Coefficient("sin", a=p.eps, b=p.eta), drive),
        ],
        omega_fast=p.eta,
    )


def h_full(p: DickeKerrParams, fock: FockSpace, dicke: DickeSpace, t: float) -> Operator:
    """Full driven Hamiltonian at time t (cached static parts)."""
    return dicke_kerr_hamiltonian(p, fock, dicke)(t)


@lru_cache(maxsize=64)
def _squeeze_quadrature(fock: FockSpace) -> Operator:
    """Hermitian pair operator i*(a^dag^2 - a^2)."""
    a = annihilation(fock).matrix
    a2 = a @ a
    return Operator(1j * (a2.conj().T - a2), fock, hermitian=True)


def lab_modcav_hamiltonian(p: ModCavityParams, fock: FockSpace) -> TimeDependentHamiltonian:
    """Lab-frame modulated cavity plus nonlinearity drive.

    H(t) = omega(t)*n + [d omega/dt / (4*omega(t))] * i*(a^dag^2 - a^2)
           + eps*sin(eta*t)*n^k.
    """
    num = number_power(fock, 1)
    pair = _squeeze_quadrature(fock)
    drive = number_power(fock, p.k)
    # fastest angular scales seen by the integrand
    omega_fast = max(p.eta, p.omega1, 2.0 * p.omega0 + p.eta)
    return TimeDependentHamiltonian(
        [
            HamiltonianTerm(Coefficient("freq_mod", a=p.omega0, b=p.eps_w, c=p.omega1), num),
            HamiltonianTerm(
                Coefficient(
                    "squeeze_rate",
                    a=p.eps_w * p.omega1,
                    b=p.omega1,
                    c=p.omega0,
                    d=p.eps_w,
                ),
                pair,
            ),
            HamiltonianTerm(Coefficient("sin", a=p.eps, b=p.eta), drive),
        ],
        omega_fast=omega_fast,
    )


def h_lab_modcav(p: ModCavityParams, fock: FockSpace, t: float) -> Operator:
    """Lab-frame Hamiltonian at time t."""
    return lab_modcav_hamiltonian(p, fock)(t)


@lru_cache(maxsize=64)
def h_eff_modcav(p: ModCavityParams, fock: FockSpace) -> Operator:
    """Effective rotating-frame cavity, zeta*n + chi*i*(a^dag^2 - a^2).

    Warns when chi*n_max reaches half of |zeta|: the squeeze admixture is
    then no longer a small correction at the top of the truncated space.
    """
    if abs(p.chi) * fock.n_max >= 0.5 * abs(p.zeta):
        warnings.warn(
            f"chi*n_max = {abs(p.chi) * fock.n_max:g} is not small against "
            f"|zeta| = {abs(p.zeta):g}; effective frame strained",
            DispersiveLimitWarning,
            stacklevel=2,
        )
    num = number_power(fock, 1)
    pair = _squeeze_quadrature(fock)
    h = p.zeta * num + p.chi * pair
    return Operator(h.matrix, fock, hermitian=True)


def eff_modcav_hamiltonian(p: ModCavityParams, fock: FockSpace) -> TimeDependentHamiltonian:
    """Effective-frame Hamiltonian plus the same nonlinearity drive."""
    h0 = h_eff_modcav(p, fock)
    drive = number_power(fock, p.k)
    omega_fast = max(p.eta, 2.0 * abs(p.zeta))
    return TimeDependentHamiltonian(
        [
            HamiltonianTerm(Coefficient("const", a=1.0), h0),
            HamiltonianTerm(Coefficient("sin", a=p.eps, b=p.eta), drive),
        ],
        omega_fast=omega_fast,
    )
