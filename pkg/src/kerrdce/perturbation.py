"""Closed-form dispersive-regime expressions.

Everything here is low-order perturbation theory in the qubit-cavity
coupling g (ladder model) or in the modulation strength (frequency
modulated cavity). These are the independent references the integrators
and spectra are checked against; none of the dynamics code depends on
them except for the Bessel weights at the bottom.

Conventions: cavity frequency fixed to 1, nu is the qubit splitting in
those units, N the number of qubits. Validity is governed by
g*sqrt(N*n)/|1 - nu|; functions refuse to extrapolate when that ratio
leaves the dispersive regime.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DispersiveLimitWarning, DispersiveRegimeError, ValidationError
from .hilbert import DickeSpace, FockSpace, ProductSpace, StateVector
from .models import ModCavityParams

DISPERSIVE_HARD_LIMIT = 0.5
DISPERSIVE_WARN_LIMIT = 0.2


@dataclass(frozen=True)
class PerturbativeInputs:
    """Parameters the dispersive expansions are evaluated at."""

    nu: float
    g: float
    n_qubits: int = 1
    k: int = 2
    eps: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.nu <= 0:
            raise ValidationError("nu must be positive")
        if abs(self.nu - 1.0) < 1e-6:
            raise ValidationError("nu too close to resonance; expansions diverge")
        if self.g < 0 or self.eps < 0 or self.eta < 0:
            raise ValidationError("g, eps, eta must be nonnegative")
        if self.n_qubits < 1:
            raise ValidationError("n_qubits must be >= 1")
        if self.k < 1 or self.k != int(self.k):
            raise ValidationError("k must be a positive integer")


def dispersive_parameter(inputs: PerturbativeInputs, n: int) -> float:
    """Expansion parameter g*sqrt(N*(n+2)) over the smallest detuning."""
    dmin = min(abs(1.0 - inputs.nu), 1.0 + inputs.nu)
    return inputs.g * math.sqrt(inputs.n_qubits * (n + 2)) / dmin


def _require_dispersive(inputs: PerturbativeInputs, n: int):
    score = dispersive_parameter(inputs, n)
    if score > DISPERSIVE_HARD_LIMIT:
        raise DispersiveRegimeError(
            f"expansion parameter {score:.3f} > {DISPERSIVE_HARD_LIMIT}; "
            "perturbative expressions are meaningless here"
        )
    if score > DISPERSIVE_WARN_LIMIT:
        warnings.warn(
            f"expansion parameter {score:.3f}; perturbative accuracy degrades",
            DispersiveLimitWarning,
            stacklevel=3,
        )


def dressed_state_pt(
    inputs: PerturbativeInputs,
    n: int,
    fock: FockSpace | None = None,
    dicke: DickeSpace | None = None,
) -> StateVector:
    """Second-order dressed state that connects to |0 excited, n photons>.

    Components through O(g^2), normalized at the end. Amplitudes whose
    photon or excitation index falls outside the supplied spaces are
    dropped, so pass spaces large enough for the weight you care about
    (photon indices n-2 .. n+2, excitation indices 0 .. 2).
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    _require_dispersive(inputs, n)
    nu, g, big_n = inputs.nu, inputs.g, inputs.n_qubits
    if fock is None:
        fock = FockSpace(n_max=n + 4)
    if dicke is None:
        dicke = DickeSpace(n_qubits=big_n, k_max=min(2, big_n))
    space = ProductSpace(dicke, fock)

    up = 1.0 - nu
    dn = 1.0 + nu
    comp: dict[tuple[int, int], float] = {(0, n): 1.0}
    comp[(1, n - 1)] = g * math.sqrt(big_n * n) / up
    comp[(1, n + 1)] = -g * math.sqrt(big_n * (n + 1)) / dn
    comp[(0, n - 2)] = big_n * g**2 * math.sqrt(n * (n - 1) if n >= 2 else 0.0) / (2 * up)
    comp[(0, n + 2)] = big_n * g**2 * math.sqrt((n + 1) * (n + 2)) / (2 * dn)
    pair = math.sqrt(2.0 * big_n * max(big_n - 1, 0))
    comp[(2, n - 2)] = g**2 * pair * math.sqrt(n * (n - 1) if n >= 2 else 0.0) / (2 * up**2)
    comp[(2, n)] = g**2 * pair * (1.0 - nu * (2 * n + 1)) / (2 * nu * (1.0 - nu**2))
    comp[(2, n + 2)] = g**2 * pair * math.sqrt((n + 1) * (n + 2)) / (2 * dn**2)

    amps = np.zeros(space.dim, dtype=np.complex128)
    for (exc, photons), value in comp.items():
        if value == 0.0 or photons < 0 or exc < 0:
            continue
        if photons > fock.n_max or exc > dicke.k_max:
            continue
        amps[space.index(exc, photons)] = value
    amps /= np.linalg.norm(amps)
    return StateVector(amps, space)


def alpha_star(inputs: PerturbativeInputs) -> float:
    """Photon-number-squared coefficient that flattens the dressed ladder.

    With this static nonlinearity the even dressed ladder becomes
    equidistant through O(g^4), which is what makes a single drive tone
    resonant with every second-neighbor pair at once.
    """
    nu, g, big_n = inputs.nu, inputs.g, inputs.n_qubits
    return -2.0 * nu * g**4 * big_n * (1.0 + 3.0 * nu**2) / (nu**2 - 1.0) ** 3


def gap_pt(inputs: PerturbativeInputs) -> float:
    """Nearest-neighbor dressed gap through O(g^4), in cavity units.

    Anchored at the quasi-harmonic point: against exact eigenvalues
    computed with the static nonlinearity set to alpha_star the residual
    is O(g^6), while at zero nonlinearity it differs by 2*alpha_star.
    """
    nu, g, big_n = inputs.nu, inputs.g, inputs.n_qubits
    d2 = nu**2 - 1.0
    inner = 1.0 - g**2 * ((1.0 + 3.0 * nu**2) + nu * ((5 * big_n - 8) - big_n * nu**2)) / d2**2
    return 1.0 - (2.0 * nu * big_n * g**2 / d2) * inner


def m_factor(k: int, n: int, nu: float) -> float:
    """Drive-operator combination entering the second-neighbor rate.

    Literal form (n+1)^k - (1-nu)/2*(n+2)^k - (1+nu)/2*n^k. For k = 1
    this evaluates to nu for every n; for k = 2 to 2*nu*(n+1) - 1; for
    k = 3 to nu*(3n^2+6n+4) - 3(n+1).
    """
    if k < 1 or k != int(k):
        raise ValidationError("k must be a positive integer")
    return (
        float(n + 1) ** k
        - 0.5 * (1.0 - nu) * float(n + 2) ** k
        - 0.5 * (1.0 + nu) * float(n) ** k
    )


def rate_pt(inputs: PerturbativeInputs, n: int) -> float:
    """Second-neighbor modulation element R_{n,n+2} through O(g^2)."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    _require_dispersive(inputs, n)
    nu, g, big_n = inputs.nu, inputs.g, inputs.n_qubits
    prefactor = big_n * inputs.eps * g**2 / (2.0 * (nu**2 - 1.0))
    return prefactor * math.sqrt((n + 1) * (n + 2)) * m_factor(inputs.k, n, nu)


def phase_amplitude_pt(inputs: PerturbativeInputs, n: int) -> float:
    """Leading phase amplitude Q_{n,n+2} = (eps/eta)[(n+2)^k - n^k]."""
    if inputs.eta <= 0:
        raise ValidationError("eta must be positive for phase amplitudes")
    return (inputs.eps / inputs.eta) * (float(n + 2) ** inputs.k - float(n) ** inputs.k)


# ---------------------------------------------------------------------------
# frequency-modulated cavity


def modcav_m_factor(k: int, n: int) -> float:
    """Rate factor ((n+2)^k - n^k)/4 of the modulated-cavity scheme."""
    if k < 1 or k != int(k):
        raise ValidationError("k must be a positive integer")
    return 0.25 * (float(n + 2) ** k - float(n) ** k)


def modcav_rate_pt(params: ModCavityParams, n: int) -> complex:
    """Second-neighbor modulation element of the modulated cavity, O(chi)."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    zeta, chi = params.zeta, params.chi
    return (
        1j
        * params.eps
        * (chi / (4.0 * zeta))
        * math.sqrt((n + 1) * (n + 2))
        * (float(n + 2) ** params.k - float(n) ** params.k)
    )


def modcav_energy_pt(params: ModCavityParams, n: int) -> float:
    """Quasienergy of level n through O(chi^4) in the rotating frame."""
    zeta, chi = params.zeta, params.chi
    x = chi / zeta
    return zeta * n - (chi * x) * (1.0 + x * x) * (2 * n + 1)


def modcav_resonance_pt(params: ModCavityParams, fig_variant: bool = False) -> float:
    """Drive frequency resonant with the second-neighbor gaps.

    Default is 2|zeta|(1 - 2(chi/zeta)^2 - 2(chi/zeta)^4), which follows
    from the quasienergies above. ``fig_variant`` selects the alternate
    form 2|zeta|(1 + 4(chi/zeta)^2) that the slow-modulation builtin
    (fig5b) is defined with; the two differ at O((chi/zeta)^2).
    """
    zeta, chi = params.zeta, params.chi
    x2 = (chi / zeta) ** 2
    if fig_variant:
        return 2.0 * abs(zeta) * (1.0 + 4.0 * x2)
    return 2.0 * abs(zeta) * (1.0 - 2.0 * x2 - 2.0 * x2 * x2)


# ---------------------------------------------------------------------------
# Bessel weights of the drive harmonics


def bessel_j_over_q(order: int, q) -> np.ndarray | float:
    """J_order(q)/q by ascending series, elementwise over q.

    Handles q = 0 analytically (1/2 for order 1, 0 above). Accurate to
    ~1e-13 for |q| up to about 15, which covers every phase amplitude
    the package produces; the alternating series loses digits beyond
    that.
    """
    if order < 1 or order != int(order):
        raise ValidationError("order must be a positive integer")
    q_arr = np.asarray(q, dtype=np.float64)
    half = 0.5 * q_arr
    h2 = half * half
    term = 0.5 * half ** (order - 1) / math.factorial(order)
    total = np.array(term, copy=True)
    for m in range(1, 200):
        term = term * (-h2) / (m * (m + order))
        total = total + term
        if np.all(np.abs(term) <= 1e-16 * np.maximum(np.abs(total), 1e-300)):
            break
    if np.isscalar(q) or np.ndim(q) == 0:
        return float(total)
    return total


def harmonic_weight(order: int, q) -> np.ndarray | float:
    """Exact weight 2*order*J_order(q)/q of drive harmonic ``order``."""
    return 2.0 * order * bessel_j_over_q(order, q)


def harmonic_weight_smallq(order: int, q) -> np.ndarray | float:
    """Leading small-q behavior q^(order-1)/(2^(order-1) (order-1)!)."""
    if order < 1 or order != int(order):
        raise ValidationError("order must be a positive integer")
    q_arr = np.asarray(q, dtype=np.float64)
    out = q_arr ** (order - 1) / (2.0 ** (order - 1) * math.factorial(order - 1))
    if np.isscalar(q) or np.ndim(q) == 0:
        return float(out)
    return out


def higher_order_factor(order: int, q: float) -> tuple[float, float]:
    """Suppression factor of resonance ``order``: (exact, small-q approx).

    Quantifies why only the first drive harmonic matters: the weight of
    harmonic l is 2*l*J_l(q)/q ~ q^(l-1), tiny for the q <= O(0.1) this
    package produces. Returns the exact Bessel value and the power-law
    approximation side by side.
    """
    return (
        float(harmonic_weight(order, float(q))),
        float(harmonic_weight_smallq(order, float(q))),
    )
