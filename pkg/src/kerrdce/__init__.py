"""kerrdce: photon generation from time-modulated Kerr-type nonlinearities.

Simulates two cavity-QED schemes where periodically modulating the
coefficient of a photon-number nonlinearity pumps correlated photon
pairs out of the vacuum: a cavity dispersively coupled to qubits (or an
oscillator), and a cavity whose frequency is itself weakly modulated.
The package covers exact dressed spectra, transition matrix elements,
closed-form perturbative cross-checks, full wavefunction dynamics, and
reduced rotating-wave dynamics, plus a scenario runner and CLI for
reproducible parameter studies.
"""

from ._version import __version__
from .errors import (
    ConfigError,
    DispersiveLimitWarning,
    DispersiveRegimeError,
    EigensolverError,
    IntegratorDivergenceError,
    KerrdceError,
    LadderError,
    NoResonanceError,
    RwaValidityWarning,
    TruncationError,
    TruncationWarning,
    ValidationError,
)
from .hilbert import (
    DickeSpace,
    FockSpace,
    Operator,
    ProductSpace,
    StateVector,
    annihilation,
    collective_sigma,
    embed_dicke,
    embed_fock,
    excitation_diag,
    identity,
    number_power,
    tensor,
)
from .models import (
    Coefficient,
    DickeKerrParams,
    HamiltonianTerm,
    ModCavityParams,
    TimeDependentHamiltonian,
    dicke_kerr_drive,
    dicke_kerr_hamiltonian,
    eff_modcav_hamiltonian,
    h0_dicke_kerr,
    h_eff_modcav,
    h_full,
    h_lab_modcav,
    lab_modcav_hamiltonian,
)
from .spectra import (
    DressedSpectrum,
    ResonanceResult,
    dce_reference,
    diagonalize,
    find_resonance,
    gaps,
    modulation_elements,
    photon_ladder,
    rate_ratio,
)
from .perturbation import (
    PerturbativeInputs,
    alpha_star,
    bessel_j_over_q,
    dispersive_parameter,
    dressed_state_pt,
    gap_pt,
    harmonic_weight,
    harmonic_weight_smallq,
    higher_order_factor,
    m_factor,
    modcav_energy_pt,
    modcav_m_factor,
    modcav_rate_pt,
    modcav_resonance_pt,
    phase_amplitude_pt,
    rate_pt,
)
from .dynamics import (
    AmplitudeState,
    IntegratorConfig,
    TrajectoryRecord,
    evolve_bessel,
    evolve_full,
    evolve_rwa,
    project_to_dressed,
    reconstruct_bare,
)
from .observables import (
    ObservableSample,
    TrajectorySummary,
    atomic_excitation,
    odd_parity_population,
    photon_probs,
    photon_statistics,
    trajectory_summary,
)
from .scenarios import (
    BUILTIN_NAMES,
    RunResult,
    ScenarioConfig,
    builtin_config,
    load_config,
    probe_response,
    resonance_scan,
    run,
    static_spectrum,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
