"""Time evolution under the driven Hamiltonians.

One integration method is supported: fixed-step classical RK4. The runs
of interest integrate through 1e7..1e8 drive periods worth of steps, so
the stepping loops live in compiled kernels (:mod:`kerrdce._kernels`)
fed with banded matrices; everything here prepares inputs, enforces the
step-size contract, and post-processes samples into observables.

Norm is never silently repaired: renormalization is off by default, the
per-sample norm drift is monitored against the configured budget, and a
drift 100x over budget aborts the run.

Besides the full Schroedinger evolution there are two reduced flows for
the dressed-state amplitudes: a rotating-wave form keeping only slowly
rotating pairs, and a drive-harmonics form keeping the first few Bessel
weights, used as a cross-check between the two.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import (
    ConfigError,
    IntegratorDivergenceError,
    RwaValidityWarning,
    ValidationError,
)
from .hilbert import Operator, Space, StateVector
from .models import TimeDependentHamiltonian
from .observables import photon_probs, atomic_excitation, odd_parity_population
from .spectra import DressedSpectrum, modulation_elements

import warnings

STEP_PERIOD_FRACTION = 40  # dt must resolve the fastest period this finely
ABORT_FACTOR = 100.0

_COEFF_CODES = {
    "const": _kernels.COEFF_CONST,
    "sin": _kernels.COEFF_SIN,
    "freq_mod": _kernels.COEFF_FREQ_MOD,
    "squeeze_rate": _kernels.COEFF_SQUEEZE_RATE,
}


@dataclass
class IntegratorConfig:
    """Fixed-step RK4 configuration.

    ``dt`` must satisfy dt <= (2*pi/omega_fast)/40 for the fastest
    angular frequency of the integrand (checked at start). Samples are
    taken every ``sample_stride`` steps; when it is None a stride is
    chosen to yield about ``n_samples`` samples. ``renorm_tolerance`` is
    the norm-drift budget per sample; drift beyond 100x that aborts.
    """

    dt: float
    t_end: float
    n_samples: int = 2000
    sample_stride: int | None = None
    renorm_tolerance: float = 1e-9
    renormalize: bool = False
    store_states: bool = False
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ConfigError(f"unsupported method {self.method!r}; only rk4 exists")
        if self.dt <= 0 or self.t_end <= 0:
            raise ConfigError("dt and t_end must be positive")
        if self.t_end < self.dt:
            raise ConfigError("t_end shorter than one step")
        if self.renorm_tolerance <= 0:
            raise ConfigError("renorm_tolerance must be positive")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))

    @property
    def stride(self) -> int:
        if self.sample_stride is not None:
            if self.sample_stride < 1:
                raise ConfigError("sample_stride must be >= 1")
            return self.sample_stride
        return max(1, self.n_steps // max(1, self.n_samples))

    def check_step(self, omega_fast: float):
        if omega_fast <= 0:
            return
        limit = (2.0 * math.pi / omega_fast) / STEP_PERIOD_FRACTION
        if self.dt > limit * (1.0 + 1e-12):
            raise ConfigError(
                f"dt = {self.dt:g} too coarse for omega_fast = {omega_fast:g}; "
                f"need dt <= {limit:g}"
            )


@dataclass
class TrajectoryRecord:
    """Sampled observables of one integration run (t = 0 sample included)."""

    t: np.ndarray
    mean_n: np.ndarray
    mandel_q: np.ndarray
    p_e: np.ndarray
    p_nonvacuum: np.ndarray
    norm: np.ndarray
    p_n: np.ndarray
    odd_photon: np.ndarray
    odd_parity: np.ndarray
    space: Space
    final_state: StateVector
    max_sample_drift: float
    total_drift: float
    meta: dict = field(default_factory=dict)
    states: np.ndarray | None = None
    amplitudes: np.ndarray | None = None


def _observable_rows(times, sample_states, space):
    n_rows = len(times)
    fdim = space.fock.dim if hasattr(space, "fock") else space.dim
    mean_n = np.empty(n_rows)
    mandel_q = np.empty(n_rows)
    p_e = np.empty(n_rows)
    p_nv = np.empty(n_rows)
    norm = np.empty(n_rows)
    p_n = np.empty((n_rows, fdim))
    odd_ph = np.empty(n_rows)
    odd_par = np.empty(n_rows)
    ns = np.arange(fdim, dtype=np.float64)
    for j in range(n_rows):
        amps = sample_states[j]
        p = photon_probs(amps, space)
        p_n[j] = p
        norm2 = float(np.real(np.vdot(amps, amps)))
        m = float(p @ ns)
        v = float(p @ ns**2) - m * m
        mean_n[j] = m
        mandel_q[j] = (v - m) / m if m > 1e-12 else float("nan")
        p_e[j] = atomic_excitation(amps, space)
        p_nv[j] = norm2 - float(p[0])
        norm[j] = math.sqrt(norm2)
        odd_ph[j] = float(p[1::2].sum())
        odd_par[j] = odd_parity_population(amps, space)
    return mean_n, mandel_q, p_e, p_nv, norm, p_n, odd_ph, odd_par


def _assemble_record(cfg, space, psi0_amps, times, samples, norm2, meta, keep_states):
    all_states = np.concatenate([psi0_amps[None, :], samples], axis=0)
    all_t = np.concatenate([[0.0], times])
    rows = _observable_rows(all_t, all_states, space)
    norm2_all = np.concatenate([[np.real(np.vdot(psi0_amps, psi0_amps))], norm2])
    drifts = np.abs(np.diff(norm2_all))
    total_drift = abs(float(norm2_all[-1]) - float(norm2_all[0]))
    final_tol = max(1e-9, 2.0 * float(np.abs(norm2_all - 1.0).max()) + 1e-12)
    final = StateVector(all_states[-1].copy(), space, norm_tol=final_tol)
    return TrajectoryRecord(
        t=all_t,
        mean_n=rows[0],
        mandel_q=rows[1],
        p_e=rows[2],
        p_nonvacuum=rows[3],
        norm=rows[4],
        p_n=rows[5],
        odd_photon=rows[6],
        odd_parity=rows[7],
        space=space,
        final_state=final,
        max_sample_drift=float(drifts.max()) if drifts.size else 0.0,
        total_drift=total_drift,
        meta=meta,
        states=all_states if keep_states else None,
    )


def _matrix_bands(matrix: np.ndarray):
    """Nonzero diagonals of a square matrix as (offset, aligned row) pairs."""
    d = matrix.shape[0]
    found = []
    for off in range(-(d - 1), d):
        diag = np.diagonal(matrix, offset=off)
        if np.any(diag != 0):
            row = np.zeros(d, dtype=np.complex128)
            if off >= 0:
                row[: d - off] = diag
            else:
                row[-off:] = diag
            found.append((off, row))
    return found


def _pack_terms(h: TimeDependentHamiltonian):
    offsets, band_term, rows = [], [], []
    codes, params = [], []
    for m, term in enumerate(h.terms):
        codes.append(_COEFF_CODES[term.coeff.kind])
        params.append([term.coeff.a, term.coeff.b, term.coeff.c, term.coeff.d])
        for off, row in _matrix_bands(term.op.matrix):
            offsets.append(off)
            band_term.append(m)
            rows.append(-1j * row)  # Schroedinger factor folded into the bands
    if not offsets:
        raise ValidationError("Hamiltonian has no nonzero matrix elements")
    return (
        np.asarray(offsets, dtype=np.int64),
        np.asarray(band_term, dtype=np.int64),
        np.asarray(rows, dtype=np.complex128),
        np.asarray(codes, dtype=np.int64),
        np.asarray(params, dtype=np.float64),
    )


def evolve_full(
    h: TimeDependentHamiltonian | Callable[[float], Operator],
    psi0: StateVector,
    cfg: IntegratorConfig,
) -> TrajectoryRecord:
    """Integrate the driven Schroedinger equation from psi0.

    ``h`` is either a prepared TimeDependentHamiltonian (fast banded
    path) or a generic callable t -> Operator (reference path, orders of
    magnitude slower; it assembles a dense matrix per stage and exists
    for cross-checks).
    """
    if isinstance(h, TimeDependentHamiltonian):
        if h.space != psi0.space:
            raise ValidationError("state and Hamiltonian spaces differ")
        cfg.check_step(h.omega_fast)
        return _evolve_banded(h, psi0, cfg)
    return _evolve_callable(h, psi0, cfg)


def _evolve_banded(h, psi0, cfg):
    offsets, band_term, rows, codes, params = _pack_terms(h)
    n_steps, stride = cfg.n_steps, cfg.stride
    n_samples = n_steps // stride
    dim = psi0.space.dim
    out = np.empty((n_samples, dim), dtype=np.complex128)
    norm2 = np.empty(n_samples, dtype=np.float64)
    y = psi0.amplitudes.copy()
    abort_jump = ABORT_FACTOR * cfg.renorm_tolerance
    started = time.perf_counter()
    got = _kernels.rk4_banded(
        offsets, band_term, rows, codes, params, y, 0.0, cfg.dt,
        n_steps, stride, out, norm2, abort_jump, 1 if cfg.renormalize else 0,
    )
    runtime = time.perf_counter() - started
    if got < 0:
        s = -got - 1
        t_abort = (s + 1) * stride * cfg.dt
        prev = norm2[s - 1] if s > 0 else psi0.norm_squared
        raise IntegratorDivergenceError(
            f"norm^2 jumped by {abs(norm2[s] - prev):.3e} at t = {t_abort:g} "
            f"(budget {cfg.renorm_tolerance:.1e}, abort at {abort_jump:.1e})"
        )
    if not np.all(np.isfinite(norm2[:got])):
        raise IntegratorDivergenceError("non-finite amplitudes during integration")
    times = (np.arange(1, got + 1) * stride) * cfg.dt
    meta = {
        "n_steps": n_steps,
        "dt": cfg.dt,
        "stride": stride,
        "runtime_s": runtime,
        "path": "banded",
    }
    return _assemble_record(
        cfg, psi0.space, psi0.amplitudes, times, out[:got], norm2[:got], meta,
        cfg.store_states,
    )


def _evolve_callable(h, psi0, cfg):
    n_steps, stride = cfg.n_steps, cfg.stride
    dt = cfg.dt

    def rhs(t, y):
        return -1j * (h(t).matrix @ y)

    y = psi0.amplitudes.copy()
    samples, norm2, times = [], [], []
    abort_jump = ABORT_FACTOR * cfg.renorm_tolerance
    prev_norm2 = psi0.norm_squared
    started = time.perf_counter()
    for step in range(n_steps):
        t = step * dt
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if (step + 1) % stride == 0:
            n2 = float(np.real(np.vdot(y, y)))
            if abs(n2 - prev_norm2) > abort_jump:
                raise IntegratorDivergenceError(
                    f"norm^2 jumped by {abs(n2 - prev_norm2):.3e} at t = {t + dt:g}"
                )
            prev_norm2 = n2
            if cfg.renormalize:
                y = y / math.sqrt(n2)
                prev_norm2 = 1.0
            samples.append(y.copy())
            norm2.append(n2)
            times.append((step + 1) * dt)
    runtime = time.perf_counter() - started
    meta = {
        "n_steps": n_steps,
        "dt": dt,
        "stride": stride,
        "runtime_s": runtime,
        "path": "callable",
    }
    return _assemble_record(
        cfg, psi0.space, psi0.amplitudes,
        np.asarray(times), np.asarray(samples), np.asarray(norm2), meta,
        cfg.store_states,
    )


# ---------------------------------------------------------------------------
# dressed-amplitude flows


@dataclass
class AmplitudeState:
    """Dressed-basis amplitudes c_n plus the phase bookkeeping they carry.

    The bare state is psi(t) = sum_n c_n(t) * exp[i (eps*xi_n/eta) cos(eta t)
    - i t lambda_n] |phi_n>.
    """

    c: np.ndarray
    spectrum: DressedSpectrum
    eps: float
    eta: float


def project_to_dressed(
    psi: StateVector, spec: DressedSpectrum, eps: float, eta: float, t: float = 0.0
) -> AmplitudeState:
    """Invert the dressed-frame ansatz at time t (usually 0)."""
    raw = spec.states.conj().T @ psi.amplitudes
    phase = (eps * spec.xi / eta) * math.cos(eta * t) - t * spec.lambdas
    return AmplitudeState(raw * np.exp(-1j * phase), spec, eps, eta)


def reconstruct_bare(state: AmplitudeState, t: float) -> StateVector:
    """Bare-basis state corresponding to dressed amplitudes at time t."""
    spec = state.spectrum
    phase = (state.eps * spec.xi / state.eta) * math.cos(state.eta * t) - t * spec.lambdas
    amps = spec.states @ (state.c * np.exp(1j * phase))
    nrm2 = float(np.real(np.vdot(amps, amps)))
    return StateVector(amps, spec.space, norm_tol=max(1e-9, 2 * abs(nrm2 - 1.0) + 1e-12))


def _amplitude_record(cfg, state_template, times, c_samples, norm2, meta):
    spec = state_template.spectrum
    all_c = np.concatenate([state_template.c[None, :], c_samples], axis=0)
    all_t = np.concatenate([[0.0], times])
    bare = np.empty_like(all_c)
    for j, (tj, cj) in enumerate(zip(all_t, all_c)):
        st = AmplitudeState(cj, spec, state_template.eps, state_template.eta)
        bare[j] = reconstruct_bare(st, float(tj)).amplitudes
    norm2_all = np.concatenate([[np.real(np.vdot(state_template.c, state_template.c))], norm2])
    rows = _observable_rows(all_t, bare, spec.space)
    drifts = np.abs(np.diff(norm2_all))
    final = AmplitudeState(all_c[-1].copy(), spec, state_template.eps, state_template.eta)
    rec = TrajectoryRecord(
        t=all_t,
        mean_n=rows[0],
        mandel_q=rows[1],
        p_e=rows[2],
        p_nonvacuum=rows[3],
        norm=rows[4],
        p_n=rows[5],
        odd_photon=rows[6],
        odd_parity=rows[7],
        space=spec.space,
        final_state=reconstruct_bare(final, float(all_t[-1])),
        max_sample_drift=float(drifts.max()) if drifts.size else 0.0,
        total_drift=abs(float(norm2_all[-1]) - float(norm2_all[0])),
        meta=meta,
        amplitudes=all_c if cfg.store_states else None,
    )
    return rec


def evolve_rwa(
    spec: DressedSpectrum,
    c0: AmplitudeState | StateVector,
    cfg: IntegratorConfig,
    *,
    eps: float | None = None,
    eta: float | None = None,
    window: float | None = None,
    all_terms: bool = False,
) -> TrajectoryRecord:
    """Rotating-wave flow of the dressed amplitudes.

    Keeps pair terms theta_mn * R_mn * exp[i t theta_mn (|lambda_nm| -
    eta)] for pairs whose detuning from the drive lies inside ``window``
    (default 10 * max offdiagonal |R|); ``all_terms`` keeps every pair
    regardless of detuning. Warns when a retained pair carries a phase
    amplitude |Q| > 0.1, where dropping the higher drive harmonics stops
    being safe.
    """
    if isinstance(c0, StateVector):
        if eps is None or eta is None:
            raise ValidationError("eps and eta required when starting from a bare state")
        c0 = project_to_dressed(c0, spec, eps, eta)
    eps, eta = c0.eps, c0.eta
    q, r = modulation_elements(spec, eps, eta)
    dim = r.shape[0]
    offdiag = np.abs(r - np.diag(np.diag(r)))
    rmax = float(offdiag.max())
    if window is None:
        window = 10.0 * rmax
    lam = spec.lambdas
    pm_list, pn_list, amp_list, freq_list = [], [], [], []
    qmax_kept = 0.0
    floor = 1e-16 * max(rmax, 1e-300)
    for m in range(dim):
        for n in range(dim):
            if m == n or abs(r[m, n]) <= floor:
                continue
            lam_nm = lam[n] - lam[m]
            theta = -1.0 if lam_nm > 0 else (1.0 if lam_nm < 0 else 0.0)
            if theta == 0.0:
                continue
            detune = abs(lam_nm) - eta
            if not all_terms and abs(detune) > window:
                continue
            pm_list.append(m)
            pn_list.append(n)
            amp_list.append(theta * r[m, n])
            freq_list.append(theta * detune)
            qmax_kept = max(qmax_kept, abs(q[m, n]))
    if qmax_kept > 0.1:
        warnings.warn(
            f"retained pair with |Q| = {qmax_kept:.3f} > 0.1; rotating-wave "
            "truncation of the drive harmonics is strained",
            RwaValidityWarning,
            stacklevel=2,
        )
    if not pm_list:
        raise ValidationError("no pair terms retained; nothing to integrate")
    pm = np.asarray(pm_list, dtype=np.int64)
    pn = np.asarray(pn_list, dtype=np.int64)
    amp = np.asarray(amp_list, dtype=np.complex128)
    freq = np.asarray(freq_list, dtype=np.float64)
    omega_eff = max(float(np.abs(freq).max()), float(np.abs(amp).max()), 1e-30)
    cfg.check_step(omega_eff)

    n_steps, stride = cfg.n_steps, cfg.stride
    n_samples = n_steps // stride
    out = np.empty((n_samples, dim), dtype=np.complex128)
    norm2 = np.empty(n_samples, dtype=np.float64)
    started = time.perf_counter()
    got = _kernels.rk4_pairs(
        pm, pn, amp, freq, c0.c.copy(), 0.0, cfg.dt, n_steps, stride, out, norm2
    )
    runtime = time.perf_counter() - started
    times = (np.arange(1, got + 1) * stride) * cfg.dt
    meta = {
        "n_steps": n_steps,
        "dt": cfg.dt,
        "stride": stride,
        "runtime_s": runtime,
        "path": "rwa",
        "pairs": int(pm.size),
        "window": float(window),
        "q_max_kept": qmax_kept,
    }
    return _amplitude_record(cfg, c0, times, out[:got], norm2[:got], meta)


def evolve_bessel(
    spec: DressedSpectrum,
    c0: AmplitudeState | StateVector,
    cfg: IntegratorConfig,
    *,
    eps: float | None = None,
    eta: float | None = None,
    l_max: int = 3,
) -> TrajectoryRecord:
    """Drive-harmonics flow of the dressed amplitudes.

    dc_m/dt = -4 sum_{n != m} R_mn c_n e^{-i t lambda_nm}
              sum_{l=1..l_max} l i^l [J_l(Q_mn)/Q_mn] sin(l eta t).
    Keeps fast phases, so it needs full-dynamics-like step sizes; meant
    for short cross-checks against evolve_rwa and evolve_full. The l = 1
    weight uses the analytic Q -> 0 limit J_l(Q)/Q -> 1/2.
    """
    from .perturbation import bessel_j_over_q

    if int(l_max) < 1:
        raise ValidationError("l_max must be >= 1")
    if isinstance(c0, StateVector):
        if eps is None or eta is None:
            raise ValidationError("eps and eta required when starting from a bare state")
        c0 = project_to_dressed(c0, spec, eps, eta)
    eps, eta = c0.eps, c0.eta
    q, r = modulation_elements(spec, eps, eta)
    dim = r.shape[0]
    w = np.zeros((l_max, dim, dim), dtype=np.complex128)
    for l in range(1, l_max + 1):
        ratio = bessel_j_over_q(l, q)
        w[l - 1] = -4.0 * l * (1j**l) * r * ratio
        np.fill_diagonal(w[l - 1], 0.0)
    lam = spec.lambdas
    mask = np.abs(r) > 1e-16 * max(float(np.abs(r).max()), 1e-300)
    np.fill_diagonal(mask, False)
    lam_spread = float(np.abs(lam[None, :] - lam[:, None])[mask].max()) if mask.any() else 0.0
    cfg.check_step(max(l_max * eta, lam_spread))

    n_steps, stride = cfg.n_steps, cfg.stride
    n_samples = n_steps // stride
    out = np.empty((n_samples, dim), dtype=np.complex128)
    norm2 = np.empty(n_samples, dtype=np.float64)
    started = time.perf_counter()
    got = _kernels.rk4_harmonics(
        w, lam, eta, c0.c.copy(), 0.0, cfg.dt, n_steps, stride, out, norm2
    )
    runtime = time.perf_counter() - started
    times = (np.arange(1, got + 1) * stride) * cfg.dt
    meta = {
        "n_steps": n_steps,
        "dt": cfg.dt,
        "stride": stride,
        "runtime_s": runtime,
        "path": "harmonics",
        "l_max": int(l_max),
    }
    return _amplitude_record(cfg, c0, times, out[:got], norm2[:got], meta)
