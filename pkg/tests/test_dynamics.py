"""Integrator tests: config guards, closed-form checks, flow cross-checks."""

import math

import numpy as np
import pytest

from kerrdce.dynamics import (
    AmplitudeState,
    IntegratorConfig,
    evolve_bessel,
    evolve_full,
    evolve_rwa,
    project_to_dressed,
    reconstruct_bare,
)
from kerrdce.errors import (
    ConfigError,
    IntegratorDivergenceError,
    RwaValidityWarning,
    ValidationError,
)
from kerrdce.hilbert import (
    DickeSpace,
    FockSpace,
    Operator,
    ProductSpace,
    StateVector,
    annihilation,
    number_power,
)
from kerrdce.models import (
    Coefficient,
    DickeKerrParams,
    HamiltonianTerm,
    TimeDependentHamiltonian,
    dicke_kerr_hamiltonian,
    h0_dicke_kerr,
)
from kerrdce.spectra import DressedSpectrum, diagonalize


def static_hamiltonian(op, omega_fast):
    return TimeDependentHamiltonian(
        [HamiltonianTerm(Coefficient("const", a=1.0), op)], omega_fast=omega_fast
    )


def pair_quadrature(fock):
    a = annihilation(fock).matrix
    a2 = a @ a
    return Operator(1j * (a2.conj().T - a2), fock, hermitian=True)


def synthetic_spectrum(fock, lambdas, drive_dressed, xi=None):
    dim = fock.dim
    return DressedSpectrum(
        lambdas=np.asarray(lambdas, dtype=np.float64),
        states=np.eye(dim, dtype=np.complex128),
        xi=np.zeros(dim) if xi is None else np.asarray(xi, dtype=np.float64),
        drive_dressed=np.asarray(drive_dressed, dtype=np.complex128),
        labels=np.arange(dim),
        ambiguous=np.zeros(dim, dtype=bool),
        near_degenerate_pairs=(),
        space=fock,
        drive_power=1,
        scale=1.0,
    )


class TestIntegratorConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dt=0.0, t_end=1.0),
            dict(dt=-0.1, t_end=1.0),
            dict(dt=0.1, t_end=0.0),
            dict(dt=0.5, t_end=0.1),
            dict(dt=0.1, t_end=1.0, renorm_tolerance=0.0),
            dict(dt=0.1, t_end=1.0, method="rk45"),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ConfigError):
            IntegratorConfig(**kwargs)

    def test_step_and_stride(self):
        cfg = IntegratorConfig(dt=0.1, t_end=10.0, n_samples=20)
        assert cfg.n_steps == 100
        assert cfg.stride == 5
        cfg = IntegratorConfig(dt=0.1, t_end=10.0, sample_stride=7)
        assert cfg.stride == 7
        # fewer steps than requested samples degrades to every step
        cfg = IntegratorConfig(dt=0.1, t_end=1.0, n_samples=1000)
        assert cfg.stride == 1

    def test_bad_stride(self):
        cfg = IntegratorConfig(dt=0.1, t_end=1.0, sample_stride=0)
        with pytest.raises(ConfigError):
            cfg.stride

    def test_check_step(self):
        limit = (2.0 * math.pi / 3.0) / 40.0
        IntegratorConfig(dt=0.999 * limit, t_end=1.0).check_step(3.0)
        with pytest.raises(ConfigError, match="too coarse"):
            IntegratorConfig(dt=1.05 * limit, t_end=1.0).check_step(3.0)
        # non-positive frequency disables the check
        IntegratorConfig(dt=10.0, t_end=20.0).check_step(0.0)


class TestBandedVsCallable:
    def setup_method(self):
        self.fock = FockSpace(n_max=3)
        self.dicke = DickeSpace(n_qubits=1, k_max=1)
        p = DickeKerrParams(nu=0.21, g=0.07, alpha=1e-5, k=2, eps=1e-2, eta=2.0043)
        self.h = dicke_kerr_hamiltonian(p, self.fock, self.dicke)
        space = self.h.space
        self.psi0 = StateVector.from_unnormalized(
            np.arange(1, space.dim + 1, dtype=float), space
        )

    def test_paths_agree(self):
        cfg = IntegratorConfig(dt=0.05, t_end=10.0, n_samples=20, renorm_tolerance=1e-6)
        rec_b = evolve_full(self.h, self.psi0, cfg)
        rec_c = evolve_full(lambda t: self.h(t), self.psi0, cfg)
        assert rec_b.meta["path"] == "banded"
        assert rec_c.meta["path"] == "callable"
        np.testing.assert_allclose(rec_b.t, rec_c.t, rtol=0, atol=1e-12)
        np.testing.assert_allclose(
            rec_b.final_state.amplitudes, rec_c.final_state.amplitudes, atol=1e-11
        )
        np.testing.assert_allclose(rec_b.mean_n, rec_c.mean_n, atol=1e-11)

    def test_time_grid_and_initial_sample(self):
        cfg = IntegratorConfig(dt=0.05, t_end=10.0, n_samples=20, renorm_tolerance=1e-6)
        rec = evolve_full(self.h, self.psi0, cfg)
        assert rec.t[0] == 0.0
        assert rec.t[-1] == pytest.approx(10.0)
        p0 = np.abs(self.psi0.amplitudes) ** 2
        # fock index fast: p_n[0] sums qubit levels per photon number
        expected = p0.reshape(2, self.fock.dim).sum(axis=0)
        np.testing.assert_allclose(rec.p_n[0], expected, atol=1e-14)

    def test_space_mismatch(self):
        cfg = IntegratorConfig(dt=0.05, t_end=1.0)
        other = StateVector.vacuum(FockSpace(n_max=5))
        with pytest.raises(ValidationError):
            evolve_full(self.h, other, cfg)

    def test_store_states(self):
        cfg = IntegratorConfig(
            dt=0.05, t_end=1.0, n_samples=5, renorm_tolerance=1e-6, store_states=True
        )
        rec = evolve_full(self.h, self.psi0, cfg)
        assert rec.states is not None
        assert rec.states.shape == (len(rec.t), self.h.space.dim)
        np.testing.assert_array_equal(rec.states[0], self.psi0.amplitudes)
        assert rec.amplitudes is None

    def test_global_phase_invariance(self):
        cfg = IntegratorConfig(dt=0.05, t_end=5.0, n_samples=10, renorm_tolerance=1e-6)
        rec1 = evolve_full(self.h, self.psi0, cfg)
        shifted = StateVector(
            np.exp(0.7j) * self.psi0.amplitudes, self.psi0.space
        )
        rec2 = evolve_full(self.h, shifted, cfg)
        np.testing.assert_allclose(rec1.p_n, rec2.p_n, atol=1e-13)
        # linear propagation: psi2 = exp(0.7i) psi1 exactly, including any
        # integrator norm drift, so the overlap carries |psi1|^2
        ov = np.vdot(rec1.final_state.amplitudes, rec2.final_state.amplitudes)
        sq = np.vdot(rec1.final_state.amplitudes, rec1.final_state.amplitudes).real
        assert ov == pytest.approx(sq * np.exp(0.7j), abs=1e-12)


class TestSqueezeClosedForm:
    # constant pair drive chi*i*(a^dag^2 - a^2): mean n = sinh^2(2*chi*t)

    def test_mean_photons_and_mandel(self):
        fock = FockSpace(n_max=60)
        chi = 5e-3
        h = static_hamiltonian(
            Operator(chi * pair_quadrature(fock).matrix, fock, hermitian=True),
            omega_fast=0.0,
        )
        cfg = IntegratorConfig(dt=0.05, t_end=100.0, n_samples=50, renorm_tolerance=1e-6)
        rec = evolve_full(h, StateVector.vacuum(fock), cfg)
        r = 2.0 * chi * rec.t[1:]
        np.testing.assert_allclose(rec.mean_n[1:], np.sinh(r) ** 2, rtol=1e-5)
        # pair creation keeps the photon number even, identically
        assert rec.odd_photon.max() == 0.0
        tail = np.sinh(2.0 * chi * 100.0) ** 2
        assert rec.mandel_q[-1] == pytest.approx(2.0 * tail + 1.0, rel=1e-3)
        assert rec.total_drift < 1e-8


class TestDressedFrameRoundTrip:
    def test_project_reconstruct(self, rng):
        fock = FockSpace(n_max=7)
        dicke = DickeSpace(n_qubits=1, k_max=1)
        p = DickeKerrParams(nu=0.21, g=0.07, alpha=1e-5, k=2, eps=1e-2, eta=2.0)
        h0 = h0_dicke_kerr(p, fock, dicke)
        spec = diagonalize(h0, k=p.k)
        amps = rng.normal(size=h0.space.dim) + 1j * rng.normal(size=h0.space.dim)
        psi = StateVector.from_unnormalized(amps, h0.space)
        for t in (0.0, 0.7):
            state = project_to_dressed(psi, spec, eps=p.eps, eta=p.eta, t=t)
            back = reconstruct_bare(state, t)
            fidelity = abs(psi.overlap(back))
            assert fidelity == pytest.approx(1.0, abs=1e-12)
            assert np.vdot(state.c, state.c).real == pytest.approx(1.0, abs=1e-12)


class TestRwaFlow:
    def two_level(self, r_amp, eta, eps=0.01, xi=None):
        # three dressed levels, drive couples only the outer pair; the
        # middle one stays dark so the outer pair is a clean Rabi problem
        fock = FockSpace(n_max=2)
        d = 2.0 * r_amp / eps
        drive = np.array(
            [[0.0, 0.0, d], [0.0, 0.0, 0.0], [d, 0.0, 0.0]], dtype=complex
        )
        spec = synthetic_spectrum(fock, [0.0, 0.55, 1.0], drive, xi=xi)
        c0 = project_to_dressed(StateVector.vacuum(fock), spec, eps=eps, eta=eta)
        return spec, c0

    def test_resonant_rabi(self):
        r_amp = 2.5e-3
        spec, c0 = self.two_level(r_amp, eta=1.0)
        cfg = IntegratorConfig(dt=1.0, t_end=1256.0, n_samples=400)
        rec = evolve_rwa(spec, c0, cfg)
        assert rec.meta["path"] == "rwa"
        assert rec.meta["pairs"] == 2
        assert rec.t[0] == 0.0 and rec.p_n[0, 0] == pytest.approx(1.0)
        target = np.sin(r_amp * rec.t) ** 2
        np.testing.assert_allclose(rec.p_n[:, 2], target, atol=1e-7)
        assert rec.p_n[:, 1].max() < 1e-14
        assert rec.total_drift < 1e-10

    def test_bare_state_needs_frequencies(self):
        spec, _ = self.two_level(2.5e-3, eta=1.0)
        cfg = IntegratorConfig(dt=1.0, t_end=10.0)
        with pytest.raises(ValidationError, match="eps and eta"):
            evolve_rwa(spec, StateVector.vacuum(spec.space), cfg)

    def test_off_resonant_suppression(self):
        r_amp = 2.5e-4
        delta = 0.05
        spec, c0 = self.two_level(r_amp, eta=1.0 + delta)
        cfg = IntegratorConfig(dt=1.0, t_end=3000.0, n_samples=300)
        rec = evolve_rwa(spec, c0, cfg, window=0.2)
        # two-level formula: peak transfer r^2/(r^2 + (delta/2)^2)
        cap = r_amp**2 / (r_amp**2 + (delta / 2.0) ** 2)
        assert rec.p_n[:, 2].max() < 2.0 * cap
        assert rec.p_n[:, 2].max() < 1e-3

    def test_window_drops_detuned_pair(self):
        spec, c0 = self.two_level(2.5e-4, eta=1.05)
        cfg = IntegratorConfig(dt=1.0, t_end=100.0)
        # default window is 10*max|R| = 2.5e-3, far below the detuning
        with pytest.raises(ValidationError, match="no pair terms"):
            evolve_rwa(spec, c0, cfg)

    def test_large_phase_amplitude_warns(self):
        spec, c0 = self.two_level(2.5e-3, eta=1.0, eps=0.02, xi=[0.0, 0.0, 10.0])
        cfg = IntegratorConfig(dt=1.0, t_end=50.0)
        with pytest.warns(RwaValidityWarning, match="0.1"):
            evolve_rwa(spec, c0, cfg)

    def test_amplitude_storage(self):
        spec, c0 = self.two_level(2.5e-3, eta=1.0)
        cfg = IntegratorConfig(dt=1.0, t_end=50.0, n_samples=10, store_states=True)
        rec = evolve_rwa(spec, c0, cfg)
        assert rec.amplitudes is not None
        assert rec.amplitudes.shape == (len(rec.t), spec.space.dim)
        assert rec.states is None


class TestBesselFlow:
    def test_lmax_validated(self):
        fock = FockSpace(n_max=2)
        spec = synthetic_spectrum(fock, [0.0, 0.5, 1.0], np.eye(3))
        cfg = IntegratorConfig(dt=0.01, t_end=1.0)
        with pytest.raises(ValidationError, match="l_max"):
            evolve_bessel(spec, StateVector.vacuum(fock), cfg, eps=0.01, eta=1.0, l_max=0)

    def test_matches_rwa_when_slow(self):
        # small R and small Q: keeping one harmonic with full phases must
        # agree with the rotating-wave solution to the counter-rotating error
        eps, eta = 0.02, 1.0
        r_amp = 1e-4
        fock = FockSpace(n_max=2)
        d = 2.0 * r_amp / eps
        drive = np.array(
            [[0.0, 0.0, d], [0.0, 0.0, 0.0], [d, 0.0, 0.0]], dtype=complex
        )
        spec = synthetic_spectrum(fock, [0.0, 0.55, 1.0], drive, xi=[0.0, 0.0, 0.1])
        psi0 = StateVector.vacuum(fock)
        rwa = evolve_rwa(
            spec,
            psi0,
            IntegratorConfig(dt=1.0, t_end=3000.0, sample_stride=50),
            eps=eps,
            eta=eta,
        )
        bes = evolve_bessel(
            spec,
            psi0,
            IntegratorConfig(dt=0.02, t_end=3000.0, sample_stride=2500),
            eps=eps,
            eta=eta,
            l_max=1,
        )
        np.testing.assert_allclose(rwa.t, bes.t, atol=1e-9)
        assert np.abs(rwa.p_n[:, 2] - bes.p_n[:, 2]).max() < 1e-4

    def test_full_vs_harmonics_cascade(self):
        # strong squeeze mixing and a resonant drive: the harmonic series
        # with enough terms must track the direct integration through the
        # first stages of the pair cascade
        fock = FockSpace(n_max=24)
        zeta, chi, eps = -1.5, 0.05, 0.05
        h0 = Operator(
            zeta * number_power(fock, 1).matrix + chi * pair_quadrature(fock).matrix,
            fock,
            hermitian=True,
        )
        spec = diagonalize(h0, k=2)
        big_omega = math.sqrt(zeta**2 - 4.0 * chi**2)
        eta = 2.0 * big_omega
        h = TimeDependentHamiltonian(
            [
                HamiltonianTerm(Coefficient("const", a=1.0), h0),
                HamiltonianTerm(Coefficient("sin", a=eps, b=eta), number_power(fock, 2)),
            ],
            omega_fast=max(eta, 2.0 * abs(zeta)),
        )
        psi0 = StateVector.vacuum(fock)
        # the driven n^2 term puts the spectral edge near eps*n_max^2, and
        # the weak physical tail parked there turns the edge modes into a
        # norm sink unless lambda*dt stays well inside the stability region
        full = evolve_full(
            h, psi0, IntegratorConfig(dt=0.005, t_end=200.0, sample_stride=400,
                                      renorm_tolerance=1e-6)
        )
        bes = evolve_bessel(
            spec,
            psi0,
            IntegratorConfig(dt=0.004, t_end=200.0, sample_stride=500),
            eps=eps,
            eta=eta,
            l_max=6,
        )
        np.testing.assert_allclose(full.t, bes.t, atol=1e-9)
        grown = full.mean_n > 0.05
        assert grown.sum() >= 20
        rel = np.abs(full.mean_n[grown] - bes.mean_n[grown]) / full.mean_n[grown]
        assert rel.max() < 1e-2
        assert np.abs(full.p_n[:, 2] - bes.p_n[:, 2]).max() < 1e-2
        assert full.odd_photon.max() < 1e-12


class TestDivergenceGuards:
    def runaway(self, fock):
        # anti-hermitian generator grows the norm like exp(2 n t)
        grow = Operator(1j * number_power(fock, 1).matrix, fock, hermitian=False)
        return TimeDependentHamiltonian(
            [HamiltonianTerm(Coefficient("const", a=1.0), grow)], omega_fast=0.0
        )

    def test_banded_abort(self):
        fock = FockSpace(n_max=5)
        h = self.runaway(fock)
        psi0 = StateVector.basis_state(fock, 2)
        cfg = IntegratorConfig(dt=0.01, t_end=10.0, n_samples=1000)
        with pytest.raises(IntegratorDivergenceError, match="jumped"):
            evolve_full(h, psi0, cfg)

    def test_callable_abort(self):
        fock = FockSpace(n_max=5)
        grow = Operator(1j * number_power(fock, 1).matrix, fock, hermitian=False)
        psi0 = StateVector.basis_state(fock, 2)
        cfg = IntegratorConfig(dt=0.01, t_end=10.0, n_samples=1000)
        with pytest.raises(IntegratorDivergenceError, match="jumped"):
            evolve_full(lambda t: grow, psi0, cfg)


class TestNormHandling:
    def drifting_run(self, renormalize):
        fock = FockSpace(n_max=7)
        h = static_hamiltonian(number_power(fock, 1), omega_fast=1.0)
        psi0 = StateVector.from_unnormalized(np.ones(fock.dim), fock)
        cfg = IntegratorConfig(
            dt=0.05,
            t_end=100.0,
            n_samples=100,
            renorm_tolerance=1e-4,
            renormalize=renormalize,
        )
        return evolve_full(h, psi0, cfg)

    def test_renormalize_flag(self):
        rec_off = self.drifting_run(False)
        rec_on = self.drifting_run(True)
        # rk4 damps each eigencomponent, so the raw norm decays steadily
        assert rec_off.norm[-1] < 1.0 - 1e-5
        assert np.all(np.diff(rec_off.norm) <= 1e-15)
        # stored samples are rescaled after the drift is recorded
        assert abs(rec_on.norm[-1] - 1.0) < 1e-12
        assert rec_off.total_drift > 10.0 * rec_on.total_drift

    def test_drift_shrinks_with_step(self):
        fock = FockSpace(n_max=12)
        dicke = DickeSpace(n_qubits=1, k_max=1)
        p = DickeKerrParams(nu=0.21, g=0.07, alpha=1e-5, k=2, eps=1e-2, eta=2.0043)
        h = static_hamiltonian(h0_dicke_kerr(p, fock, dicke), omega_fast=p.eta)
        psi0 = StateVector.from_unnormalized(
            1.0 / (1.0 + np.arange(h.space.dim)), h.space
        )
        drifts = {}
        for dt in (0.02, 0.01):
            cfg = IntegratorConfig(dt=dt, t_end=20.0, renorm_tolerance=1.0)
            drifts[dt] = evolve_full(h, psi0, cfg).total_drift
        # norm error scales like dt^6 per step, dt^5 over a fixed horizon
        ratio = drifts[0.02] / drifts[0.01]
        assert 24.0 < ratio < 40.0
