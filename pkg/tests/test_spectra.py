"""Dressed spectra, ladders, transition elements and resonance search."""

import numpy as np
import pytest

from kerrdce import (
    DickeKerrParams,
    DickeSpace,
    DispersiveLimitWarning,
    FockSpace,
    LadderError,
    NoResonanceError,
    Operator,
    ValidationError,
    annihilation,
    dce_reference,
    diagonalize,
    find_resonance,
    gaps,
    h0_dicke_kerr,
    modulation_elements,
    number_power,
    photon_ladder,
    photon_probs,
    rate_ratio,
)


def dicke_spectrum(nu=0.21, g=0.07, alpha=1e-5, k=2, n_max=10, n_qubits=1):
    p = DickeKerrParams(nu=nu, g=g, alpha=alpha, k=k, eps=1e-2, eta=2.0, n_qubits=n_qubits)
    h0 = h0_dicke_kerr(p, FockSpace(n_max=n_max), DickeSpace(n_qubits=n_qubits, k_max=n_qubits))
    return diagonalize(h0, k)


class TestDiagonalize:
    def test_bare_limit(self):
        # g=0 keeps the bare basis; energies interleave n and n+nu
        spec = dicke_spectrum(g=0.0, alpha=0.0, nu=0.35, n_max=6)
        lam = np.sort(spec.lambdas)
        expected = np.sort(np.concatenate([np.arange(7.0), np.arange(7.0) + 0.35]))
        assert np.allclose(lam, expected, atol=1e-12)

    def test_bare_limit_xi(self):
        spec = dicke_spectrum(g=0.0, alpha=0.0, k=2, n_max=6)
        ladder = photon_ladder(spec)
        assert np.allclose(spec.xi[ladder], np.arange(7.0) ** 2, atol=1e-12)

    def test_requires_hermitian_tag(self, fock8):
        with pytest.raises(ValidationError):
            diagonalize(annihilation(fock8), 1)

    def test_phase_convention(self):
        spec = dicke_spectrum()
        anchors = spec.states[np.argmax(np.abs(spec.states), axis=0),
                              np.arange(spec.states.shape[1])]
        assert np.all(np.abs(anchors.imag) < 1e-12)
        assert np.all(anchors.real > 0)

    def test_dressed_vacuum_photons(self):
        # leading-order dressed vacuum carries (g/(1+nu))^2 photons
        spec = dicke_spectrum(alpha=0.0)
        i0 = photon_ladder(spec)[0]
        p = photon_probs(spec.states[:, i0], spec.space)
        mean = float(p @ np.arange(p.size))
        assert mean == pytest.approx((0.07 / 1.21) ** 2, rel=5e-2)

    def test_labels_on_ladder(self):
        spec = dicke_spectrum()
        ladder = photon_ladder(spec)
        for n in range(5):
            assert spec.bare_label(ladder[n]) == (0, n)

    def test_crossing_marks_ambiguous(self):
        # nu = 1 puts (0,1) and (1,0) on exact resonance: 50/50 mixing.
        # g must stay small: the counter-rotating shift ~g^2 detunes the
        # crossing while the mixing window is only ~g wide
        with pytest.warns(DispersiveLimitWarning):
            spec = dicke_spectrum(nu=1.0, g=1e-3, alpha=0.0, n_max=4)
        assert spec.ambiguous.any()
        with pytest.raises(LadderError):
            photon_ladder(spec)


class TestModulationElements:
    def test_shapes_and_symmetry(self):
        spec = dicke_spectrum()
        q, r = modulation_elements(spec, eps=1e-2, eta=2.0)
        assert np.allclose(q, -q.T)
        assert np.allclose(r, r.conj().T)

    def test_r_scale(self):
        spec = dicke_spectrum()
        _, r = modulation_elements(spec, eps=2.0, eta=2.0)
        assert np.allclose(r, spec.drive_dressed)  # eps/2 = 1

    def test_eta_validated(self):
        spec = dicke_spectrum()
        with pytest.raises(ValidationError):
            modulation_elements(spec, eps=1e-2, eta=0.0)

    def test_parity_selection(self):
        # n^k conserves total excitation parity: opposite-parity R vanish
        spec = dicke_spectrum(n_max=8)
        space = spec.space
        parity = np.empty(space.dim)
        for i in range(space.dim):
            k_, n_ = space.split_index(i)
            parity[i] = (k_ + n_) % 2
        state_parity = parity[spec.labels]
        _, r = modulation_elements(spec, eps=1e-2, eta=2.0)
        cross = np.abs(r[state_parity[:, None] != state_parity[None, :]])
        assert cross.max() < 1e-10 * max(1.0, np.abs(r).max())


class TestLadderAndGaps:
    def test_kerr_cavity_gaps(self):
        # bare cavity with Kerr: eta_n = 2 + alpha*(4n + 4) exactly
        alpha = 1e-3
        fock = FockSpace(n_max=10)
        n_op = number_power(fock, 1)
        h0 = Operator(n_op.matrix + alpha * (n_op @ n_op).matrix, fock, hermitian=True)
        g = gaps(diagonalize(h0, 2))
        n = np.arange(g.size)
        assert np.allclose(g, 2.0 + alpha * (4 * n + 4), atol=1e-12)

    def test_quasiharmonic_compensation(self):
        # the Kerr term can flatten the qubit-induced gap anharmonicity
        def spread(alpha):
            g = gaps(dicke_spectrum(alpha=alpha, n_max=16))[:7]
            return g.max() - g.min()

        alpha_star = 1.3071e-5
        assert spread(alpha_star) < spread(0.0)
        assert spread(alpha_star) < spread(2.0 * alpha_star)

    def test_too_short_ladder(self):
        spec = dicke_spectrum(n_max=10)
        with pytest.raises(LadderError):
            rate_ratio(spec, 10)


class TestRateRatios:
    @pytest.mark.parametrize("n,expected", [(0, 1.0), (1, np.sqrt(3.0)), (2, np.sqrt(6.0))])
    def test_dce_reference(self, n, expected):
        assert dce_reference(n) == pytest.approx(expected)

    def test_diagonal_drive_has_no_ratio(self):
        spec = dicke_spectrum(g=0.0, alpha=0.0)
        with pytest.raises(LadderError):
            rate_ratio(spec, 0)

    def test_k1_ratios_near_reference(self):
        # weak coupling: k=1 ratios approach the two-photon reference ladder
        spec = dicke_spectrum(g=1e-3, alpha=0.0, k=1, n_max=12)
        for n in range(4):
            assert rate_ratio(spec, n) == pytest.approx(dce_reference(n), rel=1e-4)

    def test_rate_g2_scaling(self):
        gs = np.array([1e-3, 3e-3, 1e-2])
        vals = []
        for g in gs:
            spec = dicke_spectrum(g=g, alpha=0.0)
            ladder = photon_ladder(spec)
            vals.append(abs(spec.drive_dressed[ladder[0], ladder[2]]))
        slope = np.polyfit(np.log(gs), np.log(vals), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.05)

    def test_modcav_ratios_near_reference(self):
        # chi/|zeta| small: ratios follow sqrt((n+1)(n+2)/2)*(n+1) for k=2
        from kerrdce import ModCavityParams, h_eff_modcav

        p = ModCavityParams(omega1=5.0, eps_w=1e-2, k=2, eps=1e-3, eta=3.0)
        spec = diagonalize(h_eff_modcav(p, FockSpace(n_max=20)), 2)
        for n in range(4):
            expected = dce_reference(n) * (n + 1)  # m-factor for k=2
            assert rate_ratio(spec, n) == pytest.approx(expected, rel=1e-2)


class TestFindResonance:
    def test_lorentzian_peak(self):
        center = 2.0012
        probes = []

        def response(eta):
            probes.append(eta)
            return 1.0 / (1.0 + ((eta - center) / 3e-3) ** 2)

        res = find_resonance(response, (1.98, 2.02))
        assert res.eta_star == pytest.approx(center, abs=1e-4)
        assert res.response == pytest.approx(1.0, rel=1e-3)
        assert len(res.probes) == len(probes)

    def test_flat_response_rejected(self):
        with pytest.raises(NoResonanceError):
            find_resonance(lambda eta: 0.5, (1.9, 2.1))

    def test_dead_response_rejected(self):
        with pytest.raises(NoResonanceError):
            find_resonance(lambda eta: 0.0, (1.9, 2.1))

    def test_bracket_validated(self):
        with pytest.raises(ValidationError):
            find_resonance(lambda eta: eta, (2.1, 1.9))
