"""Photon statistics and emitter observables extracted from state vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hilbert import FockSpace, ProductSpace, Space, StateVector

MEAN_N_FLOOR = 1e-12


@dataclass
class ObservableSample:
    """Photon-side observables of one state.

    ``mandel_q`` is the standard (Var(n) - <n>)/<n>; it is NaN below the
    mean-photon floor where the ratio is numerically meaningless.
    ``p_nonvacuum`` is norm^2 - p_0, so the probability bookkeeping stays
    consistent for slightly unnormalized states.
    """

    mean_n: float
    var_n: float
    mandel_q: float
    p_n: np.ndarray
    p_e: float
    p_nonvacuum: float
    norm: float
    odd_photon: float
    odd_parity: float


def photon_probs(amplitudes: np.ndarray, space: Space) -> np.ndarray:
    """Photon-number distribution; traces out the emitter factor if present."""
    if isinstance(space, FockSpace):
        return np.abs(amplitudes) ** 2
    if isinstance(space, ProductSpace):
        block = amplitudes.reshape(space.dicke.dim, space.fock.dim)
        return np.sum(np.abs(block) ** 2, axis=0)
    raise ValidationError(f"no photon distribution on space {space}")


def atomic_excitation(amplitudes: np.ndarray, space: Space) -> float:
    """P_e = 1 - sum_n |<0_emitters, n|psi>|^2; zero on a bare cavity space."""
    if isinstance(space, FockSpace):
        return 0.0
    if isinstance(space, ProductSpace):
        ground_block = amplitudes[: space.fock.dim]
        return float(np.real(np.vdot(amplitudes, amplitudes))
                     - np.sum(np.abs(ground_block) ** 2))
    raise ValidationError(f"no emitter sector on space {space}")


def odd_parity_population(amplitudes: np.ndarray, space: Space) -> float:
    """Population on bare states of odd total excitation number k + n."""
    if isinstance(space, FockSpace):
        p = np.abs(amplitudes) ** 2
        return float(p[1::2].sum())
    if isinstance(space, ProductSpace):
        block = np.abs(amplitudes.reshape(space.dicke.dim, space.fock.dim)) ** 2
        k = np.arange(space.dicke.dim)[:, None]
        n = np.arange(space.fock.dim)[None, :]
        return float(block[(k + n) % 2 == 1].sum())
    raise ValidationError(f"no parity structure on space {space}")


def photon_statistics(state: StateVector | np.ndarray, space: Space | None = None) -> ObservableSample:
    """Full observable sample for one state.

    Accepts either a StateVector or a raw amplitude array plus its space.
    """
    if isinstance(state, StateVector):
        amps, space = state.amplitudes, state.space
    else:
        if space is None:
            raise ValidationError("space required with raw amplitudes")
        amps = np.asarray(state, dtype=np.complex128)
    p_n = photon_probs(amps, space)
    norm2 = float(np.real(np.vdot(amps, amps)))
    ns = np.arange(p_n.size)
    mean = float(p_n @ ns)
    var = float(p_n @ (ns.astype(np.float64) ** 2)) - mean**2
    q = (var - mean) / mean if mean > MEAN_N_FLOOR else float("nan")
    return ObservableSample(
        mean_n=mean,
        var_n=var,
        mandel_q=q,
        p_n=p_n,
        p_e=atomic_excitation(amps, space),
        p_nonvacuum=norm2 - float(p_n[0]),
        norm=float(np.sqrt(norm2)),
        odd_photon=float(p_n[1::2].sum()),
        odd_parity=odd_parity_population(amps, space),
    )


@dataclass
class TrajectorySummary:
    """Peak-time digest of one trajectory."""

    t_star: float
    max_mean_n: float
    q_at_peak: float
    p_e_at_peak: float
    p_n_at_peak: np.ndarray
    even_at_peak: float
    odd_at_peak: float
    max_odd_photon: float
    max_odd_parity: float
    max_tail: float


def trajectory_summary(traj) -> TrajectorySummary:
    """Summarize a TrajectoryRecord at the first <n> maximum."""
    i = int(np.argmax(traj.mean_n))
    p_peak = traj.p_n[i]
    return TrajectorySummary(
        t_star=float(traj.t[i]),
        max_mean_n=float(traj.mean_n[i]),
        q_at_peak=float(traj.mandel_q[i]),
        p_e_at_peak=float(traj.p_e[i]),
        p_n_at_peak=p_peak.copy(),
        even_at_peak=float(p_peak[0::2].sum()),
        odd_at_peak=float(p_peak[1::2].sum()),
        max_odd_photon=float(traj.odd_photon.max()),
        max_odd_parity=float(traj.odd_parity.max()),
        max_tail=float((traj.p_n[:, -1] + traj.p_n[:, -2]).max()),
    )
