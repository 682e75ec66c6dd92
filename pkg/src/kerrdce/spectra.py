"""Dressed spectra of the static Hamiltonians and drive matrix elements.

The periodic drive eps*sin(eta*t)*n^k acts between dressed states |phi_m>
of the static Hamiltonian through two ingredients computed here: the
diagonal moments xi_n = <phi_n|n^k|phi_n>, which set the phase amplitudes
Q_mn = (eps/eta)(xi_n - xi_m), and the transition weights
R_mn = (eps/2) <phi_m|n^k|phi_n>. Pair generation climbs the ladder of
emitter-ground dressed states in steps of two, so the relevant spectral
gaps are eta_n = lambda_{n+2} - lambda_n along that ladder.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import EigensolverError, LadderError, NoResonanceError, ValidationError
from .hilbert import (
    FockSpace,
    Operator,
    ProductSpace,
    Space,
    embed_fock,
    number_power,
)

RESIDUAL_RTOL = 1e-10
UNITARITY_TOL = 1e-10
DEGENERACY_RTOL = 1e-12
LABEL_TIE_TOL = 1e-3
RATE_REFERENCE_FLOOR = 1e-14


@dataclass
class DressedSpectrum:
    """Eigen decomposition of a static Hamiltonian plus drive elements.

    ``states`` holds eigenvectors as columns, energies ascending. Each
    column is phase-fixed so its largest-magnitude component is real and
    positive. ``labels`` assigns each dressed state the bare basis index
    of maximum overlap; ``ambiguous`` marks labels decided by less than
    the tie tolerance (typically at level crossings).
    """

    lambdas: np.ndarray
    states: np.ndarray
    xi: np.ndarray
    drive_dressed: np.ndarray
    labels: np.ndarray
    ambiguous: np.ndarray
    near_degenerate_pairs: tuple
    space: Space
    drive_power: int
    scale: float = field(default=0.0)

    def bare_label(self, i: int):
        """Bare label of dressed state i: (k, n) on a product space, n otherwise."""
        if isinstance(self.space, ProductSpace):
            return self.space.split_index(int(self.labels[i]))
        return int(self.labels[i])


def _drive_operator(space: Space, k: int) -> Operator:
    if isinstance(space, ProductSpace):
        return embed_fock(number_power(space.fock, k), space.dicke)
    if isinstance(space, FockSpace):
        return number_power(space, k)
    raise ValidationError(f"no drive operator on space {space}")


def diagonalize(h0: Operator, k: int) -> DressedSpectrum:
    """Diagonalize a static Hamiltonian and attach drive matrix elements.

    Raises EigensolverError if the eigenpairs fail the residual bound
    1e-10 * max|lambda| or the eigenvector matrix fails unitarity at
    1e-10, which protects everything downstream from a silently bad
    decomposition.
    """
    if not h0.hermitian:
        raise ValidationError("diagonalize expects an operator tagged hermitian")
    lam, vec = np.linalg.eigh(h0.matrix)
    scale = max(float(np.abs(lam).max()), 1e-30)

    # phase convention: largest-magnitude component of each column real positive
    idx = np.argmax(np.abs(vec), axis=0)
    anchors = vec[idx, np.arange(vec.shape[1])]
    vec = vec * np.where(np.abs(anchors) > 0, np.conj(anchors) / np.abs(anchors), 1.0)

    resid = np.abs(h0.matrix @ vec - vec * lam).max()
    if resid > RESIDUAL_RTOL * scale:
        raise EigensolverError(f"eigen residual {resid:.3e} exceeds {RESIDUAL_RTOL:.1e}*{scale:.3e}")
    unit = np.abs(vec.conj().T @ vec - np.eye(vec.shape[0])).max()
    if unit > UNITARITY_TOL:
        raise EigensolverError(f"eigenvector unitarity defect {unit:.3e}")

    weights = np.abs(vec) ** 2
    labels = np.argmax(weights, axis=0)
    top = weights[labels, np.arange(vec.shape[1])]
    w_sorted = np.sort(weights, axis=0)
    second = w_sorted[-2, :]
    ambiguous = (top - second) < LABEL_TIE_TOL

    gaps_all = np.diff(lam)
    near = tuple(
        (int(i), int(i + 1)) for i in np.nonzero(gaps_all < DEGENERACY_RTOL * scale)[0]
    )

    drive = _drive_operator(h0.space, k)
    drive_dressed = vec.conj().T @ drive.matrix @ vec
    xi = np.real(np.diag(drive_dressed)).copy()
    return DressedSpectrum(
        lambdas=lam,
        states=vec,
        xi=xi,
        drive_dressed=drive_dressed,
        labels=labels,
        ambiguous=ambiguous,
        near_degenerate_pairs=near,
        space=h0.space,
        drive_power=int(k),
        scale=scale,
    )


def modulation_elements(spec: DressedSpectrum, eps: float, eta: float):
    """Phase amplitudes Q (antisymmetric) and transition weights R (hermitian)."""
    if eta <= 0:
        raise ValidationError("eta must be positive")
    q = (eps / eta) * (spec.xi[None, :] - spec.xi[:, None])
    r = 0.5 * eps * spec.drive_dressed
    return q, r


def photon_ladder(spec: DressedSpectrum) -> np.ndarray:
    """Dressed-state indices labeled (emitters ground, n) for n = 0, 1, 2, ...

    The ladder stops at the first photon number whose partner is missing
    or ambiguously labeled. Raises LadderError when fewer than 3 levels
    are identified.
    """
    # emitter index slow, so the bare index of (0 excited, n photons) is n
    if isinstance(spec.space, ProductSpace):
        fdim = spec.space.fock.dim
    else:
        fdim = spec.space.dim
    by_bare = {}
    for i, b in enumerate(spec.labels):
        b = int(b)
        if b in by_bare:
            # two dressed states claim one bare state: crossing region
            by_bare[b] = None
        else:
            by_bare[b] = i
    ladder = []
    for n in range(fdim):
        i = by_bare.get(n)
        if i is None or spec.ambiguous[i]:
            break
        ladder.append(i)
    if len(ladder) < 3:
        raise LadderError(
            f"only {len(ladder)} emitter-ground ladder levels identified; "
            "labels ambiguous or missing (crossing region?)"
        )
    return np.asarray(ladder, dtype=np.int64)


def gaps(spec: DressedSpectrum) -> np.ndarray:
    """Two-photon gaps eta_n = lambda_{n+2} - lambda_n along the photon ladder."""
    ladder = photon_ladder(spec)
    lam = spec.lambdas[ladder]
    return lam[2:] - lam[:-2]


def dce_reference(n: int) -> float:
    """Rate-ratio ladder of the standard two-photon vacuum amplification."""
    return math.sqrt((n + 1) * (n + 2) / 2.0)


def rate_ratio(spec: DressedSpectrum, n: int) -> float:
    """r_n = R_{n,n+2} / R_{0,2} along the photon ladder.

    The eps factor cancels; the guard rejects reference elements below
    1e-14 relative to the drive scale xi_2 (a diagonal drive cannot pump
    pairs and has no meaningful ratio).
    """
    ladder = photon_ladder(spec)
    if n + 2 >= len(ladder):
        raise LadderError(f"ladder too short for r_{n}")
    ref = spec.drive_dressed[ladder[0], ladder[2]]
    drive_scale = max(abs(spec.xi).max(), 1.0)
    if abs(ref) < RATE_REFERENCE_FLOOR * drive_scale:
        raise LadderError(f"reference element R_02 ~ {abs(ref):.2e} vanishes")
    val = spec.drive_dressed[ladder[n], ladder[n + 2]] / ref
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise LadderError(f"rate ratio r_{n} unexpectedly complex: {val}")
    return float(val.real)


@dataclass
class ResonanceResult:
    eta_star: float
    response: float
    probes: np.ndarray  # rows (eta, response), evaluation order
    bracket: tuple


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_max(f, a: float, b: float, xtol: float, trace: list):
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    trace.append((x1, f1))
    trace.append((x2, f2))
    while (b - a) > xtol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
            trace.append((x2, f2))
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
            trace.append((x1, f1))
    return (x1, f1) if f1 >= f2 else (x2, f2)


def find_resonance(
    config,
    bracket: tuple[float, float],
    *,
    jobs: int = 1,
    coarse_points: int = 17,
    zoom_rounds: int = 2,
    xtol: float = 1e-5,
    flat_ratio: float = 1.5,
    response_floor: float = 1e-10,
) -> ResonanceResult:
    """Locate the drive frequency maximizing <n> at the probe horizon.

    ``config`` is either a ScenarioConfig (probed by short full-dynamics
    runs) or a callable eta -> response. The growth peak is far narrower
    than the default 1% bracket, so a coarse grid scan (optionally in
    parallel) plus `zoom_rounds` refinements first isolates a subinterval
    containing a single maximum; golden-section search then converges
    inside it. A coarse response landscape flatter than `flat_ratio`
    (or entirely below `response_floor`) raises NoResonanceError.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (hi > lo > 0):
        raise ValidationError(f"bad bracket {bracket}")
    if callable(config):
        probe = config
    else:
        from .scenarios import probe_response
        from functools import partial

        probe = partial(probe_response, config)

    trace: list[tuple[float, float]] = []

    def scan(a: float, b: float, npts: int) -> tuple[np.ndarray, np.ndarray]:
        etas = np.linspace(a, b, npts)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                vals = np.fromiter(pool.map(probe, etas), dtype=np.float64, count=npts)
        else:
            vals = np.fromiter((probe(e) for e in etas), dtype=np.float64, count=npts)
        trace.extend(zip(etas.tolist(), vals.tolist()))
        return etas, vals

    etas, vals = scan(lo, hi, coarse_points)
    vmax, vmin = float(vals.max()), float(vals.min())
    if vmax < response_floor:
        raise NoResonanceError(
            f"response below floor everywhere in bracket (max {vmax:.2e})"
        )
    if vmin > 0 and vmax / vmin < flat_ratio:
        raise NoResonanceError(
            f"flat response in bracket (max/min = {vmax / vmin:.3f} < {flat_ratio})"
        )

    for _ in range(zoom_rounds):
        i = int(np.argmax(vals))
        a = etas[max(i - 1, 0)]
        b = etas[min(i + 1, len(etas) - 1)]
        if (b - a) <= xtol:
            break
        etas, vals = scan(a, b, max(coarse_points // 2, 5))

    i = int(np.argmax(vals))
    a = etas[max(i - 1, 0)]
    b = etas[min(i + 1, len(etas) - 1)]
    best_scan = (float(etas[i]), float(vals[i]))
    eta_star, resp = _golden_section_max(probe, a, b, xtol, trace)
    if best_scan[1] > resp:
        eta_star, resp = best_scan
    return ResonanceResult(
        eta_star=float(eta_star),
        response=float(resp),
        probes=np.asarray(trace, dtype=np.float64),
        bracket=(lo, hi),
    )
