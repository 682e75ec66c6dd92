"""Dressed spectrum of the dispersive emitter-cavity system with a Kerr term.

Diagonalizes the static Hamiltonian, walks the photon ladder, and shows
the two quantities the driven dynamics cares about: the second-neighbor
gaps (one drive tone must match all of them at once) and the pair
transition ratios along the ladder.
"""

import numpy as np

from kerrdce import (
    DickeKerrParams,
    DickeSpace,
    FockSpace,
    alpha_star,
    dce_reference,
    diagonalize,
    gaps,
    h0_dicke_kerr,
    photon_ladder,
    rate_ratio,
    PerturbativeInputs,
)

NU, G = 0.21, 0.07
fock = FockSpace(n_max=12)
dicke = DickeSpace(n_qubits=1, k_max=1)

a0 = alpha_star(PerturbativeInputs(nu=NU, g=G, n_qubits=1, k=2))
print(f"ladder-flattening Kerr coefficient alpha* = {a0:.4e}")

for alpha, label in ((0.0, "alpha = 0"), (a0, "alpha = alpha*")):
    p = DickeKerrParams(nu=NU, g=G, alpha=alpha, k=2, eps=1e-2, eta=2.0)
    spec = diagonalize(h0_dicke_kerr(p, fock, dicke), 2)
    eta_n = gaps(spec)[:5]
    spread = eta_n.max() - eta_n.min()
    print(f"\n{label}: second-neighbor gaps along the emitter-ground ladder")
    for i, v in enumerate(eta_n):
        print(f"  eta_{i} = {v:.7f}")
    print(f"  spread over the first five gaps: {spread:.2e}")

# with the ladder flattened, a single tone addresses every pair at once;
# the transition ratios then decide how fast the cascade climbs
p = DickeKerrParams(nu=NU, g=G, alpha=a0, k=2, eps=1e-2, eta=2.0)
spec = diagonalize(h0_dicke_kerr(p, fock, dicke), 2)
ladder = photon_ladder(spec)
print(f"\nladder length: {len(ladder)} levels")
print("pair transition ratios r_n (k=2 drive) vs the flat-cavity reference:")
for n in range(1, 5):
    r = rate_ratio(spec, n)
    print(f"  r_{n} = {r:+.4f}   reference sqrt((n+1)(n+2)/2) = {dce_reference(n):.4f}")
print("the sign flip is the k=2 drive factor 2*nu*(n+1) - 1 crossing zero;")
print("past it |r_n| outgrows the flat-cavity reference by an extra factor")
print("~n, which is what feeds the long even-n tail in the distributions")
