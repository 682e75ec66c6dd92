"""Compare the two faces of the nonresonantly frequency-modulated cavity.

The lab-frame model integrates the bare oscillator with its frequency
wobbling at several times the cavity scale.  The effective model trades
that fast wobble for a static photon-dependent shift plus a weak squeeze
term, and the pair drive then acts on those dressed levels.  Both are
exposed as scenario models, so the comparison is a one-line config edit.

The resonance is extremely narrow (the pair rate is tiny), so the frames
agree only while the drive stays on the shared resonance: a fraction of
a percent of detuning kills the growth in either frame, and the small
frame-dependent frequency shift between the two models is itself enough
to move the response once the horizon gets long.
"""

import dataclasses
import time

import numpy as np

from kerrdce import builtin_config, run
from kerrdce.scenarios import resolve_physics

base = builtin_config("fig5a")
params, resolved = resolve_physics(base)
print("physics:", {k: resolved[k] for k in sorted(resolved)})
print("(the drive frequency above is resolved from the dressed gap)")

short = dataclasses.replace(
    base,
    t_end=1e4,
    n_samples=100,
    n_max=24,
    renormalize=False,
    renorm_tolerance=1e-6,
)

records = {}
for model in ("modcav_lab", "modcav_eff"):
    cfg = dataclasses.replace(short, model=model)
    t0 = time.perf_counter()
    records[model] = run(cfg, export=False).record
    print(f"\n{model}: {time.perf_counter() - t0:.1f} s,"
          f" final <n> = {records[model].mean_n[-1]:.5f},"
          f" norm drift {records[model].total_drift:.1e}")

lab, eff = records["modcav_lab"], records["modcav_eff"]
mask = lab.mean_n >= 1e-4
rel = np.abs(eff.mean_n[mask] - lab.mean_n[mask]) / lab.mean_n[mask]
print(f"\nframes on the same grid: worst <n> disagreement where"
      f" <n> >= 1e-4 is {rel.max():.3f} over {mask.sum()} samples")

print("\n      t      <n> lab    <n> effective")
for i in range(19, 100, 20):
    print(f"  {lab.t[i]:>8.0f}   {lab.mean_n[i]:.5f}    {eff.mean_n[i]:.5f}")

# now detune the drive by half a percent: the growth collapses
detuned_eta = 1.005 * resolved["eta"]
cfg = dataclasses.replace(
    short,
    model="modcav_eff",
    physics={**short.physics, "eta": detuned_eta},
)
t0 = time.perf_counter()
det = run(cfg, export=False).record
print(f"\nsame scenario detuned by +0.5% ({time.perf_counter() - t0:.1f} s):")
print(f"  max <n> on resonance  {eff.mean_n.max():.2e}")
print(f"  max <n> detuned       {det.mean_n.max():.2e}"
      f"  ({eff.mean_n.max() / det.mean_n.max():.0f}x weaker)")
print("\nthe pair rate here is four orders below the drive amplitude, so the"
      "\nresonance width is correspondingly narrow; staying on it over long"
      "\nhorizons is the hard part of simulating this scheme, and the"
      "\nresonance search exists precisely to pin it down per model")
