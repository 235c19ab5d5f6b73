"""Desk-scale comparison of shortened-code designs (reduced frame budget).

Reproduces the qualitative picture for N=512 -> M=320, K=160 under SC
decoding: the re-polarized (NUPGA) selection on the natural-order pattern
against the CW and RQUP baselines that keep the mother code's reliability
order.  Expect NUPGA and the natural-order baseline to lead, RQUP a little
behind, and CW clearly worst.  Takes a minute or two on one core.
"""

from nupolar.harness import ExperimentConfig, run_sweep

SWEEP = (1.5, 2.0, 2.5, 3.0)
BUDGET = dict(max_frames=20_000, min_frame_errors=60, seed=5)

runs = {
    "NUPGA (NAT_PD)": dict(method="NUPGA_shortened", pattern_method="NAT_PD"),
    "baseline NAT_PD": dict(method="GA_uniform", pattern_method="NAT_PD"),
    "baseline RQUP": dict(method="GA_uniform", pattern_method="RQUP"),
    "baseline CW": dict(method="GA_uniform", pattern_method="CW"),
}

results = {}
for label, overrides in runs.items():
    cfg = ExperimentConfig(N=512, M=320, K=160, decoder="SC", ebno_sweep=SWEEP,
                           **overrides, **BUDGET)
    results[label] = run_sweep(cfg).points
    print(f"finished {label}")

header = "Eb/N0 " + "".join(f"{label:>18s}" for label in runs)
print("\nFER\n" + header)
for i, ebno in enumerate(SWEEP):
    row = f"{ebno:5.1f} " + "".join(f"{results[label][i].fer:18.5f}" for label in runs)
    print(row)
