"""A seeded parameter sweep written to CSV, as the ``qseal sweep`` command does.

Run with ``python demos/04_sweep_report.py [out.csv]``.
"""
import sys

from qseal import ExperimentConfig, read_report, run_experiment

out = sys.argv[1] if len(sys.argv) > 1 else "sweep.csv"
config = ExperimentConfig(
    n_values=(4, 8, 16, 32),
    nu_grid=(0.0, 0.25, 0.5, 0.75, 1.0),
    trials=100_000,
    seed=42,
    messages=2,
    out_path=out,
    workers=2,
)
rows = run_experiment(config)
print(f"wrote {len(read_report(out))} rows to {out}")
for r in rows:
    if r.nu == 1.0:
        print(f"n={r.n:2d} identify={r.identify_p:.5f} mc={r.mc_identify:.5f} +- {r.mc_stderr:.5f} max|z|={r.max_z:.2f}")
