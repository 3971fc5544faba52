"""Does the elevated polygon converge to the curve?

The four bundled figure presets start from the same quadrilateral.  fig1
(2i) and fig3 (2i + 5) grow linearly, so sum 1/r_i diverges and r_i tends
to infinity.  fig2 (i**2) makes the sum converge.  fig4 (4 - 1/i) keeps
the sum divergent but the exponents bounded, which probes whether growth
of r_i is needed as well.  Only the first pair drives the polygon onto
the curve.

Pass an output directory to also write SVG drawings of every run.
"""
import sys

from muntz_elevation import muntz_partial_sums, preset_config, run_experiment
from muntz_elevation.report import TraceReport, write_outputs

out_dir = sys.argv[1] if len(sys.argv) > 1 else None

print(f"{'preset':8} {'sum 1/r_i (m=100)':>18} {'d(10)':>9} {'d(50)':>9} {'d(100)':>9}")
for name in ("fig1", "fig3", "fig2", "fig4"):
    config = preset_config(name)
    trace, report, curve = run_experiment(config)
    d = report.series("polygon_curve_distance")
    sums = muntz_partial_sums(config.exponents, 100)
    print(f"{name:8} {sums.sum_reciprocal:18.4f} {d[10]:9.4f} {d[50]:9.4f} {d[100]:9.4f}")
    if out_dir:
        tr = TraceReport.from_run(config, trace, report, curve)
        for p in write_outputs(tr, out_dir, ["svg"], name):
            print("   wrote", p)

# A partial sum never decides divergence on its own: fig4 has the largest
# sum here and still stalls.  The split shows up in the distances.
