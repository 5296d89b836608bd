"""
Benchmarking over a corpus
==========================

run_corpus evaluates every image in a directory with every method at every
requested zoom factor and aggregates mean PSNR per method. Reports land on
disk as JSON and CSV; reruns are byte-identical.
"""

from pathlib import Path

from mlzoom import run_corpus

DATA = Path(__file__).resolve().parent.parent / "data"
OUT = Path("demo_out")
OUT.mkdir(exist_ok=True)

report = run_corpus(
    DATA,
    factors=[2, 4],
    out_json=OUT / "bench.json",
    out_csv=OUT / "bench.csv",
)

print(f"{len(report.records)} records over "
      f"{len({r.image_id for r in report.records})} images")
print(f"{'method':<12} {'factor':>6} {'mean_psnr_db':>14}")
means = report.aggregates["mean_psnr_db"]
for method in sorted(means):
    for factor in sorted(means[method], key=int):
        print(f"{method:<12} {factor:>6} {means[method][factor]:>14.2f}")
print(f"reports: {OUT / 'bench.json'}, {OUT / 'bench.csv'}")
