import runpy
from pathlib import Path

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernel.py"


def test_benchmark_runs(capsys):
    ns = runpy.run_path(str(BENCH))
    ns["main"](["--sizes", "3", "5", "--graphs", "2", "--repeat", "1"])
    out = capsys.readouterr().out
    assert out.splitlines()[-1].split()[0] == "5"
