import zipfile
from pathlib import Path

import pytest

# Verbatim golden inputs for the parser tests: one meta-data file whose data
# lines wrap over two physical lines, and a raw log with two complete runs.

GOLDEN_INFO = """\
suite = 'PBO', funcId = 19, DIM = 16, algId = 'self_GA'
data_f19/IOHprofiler_f19_DIM16.dat, 1:16001|3.20000e+001, 1:16001|3.20000e+001,
1:16001|3.20000e+001, 1:16001|2.80000e+001, 1:16001|3.20000e+001
suite = 'PBO', funcId = 19, DIM = 100, algId = 'self_GA'
data_f19/IOHprofiler_f19_DIM100.dat, 1:100001|1.92000e+002, 1:100001|1.88000e+002,
1:100001|1.80000e+002, 1:100001|1.76000e+002, 1:100001|1.76000e+002
"""

GOLDEN_RAW = """\
"function evaluation" "current f(x)" "best-so-far f(x)" "parameter"
1 +2.95000e+02 +2.95000e+02 0.000000
2 +2.96000e+02 +2.96000e+02 0.001600
4 +3.07000e+02 +3.07000e+02 0.219200
9 +3.11000e+02 +3.11000e+02 0.006400
12 +3.12000e+02 +3.12000e+02 0.001600
16 +3.16000e+02 +3.16000e+02 0.006400
20 +3.17000e+02 +3.17000e+02 0.001600
23 +3.28000e+02 +3.28000e+02 0.027200
27 +3.39000e+02 +3.39000e+02 0.059200
"function evaluation" "current f(x)" "best-so-far f(x)" "parameter"
1 +3.20000e+02 +3.20000e+02 1.000000
24 +3.44000e+02 +3.44000e+02 2.000000
60 +3.64000e+02 +3.64000e+02 3.000000
"""

# Synthetic archive for end-to-end tests: two algorithms on function 19 in
# dimensions 16 and 100, five runs each, maximization, one tracked parameter.

_FINALS = {
    ("self_GA", 16): [32, 32, 32, 28, 32],
    ("RLS", 16): [30, 31, 30, 29, 30],
    ("self_GA", 100): [192, 188, 180, 176, 176],
    ("RLS", 100): [180, 170, 175, 168, 172],
}
_BUDGETS = {16: 16001, 100: 100001}


def _trace_lines(run_index: int, final: float, budget: int) -> list[str]:
    # deterministic improvement trace: geometric evaluation counts, linearly
    # climbing best-so-far, closed by the final-budget record
    evals = []
    e = 1 + run_index
    while e < budget and len(evals) < 9:
        evals.append(e)
        e = int(e * 3.7) + 1 + run_index
    evals.append(budget)
    start = final - len(evals) + 1
    lines = []
    for i, ev in enumerate(evals):
        value = start + i if i < len(evals) - 1 else final
        lines.append(f"{ev} {float(value)} {float(value)} {0.5 * (run_index + i)}")
    return lines


def make_golden_tree(root: Path) -> Path:
    for alg in ("RLS", "self_GA"):
        alg_dir = root / alg
        for dim in (16, 100):
            finals = _FINALS[(alg, dim)]
            budget = _BUDGETS[dim]
            data_dir = alg_dir / "data_f19"
            data_dir.mkdir(parents=True, exist_ok=True)
            blocks = []
            for k, final in enumerate(finals):
                blocks.append('"function evaluation" "current f(x)" "best-so-far f(x)" "parameter"')
                blocks.extend(_trace_lines(k, final, budget))
            (data_dir / f"IOHprofiler_f19_DIM{dim}.dat").write_text("\n".join(blocks) + "\n")
            tokens = ", ".join(f"{k + 1}:{budget}|{float(v)}" for k, v in enumerate(finals))
            info = (
                f"suite = 'PBO', funcId = 19, DIM = {dim}, algId = '{alg}'\n"
                "%\n"
                f"data_f19/IOHprofiler_f19_DIM{dim}.dat, {tokens}\n"
            )
            (alg_dir / f"IOHprofiler_f19_DIM{dim}.info").write_text(info)
    return root


@pytest.fixture(scope="session")
def golden_dir(tmp_path_factory) -> Path:
    return make_golden_tree(tmp_path_factory.mktemp("golden"))


@pytest.fixture(scope="session")
def golden_zip(golden_dir, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("archives") / "golden.zip"
    with zipfile.ZipFile(path, "w") as zf:
        for file in sorted(golden_dir.rglob("*")):
            if file.is_file():
                zf.write(file, file.relative_to(golden_dir))
    return path


@pytest.fixture(scope="session")
def golden_collection(golden_dir):
    from ioha import load_experiment

    return load_experiment(golden_dir)
