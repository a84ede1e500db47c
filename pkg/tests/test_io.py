"""File formats: round trips, exact headers, atomicity."""

import json

import numpy as np
import pytest

from l1risk.experiments import (
    PersistencePoint,
    SweepRow,
    ridge_vs_l1_demo,
)
from l1risk.io import (
    PERSIST_HEADER,
    RIDGE_HEADER,
    SWEEP_HEADER,
    atomic_write_text,
    meta_path,
    read_coefficients,
    read_dataset,
    read_sweep,
    write_coefficients,
    write_dataset,
    write_persistence,
    write_ridge_demo,
    write_subset_solution,
    write_sweep,
)
from l1risk.oracle import best_subset
from l1risk.risk import SQUARED, Coefficients
from l1risk.simgen import gen_section4, gen_sparse_linear, ScenarioSpec
from l1risk.solvers import SolveConfig, solve_penalized


def test_dataset_round_trip(tmp_path):
    d = gen_section4(12, 25, seed=3)
    p = tmp_path / "d.csv"
    write_dataset(d, p)
    assert p.read_text().splitlines()[0] == \
        "y," + ",".join(f"x{j}" for j in range(1, 31))
    assert meta_path(p) == tmp_path / "d.meta.json"
    back = read_dataset(p)
    np.testing.assert_array_equal(back.x, d.x)
    np.testing.assert_array_equal(back.y, d.y)
    assert back.meta == d.meta


def test_dataset_full_float_precision(tmp_path):
    # repr round-trips doubles exactly, including awkward ones
    from l1risk.risk import Dataset
    x = np.array([[0.1 + 0.2, 1e-17], [np.pi, -2.0 / 3.0]])
    d = Dataset(x, np.array([1.0 / 3.0, 0.30000000000000004]))
    p = tmp_path / "tiny.csv"
    write_dataset(d, p)
    back = read_dataset(p)
    np.testing.assert_array_equal(back.x, x)
    np.testing.assert_array_equal(back.y, d.y)


def test_read_dataset_rejects_bad_input(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("z,x1\n1.0,2.0\n")
    with pytest.raises(ValueError):
        read_dataset(p)
    p.write_text("y,x2\n1.0,2.0\n")
    with pytest.raises(ValueError):
        read_dataset(p)
    p.write_text("y,x1\n")
    with pytest.raises(ValueError, match="no observations"):
        read_dataset(p)
    with pytest.raises(OSError):
        read_dataset(tmp_path / "absent.csv")


def test_coefficients_round_trip(tmp_path):
    beta = Coefficients(np.array([0.0, -1.5, 0.0, 2.25]))
    p = tmp_path / "beta.json"
    write_coefficients(p, beta, params={"lambda": 0.1})
    back, record = read_coefficients(p)
    np.testing.assert_array_equal(back.values, beta.values)
    assert record["m"] == 4
    assert record["nonzeros"] == [[2, -1.5], [4, 2.25]]  # 1-based, ascending
    assert record["support"] == 2
    assert record["l1"] == pytest.approx(3.75)
    assert record["params"] == {"lambda": 0.1}
    assert "report" not in record


def test_coefficients_embed_the_solver_report(tmp_path, hadamard):
    beta, report = solve_penalized(hadamard, SQUARED, 1.0,
                                   SolveConfig(tol=1e-13))
    p = tmp_path / "fit.json"
    write_coefficients(p, beta, report)
    _, record = read_coefficients(p)
    assert record["report"]["converged"] is True
    assert record["report"]["iterations"] == report.iterations
    assert record["report"]["kkt_residual"] <= 1e-5


def test_sweep_round_trip(tmp_path):
    rows = [
        SweepRow(0.01, 0.3, 0.9, 2.0, 0.5, 3.0, reps=4, seed=7,
                 n_unconverged=1),
        SweepRow(0.05, 0.5, 0.8, 1.5, 0.25, 2.0, reps=4, seed=7),
    ]
    p = tmp_path / "sweep.csv"
    write_sweep(p, rows, {"n": 100, "big_m": 50})
    assert p.read_text().splitlines()[0] == ",".join(SWEEP_HEADER)
    back = read_sweep(p)
    assert back == rows
    side = json.loads(meta_path(p).read_text())
    assert side["kind"] == "sweep"
    assert side["params"] == {"n": 100, "big_m": 50}
    assert side["unconverged"] == [[0.01, 1], [0.05, 0]]


def test_read_sweep_rejects_a_foreign_header(tmp_path):
    p = tmp_path / "other.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_sweep(p)


def test_persistence_file(tmp_path):
    points = [PersistencePoint(100, 251, 0.5, 1.4142135623730951),
              PersistencePoint(400, 1320, 0.2, 1.4142135623730951)]
    p = tmp_path / "persist.csv"
    write_persistence(p, points, reps=5, seed=3, params={"alpha": 1.2})
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(PERSIST_HEADER)
    assert lines[1].startswith("100,251,0.5,")
    assert lines[1].endswith(",5,3")
    assert json.loads(meta_path(p).read_text())["params"] == {"alpha": 1.2}


def test_ridge_demo_file(tmp_path):
    cmp = ridge_vs_l1_demo(20, 10, 1.0, 0.25, (0.0, 1.0), reps=2,
                           cfg=SolveConfig(max_iter=500, tol=1e-9), seed=1)
    p = tmp_path / "ridge.csv"
    write_ridge_demo(p, cmp)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(RIDGE_HEADER)
    kinds = [line.split(",")[0] for line in lines[1:]]
    assert kinds == ["ridge", "l1", "l1", "l1_selected"]
    side = json.loads(meta_path(p).read_text())
    assert side["params"]["budgets"] == [0.0, 1.0]


def test_subset_solution_file_uses_1_based_columns(tmp_path):
    beta_star = Coefficients(np.array([1.0, -2.0, 0.0, 0.0, 0.0, 0.0]))
    spec = ScenarioSpec("sparse_linear", 60,
                        {"beta_star": beta_star, "sigma": 0.01})
    d = gen_sparse_linear(spec, seed=5)
    sol = best_subset(d, 2, SQUARED)
    assert sol.subset == (0, 1)  # 0-based in the API
    p = tmp_path / "subset.json"
    write_subset_solution(p, sol, params={"k": 2})
    record = json.loads(p.read_text())
    assert record["subset"] == [1, 2]  # 1-based on disk
    assert record["params"] == {"k": 2}
    assert [j for j, _ in record["beta"]] == [1, 2]
    assert record["unbounded"] is False
    assert record["risk"] == pytest.approx(sol.risk)


def test_atomic_write_success_and_no_debris(tmp_path):
    p = tmp_path / "out.txt"
    atomic_write_text(p, "hello\n")
    assert p.read_text() == "hello\n"
    atomic_write_text(p, "replaced\n")
    assert p.read_text() == "replaced\n"
    assert list(tmp_path.glob("*.tmp")) == []


def test_atomic_write_failure_leaves_no_temp_files(tmp_path):
    target = tmp_path / "dir_in_the_way"
    target.mkdir()
    (target / "keep.txt").write_text("x")
    with pytest.raises(OSError):
        atomic_write_text(target, "text")
    assert (target / "keep.txt").read_text() == "x"  # target untouched
    assert list(tmp_path.glob("*.tmp")) == []


def test_atomic_write_requires_an_existing_directory(tmp_path):
    with pytest.raises(OSError):
        atomic_write_text(tmp_path / "missing" / "out.txt", "text")
