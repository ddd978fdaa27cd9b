import csv
import io
import json

import numpy as np
import pytest

from slicescale import cli
from slicescale import io as sio

FULL = "tensor v1\nmodes 2\ndims 2 2\nnnz 4\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n"
THREE = "tensor v1\nmodes 2\ndims 2 2\nnnz 3\n1 2 1\n2 1 1\n2 2 1\n"
UNIT = "targets v1\n1 1\n1 1\n"
BAD = "targets v1\n1 1\n1.5 0.5\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_check_feasible(files, capsys):
    code, out, _ = run(["check", files("a.tensor", FULL), files("a.targets", UNIT)], capsys)
    assert code == 0 and out.strip() == "FEASIBLE"


def test_check_infeasible_prints_certificate(files, capsys):
    code, out, _ = run(["check", files("b.tensor", THREE), files("b.targets", BAD)], capsys)
    assert code == 2
    assert out.splitlines()[:2] == ["INFEASIBLE", "certificate v1"]


def test_check_json(files, capsys):
    code, out, _ = run(["check", "--json", files("b.tensor", THREE), files("b.targets", BAD)],
                       capsys)
    assert code == 2 and json.loads(out)["verdict"] == "INFEASIBLE"


def test_malformed_input(files, capsys):
    code, _, err = run(["check", files("c.tensor", "tensor v1\nmodes 2\ndims 2 x\n"),
                        files("c.targets", UNIT)], capsys)
    assert code == 1 and "line 3" in err


def test_scale_newton_and_sinkhorn(files, tmp_path, capsys):
    t, s = files("a.tensor", FULL), files("a.targets", UNIT)
    out_n, out_s = str(tmp_path / "n.tensor"), str(tmp_path / "s.tensor")
    assert run(["scale", t, s, "-o", out_n], capsys)[0] == 0
    assert run(["scale", t, s, "--method", "sinkhorn", "--tol", "1e-6", "-o", out_s], capsys)[0] == 0
    a, b = sio.read_tensor(out_n), sio.read_tensor(out_s)
    np.testing.assert_allclose(a.to_dense(), 0.5, rtol=1e-12)
    np.testing.assert_allclose(b.values, a.values, rtol=1e-6)
    assert len(sio.read_vectors(out_n + ".scaling", "scaling")) == 2


def test_scale_stdout_and_trace(files, tmp_path, capsys):
    trace = tmp_path / "trace.json"
    code, out, err = run(["scale", files("a.tensor", FULL), files("a.targets", UNIT),
                          "--trace", str(trace)], capsys)
    assert code == 0 and out.startswith("tensor v1") and "status converged" in err
    assert json.loads(trace.read_text())["status"] == "converged"


@pytest.mark.parametrize("method", ["newton", "sinkhorn"])
def test_scale_infeasible(files, capsys, method):
    code, _, err = run(["scale", files("b.tensor", THREE), files("b.targets", BAD),
                        "--method", method], capsys)
    assert code == 2 and "certificate v1" in err


def test_scale_max_iters(files, capsys):
    uneven = "tensor v1\nmodes 2\ndims 2 2\nnnz 4\n1 1 1\n1 2 2\n2 1 3\n2 2 4\n"
    code, _, _ = run(["scale", files("d.tensor", uneven), files("a.targets", UNIT),
                      "--method", "sinkhorn", "--max-iters", "1"], capsys)
    assert code == 3


def test_gen_round_trip(tmp_path, capsys):
    prefix = str(tmp_path / "inst")
    code, out, _ = run(["gen", "--dims", "3", "3", "2", "--density", "0.7", "--seed", "4",
                        "-o", prefix], capsys)
    assert code == 0 and out.split() == [prefix + ".tensor", prefix + ".targets"]
    assert run(["check", prefix + ".tensor", prefix + ".targets"], capsys)[0] == 0
    code, _, _ = run(["gen", "--dims", "3", "3", "--infeasible", "--json", "-o", prefix], capsys)
    assert code == 0
    assert run(["check", prefix + ".tensor.json", prefix + ".targets.json"], capsys)[0] == 2


def test_bench_csv(capsys):
    code, out, _ = run(["bench", "--count", "10", "--dims", "5", "5", "--seed", "1",
                        "--csv", "-"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out[out.index("instance,"):])))
    assert len(rows) == 20 and all(r["status"] == "converged" for r in rows)
    again = run(["bench", "--count", "10", "--dims", "5", "5", "--seed", "1", "--csv", "-"],
                capsys)[1]
    # the table carries wall times; the CSV does not
    assert again[again.index("instance,"):] == out[out.index("instance,"):]


def test_bench_empty(capsys):
    code, out, _ = run(["bench", "--count", "0"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 2
