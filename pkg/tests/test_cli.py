import json

import numpy as np
import pytest

from restless_sched import ModelInstance, gen_assumption1_instance, gen_assumption2_instance
from restless_sched.cli import main


@pytest.fixture
def inst_path(tmp_path, small_params):
    inst = gen_assumption1_instance(small_params, 2)
    p = tmp_path / "inst.json"
    p.write_text(json.dumps(inst.to_json_dict()))
    return str(p)


@pytest.fixture
def inst2_path(tmp_path, small_params):
    inst = gen_assumption2_instance(small_params, 1009)
    p = tmp_path / "inst2.json"
    p.write_text(json.dumps(inst.to_json_dict()))
    return str(p)


def read_json(path):
    return json.loads(path.read_text())


class TestValidate:
    def test_regime1_ok(self, inst_path, tmp_path):
        out = tmp_path / "v.json"
        assert main(["validate", inst_path, "--out", str(out)]) == 0
        doc = read_json(out)
        assert doc["regime"] == "Assumption1"
        assert all(c["passed"] for c in doc["assumption1"]["clauses"])
        assert len(doc["assumption1"]["clauses"]) == 5

    def test_regime2_needs_alt_flag(self, inst2_path, tmp_path):
        out = tmp_path / "v.json"
        assert main(["validate", inst2_path, "--alt-clause3", "--out", str(out)]) == 0
        assert read_json(out)["regime"] == "Assumption2"

    def test_neither_exits_1(self, tmp_path):
        # A valid instance satisfying neither regime: non-monotone A rows.
        inst = ModelInstance(
            2, 2, 2,
            [[0.5, 0.5], [0.5, 0.5]],
            [[0.6, 0.4], [0.4, 0.6]],
            [0.0, 1.0], 0.9,
            [[0.9, 0.1], [0.1, 0.9]],
        )
        p = tmp_path / "n.json"
        p.write_text(json.dumps(inst.to_json_dict()))
        out = tmp_path / "v.json"
        assert main(["validate", str(p), "--out", str(out)]) == 1
        assert read_json(out)["regime"] == "Neither"

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "nope.json")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_file_exits_2(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert main(["validate", str(p)]) == 2

    def test_invalid_instance_exits_2(self, tmp_path, inst_path):
        doc = json.loads(open(inst_path).read())
        doc["beta"] = 1.5
        p = tmp_path / "bad2.json"
        p.write_text(json.dumps(doc))
        assert main(["validate", str(p)]) == 2


class TestSpectral:
    def test_fields_and_exit(self, inst_path, tmp_path):
        out = tmp_path / "s.json"
        assert main(["spectral", inst_path, "--out", str(out)]) == 0
        doc = read_json(out)
        assert doc["eigenvalues"][0] == pytest.approx(1.0)
        assert doc["upsilon_diag"][0] == pytest.approx(1.0)
        assert doc["residual"] < 1e-8
        assert doc["separation_passed"] is True
        X = len(doc["eigenvalues"])
        assert np.asarray(doc["Q"]).shape == (X, X)


class TestSolveCompare:
    def test_solve(self, inst_path, tmp_path):
        out = tmp_path / "o.json"
        assert main(["solve", inst_path, "--horizon", "3", "--out", str(out)]) == 0
        doc = read_json(out)
        assert doc["horizon"] == 3
        assert doc["best_action"] >= 1

    def test_compare_zero_gap(self, inst_path, tmp_path):
        out = tmp_path / "c.json"
        assert main(["compare", inst_path, "--horizon", "3", "--out", str(out)]) == 0
        doc = read_json(out)
        assert doc["gap"] <= 1e-9
        assert doc["argmax_agreement"] == 1.0


class TestBounds:
    def test_csv_shape(self, inst_path, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["bounds", inst_path, "--samples", "30", "--seed", "1",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# restless-sched ")
        assert lines[1] == "case,t,T,slack_low,slack_high,verdict"
        assert len(lines) == 32
        assert all(line.endswith(",Pass") for line in lines[2:])


class TestSimulate:
    def test_json_and_dump(self, inst_path, tmp_path):
        out = tmp_path / "m.json"
        dump = tmp_path / "traj.csv"
        assert main(["simulate", inst_path, "--horizon", "4", "--n-traj", "200",
                     "--seed", "3", "--policy", "myopic",
                     "--dump-csv", str(dump), "--out", str(out)]) == 0
        doc = read_json(out)
        assert doc["n_traj"] == 200 and doc["seed"] == 3
        assert doc["stderr"] >= 0.0
        lines = dump.read_text().splitlines()
        assert lines[1] == "trajectory,discounted_total"
        assert len(lines) == 202


class TestGenerate:
    def test_roundtrip(self, tmp_path):
        out = tmp_path / "g.json"
        assert main(["generate", "--regime", "1", "--seed", "11", "--out", str(out)]) == 0
        inst = ModelInstance.from_json(out.read_text())
        from restless_sched import verify_assumption1

        assert verify_assumption1(inst).satisfied

    def test_violate(self, tmp_path):
        out = tmp_path / "g.json"
        assert main(["generate", "--regime", "1", "--seed", "11",
                     "--violate", "1.4", "--out", str(out)]) == 0
        inst = ModelInstance.from_json(out.read_text())
        from restless_sched import verify_assumption1

        assert not verify_assumption1(inst).satisfied


class TestCertifySweep:
    def test_all_pass(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["certify-sweep", "--regime", "1", "--seed", "0",
                     "--instances", "10", "--horizon", "2",
                     "--deterministic", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "seed,regime,status,gap,argmax_agreement"
        assert lines[-1].startswith("# pass 10 fail 0")

    def test_regime2(self, tmp_path):
        out = tmp_path / "sweep2.csv"
        assert main(["certify-sweep", "--regime", "2", "--seed", "0",
                     "--instances", "5", "--horizon", "2",
                     "--deterministic", "--out", str(out)]) == 0


class TestDeterminism:
    def test_rerun_byte_identical(self, inst_path, tmp_path):
        pairs = []
        for cmd in (
            ["validate", inst_path],
            ["spectral", inst_path],
            ["compare", inst_path, "--horizon", "2"],
            ["bounds", inst_path, "--samples", "20", "--seed", "4"],
            ["simulate", inst_path, "--horizon", "3", "--n-traj", "100", "--seed", "5"],
            ["generate", "--regime", "1", "--seed", "9"],
            ["certify-sweep", "--regime", "1", "--seed", "0",
             "--instances", "5", "--horizon", "2"],
        ):
            a, b = tmp_path / "a.out", tmp_path / "b.out"
            main(cmd + ["--deterministic", "--out", str(a)])
            main(cmd + ["--deterministic", "--out", str(b)])
            pairs.append((cmd[0], a.read_bytes(), b.read_bytes()))
        for name, x, y in pairs:
            assert x == y, name
