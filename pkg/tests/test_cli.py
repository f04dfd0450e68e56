"""CLI behavior tests: exit codes, round-trips, diagnostics, golden files."""

import json

import numpy as np
import pytest
from helpers import replay_golden, run_cli

import gfusion as gf
from gfusion.errors import SystemFileError
from gfusion.io import load_system, save_system, system_from_dict, system_to_dict


@pytest.fixture()
def frame_file(tmp_path):
    path = tmp_path / "frame.json"
    save_system(gf.generate("frame", 5, 2, seed=101), str(path))
    return str(path)


@pytest.fixture()
def degenerate_file(tmp_path):
    sys = gf.make_system(2, "real", [(1.0, np.array([[1.0], [0.0]]), np.array([[1.0, 0.0]]))])
    path = tmp_path / "degenerate.json"
    save_system(sys, str(path))
    return str(path)


class TestRoundTrip:
    def test_serialize_parse_is_value_identical(self, tmp_path):
        sys = gf.generate("frame", 6, 3, seed=55, field="complex")
        path = tmp_path / "sys.json"
        save_system(sys, str(path))
        back = load_system(str(path))
        assert back.field == sys.field and back.dim == sys.dim
        for a, b in zip(sys.subsystems, back.subsystems):
            assert np.array_equal(a.operator, b.operator)
            assert np.array_equal(a.subspace.basis, b.subspace.basis)
            assert a.weight == b.weight

    def test_parse_serialize_reproduces_canonical_dict(self):
        sys = gf.generate("riesz", 5, 2, seed=7)
        d = system_to_dict(sys)
        assert system_to_dict(system_from_dict(d)) == d

    def test_verdicts_identical_after_round_trip(self, frame_file, tmp_path):
        code1, out1 = run_cli(["analyze", frame_file])
        resaved = tmp_path / "resaved.json"
        save_system(load_system(frame_file), str(resaved))
        code2, out2 = run_cli(["analyze", str(resaved)])
        assert code1 == code2 == 0
        payload1, payload2 = json.loads(out1), json.loads(out2)
        for key in ("bounds", "spectral_extremes", "verdict", "parseval", "gf_complete"):
            assert payload1[key] == payload2[key]


COORDINATE_FILE = {
    "version": 1,
    "field": "real",
    "dim": 2,
    "subsystems": [
        {"weight": 1.0, "subspace": [[1.0], [0.0]], "lambda": [[1.0, 0.0]]},
        {"weight": 1.0, "subspace": [[0.0], [1.0]], "lambda": [[0.0, 1.0]]},
    ],
}


class TestExitCodes:
    def test_analyze_frame_exits_zero(self, frame_file):
        code, out = run_cli(["analyze", frame_file])
        assert code == 0
        assert json.loads(out)["verdict"] == "frame"

    def test_analyze_handwritten_coordinate_file(self, tmp_path):
        path = tmp_path / "coord.json"
        path.write_text(json.dumps(COORDINATE_FILE))
        code, out = run_cli(["analyze", str(path)])
        payload = json.loads(out)
        assert code == 0
        assert payload["parseval"] is True
        assert abs(payload["bounds"]["lower"] - 1.0) < 1e-12
        assert abs(payload["bounds"]["upper"] - 1.0) < 1e-12
        # canonical file: the orthonormal spanning columns survive verbatim
        assert system_to_dict(load_system(str(path)))["subsystems"] == COORDINATE_FILE["subsystems"]

    def test_analyze_degenerate_exits_one(self, degenerate_file):
        code, out = run_cli(["analyze", degenerate_file])
        assert code == 1
        assert json.loads(out)["verdict"] == "not_a_frame"

    def test_tol_override_flips_verdict(self, frame_file):
        code, _ = run_cli(["analyze", frame_file, "--tol", "1e9"])
        assert code == 1

    def test_missing_file_exits_two(self, tmp_path):
        code, _ = run_cli(["analyze", str(tmp_path / "nope.json")])
        assert code == 2

    def test_mismatched_pair_exits_two(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_system(gf.generate("onb", 4, 2, seed=1), str(a))
        save_system(gf.generate("onb", 6, 2, seed=1), str(b))
        code, _ = run_cli(["cross", str(a), str(b)])
        assert code == 2

    def test_onb_and_riesz_verdicts(self, tmp_path):
        onb = tmp_path / "onb.json"
        save_system(gf.generate("onb", 4, 2, seed=2), str(onb))
        assert run_cli(["onb", str(onb)])[0] == 0
        assert run_cli(["riesz", str(onb)])[0] == 0

    def test_weighted_system_fails_onb(self, tmp_path):
        path = tmp_path / "weighted.json"
        eye = np.eye(2)
        sys = gf.make_system(2, "real", [(2.0, eye[:, [0]], eye[[0], :]), (1.0, eye[:, [1]], eye[[1], :])])
        save_system(sys, str(path))
        assert run_cli(["onb", str(path)])[0] == 1

    def test_dual_and_induce(self, frame_file):
        assert run_cli(["dual", frame_file, "--seed", "3"])[0] == 0
        assert run_cli(["induce", frame_file])[0] == 0

    def test_perturb_end_to_end(self, frame_file, tmp_path):
        payload = json.loads(run_cli(["analyze", frame_file])[1])
        radius = 0.5 * np.sqrt(payload["bounds"]["lower"])
        pert = tmp_path / "pert.json"
        code, _ = run_cli(
            ["gen", "--base", frame_file, "--noise", str(radius), "--seed", "42", "-o", str(pert)]
        )
        assert code == 0
        code, out = run_cli(["perturb", frame_file, str(pert), "--theorem", "analysis", "--seed", "1"])
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["hypothesis_holds"] and rep["bracket_ok"]


class TestParseDiagnostics:
    def test_bad_field_value(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 1, "field": "rational", "dim": 2, "subsystems": []}')
        with pytest.raises(SystemFileError, match="field"):
            load_system(str(path))

    def test_ragged_matrix_carries_path(self, tmp_path):
        path = tmp_path / "ragged.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "field": "real",
                    "dim": 2,
                    "subsystems": [
                        {"weight": 1.0, "subspace": [[1.0], [0.0]], "lambda": [[1.0, 0.0], [1.0]]}
                    ],
                }
            )
        )
        with pytest.raises(SystemFileError, match=r"subsystems\[0\].lambda"):
            load_system(str(path))

    def test_wrong_version(self, tmp_path):
        path = tmp_path / "v9.json"
        path.write_text('{"version": 9, "field": "real", "dim": 1, "subsystems": []}')
        with pytest.raises(SystemFileError, match="version"):
            load_system(str(path))

    def test_complex_entries_rejected_in_real_file(self, tmp_path):
        path = tmp_path / "mixed.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "field": "real",
                    "dim": 1,
                    "subsystems": [{"weight": 1.0, "subspace": [[[1.0, 0.0]]], "lambda": [[1.0]]}],
                }
            )
        )
        with pytest.raises(SystemFileError):
            load_system(str(path))

    def test_json_syntax_error_has_location(self, tmp_path):
        path = tmp_path / "syntax.json"
        path.write_text("{broken")
        with pytest.raises(SystemFileError, match=r":\d+:\d+"):
            load_system(str(path))


def test_golden_files(tmp_path):
    names = replay_golden(tmp_path)
    assert len(names) == 16
