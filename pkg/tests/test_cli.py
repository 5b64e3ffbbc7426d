import csv
import io
import json

import numpy as np
import pytest

from designmoments import cli
from designmoments.designs import builtin_spherical, save_design


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestDesignsVerify:
    def test_builtins_pass(self, capsys):
        code, out, _ = run(["designs-verify", "--t", "7"], capsys)
        assert code == 0
        rows = rows_of(out)
        for r in rows:
            if int(r["t"]) <= int(r["strength"]):
                assert r["pass"] == "true", r

    def test_octahedron_t4_reported(self, capsys):
        code, out, _ = run(["designs-verify", "--design", "octahedron", "--t", "4"], capsys)
        assert code == 0
        last = rows_of(out)[-1]
        assert last["pass"] == "false"
        assert float(last["residual"]) == pytest.approx(2 / 15)

    def test_sl2f5_frame_potential(self, capsys):
        _, out, _ = run(["designs-verify", "--design", "sl2f5", "--t", "5", "--format", "json"], capsys)
        rows = json.loads(out)
        assert rows[-1]["value"] == pytest.approx(42, abs=1e-9)

    def test_uncertified_file_exit_3(self, tmp_path, capsys):
        data = builtin_spherical("octahedron").to_json()
        data["t"] = 5
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        code, _, err = run(["designs-verify", "--design", str(path)], capsys)
        assert code == 3
        assert "certification" in err

    def test_good_file(self, tmp_path, capsys):
        path = tmp_path / "ico.json"
        save_design(builtin_spherical("icosahedron"), path)
        code, _, _ = run(["designs-verify", "--design", str(path), "--t", "5"], capsys)
        assert code == 0

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{not json")
        code, _, _ = run(["designs-verify", "--design", str(path)], capsys)
        assert code == 2

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code, _, _ = run(["designs-verify", "--design", str(tmp_path / "nope.json")], capsys)
        assert code == 2


class TestHistogram:
    def test_mixed_all_zero(self, capsys):
        _, out, _ = run(["histogram", "--state", "mixed", "--samples", "200", "--seed", "1"], capsys)
        rows = rows_of(out)
        values = [float(r["value"]) for r in rows if r["row"] == "E"]
        assert len(values) == 200
        assert all(v == 0 for v in values)

    def test_summary_rows(self, capsys):
        _, out, _ = run(["histogram", "--state", "werner", "--samples", "20000", "--seed", "2"], capsys)
        summary = {r["row"]: r for r in rows_of(out) if r["row"] != "E"}
        r2 = summary["R2"]
        assert abs(float(r2["value"]) - 1 / 9) <= 3 * float(r2["stderr"])

    def test_seed_required(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["histogram", "--samples", "10"])
        assert exc.value.code == 2

    @pytest.mark.parametrize("seed", ["-1", str(2**64)])
    def test_seed_range(self, seed):
        with pytest.raises(SystemExit) as exc:
            cli.main(["histogram", "--seed", seed])
        assert exc.value.code == 2


class TestScan:
    def test_landmarks(self, capsys):
        _, out, _ = run(["scan", "--class", "w_class", "--n", "3", "--samples", "20", "--seed", "3"], capsys)
        rows = rows_of(out)
        assert sum(r["class"] == "w_class" for r in rows) == 20
        marks = {r["label"]: r for r in rows if r["class"] == "landmark"}
        assert float(marks["E"]["R2"]) == pytest.approx(11 / 81, abs=1e-15)
        assert float(marks["E"]["R4"]) == pytest.approx(3561 / 91125, abs=1e-15)

    def test_n4_landmarks(self, capsys):
        _, out, _ = run(["scan", "--class", "hs", "--n", "4", "--samples", "5", "--seed", "3"], capsys)
        marks = {r["label"]: r for r in rows_of(out) if r["class"] == "landmark"}
        assert float(marks["H"]["R2"]) == pytest.approx(1 / 9, abs=1e-15)
        assert float(marks["F"]["R4"]) == pytest.approx(1 / 25, abs=1e-15)

    def test_too_many_qubits(self, capsys):
        code, _, err = run(["scan", "--class", "hs", "--n", "9", "--samples", "2", "--seed", "1"], capsys)
        assert code == 2
        assert "qubits" in err

    def test_byte_identical_reruns(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            run(["scan", "--class", "conv_generic", "--n", "3", "--samples", "40", "--seed", "11",
                 "--out", str(p)], capsys)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_seed_changes_output(self, capsys):
        _, a, _ = run(["scan", "--class", "generic", "--n", "3", "--samples", "5", "--seed", "1"], capsys)
        _, b, _ = run(["scan", "--class", "generic", "--n", "3", "--samples", "5", "--seed", "2"], capsys)
        assert a != b


class TestThresholds:
    def test_rows(self, capsys):
        _, out, _ = run(["thresholds", "--n", "6"], capsys)
        rows = rows_of(out)
        assert [int(r["N"]) for r in rows] == [3, 4, 5, 6]
        assert float(rows[0]["p_star"]) == pytest.approx(0.042572, abs=1e-6)
        assert float(rows[0]["p_tilde_star"]) == pytest.approx(0.285714, abs=1e-6)
        assert float(rows[1]["p_star"]) == pytest.approx(1 / 3, abs=1e-15)
        first = next(int(r["N"]) for r in rows if float(r["p_star"]) > float(r["p_tilde_star"]))
        assert first == 6

    def test_small_n(self, capsys):
        code, _, _ = run(["thresholds", "--n", "2"], capsys)
        assert code == 2


class TestBoundary:
    def test_bell_diagonal(self, capsys):
        _, out, _ = run(["boundary", "--family", "bell_diagonal", "--points", "11"], capsys)
        rows = rows_of(out)
        c = next(r for r in rows if r["curve"] == "marker:C")
        assert (float(c["R2"]), float(c["R4"])) == (pytest.approx(1 / 3), pytest.approx(1 / 5))
        assert any(r["curve"] == "marker:all_separable_below" for r in rows)

    def test_conjecture_passes_phi_bell(self, capsys):
        _, out, _ = run(["boundary", "--family", "three_qubit_bisep", "--points", "5"], capsys)
        conj = [r for r in rows_of(out) if r["curve"] == "bisep_conjecture"]
        assert float(conj[-1]["R4"]) == pytest.approx(1 / 25, abs=1e-15)


class TestMomentAndCriteria:
    def test_design_sum(self, capsys):
        _, out, _ = run(["moment", "--state", "w", "--n", "3", "--t", "2"], capsys)
        row = rows_of(out)[0]
        assert float(row["value"]) == pytest.approx(11 / 81, abs=1e-15)
        assert row["method"] == "design-sum"

    def test_named_design(self, capsys):
        _, out, _ = run(["moment", "--state", "ghz", "--n", "3", "--t", "4", "--design", "icosidodecahedron",
                         "--format", "json"], capsys)
        rec = json.loads(out)[0]
        assert rec["detail"]["design"] == "icosidodecahedron"

    def test_monte_carlo_needs_seed(self, capsys):
        code, _, _ = run(["moment", "--state", "w", "--n", "3", "--samples", "1000"], capsys)
        assert code == 2

    def test_monte_carlo(self, capsys):
        _, out, _ = run(["moment", "--state", "w", "--n", "3", "--samples", "50000", "--seed", "4",
                         "--format", "json"], capsys)
        rec = json.loads(out)[0]
        assert abs(rec["value"] - 11 / 81) <= 3 * rec["detail"]["standard_error"]

    def test_state_file(self, tmp_path, capsys):
        s = 1 / np.sqrt(2)
        path = tmp_path / "bell.json"
        path.write_text(json.dumps({"amplitudes": [[s, 0], [0, 0], [0, 0], [s, 0]]}))
        _, out, _ = run(["moment", "--state-file", str(path), "--t", "4"], capsys)
        assert float(rows_of(out)[0]["value"]) == pytest.approx(1 / 5, abs=1e-15)

    def test_bad_state_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"amplitudes": [[1, 0], [1, 0]]}))
        code, _, _ = run(["moment", "--state-file", str(path)], capsys)
        assert code == 2

    def test_criteria_bell(self, capsys):
        _, out, _ = run(["criteria", "--state", "bell", "--format", "json"], capsys)
        verdicts = json.loads(out)
        assert verdicts[0]["criterion"] == "bell_diagonal_separability"
        assert verdicts[0]["verdict"] is True

    def test_criteria_w4(self, capsys):
        _, out, _ = run(["criteria", "--state", "w", "--n", "4"], capsys)
        rows = rows_of(out)
        assert {r["criterion"] for r in rows} == {"w_class_r2_bound", "w_class_linear"}
        assert all(abs(float(r["margin"])) < 1e-10 for r in rows)

    def test_bell_diagonal_needs_c(self, capsys):
        code, _, _ = run(["moment", "--state", "bell_diagonal"], capsys)
        assert code == 2


class TestFormatting:
    def test_seventeen_digits_round_trip(self):
        x = 1 / 3
        text = cli.render([{"v": x}], "csv")
        assert text == "v\n0.33333333333333331\n"
        assert float(text.split()[1]) == x

    def test_json_nan_becomes_null(self):
        assert json.loads(cli.render([{"v": float("nan")}], "json")) == [{"v": None}]

    def test_union_of_columns(self):
        text = cli.render([{"a": 1}, {"b": True}], "csv")
        assert text == "a,b\n1,\n,true\n"
