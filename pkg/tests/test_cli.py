import json
import subprocess
import sys

import pytest

from stacksimplex.cli import EXPLORE_COLUMNS, main
from stacksimplex.verify import CHECK_IDS, run_verification


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSort:
    def test_tau5(self, capsys):
        code, out, _ = run(capsys, "sort", "23451")
        assert code == 0
        assert out.splitlines() == ["23451", "23415", "23145", "21345", "12345", "index 4"]

    def test_identity(self, capsys):
        code, out, _ = run(capsys, "sort", "123")
        assert (code, out) == (0, "123\nindex 0\n")

    def test_json(self, capsys):
        code, out, _ = run(capsys, "--json", "sort", "213")
        assert code == 0
        assert json.loads(out) == {"perm": [2, 1, 3], "steps": [[2, 1, 3], [1, 2, 3]], "index": 1}

    def test_global_flag_after_command(self, capsys):
        _, a, _ = run(capsys, "--json", "sort", "213")
        _, b, _ = run(capsys, "sort", "213", "--json")
        assert a == b

    def test_iterations(self, capsys):
        code, out, _ = run(capsys, "sort", "23451", "-k", "2")
        assert out.splitlines() == ["23451", "23415", "23145", "index 4"]

    @pytest.mark.parametrize("perm", ["2231", "124", "abc"])
    def test_malformed(self, capsys, perm):
        code, _, err = run(capsys, "sort", perm)
        assert code == 2 and "error" in err


class TestPolytope:
    def test_2341(self, capsys):
        code, out, _ = run(capsys, "polytope", "2341")
        data = json.loads(out)
        assert code == 0
        assert data["simplex"] and data["affine_dim"] == 3
        assert data["normalized_volume"] == 6 and data["hollow"]

    def test_point(self, capsys):
        data = json.loads(run(capsys, "polytope", "123")[1])
        assert data["affine_dim"] == 0 and data["vertices"] == [["1", "2", "3"]]

    def test_321_is_a_segment(self, capsys):
        data = json.loads(run(capsys, "polytope", "321")[1])
        assert data["affine_dim"] == 1 and data["ambient"] == 3

    def test_231_is_a_triangle(self, capsys):
        data = json.loads(run(capsys, "polytope", "231")[1])
        assert data["affine_dim"] == 2 and data["simplex"]

    def test_parse_error(self, capsys):
        assert run(capsys, "polytope", "cube:x")[0] == 2
        assert run(capsys, "polytope", "sphere:3")[0] == 2
        assert run(capsys, "polytope", "points:1,2;3")[0] == 2


class TestCount:
    def test_worked_example(self, capsys):
        assert run(capsys, "count", "tau:3", "5/2", "--translate", "tau")[:2] == (0, "12\n")

    def test_lecture_hall(self, capsys):
        assert run(capsys, "count", "lecturehall:4", "1")[:2] == (0, "16\n")

    def test_zero(self, capsys):
        assert run(capsys, "count", "tau:4", "0")[:2] == (0, "1\n")

    def test_interior(self, capsys):
        assert run(capsys, "count", "tau:4", "2", "--interior")[:2] == (0, "1\n")

    def test_table(self, capsys):
        code, out, _ = run(capsys, "count", "cube:2", "0", "1/2", "2")
        assert code == 0 and out == "lambda,closed,interior\n0,1,0\n1/2,1,0\n2,9,1\n"

    def test_json(self, capsys):
        out = run(capsys, "--json", "count", "cube:3", "2")[1]
        assert json.loads(out) == {"lambda": "2", "region": "closed", "count": 27}

    @pytest.mark.parametrize("lam", ["-1", "1/0", "x", "0.5"])
    def test_bad_lambda(self, capsys, lam):
        assert run(capsys, "count", "tau:3", lam)[0] == 2

    def test_unsupported_interior(self, capsys):
        code, _, err = run(capsys, "count", "cube:5", "1", "--interior")
        assert code == 3 and "unsupported" in err

    def test_closed_count_in_dimension_5_works(self, capsys):
        assert run(capsys, "count", "cube:5", "1")[:2] == (0, "32\n")


class TestEhrhart:
    def test_tau4(self, capsys):
        code, out, _ = run(capsys, "ehrhart", "tau:4")
        data = json.loads(out)
        assert code == 0
        assert data["poly"] == ["1", "3", "3", "1"]
        assert data["hstar"] == [1, 4, 1]
        assert data["gorenstein_index"] == 2 and data["gorenstein_method"] == "symbolic"

    def test_cube(self, capsys):
        assert json.loads(run(capsys, "ehrhart", "cube:2")[1])["poly"] == ["1", "2", "1"]

    def test_point(self, capsys):
        assert json.loads(run(capsys, "ehrhart", "point")[1])["poly"] == ["1"]

    def test_non_lattice_reports_finite_range(self, capsys):
        code, out, err = run(capsys, "ehrhart", "points:0;1/2", "--tmax", "6")
        data = json.loads(out)
        assert code == 3
        assert data["gorenstein_method"] == "finite" and data["checked_range"][1] == 6
        assert "finite-range" in err


class TestExplore:
    def test_n2(self, capsys):
        code, out, _ = run(capsys, "explore", "2")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == ",".join(EXPLORE_COLUMNS)
        assert sorted(l.split(",")[0] for l in lines[1:]) == ["12", "21"]

    def test_n3(self, capsys):
        rows = json.loads(run(capsys, "--json", "explore", "3")[1])
        assert len(rows) == 6
        by_perm = {r["perm"]: r for r in rows}
        assert by_perm["231"]["affine_dim"] == 2 and by_perm["231"]["simplex"]
        assert by_perm["321"]["affine_dim"] == 1
        assert by_perm["123"]["orbit_size"] == 1
        # largest volume first
        vols = [r["normalized_volume"] or 0 for r in rows]
        assert vols == sorted(vols, reverse=True)

    def test_n4_Ln1_rows(self, capsys):
        rows = json.loads(run(capsys, "--json", "explore", "4")[1])
        by_perm = {r["perm"]: r for r in rows}
        for perm in ("2341", "3241"):
            assert by_perm[perm]["affine_dim"] == 3 and by_perm[perm]["simplex"]
            assert by_perm[perm]["orbit_index"] == 3

    def test_parallel_output_is_identical(self, capsys):
        a = run(capsys, "explore", "5")[1]
        b = run(capsys, "--jobs", "2", "explore", "5")[1]
        assert a == b

    def test_out_of_range(self, capsys):
        assert run(capsys, "explore", "8")[0] == 2
        assert run(capsys, "explore", "1")[0] == 2


class TestVerify:
    def test_entries_name_anchor_and_grid(self):
        report = run_verification(2, 1, 0)
        assert [e.id for e in report.entries] == CHECK_IDS
        assert all(e.anchor and e.grid for e in report.entries)
        assert report.passed == all(e.passed for e in report.entries)
        for e in report.entries:
            assert (e.witness is None) == e.passed

    def test_default_grid(self, capsys):
        code, out, _ = run(capsys, "--json", "verify", "--nmax", "5", "--tmax", "3", "--no-timings")
        data = json.loads(out)
        failed = [e["id"] for e in data["entries"] if not e["passed"]]
        # the shift-by-2 relation fails off the slices (n-1)*lambda in Z
        assert failed == ["real-gorenstein"]
        assert code == 1 and data["status"] == "FAIL"
        assert "timings" not in data

    def test_timings_kept_separate(self, capsys):
        data = json.loads(run(capsys, "--json", "verify", "--nmax", "2", "--tmax", "1")[1])
        assert set(data["timings"]) == {e["id"] for e in data["entries"]}
        assert all("wall_time" not in e for e in data["entries"])

    def test_byte_deterministic_across_jobs(self, capsys):
        args = ["verify", "--nmax", "3", "--tmax", "2", "--no-timings", "--json"]
        a = run(capsys, *args)[1]
        b = run(capsys, "--jobs", "3", *args)[1]
        assert a == b

    def test_corrupted_certificate(self, capsys):
        code, out, _ = run(
            capsys, "--json", "verify", "--only", "integral-equivalence", "--corrupt-certificate", "--no-timings"
        )
        entry = json.loads(out)["entries"][0]
        assert code == 1
        assert not entry["passed"] and "vertex sets do not correspond" in entry["witness"]

    def test_only_passing_checks(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "hstar-eulerian,reciprocity", "--no-timings")
        assert code == 0 and out.splitlines()[-1] == "PASS: 2/2 checks passed"

    def test_unknown_check(self, capsys):
        assert run(capsys, "verify", "--only", "nope")[0] == 2

    def test_bad_grid(self, capsys):
        assert run(capsys, "verify", "--nmax", "1")[0] == 2

    def test_config_defaults_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "grid.toml"
        cfg.write_text("nmax = 2\ntmax = 1\n")
        base = ["--json", "verify", "--only", "orbit-length", "--no-timings"]
        small = json.loads(run(capsys, "--config", str(cfg), *base)[1])
        override = json.loads(run(capsys, "--config", str(cfg), *base, "--nmax", "4")[1])
        direct = json.loads(run(capsys, *base, "--nmax", "4")[1])
        assert small["entries"][0]["checked"] == 1 + 2
        assert override == direct

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("nmax = 'five'\n")
        assert run(capsys, "--config", str(cfg), "verify")[0] == 2
        cfg.write_text("colour = 1\n")
        assert run(capsys, "--config", str(cfg), "verify")[0] == 2
        assert run(capsys, "--config", str(tmp_path / "missing.toml"), "verify")[0] == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "orbit.txt"
    code, out, _ = run(capsys, "--output", str(target), "sort", "213")
    assert code == 0 and out == ""
    assert target.read_text() == "213\n123\nindex 1\n"


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "stacksimplex.cli", "frobnicate"], capture_output=True)
    assert proc.returncode == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "stacksimplex.cli", "count", "tau:3", "5/2", "--translate", "tau"],
        capture_output=True,
        text=True,
    )
    assert (proc.returncode, proc.stdout) == (0, "12\n")
