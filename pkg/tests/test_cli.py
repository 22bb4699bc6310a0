"""CLI behavior: golden outputs, exit codes, all six modes."""

import json
import subprocess
import sys
from pathlib import Path

from opkit.cli import main

ROOT = Path(__file__).resolve().parent.parent
DEMO_JOB = ROOT / "src" / "opkit" / "data" / "demo_job.json"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_job(tmp_path, data, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def demo_job_dict():
    return json.loads(DEMO_JOB.read_text())


class TestGolden:
    def test_plan_matches_golden(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--job", str(DEMO_JOB))
        assert code == 0
        assert out == (GOLDEN / "demo_plan.json").read_text()

    def test_certify_matches_golden(self, capsys):
        code, out, _ = run_cli(capsys, "certify", "--job", str(DEMO_JOB))
        assert code == 0
        assert out == (GOLDEN / "demo_certify.json").read_text()

    def test_reduce_symbolic_matches_golden(self, capsys, tmp_path):
        job = demo_job_dict()
        del job["instance"]
        del job["f"]
        path = write_job(tmp_path, job)
        code, out, _ = run_cli(capsys, "reduce", "--job", path)
        assert code == 0
        assert out == (GOLDEN / "demo_reduce_symbolic.json").read_text()

    def test_byte_stable_across_runs(self, capsys):
        _, first, _ = run_cli(capsys, "certify", "--job", str(DEMO_JOB))
        _, second, _ = run_cli(capsys, "certify", "--job", str(DEMO_JOB))
        assert first == second

    def test_golden_certificates_all_verified(self):
        report = json.loads((GOLDEN / "demo_certify.json").read_text())
        assert report["alpha_certificate"]["verified"]
        assert all(d["verified"] for d in report["dual_certificates"])
        assert report["alpha"] == [[0], [1, 2], [1, 3], [2, 3]]
        assert report["beta_min"] == [[0, 1], [0, 2], [0, 3], [1, 2, 3]]
        assert report["components"] == [[0], [1, 2, 3]]


class TestExitCodes:
    def test_parse_error_is_2(self, capsys, tmp_path):
        path = write_job(tmp_path, {"variables": ["x"], "factors": ["x +"]})
        code, _, err = run_cli(capsys, "plan", "--job", path)
        assert code == 2
        assert "input error" in err

    def test_missing_job_file_is_2(self, capsys):
        code, _, err = run_cli(capsys, "plan", "--job", "/no/such/file.json")
        assert code == 2

    def test_resource_cap_is_3(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": [f"x+{i}" for i in range(14)],
        })
        code, _, err = run_cli(capsys, "plan", "--job", path)
        assert code == 3
        assert "resource" in err

    def test_failed_verification_is_4(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": ["x", "x+1"],
            "certificate": {"alpha": [[0], [1]], "cofactors": ["1", "1"]},
        })
        code, out, _ = run_cli(capsys, "verify", "--job", path)
        assert code == 4
        report = json.loads(out)
        assert report["ok"] is False

    def test_no_decomposition_is_4(self, capsys, tmp_path):
        path = write_job(tmp_path, {"variables": ["x"], "factors": ["x"]})
        code, _, err = run_cli(capsys, "certify", "--job", path)
        assert code == 4
        assert "no decomposition" in err


class TestPlan:
    def test_invertible_constant_factor_shortcut(self, capsys, tmp_path):
        # a nonzero constant factor is invertible: the empty index set
        # appears in alpha and the cofactor is the exact inverse
        path = write_job(tmp_path, {"variables": ["x"], "factors": ["2"]})
        code, out, _ = run_cli(capsys, "certify", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["beta_min"] == [[0]]
        assert report["alpha_certificate"]["alpha"] == [[]]
        assert report["alpha_certificate"]["cofactors"][0]["Q"] == "1/2"
        assert report["alpha_certificate"]["verified"] is True

    def test_single_factor_reports_unavailable(self, capsys, tmp_path):
        path = write_job(tmp_path, {"variables": ["x"], "factors": ["x"]})
        code, out, _ = run_cli(capsys, "plan", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["decomposition_available"] is False
        assert report["alpha"] is None
        assert report["beta_min"] == []

    def test_two_coprime_factors(self, capsys, tmp_path):
        path = write_job(tmp_path, {"variables": ["x"], "factors": ["x", "x+1"]})
        code, out, _ = run_cli(capsys, "plan", "--job", path)
        report = json.loads(out)
        assert report["alpha"] == [[0], [1]]


class TestVerifyMode:
    def test_known_certificates_verify(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x", "y"],
            "factors": ["x+1", "x*y+y+1", "x", "x^2+x*y+x+y-1"],
            "dual_certificate": {
                "beta": [[0, 1], [0, 2], [0, 3], [1, 2, 3]],
                "cofactors": [["-y", "1"],
                              ["-(x-1)", "x"],
                              ["x+y", "-1"],
                              ["1/2", "1/2*(x+1)", "-1/2"]],
            },
        })
        code, out, _ = run_cli(capsys, "verify", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["ok"] is True
        assert report["checks"][0]["residual"] == "0"

    def test_alpha_certificate_roundtrip(self, capsys, tmp_path):
        # feed the certify output back through verify
        code, out, _ = run_cli(capsys, "certify", "--job", str(DEMO_JOB))
        cert = json.loads(out)["alpha_certificate"]
        path = write_job(tmp_path, {
            "variables": ["x", "y"],
            "factors": ["x+1", "x*y+y+1", "x", "x^2+x*y+x+y-1"],
            "certificate": {
                "alpha": cert["alpha"],
                "cofactors": [c["Q"] for c in cert["cofactors"]],
            },
        })
        code, out, _ = run_cli(capsys, "verify", "--job", path)
        assert code == 0
        assert json.loads(out)["ok"] is True


class TestReduceMode:
    def test_demo_reduce_with_instance(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "--job", str(DEMO_JOB),
                               "--seed", "1")
        assert code == 0
        report = json.loads(out)
        assert report["f_in_range"] is True
        assert report["recombined_solves"] is True
        assert report["solution_sets_equal"] is True
        assert len(report["subproblem_solutions"]) == 4

    def test_seeded_runs_are_stable(self, capsys):
        _, a, _ = run_cli(capsys, "reduce", "--job", str(DEMO_JOB), "--seed", "5")
        _, b, _ = run_cli(capsys, "reduce", "--job", str(DEMO_JOB), "--seed", "5")
        assert a == b

    def test_out_of_range_f_reported(self, capsys, tmp_path):
        # D = diag(0, 1): x has range spanned by e1; f = e0 is outside
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": ["x", "x+1"],
            "instance": {"kind": "matrices",
                         "generators": [[["0", "0"], ["0", "1"]]]},
            "f": ["1", "0"],
        })
        code, out, _ = run_cli(capsys, "reduce", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["f_in_range"] is False
        assert report["solution_sets_equal"] is None

    def test_univariate_lambdas_route(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "lambdas": ["1", "2"],
            "instance": {"kind": "matrices",
                         "generators": [[["-1", "0"], ["0", "-2"]]]},
            "f": "random-in-range",
        })
        code, out, _ = run_cli(capsys, "reduce", "--job", path, "--seed", "2")
        assert code == 0
        report = json.loads(out)
        assert report["lambdas"] == ["1", "2"]
        assert report["alpha_certificate"]["verified"] is True
        assert report["solution_sets_equal"] is True


class TestSymmetryMode:
    def test_diagonal_instance(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "lambdas": ["1", "2"],
            "instance": {"kind": "matrices",
                         "generators": [[["-1", "0"], ["0", "-2"]]]},
        })
        code, out, _ = run_cli(capsys, "symmetry", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["operator_kernel_dim"] == 2
        assert report["generation"]["equal"] is True
        assert all(d["identities_hold"] for d in report["decompositions"])

    def test_explicit_symmetry_matrix(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "lambdas": ["1", "2"],
            "instance": {"kind": "matrices",
                         "generators": [[["-1", "0"], ["0", "-2"]]]},
            "symmetry": [["2", "0"], ["0", "5"]],
        })
        code, out, _ = run_cli(capsys, "symmetry", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["decompositions"][0]["reconstructions_hold"]


class TestSystemMode:
    def test_consistent_system(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": ["x+1", "x+1"],
            "constraints": ["x"],
            "instance": {"kind": "matrices",
                         "generators": [[["0", "1", "0"],
                                         ["0", "0", "2"],
                                         ["0", "0", "0"]]]},
            "f": ["11", "14", "3"],
            "g": [["2", "6", "0"]],
        })
        # f, g derived from u = (1,2,3): P = (D+1)^2, R = D
        code, out, _ = run_cli(capsys, "system", "--job", path)
        assert code == 0
        report = json.loads(out)
        assert report["certificate_found"] is True
        assert report["certificate"]["verified"] is True
        assert report["integrability"]["ok"] is True
        assert report["round_trips"]["recombined_solves_system"] is True
        assert report["round_trips"]["FB_is_identity_on_parts"] is True

    def test_inconsistent_data_is_4(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": ["x+1", "x+1"],
            "constraints": ["x"],
            "instance": {"kind": "matrices",
                         "generators": [[["0", "1", "0"],
                                         ["0", "0", "2"],
                                         ["0", "0", "0"]]]},
            "f": ["11", "14", "3"],
            "g": [["9", "9", "9"]],
        })
        code, out, _ = run_cli(capsys, "system", "--job", path)
        assert code == 4
        report = json.loads(out)
        assert report["integrability"]["ok"] is False

    def test_absent_certificate_is_4(self, capsys, tmp_path):
        path = write_job(tmp_path, {
            "variables": ["x"],
            "factors": ["x+1", "x+1"],
            "constraints": ["(x+1)^2"],
        })
        code, out, _ = run_cli(capsys, "system", "--job", path)
        assert code == 4
        assert json.loads(out)["certificate_found"] is False


class TestHuman:
    def test_human_rendering(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--job", str(DEMO_JOB), "--human")
        assert code == 0
        assert out.startswith("mode: plan")
        assert "decomposition_available: True" in out


class TestConsoleScript:
    def test_entry_point_runs(self):
        result = subprocess.run(
            [sys.executable, "-m", "opkit.cli", "plan", "--job", str(DEMO_JOB)],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert json.loads(result.stdout)["ok"] is True
