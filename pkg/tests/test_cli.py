import json
import os

import pytest

from hyperoct import cli
from hyperoct.rings import QQ


def run_cli(args):
    return cli.main(args)


def test_builtin_job_full_pipeline(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(["compute", "--algebra", "ground", "--ring", "q",
                    "--pipeline", "full", "--max-object", "0..1",
                    "--max-degree", "1", "--verify", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["betti"]["full"]["N=1"] == [1, 0]
    assert report["stabilization"]["degree 0"]["stable"]
    assert report["verifications"]["N=1/dsquared[full]"] == "pass"
    assert any("truncated" in f for f in report["flags"])


def test_reports_are_byte_stable(tmp_path):
    texts = []
    for tag in ("a", "b"):
        out = tmp_path / f"report_{tag}.json"
        code = run_cli(["compute", "--algebra", "c2", "--ring", "q",
                        "--pipeline", "epi", "--max-object", "1",
                        "--max-degree", "1", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        texts.append(cli.canonical_report_text(report))
    assert texts[0] == texts[1]


def test_reports_byte_stable_across_processes(tmp_path):
    # fresh interpreters with different hash seeds must produce the same
    # canonical bytes
    import subprocess
    import sys
    texts = []
    for seed in ("1", "42"):
        out = tmp_path / f"r_{seed}.json"
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "hyperoct.cli", "compute", "--algebra",
             "c3", "--ring", "q", "--pipeline", "slominska", "--max-object",
             "0..1", "--max-degree", "1", "--out", str(out)],
            env=env, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        report = json.loads(out.read_text())
        texts.append(cli.canonical_report_text(report))
    assert texts[0] == texts[1]


def test_cache_gives_identical_results(tmp_path):
    outs = []
    for tag, cache in (("plain", None), ("cold", "cache"), ("warm", "cache")):
        out = tmp_path / f"r_{tag}.json"
        args = ["compute", "--algebra", "c3", "--ring", "q",
                "--pipeline", "reduced", "--max-object", "1",
                "--max-degree", "0", "--out", str(out)]
        if cache:
            args += ["--cache-dir", str(tmp_path / cache)]
        assert run_cli(args) == 0
        outs.append(cli.canonical_report_text(json.loads(out.read_text())))
    assert outs[0] == outs[1] == outs[2]
    cache_dir = tmp_path / "cache"
    assert any(name.endswith(".json") for name in os.listdir(cache_dir))


def test_custom_algebra_spec(tmp_path):
    # the sign algebra: two-element group over the rationals
    spec = {
        "dim": 2,
        "basis": ["e", "s"],
        "structure": [
            [0, 0, 0, 1, 1], [0, 1, 1, 1, 1],
            [1, 0, 1, 1, 1], [1, 1, 0, 1, 1],
        ],
        "unit": [1, 0],
        "involution": [[1, 0], [0, 1]],
        "augmentation": [1, 1],
    }
    path = tmp_path / "c2.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "r.json"
    code = run_cli(["compute", "--algebra", str(path), "--ring", "q",
                    "--pipeline", "epi", "--max-object", "1",
                    "--max-degree", "1", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["betti"]["epi"]["N=1"] == [1, 0]
    assert report["verifications"]["N=1/dsquared[epi]"] == "skipped"


def test_malformed_specs_name_the_field(tmp_path):
    with pytest.raises(cli.SpecError, match="dim"):
        cli.algebra_from_spec({"structure": []}, QQ)
    with pytest.raises(cli.SpecError, match=r"structure\[0\]"):
        cli.algebra_from_spec(
            {"dim": 1, "structure": [[0, 0, 0, 1, 0]], "unit": [1],
             "involution": [[1]]}, QQ)
    with pytest.raises(cli.SpecError, match="unit"):
        cli.algebra_from_spec(
            {"dim": 1, "structure": [[0, 0, 0, 1, 1]], "involution": [[1]]}, QQ)
    with pytest.raises(cli.SpecError, match="ring"):
        cli.JobSpec("ground", "f6", "full", [0], 0)
    with pytest.raises(cli.SpecError, match="pipeline"):
        cli.JobSpec("ground", "f2", "slominska", [0], 0)
    with pytest.raises(cli.SpecError, match="coefficients"):
        cli.JobSpec("ground", "q", "full", [0], 0, coefficients="z/2")


def test_non_prime_ring_exits_with_error(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = run_cli(["compute", "--algebra", "ground", "--ring", "f4",
                    "--pipeline", "full", "--max-object", "0",
                    "--max-degree", "0", "--out", str(out)])
    assert code == 2
    assert "not prime" in capsys.readouterr().err


def test_resource_cap_produces_partial_report(tmp_path):
    out = tmp_path / "r.json"
    code = run_cli(["compute", "--algebra", "c2", "--ring", "q",
                    "--pipeline", "reduced", "--max-object", "2",
                    "--max-degree", "2", "--max-generators", "100000",
                    "--out", str(out)])
    assert code == 3
    report = json.loads(out.read_text())
    entry = report["errors"]["N=2"]
    assert entry["error"] == "resource cap exceeded"
    assert entry["projected_generators"] > 100000


def test_coefficients_and_uct(tmp_path):
    out = tmp_path / "r.json"
    code = run_cli(["compute", "--algebra", "c3", "--ring", "z",
                    "--pipeline", "epi", "--max-object", "1",
                    "--max-degree", "1", "--coefficients", "z/2",
                    "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["verifications"]["N=1/uct[p=2]"] == "pass"
    assert report["coefficients"]["N=1"]["components"][0]["ring"] == "F2"
    assert report["torsion"]["epi"]["N=1"]


def test_verify_category_command():
    assert run_cli(["verify-category", "--depth", "1", "--samples", "100"]) == 0


def test_slominska_pipeline_via_cli(tmp_path):
    out = tmp_path / "r.json"
    code = run_cli(["compute", "--algebra", "c2", "--ring", "q",
                    "--pipeline", "slominska", "--max-object", "1",
                    "--max-degree", "1", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["betti"]["slominska"]["N=1"] == [1, 0]


def test_parse_max_object():
    assert cli._parse_max_object("2") == [2]
    assert cli._parse_max_object("0..2") == [0, 1, 2]
    with pytest.raises(cli.SpecError):
        cli._parse_max_object("2..0")
    with pytest.raises(cli.SpecError):
        cli._parse_max_object("x")


def test_parse_coefficients():
    m = cli.parse_coefficients("z+z/2")
    assert m.free_rank == 1 and m.torsion == (2,)
    with pytest.raises(cli.SpecError):
        cli.parse_coefficients("z/x")
