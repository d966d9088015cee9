import json
import os
import subprocess
import sys

import pytest

from pspin.cli import main
from pspin.experiments import CSV_HEADER


CONFIG = """\
p = [2.0]
alpha = [0.25]
n1 = [24]
r = 0.25
trials = 4
seed = 5

[policy]
rule = "first-improvement"
"""


@pytest.fixture
def patterns_file(tmp_path):
    out = tmp_path / "pats.pspn"
    assert main(["gen-patterns", "--n1", "40", "--n2", "4", "--seed", "11",
                 "--out", str(out)]) == 0
    return out


class TestBasicCommands:
    def test_gen_writes_manifest(self, patterns_file):
        with open(str(patterns_file) + ".manifest.json") as fh:
            manifest = json.load(fh)
        assert manifest["command"] == "gen-patterns"
        assert manifest["outputs"] == [os.path.basename(str(patterns_file))]
        assert manifest["tool_version"]

    def test_energy(self, patterns_file, capsys):
        assert main(["energy", "--patterns", str(patterns_file), "--p", "2"]) == 0
        out = capsys.readouterr().out
        assert "H(pattern 0)" in out

    def test_descend(self, patterns_file, tmp_path, capsys):
        out_dir = tmp_path / "d"
        code = main([
            "descend", "--patterns", str(patterns_file), "--p", "2",
            "--r", "0.2", "--seed", "3", "--out", str(out_dir),
        ])
        assert code == 0
        summary = json.loads((out_dir / "descend.json").read_text())
        assert summary["converged"] is True
        assert (out_dir / "descend.manifest.json").exists()

    def test_scan(self, patterns_file, tmp_path):
        out_dir = tmp_path / "s"
        code = main([
            "scan", "--patterns", str(patterns_file), "--p", "2",
            "--radii", "0,2,4", "--mode", "exhaustive", "--out", str(out_dir),
        ])
        assert code == 0
        lines = (out_dir / "scan.csv").read_text().splitlines()
        assert lines[0] == "mu,radius,min_gap,mode,samples,seed"
        assert len(lines) == 4

    def test_prior(self, tmp_path, capsys):
        out_dir = tmp_path / "p"
        code = main([
            "prior", "--family", "gaussian", "--p", "2", "--psi-r", "2",
            "--out", str(out_dir),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "limit 0.5" in out
        lines = (out_dir / "prior.csv").read_text().splitlines()
        assert lines[0] == "x,u,ratio"


class TestExitCodes:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_config_parse_failure_exits_3(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("p = [2.0\n")
        assert main(["sweep", "--config", str(bad), "--out", str(tmp_path / "o")]) == 3

    def test_missing_config_key_exits_3(self, tmp_path):
        bad = tmp_path / "nokeys.toml"
        bad.write_text("r = 0.1\n")
        assert main(["sweep", "--config", str(bad), "--out", str(tmp_path / "o")]) == 3

    def test_budget_error_exits_4(self, patterns_file, tmp_path):
        code = main([
            "scan", "--patterns", str(patterns_file), "--p", "2",
            "--radii", "17", "--mode", "exhaustive", "--out", str(tmp_path / "s"),
        ])
        assert code == 4

    def test_bad_pattern_file_exits_1(self, tmp_path):
        bad = tmp_path / "b.pspn"
        bad.write_bytes(b"NOPE\x01" + b"\x00" * 24)
        assert main(["energy", "--patterns", str(bad), "--p", "2"]) == 1


class TestSweepDeterminism:
    def _run(self, tmp_path, name, threads, config_text=CONFIG, seed=None):
        cfg = tmp_path / f"{name}.toml"
        cfg.write_text(config_text)
        out_dir = tmp_path / name
        argv = ["sweep", "--config", str(cfg), "--out", str(out_dir),
                "--threads", str(threads)]
        if seed is not None:
            argv += ["--seed", str(seed)]
        assert main(argv) == 0
        return (out_dir / "sweep.csv").read_bytes()

    def test_byte_identical_across_threads(self, tmp_path):
        ref = self._run(tmp_path, "t1", 1)
        assert self._run(tmp_path, "t4", 4) == ref
        assert self._run(tmp_path, "t8", 8) == ref

    def test_schema_and_manifest(self, tmp_path):
        self._run(tmp_path, "schema", 2)
        csv_lines = (tmp_path / "schema" / "sweep.csv").read_text().splitlines()
        assert csv_lines[0] == CSV_HEADER
        manifest = json.loads((tmp_path / "schema" / "sweep.manifest.json").read_text())
        assert manifest["outputs"] == ["sweep.csv"]
        assert manifest["master_seed"] == 5

    def test_digest_stable_under_key_reordering(self, tmp_path):
        reordered = """\
seed = 5
trials = 4
r = 0.25
n1 = [24]
alpha = [0.25]
p = [2.0]

[policy]
rule = "first-improvement"
"""
        self._run(tmp_path, "a", 1)
        self._run(tmp_path, "b", 1, config_text=reordered)
        da = json.loads((tmp_path / "a" / "sweep.manifest.json").read_text())
        db = json.loads((tmp_path / "b" / "sweep.manifest.json").read_text())
        assert da["config_digest"] == db["config_digest"]

    def test_seed_flag_overrides_file(self, tmp_path):
        ref = self._run(tmp_path, "s5", 1)
        other = self._run(tmp_path, "s9", 1, seed=9)
        assert other != ref

    def test_probe_command(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text(CONFIG)
        out_dir = tmp_path / "probe"
        assert main(["probe", "--config", str(cfg), "--out", str(out_dir)]) == 0
        lines = (out_dir / "probe.csv").read_text().splitlines()
        assert lines[0] == CSV_HEADER
        # probes start exactly at the pattern
        assert all(line.split(",")[8] == "0" for line in lines[1:])

    def test_trials_flag_overrides_file(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text(CONFIG)
        out_dir = tmp_path / "tr"
        assert main(["sweep", "--config", str(cfg), "--out", str(out_dir),
                     "--trials", "2"]) == 0
        lines = (out_dir / "sweep.csv").read_text().splitlines()
        assert len(lines) == 3  # header + 2 trials

    def test_barriers_flag(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text(CONFIG)
        out_dir = tmp_path / "bar"
        assert main(["sweep", "--config", str(cfg), "--out", str(out_dir),
                     "--barriers"]) == 0
        barrier = (out_dir / "sweep-barriers.csv").read_text().splitlines()
        assert barrier[0].startswith("p,q,alpha,n1,n2,mu,radius,min_gap")
        manifest = json.loads((out_dir / "sweep.manifest.json").read_text())
        assert set(manifest["outputs"]) == {"sweep.csv", "sweep-barriers.csv"}


class TestEnvSeed:
    def test_pspin_seed_env(self, tmp_path, monkeypatch):
        out = tmp_path / "env.pspn"
        monkeypatch.setenv("PSPIN_SEED", "123")
        assert main(["gen-patterns", "--n1", "32", "--n2", "2", "--out", str(out)]) == 0
        with open(str(out) + ".manifest.json") as fh:
            manifest = json.load(fh)
        assert manifest["master_seed"] == 123


class TestVerifyCommand:
    def test_fast_verify_green(self, tmp_path, capsys):
        code = main(["verify", "--seed", "1", "--fast", "--out", str(tmp_path / "v")])
        assert code == 0
        out = capsys.readouterr().out
        assert "checks pass" in out
        report = json.loads((tmp_path / "v" / "verify.json").read_text())
        assert report["failed"] == []

    def test_console_script_entrypoint(self):
        proc = subprocess.run(
            [sys.executable, "-m", "pspin.cli", "--version"],
            capture_output=True, text=True,
        )
        # argparse --version exits 0 and prints the version
        assert proc.returncode == 0
        assert proc.stdout.strip()
