import json
import subprocess
import sys

import pytest

from gradedqs.cli import parse_command
from gradedqs.words import ElemGen, ElemWord
from gradedqs.poly import poly


def run(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "gradedqs", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=120,
    )
    return proc.returncode, proc.stdout, proc.stderr


class TestParsing:
    def test_verify(self):
        cmd = parse_command(["verify", "splitting", "--case", "linear", "--n", "3", "--trials", "200", "--seed", "7"])
        assert (cmd.verb, cmd.target, cmd.n, cmd.trials, cmd.seed) == ("verify", "splitting", 3, 200, 7)

    def test_patch(self):
        cmd = parse_command(["patch", "--case", "symplectic", "--n", "6", "--primes", "2,3", "--input", "w.json"])
        assert cmd.verb == "patch" and list(cmd.primes) == [2, 3] and cmd.input == "w.json"

    def test_missing_value(self):
        with pytest.raises(SystemExit) as exc:
            parse_command(["verify", "splitting", "--n"])
        assert exc.value.code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            parse_command(["verify", "splitting", "--frobnicate"])
        assert exc.value.code == 2


class TestExitCodes:
    def test_pass(self):
        code, out, _ = run("verify", "splitting", "--trials", "200", "--seed", "7", "--json")
        report = json.loads(out)
        assert code == 0 and report["verdict"] == "pass" and report["failures"] == []

    def test_suite_failure(self):
        # exponent 0 makes b_i = c_i, so the conjugate cores keep their denominators
        code, out, _ = run("verify", "telescoping", "--dilation-exponent", "0", "--trials", "3", "--json")
        report = json.loads(out)
        assert code == 1 and report["verdict"] == "fail" and report["failures"]

    def test_usage_error_names_flag(self):
        code, _, err = run("verify", "splitting", "--bogus")
        assert code == 2 and "--bogus" in err

    def test_orthogonality_violation(self):
        code, _, err = run("factor", "transvection", "--vector", "1, x, 0")
        assert code == 3 and "OrthogonalityViolation" in err

    def test_malformed_input(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, _ = run("patch", "--input", str(bad))
        assert code == 3

    def test_not_unimodular(self):
        code, _, err = run("complete", "--row", "3,6", "--instance", "mod:3^2")
        assert code == 3 and "NotUnimodular" in err


class TestDeterminism:
    def test_byte_identical(self):
        args = ("verify", "rearrangement", "--trials", "20", "--seed", "3", "--json", "--no-timing")
        first, second = run(*args), run(*args)
        assert first[0] == 0 and first[1] == second[1]

    def test_seed_changes_inputs_not_verdict(self):
        a = run("verify", "splitting", "--trials", "10", "--seed", "1", "--json", "--no-timing")
        b = run("verify", "splitting", "--trials", "10", "--seed", "2", "--json", "--no-timing")
        assert a[0] == b[0] == 0


class TestVerbs:
    def test_patch_default_example(self):
        code, out, _ = run("patch", "--ring", "rat", "--primes", "2,3", "--json")
        data = json.loads(out)
        assert code == 0 and data["checked"] is True and len(data["factors"]) == 2

    def test_patch_word_input(self, tmp_path):
        x = poly("x", nvars=2)
        w = ElemWord.of([
            ElemGen.make("symplectic", 6, 1, 3, x),
            ElemGen.make("symplectic", 6, 2, 5, poly("x*y", nvars=2)),
        ])
        path = tmp_path / "w.json"
        path.write_text(json.dumps(w.to_json()))
        code, out, _ = run("patch", "--case", "symplectic", "--n", "6", "--vars", "2", "--primes", "2,3", "--input", str(path), "--json")
        data = json.loads(out)
        assert code == 0 and data["checked"] is True
        assert all("certificate" in f for f in data["factors"])

    def test_factor_split(self):
        code, out, _ = run("factor", "split", "--word", "1,2: 2 + x", "--json")
        gens = json.loads(out)["word"]["gens"]
        assert code == 0 and len(gens) == 2
        assert [g["arg"]["terms"] for g in gens] == [[[[0, 0], "2"]], [[[1, 0], "1"]]]

    def test_factor_normalize(self):
        code, out, _ = run("factor", "normalize", "--word", "1,2: 2; 1,3: x; 1,2: -2", "--json")
        assert code == 0 and json.loads(out)["checked"] is True

    def test_complete_examples(self):
        code, out, _ = run("complete", "--row", "2,3,4", "--instance", "fp:5", "--json")
        assert code == 0 and json.loads(out)["image"] == ["1", "0", "0"]
        code, out, _ = run("complete", "--row", "2,5", "--instance", "loc:3", "--json")
        assert code == 0 and len(json.loads(out)["word"]["gens"]) == 2

    def test_eval(self):
        code, out, _ = run("eval", "--poly", "2 + 3*x + x^2", "--at", "5")
        assert code == 0 and out.strip() == "2 + 15*x + 25*x^2"

    def test_verify_all(self):
        code, out, _ = run("verify", "all", "--trials", "2", "--no-timing")
        assert code == 0 and out.count(": pass") == 11
