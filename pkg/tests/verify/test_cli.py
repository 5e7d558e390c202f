"""Tests for the `dabru` command line driver."""
import json

import pytest

from dabruhat.cli import THREADS_ENV, RunConfig, main
from dabruhat.errors import ConfigError
from dabruhat.utils import parse_args

PI_D = "pi{l=1,nu=[0],k=0} t[0] e"
ROOT = "b[1; r=0; n=1]"


def _run(tmp_path, *argv):
    path = tmp_path / "out.jsonl"
    code = main(list(argv) + ["--output", str(path), "--no-progress"])
    rows = [json.loads(line) for line in path.read_text().splitlines()] if path.exists() else []
    return code, rows


class TestRunConfig:
    """Test flag and environment handling."""

    def test_threads_from_environment(self):
        """DABRU_THREADS sets the worker count."""
        args = parse_args(["verify", "height"])
        assert RunConfig.from_args(args, {THREADS_ENV: "3"}).threads == 3

    def test_flag_overrides_environment(self):
        """--threads wins over DABRU_THREADS."""
        args = parse_args(["verify", "height", "--threads", "2"])
        assert RunConfig.from_args(args, {THREADS_ENV: "5"}).threads == 2

    @pytest.mark.parametrize("value", ["zero", "0", "-1"])
    def test_bad_environment(self, value):
        """Non-positive or non-integer worker counts are configuration errors."""
        args = parse_args(["verify", "height"])
        with pytest.raises(ConfigError):
            RunConfig.from_args(args, {THREADS_ENV: value})

    def test_budget_needs_both_bounds(self):
        """--budget-r without --budget-n is refused."""
        args = parse_args(["cover", "--x", PI_D, "--budget-r", "2"])
        with pytest.raises(ConfigError):
            RunConfig.from_args(args, {}).budget()


class TestSingleCommands:
    """Test the one-record commands on pi^d and beta[0, 1]."""

    def test_ell(self, tmp_path):
        """pi^d has length zero."""
        code, rows = _run(tmp_path, "ell", "--x", PI_D)
        assert code == 0
        assert rows[0]["outputs"]["ell"] == 0
        assert rows[-1]["summary"] is True

    def test_edge(self, tmp_path):
        """The edge points up."""
        code, rows = _run(tmp_path, "edge", "--x", PI_D, "--root", ROOT)
        assert code == 0
        assert rows[0]["outputs"]["direction"] == "up"
        assert rows[0]["outputs"]["target"] == "pi{l=1,nu=[2],k=0} t[0] s1"

    def test_invpp(self, tmp_path):
        """Inv++ has five roots."""
        code, rows = _run(tmp_path, "invpp", "--x", PI_D, "--root", ROOT)
        assert code == 0
        assert rows[0]["outputs"]["count"] == 5
        assert ROOT in rows[0]["outputs"]["roots"]

    def test_cover(self, tmp_path):
        """The edge is not a cover."""
        code, rows = _run(tmp_path, "cover", "--x", PI_D, "--root", ROOT)
        assert code == 0
        assert rows[0]["outputs"]["is_cover"] is False

    def test_chain(self, tmp_path):
        """The edge refines into three steps."""
        code, rows = _run(tmp_path, "chain", "--x", PI_D, "--root", ROOT)
        assert code == 0
        assert len(rows[0]["outputs"]["steps"]) == 3

    def test_leq_finite(self, tmp_path):
        """Over finite A2, e <= s1."""
        code, rows = _run(
            tmp_path, "leq", "--ground", "A2", "--finite-ground",
            "--x", "pi{nu=[0,0]} e", "--y", "pi{nu=[0,0]} s1",
        )
        assert code == 0
        assert rows[0]["outputs"]["verdict"] == "yes"


class TestExitCodes:
    """Test the mapping of errors to exit codes."""

    def test_parse_error(self, tmp_path):
        """Malformed elements exit with 2."""
        code, rows = _run(tmp_path, "ell", "--x", "pi{oops}")
        assert code == 2
        assert rows == []

    def test_missing_flag(self, tmp_path):
        """leq without --y exits with 2."""
        code, _ = _run(tmp_path, "leq", "--x", PI_D)
        assert code == 2

    def test_chain_on_cover(self, tmp_path):
        """Shortening a cover is a usage error."""
        code, _ = _run(tmp_path, "chain", "--x", PI_D, "--root", "b[1; r=0; n=0]")
        assert code == 2

    def test_bad_environment(self, tmp_path, monkeypatch):
        """An invalid DABRU_THREADS exits with 2."""
        monkeypatch.setenv(THREADS_ENV, "many")
        code, _ = _run(tmp_path, "verify", "height")
        assert code == 2

    def test_negative_samples(self, tmp_path):
        """--samples must be non-negative."""
        code, _ = _run(tmp_path, "verify", "height", "--samples", "-1")
        assert code == 2

    def test_rotation_on_finite_ground(self, tmp_path):
        """verify rotation needs an affine ground."""
        code, _ = _run(tmp_path, "verify", "rotation", "--finite-ground")
        assert code == 2

    def test_verify_height(self, tmp_path):
        """A clean campaign exits with 0 and reports its tally."""
        code, rows = _run(tmp_path, "verify", "height")
        assert code == 0
        assert rows[-1]["line"] == "7/7 pass"
