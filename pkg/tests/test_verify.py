"""Tests for the acceptance suites."""

import pytest

from formscheme import config
from formscheme.errors import InvalidInput
from formscheme.verify import SUITES, prime_powers, run_suite


class TestRunSuite:
    """run_suite reports."""

    def test_qnum_suite_passes(self):
        """The F-number suite is clean on a small grid."""
        report = run_suite("qnum", max_m=2, max_q=3, seed=0)
        assert report["passed"]
        assert report["suite"] == "qnum"
        assert all(c["status"] == "PASS" for c in report["checks"])
        assert report["checks"][0]["name"] == "f_matrix m=4 q=2"

    def test_scheme_suite_passes(self):
        """Eigenvalue identities, census and oracle for m <= 2, q <= 3."""
        report = run_suite("scheme", max_m=2, max_q=3, seed=0)
        assert report["passed"]
        assert any(c["name"] == "oracle m=2 q=3" for c in report["checks"])

    def test_cap_turns_into_skip(self):
        """Checks stopped by a cap are skipped, not failed."""
        saved = dict(config.settings())
        try:
            config.configure({**saved, "enumeration_cap": 4})
            report = run_suite("scheme", max_m=2, max_q=2, seed=0)
        finally:
            config.configure(saved)
        statuses = {c["name"]: c["status"] for c in report["checks"]}
        assert statuses["census m=2 q=2"] == "SKIP"
        assert report["skipped"] >= 1
        assert report["passed"]

    def test_strict_run_fails_on_skips(self):
        """In strict mode a check skipped at a cap fails the run."""
        saved = dict(config.settings())
        try:
            config.configure({**saved, "enumeration_cap": 4})
            report = run_suite("scheme", max_m=2, max_q=2, seed=0, strict=True)
        finally:
            config.configure(saved)
        assert report["strict"] is True
        assert report["skipped"] >= 1
        assert not any(c["status"] == "FAIL" for c in report["checks"])
        assert report["passed"] is False

    def test_clean_strict_run_passes(self):
        """Without skips, strict mode changes nothing."""
        report = run_suite("qnum", max_m=2, max_q=2, seed=0, strict=True)
        assert report["skipped"] == 0
        assert report["passed"] is True

    def test_unknown_suite(self):
        """Suite names are checked."""
        with pytest.raises(InvalidInput):
            run_suite("everything")

    def test_bad_grid(self):
        """max_q must name at least one field."""
        with pytest.raises(InvalidInput):
            run_suite("qnum", max_q=1)

    def test_suite_names(self):
        """Five suites plus all."""
        assert SUITES == ("qnum", "scheme", "codesets", "construct", "rmcodes")


class TestGrid:
    """Field orders on the grid."""

    def test_prime_powers(self):
        """Prime powers up to 9."""
        assert prime_powers(9) == [2, 3, 4, 5, 7, 8, 9]
