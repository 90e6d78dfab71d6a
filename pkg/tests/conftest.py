import time
from pathlib import Path

import numpy as np
import pytest

from eahn import codec

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def english() -> bytes:
    return (FIXTURES / "english.txt").read_bytes()


class BoundRecorder:
    """Checks the per-context Huffman bound on every codebook the offline encoder builds."""

    SLACK = 1e-9

    def __init__(self):
        self.runs = 0
        self.contexts = 0
        self.violations: list[str] = []

    def check(self, counts, starts, ends, lengths):
        self.runs += 1
        sizes = ends - starts
        multi = sizes >= 2
        if not multi.any():
            return
        f = counts.astype(np.float64)
        group = np.repeat(np.arange(starts.size), sizes)
        n = np.bincount(group, weights=f, minlength=starts.size)
        nf = n[group]
        e = np.bincount(group, weights=f * (np.log(nf) - np.log(f)), minlength=starts.size) / n / np.log(2)
        r = np.bincount(group, weights=f * lengths, minlength=starts.size) / n
        e, r = e[multi], r[multi]
        self.contexts += int(multi.sum())
        bad = np.flatnonzero((r < e - self.SLACK) | (r > e + 1 + self.SLACK))
        for i in bad[:5].tolist():
            self.violations.append(f"run {self.runs}: E={e[i]:.9f} R={r[i]:.9f}")
        assert not bad.size, self.violations[-1]


RECORDER = BoundRecorder()


@pytest.fixture(scope="session", autouse=True)
def _bound_recorder():
    """Wraps the encoder's code assignment so every run in the suite is bound-checked."""
    original = codec._assign_codes

    def checked(counts, starts, ends):
        lengths, values = original(counts, starts, ends)
        RECORDER.check(counts, starts, ends, lengths)
        return lengths, values

    codec._assign_codes = checked
    yield RECORDER
    codec._assign_codes = original


SUITE_BUDGET_S = 300.0
_START = time.monotonic()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        VERDICTS = []
    elapsed = time.monotonic() - _START
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)
        ok = elapsed <= SUITE_BUDGET_S
        terminalreporter.write_line(
            f"[acceptance 10] {'PASS' if ok else 'FAIL'}  total suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)"
        )


def pytest_sessionfinish(session, exitstatus):
    if time.monotonic() - _START > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
