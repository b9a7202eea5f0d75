import numpy as np
import pytest

from gsm_scramble.signals import example_speech, synthetic_vowel


@pytest.fixture(scope="session")
def speech():
    return example_speech()


@pytest.fixture(scope="session")
def vowel():
    return synthetic_vowel(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


KEY = bytes.fromhex("133457799BBCDFF1")


@pytest.fixture
def key():
    return KEY


# Filled by test_acceptance; printed once at the end of the run.
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s[1:].split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
