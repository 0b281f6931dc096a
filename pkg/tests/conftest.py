"""Shared fixtures.

Every call to ``digest`` made anywhere in the suite is routed through a
checking wrapper: fragment lengths must sum to the carrier length and the
fragment count must equal (physical sites written 0) + 1.
"""

import importlib
import sys

import pytest

import dnamemory

_digest_mod = importlib.import_module("dnamemory.digest")

_original_digest = _digest_mod.digest
AUDIT = {"calls": 0}


def _audited_digest(assembly, enzyme=_digest_mod.ECORI):
    frags = _original_digest(assembly, enzyme)
    layout = assembly.layout
    zeros = sum(1 for s in layout.slots if assembly.bits[s.index] == "0")
    assert sum(frags.lengths) == layout.length, "fragment lengths do not sum to carrier length"
    assert len(frags.lengths) == zeros + 1, "fragment count != zero-digit sites + 1"
    AUDIT["calls"] += 1
    return frags


def _install():
    for name, mod in list(sys.modules.items()):
        if (name == "dnamemory" or name.startswith("dnamemory.")) and getattr(mod, "digest", None) is _original_digest:
            setattr(mod, "digest", _audited_digest)


_install()


@pytest.fixture
def digest_audit():
    return AUDIT


@pytest.fixture(scope="session")
def paper():
    return dnamemory.paper_layout(seed=0)


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with (passed, detail) before asserting."""
    def record(passed, detail=""):
        ACCEPTANCE[request.node.name] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    terminalreporter.write_line(f"digest calls audited for conservation: {AUDIT['calls']}")
