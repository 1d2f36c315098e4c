"""Shared helpers for the test suite."""

from __future__ import annotations

import contextlib
import io
import re
from pathlib import Path

import pytest

from tangentcat.cli import main

DATA = Path(__file__).parent / "data"


def run_cli(argv):
    """Run the tgc entry point in-process, capturing stdout."""
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def scrub_timings(text):
    """Blank out the timings object so outputs can be compared byte-wise."""
    return re.sub(r'"timings_ms": \{[^{}]*\}', '"timings_ms": {}', text)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def workspace_path():
    return str(DATA / "figure1.tgc")
