import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from flagrock.rootsys import build_parabolic, valid_parameters  # noqa: E402

ALL_KEYS = list(valid_parameters(6))
NONDEGENERATE = [k for k in ALL_KEYS if k[0] > k[2]]


@pytest.fixture(params=ALL_KEYS, ids=lambda k: "U({},{})_p1={}".format(*k))
def any_pd(request):
    return build_parabolic(*request.param)


ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, secs = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s)")
