"""Every call to ``all_anchors`` made anywhere in the suite is checked
against the ternary-tree bound, so a violation fails whichever test hit it."""
from __future__ import annotations

import functools

import portmatch
import portmatch.anchor_enum as anchor_enum

_original = anchor_enum.all_anchors
CALLS: list[tuple[int, int]] = []  # (w, output length)


@functools.wraps(_original)
def _checked_all_anchors(g, root, w, d=None):
    out = _original(g, root, w, d)
    CALLS.append((w, len(out)))
    bound = anchor_enum.anchor_bound(w)
    assert len(out) <= bound, f"all_anchors returned {len(out)} lists for w={w}, bound {bound}"
    return out


anchor_enum.all_anchors = _checked_all_anchors
portmatch.all_anchors = _checked_all_anchors


#: one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
