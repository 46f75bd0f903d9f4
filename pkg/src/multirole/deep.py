"""Support for very deep derivations.

The constructions recurse along derivation branches, and branches of height
10^4 and beyond must work.  Rather than threading explicit stacks through
every case of the cut engine, deep calls run in a worker thread with a large
stack and a raised interpreter recursion limit.  `MULTIROLE_RECURSION_LIMIT`
overrides the limit.
"""

from __future__ import annotations

import os
import sys
import threading

DEFAULT_LIMIT = 200_000
DEEP_THRESHOLD = 900  # below this, plain recursion fits the default C stack

_state = threading.local()


def recursion_limit() -> int:
    raw = os.environ.get("MULTIROLE_RECURSION_LIMIT", "")
    try:
        return max(int(raw), 1000)
    except ValueError:
        return DEFAULT_LIMIT


def run_deep(fn, *args, **kwargs):
    """Run fn in a big-stack worker thread; reentrant calls run inline."""
    if getattr(_state, "active", False):
        return fn(*args, **kwargs)

    box: dict = {}

    def worker():
        _state.active = True
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as e:  # noqa: BLE001 - propagated to the caller
            box["error"] = e
        finally:
            _state.active = False

    old_stack = threading.stack_size()
    for size in (512 << 20, 256 << 20, 64 << 20):
        try:
            threading.stack_size(size)
            break
        except (ValueError, OverflowError, RuntimeError):
            continue
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(recursion_limit(), old_limit))
    try:
        t = threading.Thread(target=worker, name="multirole-deep")
        t.start()
        t.join()
    finally:
        sys.setrecursionlimit(old_limit)
        threading.stack_size(old_stack)
    if "error" in box:
        raise box["error"]
    return box["value"]


def maybe_deep(estimated_depth: int, fn, *args, **kwargs):
    if estimated_depth > DEEP_THRESHOLD:
        return run_deep(fn, *args, **kwargs)
    return fn(*args, **kwargs)
