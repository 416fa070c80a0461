"""Smoke test for the Python bindings.

Build with `cargo build --release -p ffspecial-py` and copy
target/release/libffspecial_py.so next to this file as ffspecial_py.so.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ffspecial_py as ff


def main():
    print("ffspecial", ff.version())

    assert ff.q_poly(3, [1], 1) == "t_1 - t"
    assert ff.power_sum(2, [], 1, 0) == "1 + O(theta^-40)"
    assert ff.canonical_series("1 + theta^2", 3) == "theta^2 + 1"

    config = {
        "schema": "ffspecial.config/1",
        "field": {"p": 2},
        "precision": {"v_floor": 30},
        "task": "thm11",
        "payload": {"array": [{"u": [1], "s": 1}]},
    }
    report = json.loads(ff.run_task(json.dumps(config)))
    assert report["status"] == "pass", report
    print("thm11 residual", report["checks"][0]["residual"])

    try:
        ff.run_task('{"schema": "nope"}')
    except ValueError as e:
        print("bad config rejected:", e)
    else:
        raise AssertionError("bad config accepted")

    a = ff.selftest(seed=3, only=[2, 4, 8])
    b = ff.selftest(seed=3, only=[2, 4, 8])
    assert a == b
    for c in json.loads(a)["criteria"]:
        print("criterion", c["id"], c["status"])
        assert c["status"] == "pass"
    print("ok")


if __name__ == "__main__":
    main()
