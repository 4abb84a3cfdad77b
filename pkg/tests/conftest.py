import sys
import textwrap

import pytest

CHILD_OK = """
import json, sys
for line in sys.stdin:
    x = json.loads(line)["x"]
    f1 = sum(v * v for v in x)
    f2 = sum((v - 2.0) ** 2 for v in x)
    print(json.dumps({"f": [f1, f2]}), flush=True)
"""

CHILD_INF = """
import json, sys
for line in sys.stdin:
    x = json.loads(line)["x"]
    if x[0] < 0.0:
        print(json.dumps({"f": ["inf", 2.0]}), flush=True)
    else:
        print(json.dumps({"f": [x[0], 2.0]}), flush=True)
"""

CHILD_MALFORMED = """
import json, sys
count = 0
for line in sys.stdin:
    count += 1
    if count % 2 == 0:
        print("not json at all", flush=True)
    else:
        print(json.dumps({"f": [1.0, 1.0]}), flush=True)
"""

CHILD_ALWAYS_BAD = """
import sys
for line in sys.stdin:
    print("garbage", flush=True)
"""

CHILD_SLOW_PID = """
import json, os, sys, time
for line in sys.stdin:
    json.loads(line)
    time.sleep(0.05)
    print(json.dumps({"f": [float(os.getpid()), 0.0]}), flush=True)
"""


def _write_child(tmp_path, name, body):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body))
    return [sys.executable, str(path)]


@pytest.fixture
def child_cmd(tmp_path):
    def make(kind="ok"):
        bodies = {
            "ok": CHILD_OK,
            "inf": CHILD_INF,
            "malformed": CHILD_MALFORMED,
            "always_bad": CHILD_ALWAYS_BAD,
            "slow_pid": CHILD_SLOW_PID,
        }
        return _write_child(tmp_path, f"child_{kind}.py", bodies[kind])

    return make
