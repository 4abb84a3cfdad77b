"""Subprocess evaluator speaking a line-oriented JSON protocol.

Each request is one UTF-8 line ``{"x": [...]}`` on the child's stdin; the
child answers with one line ``{"f": [...]}`` whose entries are numbers or the
strings "inf"/"-inf". Every worker thread gets its own child process, so
non-reentrant simulators stay isolated. A crash (dead process, EOF, malformed
response) yields an all-+inf evaluation; three consecutive crashes abort the
run.
"""

import json
import logging
import shlex
import subprocess
import threading

import numpy as np

from .core import Problem

logger = logging.getLogger(__name__)


class EvaluatorAborted(RuntimeError):
    """The external evaluator crashed on three consecutive evaluations."""


class _Crash(Exception):
    pass


class SubprocessEvaluator:
    def __init__(self, cmd, q: int, *, max_consecutive_crashes: int = 3):
        self.cmd = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        self.q = q
        self.max_consecutive_crashes = max_consecutive_crashes
        self._local = threading.local()
        self._lock = threading.Lock()
        self._consecutive = 0
        self._procs: list[subprocess.Popen] = []

    def _proc(self) -> subprocess.Popen:
        proc = getattr(self._local, "proc", None)
        if proc is None or proc.poll() is not None:
            proc = subprocess.Popen(
                self.cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
            self._local.proc = proc
            with self._lock:
                self._procs.append(proc)
        return proc

    @staticmethod
    def _parse_component(v) -> float:
        if isinstance(v, str):
            if v == "inf":
                return np.inf
            if v == "-inf":
                return -np.inf
            raise ValueError(f"bad objective component {v!r}")
        if isinstance(v, (int, float)):
            return float(v)
        raise ValueError(f"bad objective component {v!r}")

    def __call__(self, x) -> np.ndarray:
        try:
            proc = self._proc()
            request = json.dumps({"x": [float(v) for v in x]})
            proc.stdin.write(request + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
            if not line:
                raise _Crash("child closed its output")
            reply = json.loads(line)
            f = reply["f"]
            if not isinstance(f, list) or len(f) != self.q:
                raise _Crash(f"expected {self.q} components, got {f!r}")
            values = [self._parse_component(v) for v in f]
        except (_Crash, OSError, ValueError, KeyError, TypeError) as exc:
            self._discard_local()
            with self._lock:
                self._consecutive += 1
                strikes = self._consecutive
            logger.warning("external evaluator crash (%d consecutive): %s", strikes, exc)
            if strikes >= self.max_consecutive_crashes:
                raise EvaluatorAborted(
                    f"{strikes} consecutive evaluator crashes; last error: {exc}"
                ) from exc
            return np.full(self.q, np.inf)
        with self._lock:
            self._consecutive = 0
        return np.asarray(values, float)

    def _discard_local(self):
        proc = getattr(self._local, "proc", None)
        if proc is not None:
            self._local.proc = None
            try:
                proc.kill()
            except OSError:
                pass

    def close(self):
        with self._lock:
            procs, self._procs = self._procs, []
        for proc in procs:
            if proc.poll() is None:
                proc.kill()
            proc.wait()


def external_problem(cmd, n: int, q: int, lb, ub, name: str = "external") -> Problem:
    """Wrap a line-protocol subprocess command as a Problem."""
    evaluator = SubprocessEvaluator(cmd, q)
    problem = Problem(n, q, np.asarray(lb, float), np.asarray(ub, float), evaluator, name=name)
    return problem
