"""Batch evaluation over a bounded worker pool.

Results always come back in submission order regardless of completion order,
dispatch is dynamic (next free worker pulls the next point), and no evaluation
runs once the shared budget is exhausted. An optional per-evaluation delay
emulates expensive evaluators in benchmarks. With one worker the batch is
evaluated strictly sequentially in the calling thread.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import Array, EvalBudget, Problem, sanitize_objective

logger = logging.getLogger(__name__)


class BatchExecutor:
    def __init__(self, workers: int = 8, delay_s: float = 0.0):
        if workers < 1:
            raise ValueError("need at least one worker")
        if delay_s < 0:
            raise ValueError("delay must be nonnegative")
        self.workers = workers
        self.delay_s = float(delay_s)
        self.batch_sizes: list[int] = []
        self._pool: ThreadPoolExecutor | None = None

    def _ensure_pool(self) -> ThreadPoolExecutor:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.workers)
        return self._pool

    def _eval_one(self, problem: Problem, x: Array) -> Array:
        if self.delay_s > 0:
            time.sleep(self.delay_s)
        raw = np.asarray(problem.evaluate(x), dtype=float).reshape(-1)
        if raw.shape != (problem.q,):
            raise ValueError(
                f"evaluator returned {raw.shape[0]} components, expected {problem.q}"
            )
        if np.isnan(raw).any():
            logger.warning("evaluator returned NaN at %s; coercing to +inf", x)
            return np.full(problem.q, np.inf)
        return sanitize_objective(raw, problem.q)

    def evaluate_batch(
        self, points: list[Array], problem: Problem, budget: EvalBudget | None = None
    ) -> list[Array]:
        """Evaluate ``points`` and return objective vectors in input order.

        The batch is truncated to the remaining budget; the budget is charged
        for exactly the evaluations performed.
        """
        if budget is not None:
            points = list(points)[: budget.remaining]
        else:
            points = list(points)
        if not points:
            return []
        if self.workers == 1:
            results = [self._eval_one(problem, x) for x in points]
        else:
            pool = self._ensure_pool()
            results = list(pool.map(lambda x: self._eval_one(problem, x), points))
        if budget is not None:
            budget.used += len(points)
        self.batch_sizes.append(len(points))
        return results

    def map_tasks(self, fn, items) -> list:
        """Ordered parallel map for pure in-process tasks (model builds, solves)."""
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            return [fn(it) for it in items]
        return list(self._ensure_pool().map(fn, items))

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
