"""
Utility functions for ncg_workbench package.
Provides centralized helpers for worker pools, summation and CLI parsing.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from .constants import THREADS_ENV_VAR
from .errors import ValidationError
from .logger import get_logger

logger = get_logger('utils')

T = TypeVar('T')
R = TypeVar('R')

_configured_threads: Optional[int] = None


def configure_threads(threads: Optional[int]) -> None:
    """Set the configured worker cap (parallel.threads); NCG_THREADS still wins."""
    global _configured_threads
    _configured_threads = threads


def worker_count() -> int:
    """
    Number of worker threads to use.

    Order of precedence: NCG_THREADS, configured cap, min(8, cpu count).

    Raises:
        ValidationError: If NCG_THREADS is set but not a positive integer
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None and raw.strip():
        try:
            value = int(raw)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
        if value < 1:
            raise ValidationError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
        return value
    if _configured_threads:
        return _configured_threads
    return min(8, os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Map fn over items on a thread pool; results keep the input order.

    A single worker (or a single item) runs inline.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def chunked(seq: Sequence[T], parts: int) -> List[Sequence[T]]:
    """Split seq into at most `parts` contiguous non-empty slices."""
    parts = max(1, min(parts, len(seq)))
    size, extra = divmod(len(seq), parts)
    out = []
    start = 0
    for k in range(parts):
        stop = start + size + (1 if k < extra else 0)
        out.append(seq[start:stop])
        start = stop
    return [s for s in out if len(s)]


def weighted_sum(weights: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Sum of weights[k] * values[k, ...] over the first axis.

    Callers that split the work into chunks and add the partial sums agree
    with a single call only up to rounding.
    """
    weights = np.asarray(weights)
    values = np.asarray(values)
    shape = (-1,) + (1,) * (values.ndim - 1)
    return np.sum(weights.reshape(shape) * values, axis=0)


def parse_int_list(text: str) -> List[int]:
    """
    Parse a comma-separated integer list such as "2,4,8".

    Raises:
        ValidationError: On empty items or non-integers
    """
    if text is None or not str(text).strip():
        raise ValidationError("Expected a comma-separated list of integers")
    values = []
    for item in str(text).split(','):
        item = item.strip()
        try:
            values.append(int(item))
        except ValueError:
            raise ValidationError(f"Not an integer: {item!r}")
    return values
