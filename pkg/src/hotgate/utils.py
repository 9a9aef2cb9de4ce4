"""Utilities for hotgate."""
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional

import catalogue
import psutil

from hotgate.errors import ConfigError

presets = catalogue.create("hotgate", "presets")

THREADS_ENV_VAR = "HOTGATE_THREADS"


def n_threads() -> int:
    """Number of worker threads allowed for internal parallelism.

    Reads ``HOTGATE_THREADS``; falls back to the number of physical cores.

    Returns:
        int: Thread cap, at least 1.
    """
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return max(1, psutil.cpu_count(logical=False) or 1)
    try:
        threads = int(value)
    except ValueError as e:
        raise ConfigError(
            f"{THREADS_ENV_VAR} must be an integer, got {value!r}",
            key=THREADS_ENV_VAR,
        ) from e
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be >= 1", key=THREADS_ENV_VAR)
    return threads


def chunker(seq: Sequence, size: int):
    """Yield successive size-sized chunks from seq."""
    return (seq[pos : pos + size] for pos in range(0, len(seq), size))


def ordered_map(
    func: Callable[[Any], Any],
    items: Iterable,
    threads: Optional[int] = None,
) -> list:
    """Apply func to every item, possibly on a thread pool.

    Results come back in input order whatever the scheduling, so reductions
    over them are deterministic.

    Args:
        func (Callable): Function of one argument.
        items (Iterable): Inputs.
        threads (int, optional): Pool size. Defaults to ``n_threads()``.

    Returns:
        list: ``[func(item) for item in items]``.
    """
    items = list(items)
    threads = n_threads() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
