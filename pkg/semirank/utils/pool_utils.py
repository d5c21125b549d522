import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

from semirank.utils.errors import ConfigError

THREADS_ENV = 'SEMIRANK_THREADS'


def worker_count(requested: Optional[int] = None) -> int:
    r"""
    Overview:
        Number of trial workers: ``requested`` when given, else ``$SEMIRANK_THREADS``; 0 or unset
        means one worker per CPU.
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV, '0').strip() or '0'
        try:
            requested = int(raw)
        except ValueError:
            raise ConfigError("{} must be an integer, got '{}'".format(THREADS_ENV, raw))
    requested = int(requested)
    if requested < 0:
        raise ConfigError("worker count must be >= 0, got {}".format(requested))
    return requested if requested > 0 else (os.cpu_count() or 1)


def map_jobs(fn: Callable[..., Any], jobs: Sequence[Tuple], workers: int) -> List[Any]:
    r"""
    Overview:
        ``[fn(*job) for job in jobs]``, on a process pool when more than one worker is allowed.
        Results keep the order of ``jobs``.
    """
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))
