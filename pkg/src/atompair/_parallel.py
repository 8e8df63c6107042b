"""Order-preserving parallel map used by the scan and sweep layers."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def map_ordered(fn, items, jobs: int = 1, chunksize: int = 1) -> list:
    """Apply ``fn`` to ``items``, preserving input order in the result.

    With ``jobs > 1`` the work runs on a process pool; results are still
    returned in input order, so output is independent of scheduling.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
