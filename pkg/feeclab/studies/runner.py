"""Concurrent execution of per-level study work."""

import asyncio
import logging
from typing import Callable, Generic, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class LevelRunner(Generic[T]):
    """Run independent per-level computations with bounded concurrency."""

    def __init__(self, work: Callable[[int], T], max_concurrent: int = 1) -> None:
        """Initialize level runner.

        Args:
        ----
            work: Computation for one refinement level
            max_concurrent: Maximum levels computed at once

        """
        self._work = work
        self._max_concurrent = max_concurrent

    async def run_levels(
        self,
        levels: list[int],
        progress_callback: Optional[Callable[[int, int, T], None]] = None,
    ) -> list[T]:
        """Compute all levels concurrently.

        Args:
        ----
            levels: Refinement levels
            progress_callback: Progress callback (done, total, result)

        Returns:
        -------
            Results in level order

        """
        semaphore = asyncio.Semaphore(self._max_concurrent)
        done = 0

        async def one(level: int) -> T:
            nonlocal done
            async with semaphore:
                logger.info("level %d: started", level)
                result = await asyncio.to_thread(self._work, level)
                done += 1
                logger.info("level %d: finished (%d/%d)", level, done, len(levels))
                if progress_callback:
                    progress_callback(done, len(levels), result)
                return result

        return list(await asyncio.gather(*(one(level) for level in levels)))

    def run(
        self,
        levels: list[int],
        progress_callback: Optional[Callable[[int, int, T], None]] = None,
    ) -> list[T]:
        """Blocking wrapper around :meth:`run_levels`."""
        return asyncio.run(self.run_levels(levels, progress_callback))
