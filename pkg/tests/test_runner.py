import time

import pytest

from feeclab.studies import LevelRunner


def _slow_square(level):
    time.sleep(0.01 * (4 - level))
    return level * level


@pytest.mark.asyncio
async def test_run_levels_keeps_level_order():
    progress = []
    runner = LevelRunner(_slow_square, max_concurrent=3)
    results = await runner.run_levels(
        [0, 1, 2, 3], lambda done, total, result: progress.append((done, total, result))
    )
    assert results == [0, 1, 4, 9]
    assert [done for done, _, _ in progress] == [1, 2, 3, 4]
    assert {total for _, total, _ in progress} == {4}
    assert sorted(result for _, _, result in progress) == [0, 1, 4, 9]


@pytest.mark.asyncio
async def test_run_levels_respects_concurrency_limit():
    active = []
    peak = []

    def work(level):
        active.append(level)
        peak.append(len(active))
        time.sleep(0.01)
        active.remove(level)
        return level

    assert await LevelRunner(work, max_concurrent=1).run_levels([2, 3, 4]) == [2, 3, 4]
    assert max(peak) == 1


def test_blocking_run():
    assert LevelRunner(lambda level: level + 1).run([5, 6]) == [6, 7]
