"""Tests for the console progress line."""

import io
from concurrent.futures import ThreadPoolExecutor

from pynnls.progress import ProgressIndicator


class TestProgressIndicator:
    def test_counts_and_final_line(self):
        stream = io.StringIO()
        progress = ProgressIndicator("Scattering", total=4, stream=stream).start()
        for _ in range(4):
            progress.update()
        progress.finish("Scattered 4 k-points")
        assert progress.count == 4
        output = stream.getvalue()
        assert "Scattered 4 k-points" in output
        assert output.endswith("\n")

    def test_redraws_are_throttled(self):
        stream = io.StringIO()
        progress = ProgressIndicator("Evolving", stream=stream, min_interval=3600)
        progress.start()
        progress.update("t = 0.1")
        assert "t = 0.1" not in stream.getvalue()

    def test_status_replaces_counter(self):
        stream = io.StringIO()
        progress = ProgressIndicator(
            "Evolving", total=10, stream=stream, min_interval=0
        )
        progress.start()
        progress.update("t = 0.5")
        assert "Evolving: t = 0.5" in stream.getvalue()

    def test_update_before_start_is_silent(self):
        stream = io.StringIO()
        progress = ProgressIndicator("Idle", stream=stream)
        progress.update()
        progress.finish()
        assert progress.count == 1
        assert stream.getvalue() == ""

    def test_concurrent_updates_are_all_counted(self):
        stream = io.StringIO()
        progress = ProgressIndicator("Scattering", total=2000, stream=stream)
        progress.start()
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(lambda _: progress.update(), range(2000)))
        progress.finish()
        assert progress.count == 2000
        assert stream.getvalue().endswith("\n")
