"""
Console progress line for long loops over k-grids and time steps.
"""

import sys
import threading
import time
from typing import Optional, TextIO


class ProgressIndicator:
    """
    Single-line progress report on stderr.

    Shows the completed fraction and an estimate of the remaining time when
    the amount of work is known, otherwise a counter and the elapsed time.
    Redraws are throttled to ``min_interval`` seconds. ``update`` may be
    called from worker threads.
    """

    def __init__(
        self,
        description: str,
        total: Optional[int] = None,
        stream: Optional[TextIO] = None,
        min_interval: float = 0.2,
    ):
        self.description = description
        self.total = total
        self.stream = stream if stream is not None else sys.stderr
        self.min_interval = min_interval
        self.count = 0
        self._started: Optional[float] = None
        self._last_draw = 0.0
        self._lock = threading.Lock()

    @property
    def elapsed(self) -> float:
        return 0.0 if self._started is None else time.monotonic() - self._started

    def start(self) -> "ProgressIndicator":
        with self._lock:
            self._started = time.monotonic()
            self.count = 0
            self._draw(f"{self.description}...")
        return self

    def _draw(self, text: str) -> None:
        self.stream.write(f"\r{text}")
        self.stream.flush()
        self._last_draw = time.monotonic()

    def _status(self) -> str:
        if not self.total:
            return f"{self.count} done"
        fraction = min(self.count / self.total, 1.0)
        eta = self.elapsed * (1.0 - fraction) / fraction if fraction else float("nan")
        return f"{100 * fraction:5.1f}% eta {eta:.0f}s"

    def update(self, status: Optional[str] = None) -> None:
        """Record one finished unit of work; ``status`` replaces the counter."""
        with self._lock:
            self.count += 1
            if self._started is None:
                return
            if time.monotonic() - self._last_draw < self.min_interval:
                return
            text = status if status is not None else self._status()
            self._draw(f"{self.description}: {text} ({self.elapsed:.1f}s)")

    def finish(self, final_message: Optional[str] = None) -> None:
        with self._lock:
            if self._started is None:
                return
            message = final_message or f"{self.description} done"
            self.stream.write(f"\r{message} ({self.elapsed:.1f}s)\n")
            self.stream.flush()
            self._started = None
