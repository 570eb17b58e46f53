"""Entry point and progress spinner for Preproj-Verify"""

import itertools
import sys
import threading

SPINNER_FRAMES = '⠋⠙⠹⠸⠼⠴⠦⠧⠇⠏'
REDRAW_SECONDS = 0.1


class ProgressLoader:
    """Spinner and progress bar on stderr while a long run is working."""

    def __init__(self, stream=None, bar_width: int = 30):
        self.stream = stream or sys.stderr
        self.bar_width = bar_width
        self.max_progress = 100
        self.progress = 0
        self.status_text = "Starting..."
        self._stopped = threading.Event()
        self._stopped.set()
        self._thread = None
        self._last_width = 0

    @property
    def loading(self) -> bool:
        return not self._stopped.is_set()

    def render(self, frame: str) -> str:
        """One line of the display, without carriage return or padding."""
        share = self.progress / self.max_progress
        filled = int(self.bar_width * share)
        bar = '█' * filled + '░' * (self.bar_width - filled)
        return f'  {frame} [{bar}] {int(100 * share):3d}%  {self.status_text}'

    def _draw(self, line: str):
        # Blank whatever is left of a longer previous line.
        padding = max(self._last_width - len(line), 0)
        self.stream.write('\r' + line + ' ' * padding)
        self.stream.flush()
        self._last_width = len(line)

    def animate(self):
        for frame in itertools.cycle(SPINNER_FRAMES):
            self._draw(self.render(frame))
            if self._stopped.wait(REDRAW_SECONDS):
                return

    def start(self):
        """Start drawing in a background thread."""
        self.progress = 0
        self._stopped.clear()
        self._thread = threading.Thread(target=self.animate, name="progress", daemon=True)
        self._thread.start()

    def update_progress(self, progress: int, status: str = "Working..."):
        """
        Update the progress bar.

        Args:
            progress: Progress value (0-100)
            status: Status message to display
        """
        self.progress = max(0, min(progress, self.max_progress))
        self.status_text = status

    def stop(self, message: str = "Done"):
        """Finish the animation and leave a final status line."""
        if not self.loading:
            return
        self.progress = self.max_progress
        self._stopped.set()
        if self._thread is not None:
            self._thread.join(timeout=1.0)
        self.stream.write('\r  ✓ ' + message + ' ' * 60 + '\n')
        self.stream.flush()


def main(argv=None) -> int:
    from CliReports import main as cli_main
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
