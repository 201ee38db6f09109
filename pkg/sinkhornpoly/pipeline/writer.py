# writer.py

import threading
import datetime as dt
from pathlib import Path

from looperation import Operator, Handler

from sinkhornpoly.pipeline.data import Dataset, DatumRecord, DiscardReport
from sinkhornpoly.pipeline.store import append_record, append_tried

__all__ = [
    "DatasetWriter"
]

Result = DatumRecord | DiscardReport

class DatasetWriter(Operator):
    """
    The single owner of a dataset file.

    Workers hand their results to the writer. Records join the dataset
    and are appended to its file, discard reports only mark their seed
    as tried, so a resumed run starts after them.
    """

    def __init__(
            self,
            dataset: Dataset,
            path: str | Path,
            handler: Handler = None,
            delay: float | dt.timedelta = None
    ) -> None:
        """
        Defines the attributes of the dataset writer.

        :param dataset: The dataset that accepted records join.
        :param path: The dataset file, created on the first write.
        :param handler: The handler of errors raised while writing.
        :param delay: The pause between two polls of the pending results.
        """

        self.dataset = dataset
        self.path = Path(path)

        self.pending: list[Result] = []
        self.written = 0

        self._lock = threading.Lock()

        super().__init__(
            operation=self.write_next,
            handler=handler,
            delay=delay
        )

    def write_next(self) -> bool:
        """
        Writes the oldest pending result.

        :return: The value of a result being taken.
        """

        with self._lock:
            if not self.pending:
                return False

            result = self.pending.pop(0)

            if isinstance(result, DiscardReport):
                self.dataset.mark_tried(result.seed)

                append_tried(
                    result.seed, self.path, self.dataset.ambient, seed=self.dataset.seed
                )

            elif self.dataset.append(result):
                append_record(result, self.path, seed=self.dataset.seed)

                self.written += 1

            return True

    def flush(self) -> None:
        """Writes every pending result."""

        while self.write_next():
            pass

    def write(self, result: Result) -> Result:
        """
        Hands a record or a discard report to the writer.

        :param result: The record or the report.

        :return: The result.
        """

        self.pending.append(result)

        return result

    def close(self) -> None:
        """Stops the loop and writes what it left pending."""

        self.stop()

        self.flush()
