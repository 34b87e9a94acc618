from sys import stdout
from time import time

from spaaa import LOGGER
from spaaa.helper.ext_utils.num_utils import format_metric, get_readable_time


class FitListener:
    """Receives progress from the greedy fit loop.

    With ``echo`` every iteration line and the final summary are written to
    ``stream`` (stdout by default), which is what the command line shows.
    """

    def __init__(self, echo=False, stream=None):
        self.echo = echo
        self.stream = stream or stdout
        self.records = []
        self.model = None
        self.report = None
        self.error = None
        self.start_time = None

    def __write(self, line):
        if self.echo:
            print(line, file=self.stream, flush=True)

    def on_fit_start(self, samples, config):
        self.start_time = time()
        self.records.clear()
        self.__write(
            f"fit: K={samples.K} d={samples.d} tol={config.tol} "
            f"max_iter={config.max_iter} interp_update={config.interp_update.value}"
        )

    def on_iteration(self, record):
        self.records.append(record)
        self.__write(record.line())

    def on_fit_complete(self, model, report):
        self.model = model
        self.report = report
        self.__write(
            f"status={report.status} iterations={report.iterations} "
            f"relerr={format_metric(report.final_error)} "
            f"orders=({','.join(map(str, report.orders))}) |I|={report.interp_count} "
            f"time={get_readable_time(report.elapsed)}"
        )

    def on_fit_error(self, error):
        self.error = error
        elapsed = time() - self.start_time if self.start_time else 0
        LOGGER.error(
            f"Fit failed after {len(self.records)} iterations "
            f"({get_readable_time(elapsed)}): {error}"
        )
        self.__write(f"status=error iterations={len(self.records)} error={error}")
