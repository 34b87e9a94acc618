import numpy as np

from spaaa.helper.ext_utils.exceptions import InvalidArgumentError
from spaaa.helper.ext_utils.num_utils import format_metric
from spaaa.helper.ext_utils.files_utils import load_model, load_samples
from spaaa.helper.approx_utils.barycentric import eval_batch
from spaaa.helper.cli_helper.commands import Commands
from spaaa.helper.cli_helper.handlers import (
    EXIT_OK,
    CommandHandler,
    add_handler,
    exit_on_error,
)


def configure(parser):
    parser.add_argument("--model", required=True, help="model JSON")
    parser.add_argument("--test-csv", required=True, help="sample CSV to test against")


def error_metrics(model, samples):
    """Max abs, relative max and RMS error; singular points count as inf."""
    if samples.d != model.d:
        raise InvalidArgumentError(f"Samples have d={samples.d}, model has d={model.d}")
    result = eval_batch(model, samples.points)
    errors = np.full(samples.K, np.inf)
    ok = np.ones(samples.K, dtype=bool)
    ok[result.failed_indices] = False
    errors[ok] = np.abs(samples.values[ok] - result.values[ok])
    max_abs = float(np.max(errors))
    scale = float(np.max(np.abs(samples.values)))
    return {
        "max_abs": max_abs,
        "rel_max": max_abs / scale if scale > 0 else max_abs,
        "rms": float(np.sqrt(np.mean(errors**2))),
        "singular": len(result.errors),
        "K": samples.K,
    }


@exit_on_error
def cmd_report(args):
    metrics = error_metrics(load_model(args.model), load_samples(args.test_csv))
    print(f"K={metrics['K']} singular={metrics['singular']}")
    for key in ("max_abs", "rel_max", "rms"):
        print(f"{key}={format_metric(metrics[key])}")
    return EXIT_OK


add_handler(
    CommandHandler(
        cmd_report,
        Commands.ReportCommand,
        configure,
        help="error of a fitted model against test samples",
    )
)
