from logging import FileHandler, getLogger

from spaaa import LOGGER, formatter, config_dict
from spaaa.helper.ext_utils.exceptions import StagnationError
from spaaa.helper.ext_utils.files_utils import (
    save_model,
    report_path,
    save_report,
    load_samples,
)
from spaaa.helper.approx_utils.paaa import FitMode, FitConfig, InterpUpdate, fit
from spaaa.helper.cli_helper.commands import Commands
from spaaa.helper.cli_helper.handlers import (
    EXIT_OK,
    EXIT_NOT_CONVERGED,
    CommandHandler,
    add_handler,
    positive_int,
    exit_on_error,
    positive_float,
)
from spaaa.helper.listeners.fit_listener import FitListener


def configure(parser):
    parser.add_argument("--input", required=True, help="sample CSV")
    parser.add_argument("--output", required=True, help="model JSON to write")
    parser.add_argument(
        "--report", help="fit report JSON (default: <output stem>_report.json)"
    )
    parser.add_argument("--tol", type=positive_float, default=config_dict["PAAA_TOL"])
    parser.add_argument(
        "--max-iter", type=positive_int, default=config_dict["PAAA_MAX_ITER"]
    )
    parser.add_argument(
        "--mode", choices=[m.value for m in FitMode], default=config_dict["PAAA_MODE"]
    )
    parser.add_argument(
        "--interp-update",
        choices=[u.value for u in InterpUpdate],
        default=config_dict["PAAA_INTERP_UPDATE"],
    )
    parser.add_argument("--log", help="also write the log of this run to a file")


@exit_on_error
def cmd_fit(args):
    file_handler = None
    if args.log:
        file_handler = FileHandler(args.log)
        file_handler.setFormatter(formatter)
        getLogger().addHandler(file_handler)
    try:
        samples = load_samples(args.input)
        config = FitConfig(
            tol=args.tol,
            max_iter=args.max_iter,
            interp_update=args.interp_update,
            mode=args.mode,
        )
        try:
            model, report = fit(samples, config, FitListener(echo=True))
        except StagnationError as e:
            LOGGER.warning(f"Writing the last model before stagnation: {e}")
            model, report = e.model, e.report
        save_model(model, args.output, meta=report.summary())
        save_report(report, args.report or report_path(args.output))
        return EXIT_OK if report.status == "converged" else EXIT_NOT_CONVERGED
    finally:
        if file_handler:
            getLogger().removeHandler(file_handler)
            file_handler.close()


add_handler(
    CommandHandler(
        cmd_fit,
        Commands.FitCommand,
        configure,
        help="fit a rational approximant to sample data",
    )
)
