from spaaa.helper.ext_utils.exceptions import (
    PoleError,
    InvalidArgumentError,
)
from spaaa.helper.ext_utils.files_utils import load_model, load_points, save_evaluations
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
    parser.add_argument("--points-csv", required=True, help="CSV with z1_re... columns")
    parser.add_argument("--out-csv", required=True, help="CSV to write values to")


def point_statuses(result):
    statuses = ["ok"] * result.values.size
    for i, error in result.errors:
        statuses[i] = "pole" if isinstance(error, PoleError) else "indeterminate"
    return statuses


@exit_on_error
def cmd_eval(args):
    model = load_model(args.model)
    points = load_points(args.points_csv)
    if points.shape[1] != model.d:
        raise InvalidArgumentError(
            f"{args.points_csv} has d={points.shape[1]}, model has d={model.d}"
        )
    result = eval_batch(model, points)
    save_evaluations(args.out_csv, points, result.values, point_statuses(result))
    print(
        f"evaluated={points.shape[0]} singular={len(result.errors)} out={args.out_csv}"
    )
    return EXIT_OK


add_handler(
    CommandHandler(
        cmd_eval,
        Commands.EvalCommand,
        configure,
        help="evaluate a fitted model at query points",
    )
)
