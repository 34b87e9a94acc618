import numpy as np

from spaaa.helper.ext_utils.exceptions import InvalidArgumentError
from spaaa.helper.ext_utils.num_utils import format_metric
from spaaa.helper.ext_utils.files_utils import (
    save_model,
    save_samples,
    heldout_path,
    get_base_name,
)
from spaaa.helper.approx_utils.datagen import (
    drop_random,
    gen_peaks_grid,
    removed_fraction,
    gen_peaks_scattered,
    gen_peaks_with_gaps,
    gen_rational_fixture,
)
from spaaa.helper.cli_helper.commands import Commands
from spaaa.helper.cli_helper.handlers import (
    EXIT_OK,
    CommandHandler,
    fraction,
    add_handler,
    positive_int,
    exit_on_error,
    non_negative_int,
)

PRESETS = ["peaks", "peaks-gaps", "peaks-scattered", "rational-fixture"]


def configure(parser):
    parser.add_argument("--preset", required=True, choices=PRESETS)
    parser.add_argument("--seed", type=non_negative_int, default=0)
    parser.add_argument("--out", required=True, help="sample CSV to write")
    parser.add_argument("--n", type=positive_int, default=40, help="points per axis")
    parser.add_argument(
        "--domain", type=float, nargs=2, metavar=("LO", "HI"), help="sampling box"
    )
    parser.add_argument(
        "--orders", type=non_negative_int, nargs="+", default=[2, 2],
        help="rational orders per variable (rational-fixture)",
    )
    parser.add_argument(
        "--samples", type=positive_int, help="number of scattered samples"
    )
    parser.add_argument(
        "--drop-fraction", type=fraction, default=0.0,
        help="randomly move this fraction of the samples to the held-out file",
    )


def _domain(args, default):
    return tuple(args.domain) if args.domain else default


@exit_on_error
def cmd_gen(args):
    heldout = None
    if args.preset == "peaks":
        samples = gen_peaks_grid(args.n, _domain(args, (-3.0, 3.0)))
    elif args.preset == "peaks-gaps":
        if args.drop_fraction:
            raise InvalidArgumentError("--drop-fraction does not combine with peaks-gaps")
        samples, heldout = gen_peaks_with_gaps(
            args.n, _domain(args, (-3.0, 3.0)), seed=args.seed
        )
    elif args.preset == "peaks-scattered":
        samples = gen_peaks_scattered(
            args.samples or 1000, _domain(args, (-3.0, 3.0)), args.seed
        )
    else:
        n_coeffs = int(np.prod([o + 1 for o in args.orders]))
        samples, truth = gen_rational_fixture(
            args.orders, args.samples or 4 * n_coeffs, args.seed, _domain(args, (-1.0, 1.0))
        )
        save_model(truth, f"{get_base_name(args.out)}_truth.json")

    if args.drop_fraction:
        samples, heldout = drop_random(samples, args.drop_fraction, args.seed)

    save_samples(samples, args.out)
    line = f"preset={args.preset} seed={args.seed} K={samples.K} out={args.out}"
    if heldout is not None:
        save_samples(heldout, heldout_path(args.out))
        line += (
            f" heldout={heldout.K} removed={format_metric(removed_fraction(samples, heldout))}"
            f" heldout_out={heldout_path(args.out)}"
        )
    print(line)
    return EXIT_OK


add_handler(
    CommandHandler(
        cmd_gen,
        Commands.GenCommand,
        configure,
        help="generate synthetic datasets",
    )
)
