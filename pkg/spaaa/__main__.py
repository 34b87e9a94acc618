# ruff: noqa: F401
from sys import exit as sexit
from sys import stderr
from argparse import ArgumentParser

from spaaa import LOGGER

from .modules import gen, fit, report, evaluate
from .helper.cli_helper.handlers import EXIT_INPUT_ERROR, command_handlers


class CommandParser(ArgumentParser):
    """Flag errors exit with 1, like every other input error."""

    def error(self, message):
        self.print_usage(stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = CommandParser(
        prog="spaaa",
        description="Greedy rational approximation of scattered multivariate data",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for handler in command_handlers.values():
        sub = subparsers.add_parser(handler.name, help=handler.help)
        handler.configure(sub)
        sub.set_defaults(callback=handler.callback)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    LOGGER.debug(f"Running command {args.command}")
    return args.callback(args)


if __name__ == "__main__":
    sexit(main())
