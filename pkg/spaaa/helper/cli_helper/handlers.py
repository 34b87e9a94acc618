from argparse import ArgumentTypeError
from functools import wraps
from dataclasses import dataclass

from spaaa import LOGGER
from spaaa.helper.ext_utils.exceptions import (
    SchemaError,
    NumericalError,
    GenerationError,
    InvalidArgumentError,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2

command_handlers = {}


@dataclass(frozen=True)
class CommandHandler:
    callback: object
    name: str
    configure: object
    help: str = ""


def add_handler(handler):
    command_handlers[handler.name] = handler


def exit_on_error(func):
    """Map input and numerical failures of a command to exit code 1."""

    @wraps(func)
    def wrapper(args):
        try:
            return func(args)
        except (
            OSError,
            SchemaError,
            NumericalError,
            GenerationError,
            InvalidArgumentError,
        ) as e:
            LOGGER.error(f"{type(e).__name__}: {e}")
            return EXIT_INPUT_ERROR

    return wrapper


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise ArgumentTypeError(f"must be a positive finite number, got {text}")
    return value


def positive_int(text):
    if not text.strip().isdigit() or int(text) < 1:
        raise ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return int(text)


def non_negative_int(text):
    if not text.strip().isdigit():
        raise ArgumentTypeError(f"must be a non-negative integer, got {text!r}")
    return int(text)


def fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value < 1:
        raise ArgumentTypeError(f"must lie in [0, 1), got {text}")
    return value
