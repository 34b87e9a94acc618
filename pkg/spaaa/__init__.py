from os import environ
from logging import (
    INFO,
    Formatter,
    FileHandler,
    StreamHandler,
    error,
    getLogger,
    basicConfig,
    getLevelName,
)

from dotenv import load_dotenv

load_dotenv("config.env", override=True)


class CustomFormatter(Formatter):
    def format(self, record):
        return super().format(record).replace(record.levelname, record.levelname[:1])


formatter = CustomFormatter(
    "[%(asctime)s] [%(levelname)s] - %(message)s", datefmt="%d-%b-%y %I:%M:%S %p"
)

stream_handler = StreamHandler()
stream_handler.setFormatter(formatter)
handlers = [stream_handler]

LOG_FILE = environ.get("LOG_FILE", "")
if len(LOG_FILE) != 0:
    file_handler = FileHandler(LOG_FILE)
    file_handler.setFormatter(formatter)
    handlers.append(file_handler)

LOG_LEVEL = environ.get("LOG_LEVEL", "").upper()
if len(LOG_LEVEL) == 0 or not isinstance(getLevelName(LOG_LEVEL), int):
    LOG_LEVEL = INFO

basicConfig(handlers=handlers, level=LOG_LEVEL)

LOGGER = getLogger(__name__)

INTERP_UPDATES = ["all", "greedy"]
FIT_MODES = ["auto", "grid", "scattered"]
LAPACK_DRIVERS = ["gesdd", "gesvd"]


def _float_var(name, default, positive=False):
    value = environ.get(name, "")
    if len(value) == 0:
        return default
    try:
        value = float(value)
    except ValueError:
        error(f"{name} is not a number: {value}! Using {default}")
        return default
    if value < 0 or (positive and value == 0):
        error(f"{name} out of range: {value}! Using {default}")
        return default
    return value


PAAA_TOL = _float_var("PAAA_TOL", 1e-8, positive=True)

PAAA_MAX_ITER = environ.get("PAAA_MAX_ITER", "")
if PAAA_MAX_ITER.isdigit() and int(PAAA_MAX_ITER) >= 1:
    PAAA_MAX_ITER = int(PAAA_MAX_ITER)
else:
    if len(PAAA_MAX_ITER) != 0:
        error(f"PAAA_MAX_ITER must be a positive integer: {PAAA_MAX_ITER}")
    PAAA_MAX_ITER = 100

PAAA_INTERP_UPDATE = environ.get("PAAA_INTERP_UPDATE", "").lower()
if PAAA_INTERP_UPDATE not in INTERP_UPDATES:
    if len(PAAA_INTERP_UPDATE) != 0:
        error(f"Unknown PAAA_INTERP_UPDATE: {PAAA_INTERP_UPDATE}")
    PAAA_INTERP_UPDATE = "all"

PAAA_MODE = environ.get("PAAA_MODE", "").lower()
if PAAA_MODE not in FIT_MODES:
    if len(PAAA_MODE) != 0:
        error(f"Unknown PAAA_MODE: {PAAA_MODE}")
    PAAA_MODE = "auto"

SNAP_TOL = _float_var("SNAP_TOL", 0.0)

SVD_DRIVERS = environ.get("SVD_DRIVERS", "")
if len(SVD_DRIVERS) == 0:
    SVD_DRIVERS = LAPACK_DRIVERS
else:
    SVD_DRIVERS = [x for x in SVD_DRIVERS.lower().split() if x in LAPACK_DRIVERS]
    if not SVD_DRIVERS:
        error("SVD_DRIVERS names no known LAPACK driver! Using gesdd gesvd")
        SVD_DRIVERS = LAPACK_DRIVERS

config_dict = {
    "PAAA_TOL": PAAA_TOL,
    "PAAA_MAX_ITER": PAAA_MAX_ITER,
    "PAAA_INTERP_UPDATE": PAAA_INTERP_UPDATE,
    "PAAA_MODE": PAAA_MODE,
    "SNAP_TOL": SNAP_TOL,
    "SVD_DRIVERS": SVD_DRIVERS,
    "LOG_FILE": LOG_FILE,
    "LOG_LEVEL": LOG_LEVEL,
}
