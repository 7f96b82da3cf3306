import os
import logging
import coloredlogs
from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = '%(asctime)s,%(msecs)03d %(levelname)-8s [%(filename)s:%(lineno)d] %(message)s'
LOG_DATEFMT = '%Y-%m-%dT%H:%M:%S'

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
PIBB_OUTPUT_DIR = os.getenv("PIBB_OUTPUT_DIR", "runs")
_workers_raw = os.getenv("PIBB_WORKERS", "1")

# Validate PIBB_WORKERS format
try:
    PIBB_WORKERS = int(_workers_raw)
except ValueError:
    raise ValueError(
        f"Invalid PIBB_WORKERS value {_workers_raw!r}: must be a positive integer"
    )
if PIBB_WORKERS < 1:
    raise ValueError(f"Invalid PIBB_WORKERS value {PIBB_WORKERS}: must be >= 1")

if not isinstance(logging.getLevelName(LOG_LEVEL), int):
    raise ValueError(f"Unknown LOG_LEVEL {LOG_LEVEL!r}")


_installed = False


def logger(name):
    global _installed
    if not _installed:
        coloredlogs.install(
            level=LOG_LEVEL,
            logger=logging.getLogger(),
            fmt=LOG_FORMAT,
            datefmt=LOG_DATEFMT,
        )
        _installed = True
    Logger = logging.getLogger(name)
    return Logger
