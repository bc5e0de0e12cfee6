import logging
import sys
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ptorder.models import Report

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

def setup_logging(level: str = "WARNING") -> None:
    """
    Configures root logging for ptorder.

    Records go to stderr; stdout is reserved for rendered results and JSON
    reports, which must stay byte-identical across runs.
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {level}")

    logging.basicConfig(
        level=numeric_level,
        format=LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)

def log_report(logger: logging.Logger, report: "Report") -> None:
    """Logs a verification outcome: INFO on pass, WARNING with the first witness on failure."""
    if report.passed:
        logger.info(f"{report.check}: passed")
    else:
        first = report.witnesses[0] if report.witnesses else {}
        logger.warning(f"{report.check}: FAILED ({len(report.witnesses)} witnesses), first: {first}")
