"""Logging setup for the command line"""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
HANDLER_MARK = "_xnyfem_handler"


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """Install the command-line handler on the root logger

    A handler installed by an earlier call is replaced; other handlers stay.

    Args:
        verbosity: 0 -> WARNING, 1 -> INFO, 2 or more -> DEBUG

    Returns:
        The configured root logger
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, HANDLER_MARK, False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    setattr(handler, HANDLER_MARK, True)
    root.addHandler(handler)
    root.setLevel(level)
    return root
