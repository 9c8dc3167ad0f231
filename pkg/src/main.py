"""
Triple-well instanton toolkit - main entry point.
"""

# Load environment variables from .env file FIRST
from dotenv import load_dotenv
load_dotenv()

import logging
import os
import sys
from typing import List, Optional

from .cli import main as cli_main
from .config import get_settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def setup_logging(level_name: Optional[str] = None, log_dir: Optional[str] = None):
    """Console handler on stderr; debug.log under the log dir only at DEBUG."""
    if level_name is None or log_dir is None:
        settings = get_settings()
        level_name = level_name or settings.log_level
        log_dir = log_dir or settings.log_dir
    log_level = getattr(logging, level_name.upper(), logging.INFO)

    # Console handler (always present); stdout carries reports only
    handlers = []
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handlers.append(console_handler)

    # File handler for debug logs (only when log level is DEBUG)
    if log_level == logging.DEBUG:
        os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(os.path.join(log_dir, 'debug.log'))
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(level=log_level, format=LOG_FORMAT, handlers=handlers, force=True)

    if log_level == logging.DEBUG:
        logger.debug("DEBUG MODE: logging configured in debug mode")
        logger.debug(f"Debug logs will be written to: {os.path.abspath(os.path.join(log_dir, 'debug.log'))}")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        setup_logging()
    except ValueError:
        # invalid environment; the CLI reports it as a config error
        setup_logging("INFO", "./logs")
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
