"""
Logging utilities for the K3 period toolkit.

This module provides standardized logging configuration for the components
of the library (exact linear algebra, lattices, isometries, the Grassmannian,
the period domain and the CLI), ensuring consistent log formatting and one
rotating log file per component under the configured log directory.
"""

import logging
import os
from logging.handlers import RotatingFileHandler

from k3period.src.config_utils import get_settings


def setup_logger(name, log_file, level=logging.INFO):
    """
    Set up a logger with a specific name and file.

    Args:
        name (str): Name of the logger
        log_file (str): Path to the log file
        level (int): Logging level (default: INFO)

    Returns:
        logging.Logger: Configured logger instance
    """
    # Create logs directory if it doesn't exist
    log_dir = os.path.dirname(log_file)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir, exist_ok=True)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 10 MB per file, keep 5 backups
    handler = RotatingFileHandler(
        log_file,
        maxBytes=10*1024*1024,
        backupCount=5
    )
    handler.setFormatter(formatter)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    if logger.hasHandlers():
        logger.handlers.clear()

    logger.addHandler(handler)
    return logger


def component_logger(component):
    """Logger named `k3period.<component>` writing to `<log_dir>/<component>.log`."""
    settings = get_settings()
    return setup_logger(
        f"k3period.{component}",
        os.path.join(settings.log_dir, f"{component}.log"),
        level=getattr(logging, settings.log_level),
    )


# Create loggers for different components
linalg_logger = component_logger('linalg')
lattice_logger = component_logger('lattice')
isometry_logger = component_logger('isometry')
grassmann_logger = component_logger('grassmann')
period_logger = component_logger('period')
cli_logger = component_logger('cli')
