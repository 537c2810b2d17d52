"""
Centralized logging configuration for ncg_workbench.
Library modules log through hierarchical children of the package logger;
console output goes to stderr so tables written to stdout stay parseable.
"""

import logging
import sys
from typing import Optional


LOG_FORMAT = '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(
    name: str = 'ncg_workbench',
    level: int = logging.WARNING,
    log_file: Optional[str] = None,
    console: bool = True
) -> logging.Logger:
    """
    Configure and return a logger instance.

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path for logging
        console: Whether to output to the console (stderr)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: int, log_file: Optional[str] = None) -> logging.Logger:
    """
    Change the package log level after startup (used by --verbose).

    Args:
        level: New logging level
        log_file: Optional file path; adds a file handler if not present yet

    Returns:
        The package logger
    """
    root = logging.getLogger('ncg_workbench')
    root.setLevel(level)
    for handler in root.handlers:
        handler.setLevel(level)

    if log_file and not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        root.addHandler(file_handler)

    return root


# Create default logger instance
logger = setup_logger()


def get_logger(name: str = None) -> logging.Logger:
    """
    Get a logger instance.

    Args:
        name: Optional module name for hierarchical logging

    Returns:
        Logger instance
    """
    if name:
        return logging.getLogger(f'ncg_workbench.{name}')
    return logger
