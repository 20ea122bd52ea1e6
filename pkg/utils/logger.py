# utils/logger.py
"""
Logging configuration for the application.
"""

import logging
import os
from datetime import datetime
from typing import Optional


def setup_logger(log_level=logging.INFO, log_file: Optional[str] = None,
                 log_dir: str = 'logs', file_logging: bool = True) -> Optional[str]:
    """
    Setup application logging.

    Args:
        log_level: Logging level (default: INFO)
        log_file: Optional log file path; defaults to a timestamped file in ``log_dir``
        log_dir: Directory for the default log file
        file_logging: False logs to stderr only

    Returns:
        The log file path, or None without file logging
    """
    handlers = [logging.StreamHandler()]
    if file_logging:
        if log_file is None:
            os.makedirs(log_dir, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = os.path.join(log_dir, f"anytime_cbs_{timestamp}.log")
        else:
            parent = os.path.dirname(log_file)
            if parent:
                os.makedirs(parent, exist_ok=True)
        handlers.insert(0, logging.FileHandler(log_file, encoding='utf-8'))
    else:
        log_file = None

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )

    # Set matplotlib logging to WARNING to reduce noise
    logging.getLogger('matplotlib').setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.info(f"Logging initialized. Log file: {log_file}")
    return log_file
