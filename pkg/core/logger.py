import logging
import os
import sys
from config import LOG_LEVEL, LOG_FILE

# Search lanes are threads and sweep runs are loky processes; both appear in every line.
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(processName)s/%(threadName)s] [%(filename)s:%(lineno)d] - %(message)s'

def setup_logger(name="sboxforge", log_file=LOG_FILE):
    logger = logging.getLogger(name)

    # Avoid duplicate handlers if setup multiple times (each sweep worker imports this once)
    if logger.handlers:
        return logger

    logger.setLevel(LOG_LEVEL)
    logger.propagate = False
    formatter = logging.Formatter(LOG_FORMAT)

    # Console handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler; SBOXFORGE_LOG_FILE="" keeps logging on the console only
    if log_file:
        try:
            os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"Could not create log file {log_file}: {e}")

    return logger

# Singleton instance for general use
logger = setup_logger()
