"""
Application Configuration
Runtime settings read from the environment (threads, logging, output location).
"""

import os
import logging
from dotenv import load_dotenv

from acflow.config.constants import env_path

load_dotenv(env_path)

# Parallelism
ACFLOW_THREADS = os.getenv('ACFLOW_THREADS', '1')

# Output
OUTPUT_DIR = os.getenv('ACFLOW_OUTPUT_DIR', 'results')

# Logging
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FILE = os.getenv('LOG_FILE', '')


def get_thread_cap():
    """Get the maximum number of convergence levels run concurrently."""
    raw = os.getenv('ACFLOW_THREADS', ACFLOW_THREADS)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        return 1
    return max(1, value)


def configure_logging(level=None, log_file=None):
    """Configure the root logger once for command-line runs."""
    level_name = (level or os.getenv('LOG_LEVEL', LOG_LEVEL)).upper()
    log_file = log_file if log_file is not None else os.getenv('LOG_FILE', LOG_FILE)

    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        handlers=handlers,
        force=True,
    )


def print_config():
    """Print current configuration."""
    print("\n" + "=" * 60)
    print(" " * 20 + "acflow Configuration")
    print("=" * 60)
    print(f"Threads: {get_thread_cap()}")
    print(f"Output directory: {os.getenv('ACFLOW_OUTPUT_DIR', OUTPUT_DIR)}")
    print(f"Log level: {os.getenv('LOG_LEVEL', LOG_LEVEL)}")
    print(f"Log file: {os.getenv('LOG_FILE', LOG_FILE) or '(console only)'}")
    print("=" * 60 + "\n")
