import logging
import os


def setup_logging(level: str | int | None = None):
    # Clear out any old handlers (especially in REPL or repeated CLI calls in tests)
    root = logging.getLogger("TA")
    if root.handlers:
        root.handlers.clear()

    if level is None:
        level = os.environ.get("TRANSIT_ACCESS_LOG_LEVEL", "INFO")
    root.setLevel(level if isinstance(level, int) else level.upper())

    # Create a console handler
    handler = logging.StreamHandler()

    # Create and set a formatter
    formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    handler.setFormatter(formatter)

    # Add handler to logger
    root.addHandler(handler)
    return root


def attach_file_handler(log_file: str) -> logging.Handler:
    """
    Mirror everything the ``TA`` logger emits into a run log file.

    Args:
        log_file: Path to the log file

    Returns:
        The attached handler, so the caller can detach and close it.
    """
    file_handler = logging.FileHandler(log_file, encoding="utf-8")
    file_handler.setLevel(logging.DEBUG)

    # Formatter
    formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
    file_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    return file_handler


def detach_file_handler(handler: logging.Handler) -> None:
    logger.removeHandler(handler)
    handler.close()


logger = setup_logging()
