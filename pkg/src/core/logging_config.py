"""Logging configuration for SingularShift."""
import logging
import sys


def setup_logging(config):
    """Setup application logging on stderr; stdout carries result tables."""
    settings = config.logging
    level = getattr(logging, str(settings.level).upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format=settings.format,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )
