import logging
import logging.config
from collections.abc import Iterator
from contextlib import contextmanager

from src.core.config import settings

LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "[%(asctime)s] [%(levelname)s] [%(name)s] - %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "default",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {
        "level": "INFO",
        "handlers": ["console"],
    },
}


@contextmanager
def lifespan(level: str | None = None) -> Iterator[logging.Logger]:
    config = {**LOGGING_CONFIG, "root": {**LOGGING_CONFIG["root"], "level": (level or settings.log_level).upper()}}
    logging.config.dictConfig(config)
    log = logging.getLogger(__name__)
    log.info("%s %s started", settings.project_name, settings.version)

    try:
        yield log
    finally:
        log.info("%s stopped", settings.project_name)
