# -*- coding: utf-8 -*-
import logging
from contextlib import contextmanager
import os

from django.conf import settings

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def init_logging():
    """Write every lagdyna record to LOG_FILENAME when DO_LOGGING is on."""
    if settings.DO_LOGGING:
        logging.basicConfig(filename=settings.LOG_FILENAME, level=logging.DEBUG, format=LOG_FORMAT)


@contextmanager
def run_log(directory, name='run.log'):
    """Attach a file handler for the lagdyna loggers while one seed of an experiment runs."""
    handler = logging.FileHandler(os.path.join(directory, name), mode='w')
    handler.setLevel(logging.INFO)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger = logging.getLogger('lagdyna')
    logger.addHandler(handler)
    try:
        yield handler
    finally:
        logger.removeHandler(handler)
        handler.close()


logInitDone = False
if not logInitDone:
    logInitDone = True
    init_logging()
