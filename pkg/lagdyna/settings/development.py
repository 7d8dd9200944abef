# -*- coding: utf-8 -*-
"""Development environment settings for lagdyna."""
from lagdyna.settings.base import *

#: Debug should be True in development but not in production!
DEBUG = True

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': os.path.join(PROJECT_DIR, 'debug.log'),
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lagdyna': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}

# Turn on lots of logging
DO_LOGGING = True
LOG_FILENAME = os.path.join(PROJECT_DIR, 'debug.log')
