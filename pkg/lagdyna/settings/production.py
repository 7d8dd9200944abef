# -*- coding: utf-8 -*-
"""Production settings for lagdyna: long experiment runs on a compute host."""
from lagdyna.settings.base import *

#: IMPORTANT: Debug should always be False in production
DEBUG = False

#: Results of long runs are kept outside the source tree.
LAGDYNA_OUTPUT_ROOT = os.environ.get('LAGDYNA_OUTPUT_ROOT', '/var/lib/lagdyna/runs')

#: Log INFO and above to a file next to the results, warnings also to the console.
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
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': os.environ.get('LAGDYNA_LOG_FILE', 'lagdyna.log'),
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lagdyna': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

#: Turn off lots of logging.
DO_LOGGING = False
