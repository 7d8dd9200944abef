# -*- coding: utf-8 -*-
"""Django settings for lagdyna, base settings shared by all settings files."""
import os

# Absolute path to the base directory of the application.
BASE_DIR = os.path.abspath(os.path.dirname(os.path.dirname(__file__)))
# Path to the project directory.
PROJECT_DIR = os.path.dirname(BASE_DIR)

#: Django requires a key. lagdyna signs nothing with it, override through LAGDYNA_SECRET_KEY if needed.
SECRET_KEY = os.environ.get('LAGDYNA_SECRET_KEY', 'lagdyna-development-key')

#: A string representing the time zone for this installation.
TIME_ZONE = 'Europe/Helsinki'
#: A string representing the language code for this installation.
LANGUAGE_CODE = 'en-us'
#: A boolean that specifies if datetimes will be timezone-aware by default or not.
USE_TZ = True
#: Translation is not used, all output is English.
USE_I18N = False

#: No database is needed, experiment results are written as CSV and key=value files.
DATABASES = {}

#: A list of strings designating all applications that are enabled in this Django installation.
#: The order of the apps matter! Each app follows one stage of the pipeline, from the network
#: substrate up to the experiment commands.
INSTALLED_APPS = (
    'lagdyna.nncore',
    'lagdyna.lnn',
    'lagdyna.integrate',
    'lagdyna.optim',
    'lagdyna.envs',
    'lagdyna.agent',
    'lagdyna.dyna',
    'lagdyna.experiments',
)

#: How many seeds ``train`` may run in parallel processes. Read from the environment variable
#: LAGDYNA_THREADS, defaults to the number of CPUs.
LAGDYNA_THREADS = max(1, int(os.environ.get('LAGDYNA_THREADS', os.cpu_count() or 1)))

#: Directory where ``train`` writes its results when neither the config file nor ``--out`` name one.
LAGDYNA_OUTPUT_ROOT = os.path.join(PROJECT_DIR, 'runs')

#: Evaluation return that ``compare`` uses for steps-to-threshold.
LAGDYNA_RETURN_THRESHOLD = -300.0

#: Format specification for floats written into CSV files. Fixed so reruns are byte-identical.
LAGDYNA_FLOAT_FORMAT = '.6f'

#: Minute-scale acceptance tests run only when LAGDYNA_SLOW_TESTS=1 is set in the environment.
LAGDYNA_SLOW_TESTS = os.environ.get('LAGDYNA_SLOW_TESTS', '') == '1'

#: Default logging: the lagdyna loggers write INFO and above to the console.
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
    },
    'loggers': {
        'lagdyna': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Turn off the extra debug file by default.
DO_LOGGING = False
LOG_FILENAME = os.path.join(PROJECT_DIR, 'debug.log')
