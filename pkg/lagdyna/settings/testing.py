# -*- coding: utf-8 -*-
"""Settings for running the test suite."""
from lagdyna.settings.base import *

DEBUG = False

# Only warnings reach the console while tests run.
LOGGING['handlers']['console']['level'] = 'WARNING'

DO_LOGGING = False
