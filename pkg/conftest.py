# -*- coding: utf-8 -*-
"""Lets pytest collect the Django test cases of the lagdyna apps."""
import os

import django


def pytest_configure(config):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lagdyna.settings.testing")
    django.setup()
