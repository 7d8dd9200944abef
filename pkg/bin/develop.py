#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Management commands with the development settings, e.g.

    python bin/develop.py train --config configs/smoke.ini
    python bin/develop.py invariantcheck
"""
import os
import sys

if __name__ == "__main__":
    sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lagdyna.settings.development")

    from django.core.management import execute_from_command_line

    execute_from_command_line(sys.argv)
