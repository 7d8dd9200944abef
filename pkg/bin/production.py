#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Management commands with the production settings, for long runs:

    LAGDYNA_THREADS=5 python bin/production.py train --config configs/pendulum.ini --variant lnn-ekf
"""
import os
import sys

if __name__ == "__main__":
    sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lagdyna.settings.production")

    from django.core.management import execute_from_command_line

    execute_from_command_line(sys.argv)
