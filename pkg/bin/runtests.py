#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os
import sys

if __name__ == "__main__":
    sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    os.environ.setdefault(
        "DJANGO_SETTINGS_MODULE", "lagdyna.settings.testing")

    import django
    from django.core.management import call_command
    from django.conf import settings

    django.setup()

    # Run only the given apps (or test labels), by default every lagdyna app.
    apps_for_testing = sys.argv[1:] or [app for app in settings.INSTALLED_APPS if app.startswith("lagdyna.")]

    call_command("test", *apps_for_testing)
