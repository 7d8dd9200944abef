# -*- coding: utf-8 -*-
"""Runs the fast invariant suite: finite-difference oracles, Kalman equivalence, RK order and the
analytic-Lagrangian oracle."""
from django.core.management.base import BaseCommand, CommandError

from lagdyna.experiments.invariants import run_checks


class Command(BaseCommand):
    help = 'Check the numerical invariants of lagdyna and print pass/fail per property.'

    def handle(self, *args, **options):
        results = run_checks()
        for result in results:
            label = self.style.SUCCESS('pass') if result.passed else self.style.ERROR('FAIL')
            self.stdout.write("%-24s %s  %s" % (result.name, label, result.detail))
        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError("%d of %d checks failed: %s" % (len(failed), len(results), ', '.join(failed)),
                               returncode=1)
