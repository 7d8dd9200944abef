# -*- coding: utf-8 -*-
"""Compares finished runs by the seed-median evaluation curve of each variant."""
import os

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from lagdyna.exceptions import AlignmentError, InsufficientDataError
from lagdyna.experiments.compare import SUMMARY_FILE, format_table, load_curves, summarize, write_summary


class Command(BaseCommand):
    help = 'Steps-to-threshold and final returns per variant, as a table and a summary CSV.'

    def add_arguments(self, parser):
        parser.add_argument('directories', nargs='+', metavar='DIR', help='output, variant or seed directories')
        parser.add_argument('--threshold', type=float, default=settings.LAGDYNA_RETURN_THRESHOLD,
                            help='evaluation return to reach (default %(default)s)')
        parser.add_argument('--out', help='directory for %s, defaults to the first DIR' % SUMMARY_FILE)

    def handle(self, *args, **options):
        try:
            curves, hashes = load_curves(options['directories'])
            summaries = summarize(curves, options['threshold'])
        except (AlignmentError, InsufficientDataError) as err:
            raise CommandError(str(err), returncode=1)
        out = options['out'] or options['directories'][0]
        path = write_summary(os.path.join(out, SUMMARY_FILE), summaries, hashes)
        self.stdout.write(format_table(summaries, options['threshold']))
        self.stdout.write("summary written to %s" % path)
