# -*- coding: utf-8 -*-
"""Runs an experiment configuration for each of its seeds."""
from django.core.management.base import BaseCommand, CommandError
from django.forms import ValidationError

from lagdyna.exceptions import ConfigError, LagdynaError
from lagdyna.experiments.config import load_config
from lagdyna.experiments.forms import IntegerListField, VARIANTS
from lagdyna.experiments.runner import train


class Command(BaseCommand):
    help = 'Run the Dyna loop for every seed of an experiment and write metrics, metadata and checkpoints.'

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help='experiment INI file')
        parser.add_argument('--variant', choices=sorted(VARIANTS), help='override [experiment] variant')
        parser.add_argument('--seeds', help='override [experiment] seeds, e.g. 0,1,2')
        parser.add_argument('--out', help='override [experiment] output directory')
        parser.add_argument('--threads', type=int, help='parallel seeds, defaults to LAGDYNA_THREADS')

    def handle(self, *args, **options):
        try:
            config = load_config(options['config'])
            seeds = None
            if options['seeds']:
                try:
                    seeds = IntegerListField().clean(options['seeds'])
                except ValidationError as err:
                    raise ConfigError("--seeds: %s" % ' '.join(err.messages), field='seeds')
                if len(set(seeds)) != len(seeds):
                    raise ConfigError("--seeds: Seeds must be distinct.", field='seeds')
            config = config.with_overrides(options['variant'], seeds, options['out'])
        except ConfigError as err:
            raise CommandError(str(err), returncode=2)

        try:
            reports = train(config, options['threads'])
        except LagdynaError as err:
            raise CommandError("%s: %s" % (type(err).__name__, err), returncode=1)

        for report in reports:
            status = 'ok' if report.completed else 'aborted (%s)' % report.error
            final = report.curve[-1][1] if report.curve else float('nan')
            self.stdout.write("%s seed %d: %d env steps, final return %.3f, %s"
                              % (report.variant, report.seed, report.env_steps, final, status))
        self.stdout.write("results in %s" % config.variant_directory)
        failed = [report.seed for report in reports if not report.completed]
        if failed:
            raise CommandError("runs aborted for seeds %s, partial results were written"
                               % ','.join(map(str, failed)), returncode=1)
