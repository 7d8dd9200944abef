# -*- coding: utf-8 -*-
"""Running the seeds of an experiment and merging their metrics.

Each seed runs in its own process with its own output directory. The merged metrics file is
written afterwards by the parent alone.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor

import django
from django.conf import settings

from lagdyna.dyna.loop import run
from lagdyna.dyna.report import METRICS_FILE, METRICS_HEADER
from lagdyna.log import run_log
from lagdyna.tools import write_csv

logger = logging.getLogger(__name__)


def seed_directory(config, seed):
    return os.path.join(config.variant_directory, 'seed-%d' % seed)


def run_seed(config, seed):
    """Run one seed and write its files. Returns the RunReport."""
    directory = seed_directory(config, seed)
    os.makedirs(directory, exist_ok=True)
    with run_log(directory):
        report = run(config.for_seed(seed), config.variant)
    report.write(directory, config.resolved_items(), config.config_hash)
    if report.completed:
        logger.info("%s seed %d finished: %d env steps, final return %.3f", config.variant, seed,
                    report.env_steps, report.curve[-1][1])
    else:
        logger.warning("%s seed %d aborted: %s", config.variant, seed, report.error)
    return report


def _init_worker(settings_module):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', settings_module)
    django.setup()


def merge_metrics(config, reports):
    """Write <output>/<variant>/metrics.csv with the rows of every seed, ordered by seed."""
    rows = []
    for report in sorted(reports, key=lambda report: report.seed):
        rows.extend(report.metrics_rows())
    return write_csv(os.path.join(config.variant_directory, METRICS_FILE), METRICS_HEADER, rows,
                     config.config_hash)


def train(config, threads=None):
    """Run every seed of ``config``, in parallel processes when more than one thread is allowed.

    Returns the RunReports ordered by seed.
    """
    threads = min(threads or settings.LAGDYNA_THREADS, len(config.seeds))
    os.makedirs(config.variant_directory, exist_ok=True)
    logger.info("training %s with seeds %s in %d process(es), config hash %s", config.variant,
                ','.join(map(str, config.seeds)), threads, config.config_hash)
    if threads > 1:
        settings_module = os.environ.get('DJANGO_SETTINGS_MODULE', 'lagdyna.settings.development')
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker,
                                 initargs=(settings_module,)) as pool:
            reports = list(pool.map(run_seed, [config] * len(config.seeds), config.seeds))
    else:
        reports = [run_seed(config, seed) for seed in config.seeds]
    merge_metrics(config, reports)
    return sorted(reports, key=lambda report: report.seed)
