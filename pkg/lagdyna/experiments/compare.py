# -*- coding: utf-8 -*-
"""Comparing variants by the seed-median evaluation curve."""
import glob
import os
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from lagdyna.dyna.report import METRICS_FILE
from lagdyna.exceptions import AlignmentError, InsufficientDataError
from lagdyna.tools import format_float, git_blob_hash, read_csv, write_csv

SUMMARY_HEADER = ['variant', 'seeds', 'steps_to_threshold', 'final_median', 'final_min', 'final_max']
SUMMARY_FILE = 'summary.csv'
NOT_REACHED = 'not reached'


@dataclass(frozen=True)
class VariantSummary:
    variant: str
    seeds: int
    steps_to_threshold: int
    final_median: float
    final_min: float
    final_max: float

    def row(self):
        steps = NOT_REACHED if self.steps_to_threshold is None else self.steps_to_threshold
        return (self.variant, self.seeds, steps, self.final_median, self.final_min, self.final_max)


def metrics_files(directory):
    """The metrics file of a variant or seed directory, or those of the variants below an output root."""
    own = os.path.join(directory, METRICS_FILE)
    if os.path.exists(own):
        return [own]
    return sorted(glob.glob(os.path.join(directory, '*', METRICS_FILE)))


def load_curves(directories):
    """Read evaluation curves. Returns ({variant: {seed: [(env_steps, avg_return), ...]}}, config hashes)."""
    points = defaultdict(list)
    hashes = set()
    for directory in directories:
        paths = metrics_files(directory)
        if not paths:
            raise InsufficientDataError("no %s found in %s" % (METRICS_FILE, directory))
        for path in paths:
            config_hash, rows = read_csv(path)
            if config_hash:
                hashes.add(config_hash)
            for row in rows:
                points[row['variant'], int(row['seed'])].append((int(row['env_steps']), float(row['avg_return'])))
    curves = defaultdict(dict)
    for (variant, seed), curve in points.items():
        curves[variant][seed] = sorted(set(curve))
    return dict(curves), sorted(hashes)


def common_grid(curves):
    """The longest env-step grid. Every other curve must follow a prefix of it."""
    grids = [[steps for steps, _ in points] for per_seed in curves.values() for points in per_seed.values()]
    if not grids:
        raise InsufficientDataError("no evaluation points to compare")
    longest = max(grids, key=len)
    for grid in grids:
        if grid != longest[:len(grid)]:
            raise AlignmentError("evaluation curves are not on a common env-step grid: %s... vs %s..."
                                 % (grid[:4], longest[:4]))
    return longest


def median_curve(per_seed, grid):
    """Median over the seeds that reached each grid point."""
    curve = []
    for index, steps in enumerate(grid):
        values = [points[index][1] for points in per_seed.values() if len(points) > index]
        if values:
            curve.append((steps, float(np.median(values))))
    return curve


def steps_to_threshold(curve, threshold):
    """First env-step count at which the curve exceeds ``threshold``, None if it never does."""
    for steps, value in curve:
        if value > threshold:
            return steps
    return None


def summarize(curves, threshold):
    grid = common_grid(curves)
    summaries = []
    for variant in sorted(curves):
        per_seed = curves[variant]
        finals = [points[-1][1] for points in per_seed.values()]
        summaries.append(VariantSummary(variant, len(per_seed),
                                        steps_to_threshold(median_curve(per_seed, grid), threshold),
                                        float(np.median(finals)), float(min(finals)), float(max(finals))))
    return summaries


def write_summary(path, summaries, hashes):
    config_hash = git_blob_hash(''.join(h + '\n' for h in hashes))
    return write_csv(path, SUMMARY_HEADER, [summary.row() for summary in summaries], config_hash)


def format_table(summaries, threshold):
    header = ['variant', 'seeds', 'steps to %s' % format_float(threshold), 'final median', 'final min',
              'final max']
    body = [[str(cell) if not isinstance(cell, float) else format_float(cell) for cell in summary.row()]
            for summary in summaries]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ['  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in [header] + body]
    lines.insert(1, '  '.join('-' * width for width in widths))
    return '\n'.join(lines)
