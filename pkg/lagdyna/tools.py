# -*- coding: utf-8 -*-
"""Small helpers shared by the apps: CSV files with a config-hash comment line and content hashes."""
import csv
import hashlib
import os

from django.conf import settings

HASH_PREFIX = '# config_hash='


def git_blob_hash(text):
    """Return the git-style content hash (SHA-1 of a blob object) of a text."""
    data = text.encode('utf-8')
    return hashlib.sha1(b'blob %d\0' % len(data) + data).hexdigest()


def format_float(value):
    return format(float(value), settings.LAGDYNA_FLOAT_FORMAT)


def format_row(row):
    return [format_float(v) if isinstance(v, float) else str(v) for v in row]


def write_csv(path, header, rows, config_hash=None):
    """Write a CSV file with a header row, preceded by a ``# config_hash=`` line when a hash is given."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as fh:
        if config_hash is not None:
            fh.write(HASH_PREFIX + config_hash + '\n')
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(format_row(row))
    return path


def read_csv(path):
    """Read a CSV written by write_csv. Returns (config_hash or None, list of row dicts)."""
    config_hash = None
    with open(path, newline='') as fh:
        lines = []
        for line in fh:
            if line.startswith(HASH_PREFIX):
                config_hash = line[len(HASH_PREFIX):].strip()
            elif not line.startswith('#'):
                lines.append(line)
    return config_hash, list(csv.DictReader(lines))
